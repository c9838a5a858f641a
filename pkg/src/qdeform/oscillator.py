"""Stationary states of the q-deformed oscillator and ordinary-HO references."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .qseries import b_coefficient, log_q_factorial

__all__ = [
    "Q_MIN",
    "Q_MAX",
    "MAX_LEVEL",
    "DeformationParams",
    "PureStateSpec",
    "make_params",
    "normalization_c",
    "log_abs_normalization",
    "state_coefficients",
    "psi",
    "ho_reference_psi",
    "i_power",
]

Q_MIN = 1e-9
Q_MAX = 1.0 - 1e-9
MAX_LEVEL = 64


@dataclass(frozen=True)
class DeformationParams:
    """Physical constants of one oscillator plus the derived lambda and h.

    Construct through :func:`make_params`; ``lam`` and ``h`` are derived.
    """

    mass: float
    omega: float
    hbar: float
    q: float
    lam: float = field(init=False)
    h: float = field(init=False)

    def __post_init__(self):
        for name in ("mass", "omega", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be a positive finite number, got {value!r}")
        if not (Q_MIN <= self.q <= Q_MAX):
            raise DomainError(f"q must lie in [{Q_MIN}, 1 - 1e-9], got {self.q!r}")
        lam = self.mass * self.omega / (2.0 * self.hbar)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "h", math.sqrt(-math.log(self.q) / lam))

    @property
    def constants(self) -> tuple[float, float, float]:
        return (self.mass, self.omega, self.hbar)


def make_params(mass: float = 1.0, omega: float = 1.0, hbar: float = 1.0, q: float = 0.5) -> DeformationParams:
    return DeformationParams(float(mass), float(omega), float(hbar), float(q))


@dataclass(frozen=True)
class PureStateSpec:
    n: int
    params: DeformationParams

    def __post_init__(self):
        _check_level(self.n)


def _check_level(n: int) -> None:
    if int(n) != n or n < 0:
        raise DomainError(f"quantum number must be a nonnegative integer, got {n!r}")
    if n > MAX_LEVEL:
        raise DomainError(f"quantum number {n} exceeds the cap {MAX_LEVEL}")


def log_abs_normalization(n: int, params: DeformationParams) -> float:
    """``log |c_n|``."""
    _check_level(n)
    return (
        0.25 * math.log(2.0 * params.lam / math.pi)
        + 0.5 * n * math.log(params.q)
        - 0.5 * log_q_factorial(params.q, n)
    )


def normalization_c(n: int, params: DeformationParams) -> complex:
    """``c_n = (2 lam/pi)^(1/4) i^n q^(n/2) (q;q)_n^(-1/2)``."""
    return math.exp(log_abs_normalization(n, params)) * i_power(n)


@lru_cache(maxsize=512)
def _coefficient_table(n: int, q: float) -> tuple[np.ndarray, np.ndarray]:
    coeffs = [b_coefficient(n, k, q) for k in range(n + 1)]
    log_mag = np.array([c.log_magnitude for c in coeffs])
    sign = np.array([c.sign for c in coeffs], dtype=float)
    log_mag.setflags(write=False)
    sign.setflags(write=False)
    return log_mag, sign


def state_coefficients(n: int, q: float) -> tuple[np.ndarray, np.ndarray]:
    """Log-magnitudes and signs of ``(q^-n;q)_k/(q;q)_k q^(nk-k^2/2)``, k = 0..n."""
    _check_level(n)
    return _coefficient_table(int(n), float(q))


def psi(spec: PureStateSpec, x):
    """Evaluate the q-deformed stationary state at ``x`` (scalar or array).

    Each term's real magnitude, the normalization and the Gaussian envelope
    are combined in the log domain; the phase ``exp(-2i lam h x k)`` is
    applied afterwards.
    """
    p = spec.params
    x_arr = np.asarray(x, dtype=float)
    log_mag, sign = state_coefficients(spec.n, p.q)
    k = np.arange(spec.n + 1)
    xe = x_arr[..., None]
    log_terms = log_abs_normalization(spec.n, p) + log_mag - p.lam * xe**2
    terms = sign * np.exp(log_terms) * np.exp(-2j * p.lam * p.h * xe * k)
    out = i_power(spec.n) * terms.sum(axis=-1)
    return complex(out) if np.ndim(x) == 0 else out


def ho_reference_psi(n: int, lam: float, x):
    """Ordinary oscillator eigenfunction in the same lambda convention.

    ``(2 lam/pi)^(1/4) (2^n n!)^(-1/2) H_n(sqrt(2 lam) x) exp(-lam x^2)``,
    evaluated with the normalized Hermite-function recurrence so that large
    ``n`` neither overflows nor loses the prefactor.
    """
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    x_arr = np.asarray(x, dtype=float)
    u = math.sqrt(2.0 * lam) * x_arr
    # phi_j = (2^j j!)^(-1/2) H_j(u); phi_{j+1} = sqrt(2/(j+1)) u phi_j - sqrt(j/(j+1)) phi_{j-1}
    prev = np.zeros_like(u)
    cur = np.ones_like(u)
    for j in range(n):
        prev, cur = cur, math.sqrt(2.0 / (j + 1)) * u * cur - math.sqrt(j / (j + 1)) * prev
    out = (2.0 * lam / math.pi) ** 0.25 * cur * np.exp(-lam * x_arr**2)
    return float(out) if np.ndim(x) == 0 else out


def i_power(n: int) -> complex:
    """Exact ``i**n``."""
    return (1, 1j, -1, -1j)[n % 4]
