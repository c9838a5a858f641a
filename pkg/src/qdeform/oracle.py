"""Brute-force quadrature of the Wigner integrals and inner products.

Deliberately naive: fixed composite rules on a truncated interval, no FFTs,
no use of the closed-form machinery. Every closed form in the package is
checked against these.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import DomainError

__all__ = [
    "Rule",
    "QuadratureSettings",
    "TruncationWarning",
    "default_settings",
    "settings_for",
    "nodes_and_weights",
    "wigner_numeric_1p",
    "wigner_numeric_2p",
    "inner_product",
    "marginal_p",
]

TRUNCATION_RATIO = 1e-13


class TruncationWarning(RuntimeWarning):
    pass


class Rule(str, Enum):
    SIMPSON = "simpson"
    GAUSS_LEGENDRE = "gauss-legendre"


@dataclass(frozen=True)
class QuadratureSettings:
    half_width: float
    points_per_unit: int = 64
    rule: Rule = Rule.SIMPSON

    def __post_init__(self):
        if not self.half_width > 0:
            raise DomainError(f"half_width must be positive, got {self.half_width}")
        if self.points_per_unit < 16:
            raise DomainError(f"points_per_unit must be at least 16, got {self.points_per_unit}")
        object.__setattr__(self, "rule", Rule(self.rule))

    def with_frequency(self, omega: float) -> QuadratureSettings:
        """Raise the density to at least 16 samples per period of ``exp(i omega y)``."""
        needed = math.ceil(16.0 * abs(omega) / (2.0 * math.pi))
        if needed <= self.points_per_unit:
            return self
        return replace(self, points_per_unit=needed)


def default_settings(lam: float) -> QuadratureSettings:
    # exp(-lam y^2 / 4) < 1e-13 beyond |y| = 2 sqrt(30/lam)
    return QuadratureSettings(half_width=2.0 * math.sqrt(30.0 / lam))


def settings_for(params, n_max: int, base: QuadratureSettings | None = None) -> QuadratureSettings:
    """Default settings for states up to level ``n_max`` with the oscillation guard applied."""
    s = base or default_settings(params.lam)
    return s.with_frequency(2.0 * params.lam * params.h * n_max)


def nodes_and_weights(settings: QuadratureSettings, lo: float | None = None, hi: float | None = None):
    """Nodes and weights on ``[lo, hi]`` (default ``[-Y, Y]``)."""
    if lo is None:
        lo, hi = -settings.half_width, settings.half_width
    length = hi - lo
    if settings.rule is Rule.SIMPSON:
        n = max(2, math.ceil(length * settings.points_per_unit))
        n += n % 2  # even number of intervals
        y = np.linspace(lo, hi, n + 1)
        w = np.full(n + 1, 2.0)
        w[1::2] = 4.0
        w[0] = w[-1] = 1.0
        return y, w * (length / n) / 3.0
    panels = max(1, math.ceil(length))
    order = max(8, settings.points_per_unit // 2)
    t, wt = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    y = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    w = (half[:, None] * wt[None, :]).ravel()
    return y, w


def _report_truncation(values: np.ndarray, what: str) -> None:
    mag = np.abs(values)
    peak = mag.max()
    if peak == 0:
        return
    edge = max(mag.flat[0], mag.flat[-1]) if mag.ndim == 1 else max(
        mag[0, :].max(), mag[-1, :].max(), mag[:, 0].max(), mag[:, -1].max()
    )
    if edge > TRUNCATION_RATIO * peak:
        warnings.warn(
            f"{what}: integrand at the truncation boundary is {edge / peak:.2e} of its peak",
            TruncationWarning,
            stacklevel=3,
        )


def wigner_numeric_1p(psi_fn, x: float, p: float, settings: QuadratureSettings, hbar: float = 1.0) -> complex:
    """``(1/2 pi hbar) int exp(-i p y/hbar) psi(x + y/2) psi*(x - y/2) dy``."""
    settings = settings.with_frequency(p / hbar)
    y, w = nodes_and_weights(settings)
    integrand = np.exp(-1j * p * y / hbar) * psi_fn(x + y / 2) * np.conj(psi_fn(x - y / 2))
    _report_truncation(integrand, "wigner_numeric_1p")
    return complex(np.sum(w * integrand)) / (2.0 * math.pi * hbar)


def wigner_numeric_2p(psi2_fn, pt, settings: QuadratureSettings, hbar: float = 1.0) -> complex:
    """``(1/4 pi^2 hbar^2) iint exp(i(pA yA + pB yB)/hbar) psi(xA - yA/2, xB - yB/2) psi*(xA + yA/2, xB + yB/2)``.

    ``psi2_fn`` is called with a column and a row array and must broadcast.
    """
    s_a = settings.with_frequency(pt.p_A / hbar)
    s_b = settings.with_frequency(pt.p_B / hbar)
    ya, wa = nodes_and_weights(s_a)
    yb, wb = nodes_and_weights(s_b)
    ya_c, yb_r = ya[:, None], yb[None, :]
    kernel = np.exp(1j * pt.p_A * ya_c / hbar) * np.exp(1j * pt.p_B * yb_r / hbar)
    integrand = (
        kernel
        * psi2_fn(pt.x_A - ya_c / 2, pt.x_B - yb_r / 2)
        * np.conj(psi2_fn(pt.x_A + ya_c / 2, pt.x_B + yb_r / 2))
    )
    _report_truncation(integrand, "wigner_numeric_2p")
    total = wa @ integrand @ wb
    return complex(total) / (4.0 * math.pi**2 * hbar**2)


def inner_product(psi_a, psi_b, settings: QuadratureSettings) -> complex:
    """``int psi_a*(x) psi_b(x) dx``."""
    x, w = nodes_and_weights(settings)
    integrand = np.conj(psi_a(x)) * psi_b(x)
    _report_truncation(integrand, "inner_product")
    return complex(np.sum(w * integrand))


def marginal_p(w_fn, x: float, settings: QuadratureSettings, p_range: tuple[float, float] | None = None) -> float:
    """``int W(x, p) dp`` over ``p_range`` (default ``[-Y, Y]`` of ``settings``)."""
    lo, hi = p_range if p_range is not None else (-settings.half_width, settings.half_width)
    p, w = nodes_and_weights(settings, lo, hi)
    values = np.asarray(w_fn(np.full_like(p, x), p), dtype=float)
    _report_truncation(values, "marginal_p")
    return float(np.sum(w * values))
