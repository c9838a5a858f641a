"""Log-domain q-Pochhammer symbols and the B coefficient factors.

At q = 0.001 the factor (q^-6; q)_6 is of order 1e63 and the coefficients it
multiplies span ~90 decades, so everything here is carried as a natural-log
magnitude plus a sign. Powers of q are accumulated as integer multiples of
1/2 and exponentiated once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "SignedLog",
    "QPochhammerSpec",
    "q_pochhammer",
    "q_pochhammer_neg_power",
    "log_q_factorial",
    "b_coefficient",
    "b_factor",
]


@dataclass(frozen=True)
class SignedLog:
    """A real number stored as ``sign * exp(log_magnitude)``.

    ``log_magnitude == -inf`` is an exact zero.
    """

    log_magnitude: float
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DomainError(f"sign must be +1 or -1, got {self.sign!r}")
        if math.isnan(self.log_magnitude) or self.log_magnitude == math.inf:
            raise DomainError(f"log_magnitude must be finite or -inf, got {self.log_magnitude!r}")

    @classmethod
    def from_float(cls, value: float) -> SignedLog:
        if value == 0.0:
            return cls.zero()
        return cls(math.log(abs(value)), 1 if value > 0 else -1)

    @classmethod
    def zero(cls) -> SignedLog:
        return cls(-math.inf, 1)

    @classmethod
    def one(cls) -> SignedLog:
        return cls(0.0, 1)

    @property
    def is_zero(self) -> bool:
        return self.log_magnitude == -math.inf

    def to_float(self) -> float:
        if self.is_zero:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    __float__ = to_float

    def __mul__(self, other: SignedLog) -> SignedLog:
        if not isinstance(other, SignedLog):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return SignedLog.zero()
        return SignedLog(self.log_magnitude + other.log_magnitude, self.sign * other.sign)

    def __truediv__(self, other: SignedLog) -> SignedLog:
        if not isinstance(other, SignedLog):
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by an exact-zero SignedLog")
        if self.is_zero:
            return SignedLog.zero()
        return SignedLog(self.log_magnitude - other.log_magnitude, self.sign * other.sign)

    def __neg__(self) -> SignedLog:
        return SignedLog(self.log_magnitude, -self.sign)

    def pow(self, exponent: float) -> SignedLog:
        """Real power; only defined for positive values unless ``exponent`` is an integer."""
        if self.is_zero:
            if exponent <= 0:
                raise ZeroDivisionError("non-positive power of zero")
            return SignedLog.zero()
        sign = 1
        if self.sign < 0:
            if float(exponent).is_integer():
                sign = -1 if int(exponent) % 2 else 1
            else:
                raise DomainError("fractional power of a negative value")
        return SignedLog(self.log_magnitude * exponent, sign)

    def scale_log(self, log_factor: float) -> SignedLog:
        """Multiply by the positive number ``exp(log_factor)``."""
        if self.is_zero:
            return self
        return SignedLog(self.log_magnitude + log_factor, self.sign)


@dataclass(frozen=True)
class QPochhammerSpec:
    """Arguments of ``(q^e; q)_k``, the only form the oscillator needs."""

    a_exponent: int
    q: float
    k: int

    def __post_init__(self):
        _check_q(self.q)
        if self.k < 0:
            raise DomainError(f"k must be nonnegative, got {self.k}")

    def evaluate(self) -> SignedLog:
        if self.a_exponent < 0:
            return q_pochhammer_neg_power(-self.a_exponent, self.q, self.k)
        return q_pochhammer(self.q**self.a_exponent, self.q, self.k)


def _check_q(q: float) -> None:
    if not (0.0 < q < 1.0):
        raise DomainError(f"q must lie in the open interval (0, 1), got {q!r}")


def _log_one_minus_q_power(log_q: float, i: int) -> float:
    # log(1 - q**i) without forming q**i near 1
    return math.log(-math.expm1(i * log_q))


def log_q_factorial(q: float, k: int) -> float:
    """``log (q; q)_k``. Always real since every factor lies in (0, 1)."""
    _check_q(q)
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    log_q = math.log(q)
    return math.fsum(_log_one_minus_q_power(log_q, i) for i in range(1, k + 1))


def q_pochhammer(a: float, q: float, k: int) -> SignedLog:
    """Direct product ``prod_{j<k} (1 - a q^j)``."""
    _check_q(q)
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    log_mag = []
    sign = 1
    for j in range(k):
        t = a * q**j
        if t == 1.0:
            return SignedLog.zero()
        if abs(t) < 0.5:
            log_mag.append(math.log1p(-t))
        elif t < 1.0:
            log_mag.append(math.log(1.0 - t))
        else:
            log_mag.append(math.log(t - 1.0))
            sign = -sign
    return SignedLog(math.fsum(log_mag), sign)


def q_pochhammer_neg_power(n: int, q: float, k: int) -> SignedLog:
    """``(q^-n; q)_k`` via ``(-1)^k q^(k(k-1)/2 - nk) (q;q)_n / (q;q)_(n-k)``.

    Returns an exact zero for ``k > n``.
    """
    _check_q(q)
    if n < 0 or k < 0:
        raise DomainError(f"n and k must be nonnegative, got n={n}, k={k}")
    if k > n:
        return SignedLog.zero()
    q_exponent = k * (k - 1) // 2 - n * k
    log_mag = q_exponent * math.log(q) + log_q_factorial(q, n) - log_q_factorial(q, n - k)
    return SignedLog(log_mag, -1 if k % 2 else 1)


def b_coefficient(n: int, k: int, q: float) -> SignedLog:
    """One branch of the B factor: ``(q^-n;q)_k / (q;q)_k * q^(nk - k^2/2)``.

    This is also the k-th coefficient of the stationary state of level n.
    """
    if k < 0 or k > n:
        raise DomainError(f"need 0 <= k <= n, got k={k}, n={n}")
    log_q = math.log(q)
    # doubled exponent of q collected from the Pochhammer identity and the explicit power
    twice_exponent = (k * (k - 1) - 2 * n * k) + (2 * n * k - k * k)
    log_mag = (
        0.5 * twice_exponent * log_q
        + log_q_factorial(q, n)
        - log_q_factorial(q, n - k)
        - log_q_factorial(q, k)
    )
    return SignedLog(log_mag, -1 if k % 2 else 1)


def b_factor(n: int, m: int, k: int, s: int, q_a: float, q_b: float | None = None) -> SignedLog:
    """The product coefficient B^{n,m}_{q_a,q_b}(k, s).

    With ``q_b`` omitted both branches share ``q_a`` (the single-q Bell form).
    """
    if q_b is None:
        q_b = q_a
    _check_q(q_a)
    _check_q(q_b)
    if not (0 <= k <= n and 0 <= s <= m):
        raise DomainError(f"need 0 <= k <= n and 0 <= s <= m, got n={n}, m={m}, k={k}, s={s}")
    return b_coefficient(n, k, q_a) * b_coefficient(m, s, q_b)
