"""Log-domain scalar arithmetic and special-function primitives.

Quantities such as ``|log|z|^2|^p / (p-2)!`` overflow doubles long before
the densities built from them do. They are carried here as a sign plus the
natural log of the absolute value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

from .exceptions import DomainError

LOG_2PI = math.log(2.0 * math.pi)

# B_{2k} / (2k (2k-1)) for k = 1..8
_STIRLING_COEFFS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_STIRLING_MIN_X = 8.0


@dataclass(frozen=True)
class LogMagnitude:
    """Signed real stored as ``sign * exp(log_abs)``.

    ``sign == 0`` is exact zero and ``log_abs`` is then ignored.
    """

    sign: int
    log_abs: float = -math.inf

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise DomainError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if self.sign == 0:
            object.__setattr__(self, "log_abs", -math.inf)
        elif not math.isfinite(self.log_abs):
            raise DomainError("log_abs must be finite for a nonzero value")

    @classmethod
    def zero(cls) -> "LogMagnitude":
        return cls(0)

    @classmethod
    def one(cls) -> "LogMagnitude":
        return cls(1, 0.0)

    @classmethod
    def from_linear(cls, v: float) -> "LogMagnitude":
        if v == 0.0:
            return cls(0)
        if not math.isfinite(v):
            raise DomainError(f"cannot represent non-finite value {v!r}")
        return cls(1 if v > 0 else -1, math.log(abs(v)))

    @classmethod
    def from_log(cls, log_abs: float, sign: int = 1) -> "LogMagnitude":
        if log_abs == -math.inf:
            return cls(0)
        return cls(sign, log_abs)

    def to_linear(self) -> float:
        """Linear value; overflows to +-inf and underflows to 0 like ``exp``."""
        if self.sign == 0:
            return 0.0
        if self.log_abs > 709.782712893384:
            return math.copysign(math.inf, self.sign)
        return self.sign * math.exp(self.log_abs)

    __float__ = to_linear

    def __neg__(self) -> "LogMagnitude":
        return LogMagnitude(-self.sign, self.log_abs)

    def __abs__(self) -> "LogMagnitude":
        return LogMagnitude(abs(self.sign), self.log_abs)

    def __mul__(self, other: "LogMagnitude") -> "LogMagnitude":
        if self.sign == 0 or other.sign == 0:
            return LogMagnitude(0)
        return LogMagnitude(self.sign * other.sign, self.log_abs + other.log_abs)

    def __truediv__(self, other: "LogMagnitude") -> "LogMagnitude":
        if other.sign == 0:
            raise ZeroDivisionError("division by an exact-zero LogMagnitude")
        if self.sign == 0:
            return LogMagnitude(0)
        return LogMagnitude(self.sign * other.sign, self.log_abs - other.log_abs)

    def __add__(self, other: "LogMagnitude") -> "LogMagnitude":
        return logsum_accumulate((self, other))

    def __sub__(self, other: "LogMagnitude") -> "LogMagnitude":
        return logsum_accumulate((self, -other))

    def scale(self, log_factor: float) -> "LogMagnitude":
        """Multiply by ``exp(log_factor)``."""
        if self.sign == 0:
            return self
        return LogMagnitude(self.sign, self.log_abs + log_factor)


class LogSumAccumulator:
    """Streaming signed sum of log-domain terms.

    The running sum is kept relative to the largest magnitude seen so far
    and rescaled whenever a larger term arrives; additions use Neumaier
    compensation.
    """

    def __init__(self):
        self._ref = -math.inf
        self._sum = 0.0
        self._comp = 0.0
        self.count = 0

    def add(self, term: LogMagnitude) -> None:
        self.count += 1
        if term.sign == 0:
            return
        if term.log_abs > self._ref:
            if self._ref != -math.inf:
                scale = math.exp(self._ref - term.log_abs)
                self._sum *= scale
                self._comp *= scale
            self._ref = term.log_abs
            v = float(term.sign)
        else:
            v = term.sign * math.exp(term.log_abs - self._ref)
        t = self._sum + v
        if abs(self._sum) >= abs(v):
            self._comp += (self._sum - t) + v
        else:
            self._comp += (v - t) + self._sum
        self._sum = t

    def result(self) -> LogMagnitude:
        total = self._sum + self._comp
        if total == 0.0:
            return LogMagnitude(0)
        return LogMagnitude(1 if total > 0 else -1, self._ref + math.log(abs(total)))


def logsum_accumulate(terms: Iterable[LogMagnitude]) -> LogMagnitude:
    """Sum a finite stream of log-domain values; an empty stream gives zero."""
    acc = LogSumAccumulator()
    for term in terms:
        acc.add(term)
    return acc.result()


def signed_log_pow(base: LogMagnitude, p: float) -> LogMagnitude:
    """``base ** p`` in the log domain.

    Negative bases need an integer exponent; the sign follows its parity.
    """
    integral = float(p).is_integer()
    if base.sign == 0:
        if p > 0:
            return LogMagnitude(0)
        if p == 0:
            return LogMagnitude.one()
        raise DomainError("zero raised to a negative power")
    if base.sign < 0 and not integral:
        raise DomainError("negative base with non-integer exponent")
    sign = -1 if (base.sign < 0 and int(p) % 2 == 1) else 1
    return LogMagnitude(sign, p * base.log_abs)


def _stirling_main(x: float) -> float:
    return (x - 0.5) * math.log(x) - x + 0.5 * LOG_2PI


def _stirling_series(x: float) -> float:
    inv = 1.0 / x
    inv2 = inv * inv
    acc = 0.0
    for c in reversed(_STIRLING_COEFFS):
        acc = acc * inv2 + c
    return acc * inv


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``.

    Stirling series for ``x >= 8``, upward recurrence below.
    """
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"log_gamma needs a finite x > 0, got {x!r}")
    if x == 1.0 or x == 2.0:
        return 0.0
    if x >= _STIRLING_MIN_X:
        return _stirling_main(x) + _stirling_series(x)
    prod = 1.0
    y = x
    while y < _STIRLING_MIN_X:
        prod *= y
        y += 1.0
    return _stirling_main(y) + _stirling_series(y) - math.log(prod)


def stirling_remainder(x: float) -> float:
    """``log_gamma(x) - [(x - 1/2) log x - x + log(2 pi)/2]`` without cancellation."""
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"stirling_remainder needs a finite x > 0, got {x!r}")
    if x >= _STIRLING_MIN_X:
        return _stirling_series(x)
    return log_gamma(x) - _stirling_main(x)


def log_factorial(n: int) -> float:
    if n < 0:
        raise DomainError(f"factorial of negative integer {n}")
    return log_gamma(n + 1.0)


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(
    f: Callable[[float], float], a: float, b: float, rtol: float = 1e-11, max_iter: int = 200
) -> tuple[float, float]:
    """Golden-section search for a maximum of a unimodal ``f`` on ``[a, b]``.

    Returns ``(argmax, f(argmax))``.
    """
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= rtol * max(abs(a), abs(b), 1e-300):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)
