"""Bergman kernel of the punctured unit disc with the Poincare weight.

The space is the L^2 holomorphic functions on D* = {0 < |z| < 1} for the
metric ``|log|z|^2|^p`` and the complete Poincare area form. Everything
below is written in the coordinate ``u = -log|z|^2`` (puncture at
``u -> inf``, unit circle at ``u -> 0``). The diagonal density is

    B_p(u) = u^p / (2 pi (p-2)!) * sum_{l>=1} l^(p-1) e^(-l u)
           = (p-1)/(2 pi) * sum_{k in Z} u^p / (u + 2 pi i k)^p

and both forms are implemented: the first converges fast near the
puncture, the second near the unit circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Union

import numpy as np

from .exceptions import DomainError, PrecisionLoss, TruncationFailure
from .numerics import LOG_2PI, LogMagnitude, log_gamma

U_CAP = 1e5
P_CAP = 10**6
TWO_PI = 2.0 * math.pi
_EPS = float(np.finfo(float).eps)
_CHUNK_MAX = 1 << 20


class Method(str, Enum):
    AUTO = "auto"
    DIRECT_SERIES = "series"
    PARTIAL_FRACTION = "partial-fraction"
    GAUSSIAN_APPROX = "gaussian"
    # reported only: the finite Eulerian form used when partial fractions cannot certify
    EULERIAN = "eulerian"


@dataclass(frozen=True)
class PuncturedPoint:
    """A point of D* stored as ``u = -log|z|^2`` and ``theta = arg z``.

    ``theta`` is reduced into ``[0, 2 pi)`` on construction.
    """

    u: float
    theta: float = 0.0

    def __post_init__(self):
        u = float(self.u)
        if not (u > 0.0 and math.isfinite(u)):
            raise DomainError(f"u must be finite and > 0 (0 < |z| < 1), got {self.u!r}")
        if u > U_CAP:
            raise DomainError(f"u = {u} exceeds the supported cap {U_CAP}")
        theta = float(self.theta)
        if not math.isfinite(theta):
            raise DomainError("theta must be finite")
        theta = math.fmod(theta, TWO_PI)
        if theta < 0.0:
            theta += TWO_PI
        if theta >= TWO_PI:
            theta = 0.0
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "theta", theta)

    @classmethod
    def from_abs_z(cls, r: float, theta: float = 0.0) -> "PuncturedPoint":
        if not 0.0 < r < 1.0:
            raise DomainError(f"|z| must lie in (0, 1), got {r!r}")
        return cls(-2.0 * math.log(r), theta)

    @classmethod
    def from_z(cls, z: complex) -> "PuncturedPoint":
        z = complex(z)
        return cls.from_abs_z(abs(z), math.atan2(z.imag, z.real))

    @property
    def t(self) -> float:
        """``log(-log|z|^2)``."""
        return math.log(self.u)

    @property
    def abs_z_sq(self) -> float:
        return math.exp(-self.u)

    @property
    def abs_z(self) -> float:
        return math.exp(-0.5 * self.u)

    @property
    def z(self) -> complex:
        r = self.abs_z
        return complex(r * math.cos(self.theta), r * math.sin(self.theta))


@dataclass(frozen=True)
class SeriesConfig:
    """Method selector and truncation policy for kernel evaluation."""

    method: Method = Method.AUTO
    rel_tol: float = 1e-12
    max_terms: int = 5 * 10**7
    # AUTO uses the direct series while the peak index (p-1)/u stays below this
    auto_switch_ratio: float = 1e5

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if not 0.0 < self.rel_tol <= 1e-3:
            raise DomainError(f"rel_tol must lie in (0, 1e-3], got {self.rel_tol!r}")
        if self.max_terms < 10:
            raise DomainError("max_terms must be >= 10")
        if not self.auto_switch_ratio > 0:
            raise DomainError("auto_switch_ratio must be positive")


@dataclass(frozen=True)
class DensityValue:
    """A density with its diagnostics.

    ``tail_bound`` is a relative bound on the discarded remainder; it is
    ``inf`` for the uncertified Gaussian approximation.
    """

    value: LogMagnitude
    method_used: Method
    terms_used: int
    tail_bound: float

    @property
    def linear(self) -> float:
        return self.value.to_linear()

    @property
    def log(self) -> float:
        return self.value.log_abs


PointLike = Union[PuncturedPoint, float]


def _check_p(p: int, minimum: int = 2) -> int:
    if isinstance(p, bool) or int(p) != p:
        raise DomainError(f"p must be an integer, got {p!r}")
    p = int(p)
    if p < minimum:
        raise DomainError(f"p must be >= {minimum}, got {p}")
    if p > P_CAP:
        raise DomainError(f"p = {p} exceeds the supported cap {P_CAP}")
    return p


def _as_u(pt: PointLike) -> float:
    """Accept a PuncturedPoint or a raw ``u``.

    Raw values skip the ``U_CAP`` check so that scans can reach deep into
    the cusp, where the log domain still represents the density.
    """
    if isinstance(pt, PuncturedPoint):
        return pt.u
    u = float(pt)
    if not (u > 0.0 and math.isfinite(u)):
        raise DomainError(f"u must be finite and > 0, got {pt!r}")
    return u


def _cfg(cfg: SeriesConfig | None) -> SeriesConfig:
    return SeriesConfig() if cfg is None else cfg


def basis_norm_sq(p: int, ell: int) -> LogMagnitude:
    """Squared norm of ``z^ell``: ``2 pi (p-2)! / ell^(p-1)``."""
    p = _check_p(p)
    if int(ell) != ell or ell < 1:
        raise DomainError(f"ell must be an integer >= 1, got {ell!r}")
    return LogMagnitude(1, LOG_2PI + log_gamma(p - 1.0) - (p - 1) * math.log(ell))


# ---------------------------------------------------------------------------
# direct series  sum_{l>=1} l^(p-1) e^(-l s) e^(i l alpha)


@dataclass
class _SeriesSum:
    log_ref: float  # every term was divided by exp(log_ref)
    total: complex
    terms: int
    tail_rel: float


def _power_series(s: float, p: int, alpha: float, cfg: SeriesConfig) -> _SeriesSum:
    q = p - 1
    peak = q / s
    if peak >= cfg.max_terms:
        raise TruncationFailure(
            f"series peak index {peak:.3g} is beyond max_terms={cfg.max_terms}"
        )
    ell0 = max(1.0, float(round(peak)))
    log_ref = q * math.log(ell0) - ell0 * s
    use_phase = alpha != 0.0

    re_parts: list[float] = []
    im_parts: list[float] = []
    weighted_abs = 0.0
    partial: complex | float = 0.0
    start = 1
    n = int(min(_CHUNK_MAX, peak + 12.0 * math.sqrt(q) / s + 40.0 / s + 64.0))
    tail_abs = math.inf
    last = 0
    with np.errstate(over="ignore", under="ignore", divide="ignore"):
        while True:
            stop = min(start + n, cfg.max_terms + 1)
            if stop <= start:
                raise TruncationFailure(
                    f"tail bound not met within max_terms={cfg.max_terms} (p={p}, u={s:.6g})"
                )
            ell = np.arange(start, stop, dtype=np.float64)
            mag = np.exp(q * np.log(ell / ell0) - (ell - ell0) * s)
            if use_phase:
                ph = ell * alpha
                vals = mag * np.cos(ph) + 1j * (mag * np.sin(ph))
            else:
                vals = mag
            lnrho = q * np.log1p(1.0 / ell) - s
            # geometric tail: a_l * rho / (1 - rho) with rho < 1 the term ratio at l
            bound = np.where(lnrho < 0.0, mag / np.expm1(-lnrho), np.inf)
            run = partial + np.cumsum(vals)
            hit = np.flatnonzero(bound <= cfg.rel_tol * np.abs(run))
            if hit.size:
                i = int(hit[0])
                vals, mag, ell = vals[: i + 1], mag[: i + 1], ell[: i + 1]
                tail_abs = float(bound[i])
                last = int(ell[-1])
            chunk = np.sum(vals)
            re_parts.append(float(np.real(chunk)))
            if use_phase:
                im_parts.append(float(np.imag(chunk)))
                weighted_abs += float(np.sum(mag * (4.0 + ell * abs(alpha))))
            if hit.size:
                break
            partial = run[-1]
            start = stop
            n = min(2 * n, _CHUNK_MAX)

    total: complex | float = math.fsum(re_parts)
    if use_phase:
        total = complex(total, math.fsum(im_parts))
        size = abs(total)
        noise = _EPS * weighted_abs * (4.0 + math.log2(last + 1.0))
        if size == 0.0 or noise > cfg.rel_tol * size:
            raise PrecisionLoss(
                f"phase cancellation in the series: noise/|sum| = {noise / max(size, 1e-300):.2e}"
            )
    return _SeriesSum(log_ref, total, last, tail_abs / abs(total))


# ---------------------------------------------------------------------------
# partial fractions  sum_{k in Z} (t + 2 pi i k)^(-p),  t = s - i alpha


@dataclass
class _PFSum:
    log_w0: float  # log |t|^(-p)
    phase0: float  # arg t^(-p)
    log_rest_ref: float  # scale of the k != 0 terms
    rest: complex  # sum over k != 0, divided by exp(log_rest_ref)
    pairs: int
    log_tail: float
    tail_rel: float

    @property
    def rest_ratio(self) -> float:
        return math.exp(self.log_rest_ref - self.log_w0)

    @property
    def bracket(self) -> complex:
        """Full sum divided by ``exp(log_w0)``."""
        return complex(math.cos(self.phase0), math.sin(self.phase0)) + self.rest_ratio * self.rest


def _pf_log_tail(s: float, p: int, shift: float, K: int) -> float:
    """Log of a bound on sum_{|k| > K} |t + 2 pi i k|^(-p).

    Uses |2 pi k - alpha| >= 2 pi (|k| - shift) and comparison with the
    integral of the (decreasing) majorant.
    """
    T = K - shift
    if T <= 0.0:
        return math.inf
    a = TWO_PI / s
    aT = a * T
    b1 = -p * math.log(aT) + math.log(T) - math.log(p - 1.0)
    b2 = -0.5 * (p - 2) * math.log1p(aT * aT) + math.log(math.atan2(1.0, aT)) - math.log(a)
    return math.log(2.0) - p * math.log(s) + min(b1, b2)


def _partial_fraction(
    s: float,
    alpha: float,
    p: int,
    cfg: SeriesConfig,
    relative_to: str = "total",
    noise_tol: float | None = None,
) -> _PFSum:
    shift = abs(alpha) / TWO_PI
    log_w0 = -p * math.log(math.hypot(s, alpha))
    phase0 = -p * math.atan2(-alpha, s)
    log_rest_ref = -p * math.log(math.hypot(s, TWO_PI - abs(alpha)))
    log_tol = math.log(cfg.rel_tol)

    re_parts: list[float] = []
    im_parts: list[float] = []
    noise = 0.0
    K_done = 0
    K = 8
    while True:
        K = min(K, cfg.max_terms)
        ks = np.arange(K_done + 1, K + 1, dtype=np.float64)
        # on the diagonal k and -k are conjugate: keep k > 0 and double the real part
        sides = (1.0,) if alpha == 0.0 else (1.0, -1.0)
        for sgn in sides:
            y = sgn * TWO_PI * ks - alpha
            logmag = -p * np.log(np.hypot(s, y))
            mag = np.exp(logmag - log_rest_ref)
            ph = -p * np.arctan2(y, s)
            if alpha == 0.0:
                mag = 2.0 * mag
                re_parts.append(float(np.sum(mag * np.cos(ph))))
            else:
                re_parts.append(float(np.sum(mag * np.cos(ph))))
                im_parts.append(float(np.sum(mag * np.sin(ph))))
            noise += float(np.sum(mag * (4.0 + 4.0 * p + np.abs(logmag))))
        K_done = K
        rest = complex(math.fsum(re_parts), math.fsum(im_parts))
        ratio = math.exp(log_rest_ref - log_w0)
        if relative_to == "total":
            target = complex(math.cos(phase0), math.sin(phase0)) + ratio * rest
            log_target = log_w0 + math.log(abs(target)) if target != 0 else -math.inf
            log_noise = float(
                np.logaddexp(log_rest_ref + math.log(_EPS * noise), log_w0 + math.log(4.0 * _EPS))
            )
        else:
            log_target = log_rest_ref + math.log(abs(rest)) if rest != 0 else -math.inf
            log_noise = log_rest_ref + math.log(_EPS * noise)
        log_tail = _pf_log_tail(s, p, shift, K)
        if log_tail <= log_tol + log_target:
            break
        # the tail bound only shrinks with K; stop early if even max_terms cannot work
        log_tail_cap = _pf_log_tail(s, p, shift, cfg.max_terms)
        log_reach = np.logaddexp(log_target, log_tail) if math.isfinite(log_target) else log_tail
        if K >= cfg.max_terms or log_tail_cap > log_tol + log_reach:
            raise TruncationFailure(
                f"partial-fraction tail cannot reach rel_tol={cfg.rel_tol:g} "
                f"within max_terms={cfg.max_terms} (p={p}, s={s:.6g})"
            )
        K *= 2
    log_noise_tol = log_tol if noise_tol is None else math.log(noise_tol)
    if log_noise > log_noise_tol + log_target:
        raise PrecisionLoss(
            f"cancellation in the partial-fraction sum (p={p}, s={s:.6g}): "
            f"noise/|sum| = {math.exp(log_noise - log_target):.2e}"
        )
    return _PFSum(
        log_w0, phase0, log_rest_ref, rest, K_done, log_tail, math.exp(log_tail - log_target)
    )


# ---------------------------------------------------------------------------
# diagonal density


def _log_series_prefactor(u: float, p: int) -> float:
    return p * math.log(u) - LOG_2PI - log_gamma(p - 1.0)


def density_series(pt: PointLike, p: int, cfg: SeriesConfig | None = None) -> DensityValue:
    """Density by the direct series over monomials, with a certified geometric tail."""
    p = _check_p(p)
    u = _as_u(pt)
    cfg = _cfg(cfg)
    r = _power_series(u, p, 0.0, cfg)
    log_val = _log_series_prefactor(u, p) + r.log_ref + math.log(r.total.real)
    return DensityValue(LogMagnitude(1, log_val), Method.DIRECT_SERIES, r.terms, r.tail_rel)


def _log_sinh(x: float) -> float:
    if x < 20.0:
        return math.log(math.sinh(x))
    return x + math.log1p(-math.exp(-2.0 * x)) - math.log(2.0)


EULERIAN_MAX_P = 1500


@lru_cache(maxsize=32)
def _log_eulerian_row(n: int) -> np.ndarray:
    """Logs of the Eulerian numbers ``A(n, m)``, ``m = 0..n-1``, from exact integers."""
    row = [1]
    for k in range(2, n + 1):
        row = [(m + 1) * (row[m] if m < k - 1 else 0) + (k - m) * (row[m - 1] if m else 0)
               for m in range(k)]
    return np.array([math.log(a) for a in row])


def _density_eulerian(u: float, p: int) -> DensityValue:
    # sum_l l^n w^l = sum_m A(n, m) w^(m+1) / (1 - w)^(n+1), n = p - 1, w = e^-u:
    # a finite sum of positive terms, so nothing cancels
    log_a = _log_eulerian_row(p - 1)
    logs = log_a - u * np.arange(1, p, dtype=np.float64)
    top = float(np.max(logs))
    log_sum = top + math.log(math.fsum(np.exp(logs - top)))
    log_val = (
        p * math.log(u) - LOG_2PI - log_gamma(p - 1.0) + log_sum
        - p * math.log(-math.expm1(-u))
    )
    return DensityValue(LogMagnitude(1, log_val), Method.EULERIAN, p - 1, 0.0)


def density_closed_form(pt: PointLike, p: int, cfg: SeriesConfig | None = None) -> DensityValue:
    """Density by the partial-fraction form, pairing k with -k.

    For ``p = 2`` the k-sum is summed in closed form,
    ``sum_k u^2 / (u + 2 pi i k)^2 = (u/2)^2 / sinh(u/2)^2``, because its
    tail decays too slowly (like ``1/K``) to be certified by truncation.

    Far from the boundary the bracket ``1 + sum_{k != 0}`` is ``B_p`` over
    ``(p-1)/2pi``, which can drop below double resolution. When the
    partial fractions cannot certify the result and ``p`` is at most
    ``EULERIAN_MAX_P``, the finite rational form in ``e^-u`` with Eulerian
    coefficients is returned instead (``method_used`` says so).
    """
    p = _check_p(p)
    u = _as_u(pt)
    cfg = _cfg(cfg)
    if p == 2:
        x = 0.5 * u
        log_val = -LOG_2PI + 2.0 * (math.log(x) - _log_sinh(x))
        return DensityValue(LogMagnitude(1, log_val), Method.PARTIAL_FRACTION, 0, 0.0)
    try:
        r = _partial_fraction(u, 0.0, p, cfg, "total")
        excess = r.rest_ratio * r.rest.real
        if not excess > -1.0:
            raise PrecisionLoss(f"non-positive partial-fraction bracket (p={p}, u={u:.6g})")
    except TruncationFailure:
        if p > EULERIAN_MAX_P:
            raise
        return _density_eulerian(u, p)
    log_val = math.log(p - 1.0) - LOG_2PI + math.log1p(excess)
    return DensityValue(LogMagnitude(1, log_val), Method.PARTIAL_FRACTION, r.pairs, r.tail_rel)


def _preferred(peak: float, cfg: SeriesConfig) -> tuple[Method, Method]:
    if peak <= cfg.auto_switch_ratio:
        return Method.DIRECT_SERIES, Method.PARTIAL_FRACTION
    return Method.PARTIAL_FRACTION, Method.DIRECT_SERIES


def density_gaussian(pt: PointLike, p: int) -> DensityValue:
    """Uncertified Gaussian-bump approximation of the density (``p >= 2``)."""
    from .gaussian import gaussian_sum_from_log, nu

    p = _check_p(p)
    u = _as_u(pt)
    q = p - 1
    g = gaussian_sum_from_log(u / q, q)
    if g <= 0.0:
        value = LogMagnitude(0)
    else:
        value = LogMagnitude(1, 1.5 * math.log(q / TWO_PI) + math.log1p(nu(q)) + math.log(g))
    return DensityValue(value, Method.GAUSSIAN_APPROX, 0, math.inf)


def density(pt: PointLike, p: int, cfg: SeriesConfig | None = None) -> DensityValue:
    """Diagonal density ``B_p`` at ``pt`` using the method selected in ``cfg``.

    ``AUTO`` picks the direct series while the peak index ``(p-1)/u`` is at
    most ``cfg.auto_switch_ratio`` and the partial-fraction form otherwise,
    falling back to the other method on :class:`TruncationFailure`.
    """
    p = _check_p(p)
    cfg = _cfg(cfg)
    u = _as_u(pt)
    if cfg.method is Method.DIRECT_SERIES:
        return density_series(u, p, cfg)
    if cfg.method is Method.PARTIAL_FRACTION:
        return density_closed_form(u, p, cfg)
    if cfg.method is Method.GAUSSIAN_APPROX:
        return density_gaussian(u, p)
    first, second = _preferred((p - 1) / u, cfg)
    impl = {Method.DIRECT_SERIES: density_series, Method.PARTIAL_FRACTION: density_closed_form}
    try:
        return impl[first](u, p, cfg)
    except TruncationFailure as exc:
        try:
            return impl[second](u, p, cfg)
        except TruncationFailure:
            raise exc


def _excess_p2(u: float) -> LogMagnitude:
    """Exact ``B_2(u) - 1/(2 pi) = ((x / sinh x)^2 - 1) / (2 pi)`` with ``x = u/2``.

    The k-sum tail decays only like ``1/K`` for ``p = 2``, so the elementary
    form is used instead.
    """
    x = 0.5 * u
    if x < 1.0:
        # x - sinh x = -sum_{n>=1} x^(2n+1) / (2n+1)!
        term = x**3 / 6.0
        acc = 0.0
        n = 1
        while term > 1e-18 * acc or acc == 0.0:
            acc += term
            term *= x * x / ((2 * n + 2) * (2 * n + 3))
            n += 1
        # (x/s)^2 - 1 = (x - s)(x + s) / s^2
        log_mag = math.log(acc) + math.log(x + math.sinh(x)) - 2.0 * _log_sinh(x)
        return LogMagnitude(-1, log_mag - LOG_2PI)
    log_r = math.log(x) - _log_sinh(x)
    return LogMagnitude(-1, math.log(-math.expm1(2.0 * log_r)) - LOG_2PI)


def density_excess(
    pt: PointLike, p: int, cfg: SeriesConfig | None = None, noise_tol: float = 1e-8
) -> LogMagnitude:
    """``B_p(u) - (p-1)/(2 pi)`` without subtracting nearly equal numbers.

    The k != 0 partial-fraction terms are summed directly with the tail
    certified to ``cfg.rel_tol``. Their phases can cancel, so rounding is
    only required to stay below ``max(noise_tol, cfg.rel_tol)`` relative.
    When that sum cannot be certified the difference is taken from the
    full density and rejected if it drowns in rounding.
    """
    p = _check_p(p)
    u = _as_u(pt)
    cfg = _cfg(cfg)
    if p == 2:
        return _excess_p2(u)
    base = math.log(p - 1.0) - LOG_2PI
    try:
        r = _partial_fraction(u, 0.0, p, cfg, "rest", max(noise_tol, cfg.rel_tol))
        if r.rest.real == 0.0:
            return LogMagnitude(0)
        sign = 1 if r.rest.real > 0 else -1
        return LogMagnitude(sign, base + r.log_rest_ref - r.log_w0 + math.log(abs(r.rest.real)))
    except PrecisionLoss:
        # the direct k != 0 sum is the sharper route; if it cancels, subtraction is worse
        raise
    except TruncationFailure:
        pass
    d = density(u, p, cfg)
    level = (p - 1) / TWO_PI
    diff = d.linear - level
    # the log-domain prefactor carries an absolute error of a few ulps of its largest part
    log_err = _EPS * (p * abs(math.log(u)) + log_gamma(p - 1.0) + p + 8.0)
    noise = (16.0 * _EPS + log_err + d.tail_bound) * max(level, d.linear)
    if abs(diff) <= noise:
        raise PrecisionLoss(f"B_p - (p-1)/2pi is below rounding noise at u={u:.6g}, p={p}")
    return LogMagnitude.from_linear(diff)


# ---------------------------------------------------------------------------
# off-diagonal kernel


def _reduce_angle(a: float) -> float:
    a = math.remainder(a, TWO_PI)
    return math.pi if a == -math.pi else a


def kernel_offdiag(
    x: PointLike, y: PointLike, p: int, cfg: SeriesConfig | None = None
) -> tuple[LogMagnitude, float]:
    """Coefficient ``beta_p(x, y) = sum_l l^(p-1) (x conj(y))^l / (2 pi (p-2)!)``.

    Returns ``(modulus, phase)`` with the modulus in the log domain and the
    phase in ``[0, 2 pi)``. Raw floats are read as points with ``theta = 0``.
    """
    p = _check_p(p)
    cfg = _cfg(cfg)
    x = x if isinstance(x, PuncturedPoint) else PuncturedPoint(_as_u(x))
    y = y if isinstance(y, PuncturedPoint) else PuncturedPoint(_as_u(y))
    s = 0.5 * (x.u + y.u)
    alpha = _reduce_angle(x.theta - y.theta)

    def via_series():
        r = _power_series(s, p, alpha, cfg)
        tot = complex(r.total)
        log_mod = r.log_ref + math.log(abs(tot)) - LOG_2PI - log_gamma(p - 1.0)
        return log_mod, math.atan2(tot.imag, tot.real)

    def via_pf():
        if p == 2:
            # sum_k (t + 2 pi i k)^-2 = w / (1 - w)^2 with w = e^-t, summed exactly
            # 1 - w = -expm1(-s) + 2 e^-s sin^2(alpha/2) - i e^-s sin(alpha)
            es = math.exp(-s)
            re = -math.expm1(-s) + 2.0 * es * math.sin(0.5 * alpha) ** 2
            im = -es * math.sin(alpha)
            log_mod = -s - 2.0 * math.log(math.hypot(re, im)) - LOG_2PI
            return log_mod, alpha - 2.0 * math.atan2(im, re)
        r = _partial_fraction(s, alpha, p, cfg, "total")
        b = r.bracket
        log_mod = math.log(p - 1.0) - LOG_2PI + r.log_w0 + math.log(abs(b))
        return log_mod, math.atan2(b.imag, b.real)

    impl = {Method.DIRECT_SERIES: via_series, Method.PARTIAL_FRACTION: via_pf}
    if cfg.method is Method.GAUSSIAN_APPROX:
        raise DomainError("the Gaussian approximation is diagonal-only")
    if cfg.method is Method.AUTO:
        first, second = _preferred((p - 1) / s, cfg)
        try:
            log_mod, phase = impl[first]()
        except TruncationFailure as exc:
            try:
                log_mod, phase = impl[second]()
            except TruncationFailure:
                raise exc
    else:
        log_mod, phase = impl[cfg.method]()
    phase = math.fmod(phase, TWO_PI)
    if phase < 0.0:
        phase += TWO_PI
    if phase >= TWO_PI:
        phase = 0.0
    return LogMagnitude(1, log_mod), phase


def kernel_weighted_modulus(
    x: PointLike, y: PointLike, p: int, cfg: SeriesConfig | None = None
) -> LogMagnitude:
    """Pointwise ``h^p`` norm of the kernel: ``u_x^(p/2) u_y^(p/2) |beta_p(x, y)|``."""
    p = _check_p(p)
    ux = x.u if isinstance(x, PuncturedPoint) else _as_u(x)
    uy = y.u if isinstance(y, PuncturedPoint) else _as_u(y)
    mod, _ = kernel_offdiag(x, y, p, cfg)
    return mod.scale(0.5 * p * (math.log(ux) + math.log(uy)))


def mode_coefficient(p: int, ell: int) -> LogMagnitude:
    """Weight ``l^(p-1) / (2 pi (p-2)!)`` of the ``l``-th Fourier mode of ``beta_p``."""
    return LogMagnitude.one() / basis_norm_sq(p, ell)
