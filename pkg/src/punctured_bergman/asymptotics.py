"""Limit laws of the model density: decay to ``(p-1)/2pi`` away from the puncture and the bump structure.

Residuals ``|B_p - (p-1)/2pi|`` are computed from the ``k != 0`` partial
fractions directly (see :func:`density_excess`), so they stay accurate
far below the double-precision resolution of ``B_p`` itself. Residual
sizes are kept as logs because they reach ``1e-300`` and below within
moderate ``p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .exceptions import BumpNotSeparated, DomainError, FitDegenerate, PrecisionLoss
from .gaussian import RescaledPoint, scaled_f_p
from .kernel import TWO_PI, SeriesConfig, _check_p, density_excess
from .numerics import golden_max


def _log_abs_excess(u: float, p: int, cfg: SeriesConfig | None) -> float:
    try:
        e = density_excess(u, p, cfg)
    except PrecisionLoss:
        # the residual changes sign here; a zero crossing never carries the sup
        return -math.inf
    return e.log_abs if e.sign else -math.inf


def _sup_log_excess(u_max: float, p: int, n_points: int, cfg: SeriesConfig | None) -> float:
    # the residual is negligible below u_max * 1e-6 (it behaves like u^p there)
    us = np.geomspace(u_max * 1e-6, u_max, n_points)
    vals = np.array([_log_abs_excess(float(u), p, cfg) for u in us])
    i = int(np.argmax(vals))
    best = float(vals[i])
    if 0 < i < n_points - 1:
        f = lambda t: _log_abs_excess(math.exp(t), p, cfg)
        _, v = golden_max(f, math.log(us[i - 1]), math.log(us[i + 1]), rtol=1e-12)
        best = max(best, v)
    elif i == n_points - 1:
        f = lambda t: _log_abs_excess(math.exp(t), p, cfg)
        _, v = golden_max(f, math.log(us[i - 1]), math.log(u_max), rtol=1e-12)
        best = max(best, v)
    return best


def _check_a(a: float) -> float:
    if not 0.0 < a < 1.0:
        raise DomainError(f"a must lie in (0, 1), got {a!r}")
    return float(a)


def annulus_residual_log(
    p: int, a: float, n_points: int = 512, cfg: SeriesConfig | None = None
) -> float:
    """Natural log of :func:`annulus_residual`."""
    p = _check_p(p)
    a = _check_a(a)
    if n_points < 16:
        raise DomainError("n_points must be >= 16")
    return _sup_log_excess(-2.0 * math.log(a), p, n_points, cfg)


def annulus_residual(
    p: int, a: float, n_points: int = 512, cfg: SeriesConfig | None = None
) -> float:
    """``sup |B_p - (p-1)/2pi|`` over ``a <= |z| < 1``, i.e. ``0 < u <= -2 log a``."""
    return math.exp(annulus_residual_log(p, a, n_points, cfg))


def shrinking_annulus_residual_log(
    p: int, a: float, gamma: float, n_points: int = 512, cfg: SeriesConfig | None = None
) -> float:
    p = _check_p(p)
    a = _check_a(a)
    if not 0.0 < gamma < 0.5:
        raise DomainError(f"gamma must lie in (0, 1/2), got {gamma!r}")
    u_max = 2.0 * (p**gamma + abs(math.log(a)))
    return _sup_log_excess(u_max, p, n_points, cfg)


def shrinking_annulus_residual(
    p: int, a: float, gamma: float, n_points: int = 512, cfg: SeriesConfig | None = None
) -> float:
    """Residual sup over the annulus ``|z| >= a exp(-p^gamma)`` that grows towards the puncture."""
    return math.exp(shrinking_annulus_residual_log(p, a, gamma, n_points, cfg))


@dataclass(frozen=True)
class DecayFit:
    """Least-squares fit ``log residual ~ intercept - fitted_rate * p``."""

    a: float
    p_list: tuple[int, ...]
    errors: tuple[float, ...]
    log_errors: tuple[float, ...]
    fitted_rate: float
    intercept: float
    r2: float

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "p_list": list(self.p_list),
            "log_errors": list(self.log_errors),
            "fitted_rate": self.fitted_rate,
            "intercept": self.intercept,
            "r2": self.r2,
        }


def decay_fit(
    a: float, p_list: Sequence[int], cfg: SeriesConfig | None = None, n_points: int = 512
) -> DecayFit:
    """Fit the exponential decay rate of :func:`annulus_residual` in ``p``.

    The fit runs on log residuals, which stay finite where the linear
    residuals underflow; an exactly vanishing residual raises
    :class:`FitDegenerate`.
    """
    a = _check_a(a)
    ps = [_check_p(p) for p in p_list]
    if len(ps) < 3:
        raise FitDegenerate("decay_fit needs at least three values of p")
    if any(q <= r for r, q in zip(ps, ps[1:])):
        raise DomainError("p_list must be strictly increasing")
    logs = np.array([annulus_residual_log(p, a, n_points, cfg) for p in ps])
    if not np.all(np.isfinite(logs)):
        raise FitDegenerate("a residual is exactly zero; the rate is unbounded")
    x = np.asarray(ps, dtype=float)
    slope, intercept = np.polyfit(x, logs, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((logs - fitted) ** 2))
    ss_tot = float(np.sum((logs - logs.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return DecayFit(
        a,
        tuple(ps),
        tuple(float(math.exp(v)) for v in logs),
        tuple(float(v) for v in logs),
        float(-slope),
        float(intercept),
        r2,
    )


def predicted_decay_rate(a: float) -> float:
    """Rate from the ``k = +-1`` partial fractions at the inner edge: ``log(1 + 4 pi^2 / u_a^2) / 2``."""
    u_a = -2.0 * math.log(_check_a(a))
    return 0.5 * math.log1p((TWO_PI / u_a) ** 2)


def compact_coefficient_check(
    p_list: Sequence[int], u0: float, cfg: SeriesConfig | None = None
) -> list[float]:
    """``2 pi B_p(u0) - p`` for each ``p``; these tend to ``-1`` for ``|z| >= 1/2``."""
    if not 0.0 < u0 <= 2.0 * math.log(2.0):
        raise DomainError(f"u0 must lie in (0, 2 log 2], got {u0!r}")
    out = []
    for p in p_list:
        p = _check_p(p)
        e = density_excess(u0, p, cfg)
        # 2 pi B_p - p = -1 + 2 pi (B_p - (p-1)/2pi)
        out.append(-1.0 + TWO_PI * e.to_linear())
    return out


class Bump(NamedTuple):
    location: float
    height: float


def bump_profile(
    p: int, ell_max: int, cfg: SeriesConfig | None = None, n_grid: int = 64
) -> list[Bump]:
    """Local maxima of ``(2pi/p)^(3/2) f_p`` near ``x = e^(-1/l)`` for ``l = 1..ell_max``.

    Each bump is searched in ``|log x| in [1/(l + 1/2), 1/(l - 1/2)]``.
    """
    p = _check_p(p, 1)
    if ell_max < 1:
        raise DomainError("ell_max must be >= 1")
    out = []
    for ell in range(1, int(ell_max) + 1):
        lo, hi = 1.0 / (ell + 0.5), 1.0 / (ell - 0.5)
        f = lambda L: scaled_f_p(RescaledPoint.from_log(L), p, cfg)
        Ls = np.linspace(lo, hi, n_grid)
        vals = np.array([f(float(L)) for L in Ls])
        i = int(np.argmax(vals))
        if i == 0 or i == n_grid - 1:
            raise BumpNotSeparated(f"no interior maximum for l={ell} at p={p}")
        L, h = golden_max(f, float(Ls[i - 1]), float(Ls[i + 1]), rtol=1e-12)
        out.append(Bump(math.exp(-L), h))
    return out

