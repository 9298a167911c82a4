"""Rescaled density and its Gaussian bump approximation.

Reading the density of power ``p+1`` in the variable ``x = |z|^(2/p)``
gives ``f_p(x)``. With ``L = |log x|`` one has exactly

    (2 pi / p)^(3/2) f_p(x) / (1 + nu(p)) = L * sum_{l>=1} psi_p(l L),

where ``psi_p(zeta) = (zeta e^(1-zeta))^p`` is a bump of height one at
``zeta = 1`` and ``nu(p)`` is the relative error of Stirling's formula.
Replacing each ``psi_p`` by a Gaussian plus a skewness term gives
``G_p(x)``. Points in ``(0, 1)`` are carried by ``L`` so that ``x`` close
to 1 and ``x**p`` close to 0 are never formed in linear arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

from .exceptions import DomainError, TruncationFailure
from .kernel import TWO_PI, DensityValue, SeriesConfig, _check_p, density
from .numerics import golden_max, stirling_remainder

# beyond |eta| = 40 a Gaussian term is below 1e-300
_ETA_CUT = 40.0
_GP_MAX_TERMS = 1 << 27


def nu(p: float) -> float:
    """Relative error of Stirling's formula, ``sqrt(2 pi p) p^p e^-p / p! - 1``."""
    if not p >= 1 or not math.isfinite(p):
        raise DomainError(f"nu needs p >= 1, got {p!r}")
    # log p! - [log sqrt(2 pi p) + p log p - p] is exactly the Stirling remainder of Gamma(p)
    return math.expm1(-stirling_remainder(float(p)))


def varphi(xi: float) -> float:
    """``e * xi * |log xi|``, which peaks at 1 when ``xi = 1/e``."""
    if not 0.0 < xi < 1.0:
        raise DomainError(f"varphi needs 0 < xi < 1, got {xi!r}")
    return math.e * xi * -math.log(xi)


@dataclass(frozen=True)
class RescaledPoint:
    """A point ``x`` of ``(0, 1)`` together with ``L = |log x|``.

    Build it with :meth:`from_log` when ``L`` is the primary quantity; ``x``
    is then only a derived display value.
    """

    x: float
    L: float = field(default=math.nan)

    def __post_init__(self):
        L = self.L
        if math.isnan(L):
            if not 0.0 < self.x < 1.0:
                raise DomainError(f"x must lie strictly in (0, 1), got {self.x!r}")
            L = -math.log(self.x)
            object.__setattr__(self, "L", L)
        if not (L > 0.0 and math.isfinite(L)):
            raise DomainError(f"|log x| must be finite and > 0, got {L!r}")

    @classmethod
    def from_log(cls, L: float) -> "RescaledPoint":
        L = float(L)
        return cls(math.exp(-L), L)


XLike = Union[RescaledPoint, float]


def _as_L(x: XLike) -> float:
    if isinstance(x, RescaledPoint):
        return x.L
    return RescaledPoint(float(x)).L


def b_p(y: float, p: int, cfg: SeriesConfig | None = None) -> DensityValue:
    """Density of power ``p+1`` at ``|z|^2 = y``."""
    p = _check_p(p, 1)
    if not 0.0 < y < 1.0:
        raise DomainError(f"y must lie strictly in (0, 1), got {y!r}")
    return density(-math.log(y), p + 1, cfg)


def f_p(x: XLike, p: int, cfg: SeriesConfig | None = None) -> DensityValue:
    """``b_p(x^p)``, evaluated at ``u = p |log x|``."""
    p = _check_p(p, 1)
    return density(p * _as_L(x), p + 1, cfg)


def scaled_f_p(x: XLike, p: int, cfg: SeriesConfig | None = None) -> float:
    """``(2 pi / p)^(3/2) f_p(x)``, the normalisation under which bumps have height ``1/l``."""
    p = _check_p(p, 1)
    return f_p(x, p, cfg).value.scale(1.5 * math.log(TWO_PI / p)).to_linear()


def psi_p(zeta, p: float):
    """``(zeta e^(1 - zeta))^p``; accepts scalars or arrays."""
    z = np.asarray(zeta, dtype=float)
    if np.any(~(z > 0.0)):
        raise DomainError("psi_p needs zeta > 0")
    d = z - 1.0
    out = np.exp(p * (np.log1p(d) - d))
    return float(out) if out.ndim == 0 else out


def gauss0(eta):
    e = np.asarray(eta, dtype=float)
    out = np.exp(-0.5 * e * e)
    return float(out) if out.ndim == 0 else out


def gauss1(eta):
    e = np.asarray(eta, dtype=float)
    out = e**3 * np.exp(-0.5 * e * e)
    return float(out) if out.ndim == 0 else out


def _cubic_log_remainder(z: np.ndarray) -> np.ndarray:
    """``log1p(z) - z + z^2/2 - z^3/3`` for ``|z| <= 1/2`` by its Taylor series."""
    acc = np.zeros_like(z)
    zn = z**4
    for n in range(4, 64):
        acc += (zn / n) if n % 2 == 1 else (-zn / n)
        zn = zn * z
    return acc


def _expm1_minus_id(w: np.ndarray) -> np.ndarray:
    """``expm1(w) - w`` without cancellation for small ``w``."""
    out = np.expm1(w) - w
    small = np.abs(w) < 0.1
    if np.any(small):
        ws = w[small]
        acc = np.zeros_like(ws)
        term = ws * ws / 2.0
        for n in range(3, 20):
            acc += term
            term = term * ws / n
        out[small] = acc
    return out


def delta_p(zeta, p: float):
    """``psi_p(zeta) - G0(eta) + G1(eta) / (3 sqrt p)`` with ``eta = sqrt(p)(1 - zeta)``.

    Near ``zeta = 1`` the two leading terms agree to many digits, so the
    difference is formed from the Taylor remainder of ``log zeta`` instead.
    Returns exactly 0 at ``zeta = 1``.
    """
    if not p > 0:
        raise DomainError(f"delta_p needs p > 0, got {p!r}")
    zeta_arr = np.asarray(zeta, dtype=float)
    if np.any(~(zeta_arr > 0.0)):
        raise DomainError("delta_p needs zeta > 0")
    z = np.atleast_1d(zeta_arr - 1.0)
    out = np.empty_like(z)
    half_sq = 0.5 * p * z * z
    near = (np.abs(z) <= 0.5) & (half_sq <= 600.0)
    far = ~near
    if np.any(far):
        zf = z[far]
        with np.errstate(under="ignore"):
            out[far] = np.exp(p * (np.log1p(zf) - zf)) - np.exp(-0.5 * p * zf * zf) * (
                1.0 + p * zf**3 / 3.0
            )
    if np.any(near):
        zn = z[near]
        k = _cubic_log_remainder(zn)
        w = p * (zn**3 / 3.0 + k)
        out[near] = np.exp(-half_sq[near]) * (_expm1_minus_id(w) + p * k)
    return float(out[0]) if zeta_arr.ndim == 0 else out.reshape(zeta_arr.shape)


def _bump_window(L: float, p: float) -> tuple[int, int]:
    """Indices ``l`` with ``|sqrt(p)(1 - l L)| <= 40``."""
    w = _ETA_CUT / math.sqrt(p)
    lo = max(1, math.ceil((1.0 - w) / L))
    hi = math.floor((1.0 + w) / L)
    return lo, hi


def _window_sum(L: float, p: float, fn) -> float:
    lo, hi = _bump_window(L, p)
    if hi < lo:
        return 0.0
    if hi - lo + 1 > _GP_MAX_TERMS:
        raise TruncationFailure(f"Gaussian window has {hi - lo + 1} terms (|log x| = {L:g})")
    sq = math.sqrt(p)
    parts = []
    for a in range(lo, hi + 1, 1 << 22):
        ell = np.arange(a, min(a + (1 << 22), hi + 1), dtype=np.float64)
        parts.append(math.fsum(fn(sq * (1.0 - ell * L))))
    return math.fsum(parts)


def gaussian_sum_from_log(L: float, p: float) -> float:
    """``G_p`` as a function of ``L = |log x|``."""
    if not (L > 0.0 and math.isfinite(L)):
        raise DomainError(f"|log x| must be finite and > 0, got {L!r}")
    sq = math.sqrt(p)
    return L * _window_sum(L, p, lambda e: gauss0(e) - gauss1(e) / (3.0 * sq))


def gaussian_sum_Gp(x: XLike, p: int) -> float:
    """``|log x| * sum_l [G0(eta_l) - G1(eta_l) / (3 sqrt p)]`` with ``eta_l = sqrt(p)(1 + l log x)``."""
    p = _check_p(p, 1)
    return gaussian_sum_from_log(_as_L(x), p)


def gauss_component_sums(L: float, p: float) -> tuple[float, float]:
    """``(L sum G0(eta_l), L sum G1(eta_l))`` over the bump window."""
    return L * _window_sum(L, p, gauss0), L * _window_sum(L, p, gauss1)


# ---------------------------------------------------------------------------
# scans


@dataclass(frozen=True)
class BoundScanReport:
    """Empirical constant of a weighted error bound over a grid."""

    p: int
    grid_size: int
    sup_weighted_error: float
    argmax: float

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "grid_size": self.grid_size,
            "sup_weighted_error": self.sup_weighted_error,
            "argmax": self.argmax,
        }


def default_log_x_grid() -> np.ndarray:
    """512 values of ``|log x|``: 64 per decade on ``[1e-4, 1e3)`` plus ``1/l`` for ``l <= 64``."""
    geo = np.logspace(-4.0, 3.0, 448, endpoint=False)
    centers = 1.0 / np.arange(1, 65, dtype=float)
    return np.sort(np.concatenate([geo, centers]))


def default_zeta_grid(p: float) -> np.ndarray:
    """Grid in ``zeta`` log-uniform in ``|1 - zeta|`` on both sides, refined on the ``1/sqrt p`` scale."""
    d = np.logspace(-4.0, 3.0, 448, endpoint=False)
    right = 1.0 + d
    left = 1.0 - d[d < 1.0]
    eta = np.linspace(-12.0, 12.0, 481) / math.sqrt(p)
    local = 1.0 + eta[eta > -1.0]
    tiny = np.array([1e-12, 1e-9, 1e-6])
    out = np.concatenate([right, left, local, tiny, [1.0]])
    return np.unique(out[out > 0.0])


def lemma_a_scan(p: float, zeta_grid: Iterable[float] | None = None) -> BoundScanReport:
    """Sup of ``p (1 + p (1 - zeta)^2) |delta_p(zeta)|`` over the grid."""
    grid = default_zeta_grid(p) if zeta_grid is None else np.asarray(list(zeta_grid), float)
    w = p * (1.0 + p * (1.0 - grid) ** 2) * np.abs(delta_p(grid, p))
    i = int(np.argmax(w))
    return BoundScanReport(int(p), int(grid.size), float(w[i]), float(grid[i]))


def _scaled_lhs(L: float, p: int, cfg: SeriesConfig | None) -> float:
    """``(2 pi / p)^(3/2) f_p / (1 + nu(p))`` at ``|log x| = L``."""
    v = density(p * L, p + 1, cfg).value
    return v.scale(1.5 * math.log(TWO_PI / p) - math.log1p(nu(p))).to_linear()


def prop36_scan(
    p: int, x_grid: Iterable[float] | None = None, cfg: SeriesConfig | None = None
) -> BoundScanReport:
    """Sup of ``p (1 + |log x|) |L sum psi_p(l L) - G_p(x)|``; the grid holds ``|log x|`` values.

    The bump sum is read off ``f_p`` through the exact factorisation in the
    module docstring. ``argmax`` is reported as ``|log x|``.
    """
    p = _check_p(p, 1)
    grid = default_log_x_grid() if x_grid is None else np.asarray(list(x_grid), float)
    best, arg = -1.0, math.nan
    for L in grid:
        L = float(L)
        err = abs(_scaled_lhs(L, p, cfg) - gaussian_sum_from_log(L, p))
        w = p * (1.0 + L) * err
        if w > best:
            best, arg = w, L
    return BoundScanReport(p, int(grid.size), best, arg)


def cor37_scan(
    p: int, log_abs_z_grid: Iterable[float] | None = None, cfg: SeriesConfig | None = None
) -> BoundScanReport:
    """Sup of ``(p + 2|log|z||) |(2 pi/p)^(3/2) B_{p+1}(z) / (1 + nu(p)) - G_p(|z|^(2/p))|``.

    The grid holds ``|log|z||`` values; by default it is the ``|log x|``
    grid times ``p/2``. ``argmax`` is reported as ``|log|z||``.
    """
    p = _check_p(p, 1)
    if log_abs_z_grid is None:
        grid = 0.5 * p * default_log_x_grid()
    else:
        grid = np.asarray(list(log_abs_z_grid), float)
    scale = 1.5 * math.log(TWO_PI / p) - math.log1p(nu(p))
    best, arg = -1.0, math.nan
    for a in grid:
        a = float(a)
        u = 2.0 * a
        lhs = density(u, p + 1, cfg).value.scale(scale).to_linear()
        err = abs(lhs - gaussian_sum_from_log(u / p, p))
        w = (p + u) * err
        if w > best:
            best, arg = w, a
    return BoundScanReport(p, int(grid.size), best, arg)


def gauss_sup_scan(p: float, x_grid: Iterable[float] | None = None) -> tuple[float, float]:
    """``(sup L sum G0, sup |L sum G1|)`` over a grid of ``|log x|`` values."""
    grid = default_log_x_grid() if x_grid is None else np.asarray(list(x_grid), float)
    s0 = s1 = 0.0
    for L in grid:
        a, b = gauss_component_sums(float(L), p)
        s0, s1 = max(s0, a), max(s1, abs(b))
    return s0, s1


@dataclass(frozen=True)
class ScanReport:
    """Location and size of the supremum of the density over ``u``."""

    p: int
    sup_value: float
    log_sup: float
    argmax_u: float
    scaled_sup: float
    residual: float
    evaluations: int
    at_boundary: bool = False
    grid: tuple = ()

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "sup_value": self.sup_value,
            "log_sup": self.log_sup,
            "argmax_u": self.argmax_u,
            "scaled_sup": self.scaled_sup,
            "residual": self.residual,
            "evaluations": self.evaluations,
            "at_boundary": self.at_boundary,
        }


def _refine_log_max(f, t_grid: np.ndarray, vals: np.ndarray) -> tuple[float, float, bool]:
    i = int(np.argmax(vals))
    if i == 0 or i == len(t_grid) - 1:
        return float(t_grid[i]), float(vals[i]), True
    t, v = golden_max(f, float(t_grid[i - 1]), float(t_grid[i + 1]), rtol=1e-13)
    if v < vals[i]:
        t, v = float(t_grid[i]), float(vals[i])
    return t, v, False


def sup_scan(p: int, cfg: SeriesConfig | None = None, n_grid: int = 129) -> ScanReport:
    """Supremum of ``B_p`` over ``u``: log grid on ``[max(1e-3, p/8), 8p]``, then golden refinement.

    If the best grid point is on the bracket edge the scan is repeated on
    ``[1e-6, 64 p]``; a maximum still on the edge is reported with
    ``at_boundary`` set (for small ``p`` the sup is approached as ``u -> 0``).
    """
    p = _check_p(p)
    count = 0

    def f(t: float) -> float:
        nonlocal count
        count += 1
        return density(math.exp(t), p, cfg).log

    def scan(lo: float, hi: float):
        ts = np.linspace(math.log(lo), math.log(hi), n_grid)
        vals = np.array([f(float(t)) for t in ts])
        return ts, vals

    ts, vals = scan(max(1e-3, p / 8.0), 8.0 * p)
    t, v, edge = _refine_log_max(f, ts, vals)
    if edge:
        ts, vals = scan(1e-6, 64.0 * p)
        t, v, edge = _refine_log_max(f, ts, vals)
    sup = math.exp(v)
    scaled = math.exp(v + 1.5 * math.log(TWO_PI / p))
    residual = (sup - (p / TWO_PI) ** 1.5) / p
    return ScanReport(p, sup, v, math.exp(t), scaled, residual, count, edge)
