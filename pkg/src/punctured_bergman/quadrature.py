"""Quadrature oracle for norms and the reproducing property on D*.

With ``u = -log|z|^2`` the Poincare area form is ``du dtheta / u^2``, the
weight is ``u^p`` and ``|z^l|^2 = e^(-l u)``, so the squared norm of
``z^l`` is

    2 pi * int_0^inf u^(p-2) e^(-l u) du.

Angular integrals are done exactly (only one Fourier mode survives); the
radial one is computed here by Gauss-Laguerre or by adaptive
Gauss-Legendre panels, independently of the closed form used elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from numpy.polynomial.laguerre import laggauss
from numpy.polynomial.legendre import leggauss

from .exceptions import AccuracyCap, DomainError
from .kernel import PuncturedPoint, SeriesConfig, _check_p, basis_norm_sq, mode_coefficient
from .numerics import log_gamma

P_QUAD_CAP = 60
ELL_QUAD_CAP = 50
_PANEL_ORDER = 24
_MAX_DEPTH = 40


class QuadScheme(str, Enum):
    GAUSS_LAGUERRE = "gauss-laguerre"
    ADAPTIVE_PANELS = "adaptive"


@dataclass(frozen=True)
class QuadConfig:
    scheme: QuadScheme = QuadScheme.GAUSS_LAGUERRE
    nodes: int = 200
    panel_tol: float = 1e-12
    # upper end of the panel range; the rest is bounded analytically
    u_cut: float = 1400.0

    def __post_init__(self):
        object.__setattr__(self, "scheme", QuadScheme(self.scheme))
        if self.nodes < 16:
            raise DomainError("nodes must be >= 16")
        if not 0.0 < self.panel_tol <= 1e-6:
            raise DomainError(f"panel_tol must lie in (0, 1e-6], got {self.panel_tol!r}")
        if not self.u_cut > 0:
            raise DomainError("u_cut must be positive")


def _laguerre_pair(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``L_n(x)``, ``L_(n-1)(x)`` divided by ``exp(log_scale)``, and ``log_scale``.

    The three-term recurrence is rescaled as it goes so that large ``n``
    and ``x`` do not overflow.
    """
    p0 = np.ones_like(x)
    p1 = 1.0 - x
    log_scale = np.zeros_like(x)
    for k in range(1, n):
        p2 = ((2 * k + 1 - x) * p1 - k * p0) / (k + 1)
        p0, p1 = p1, p2
        big = np.abs(p1) > 1e150
        if np.any(big):
            p0[big] *= 1e-150
            p1[big] *= 1e-150
            log_scale[big] += 150.0 * math.log(10.0)
    return p1, p0, log_scale


@lru_cache(maxsize=16)
def _laguerre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Laguerre nodes and weights for large ``n``.

    ``numpy.polynomial.laguerre.laggauss`` overflows in its weight formula
    beyond roughly 180 nodes, so weights are formed here in the log domain
    from ``w_i = 1 / (x_i L_n'(x_i)^2)`` after Newton-polishing the
    eigenvalues of the Jacobi matrix.
    """
    if n <= 100:
        return laggauss(n)
    k = np.arange(1, n, dtype=float)
    jac = np.diag(2.0 * np.arange(n) + 1.0) - np.diag(k, 1) - np.diag(k, -1)
    x = np.sort(np.linalg.eigvalsh(jac))
    for _ in range(3):
        ln, lm, _ = _laguerre_pair(n, x)
        d = n * (ln - lm) / x
        x = x - ln / d
    ln, lm, log_scale = _laguerre_pair(n, x)
    log_d = np.log(np.abs(n * (ln - lm) / x)) + log_scale
    with np.errstate(under="ignore"):
        w = np.exp(-np.log(x) - 2.0 * log_d)
    return x, w


@lru_cache(maxsize=4)
def _legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return leggauss(n)


def _check_caps(p: int, ell: int) -> tuple[int, int]:
    p = _check_p(p)
    if int(ell) != ell or ell < 1:
        raise DomainError(f"ell must be an integer >= 1, got {ell!r}")
    if p > P_QUAD_CAP:
        raise AccuracyCap(f"quadrature is only trusted for p <= {P_QUAD_CAP}, got {p}")
    if ell > ELL_QUAD_CAP:
        raise AccuracyCap(f"quadrature is only trusted for ell <= {ELL_QUAD_CAP}, got {ell}")
    return p, int(ell)


def _radial_laguerre(n: int, ell: int, nodes: int) -> float:
    # int u^n e^(-l u) du = l^-(n+1) int v^n e^(-v) dv
    x, w = _laguerre(nodes)
    with np.errstate(under="ignore"):
        vals = w * x**n
    return math.fsum(vals) / float(ell) ** (n + 1)


def _integrand(n: int, ell: int, u: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", under="ignore"):
        if n == 0:
            return np.exp(-ell * u)
        return np.exp(n * np.log(u) - ell * u)


def _panel(n: int, ell: int, a: float, b: float) -> float:
    x, w = _legendre(_PANEL_ORDER)
    h = 0.5 * (b - a)
    return h * math.fsum(w * _integrand(n, ell, a + h * (x + 1.0)))


def _adaptive(n: int, ell: int, a: float, b: float, whole: float, abs_tol: float, depth: int):
    m = 0.5 * (a + b)
    left, right = _panel(n, ell, a, m), _panel(n, ell, m, b)
    if abs(left + right - whole) <= abs_tol or depth >= _MAX_DEPTH:
        return left + right, depth >= _MAX_DEPTH
    l_val, l_flag = _adaptive(n, ell, a, m, left, 0.5 * abs_tol, depth + 1)
    r_val, r_flag = _adaptive(n, ell, m, b, right, 0.5 * abs_tol, depth + 1)
    return l_val + r_val, l_flag or r_flag


def _log_upper_tail(n: int, ell: int, cut: float) -> float:
    """Log of a bound on ``int_cut^inf u^n e^(-l u) du`` (valid once ``l cut > n``)."""
    if ell * cut <= n:
        return math.inf
    return n * math.log(cut) - ell * cut - math.log(ell - n / cut)


def _radial_adaptive(n: int, ell: int, q: QuadConfig) -> float:
    # scale of the answer for the tolerance; only used to set the absolute target
    log_scale = log_gamma(n + 1.0) - (n + 1) * math.log(ell)
    if _log_upper_tail(n, ell, q.u_cut) > math.log(q.panel_tol) + log_scale:
        raise AccuracyCap(f"tail beyond u_cut={q.u_cut} is not below panel_tol")
    abs_tol = q.panel_tol * math.exp(log_scale)
    # dyadic panels [0, c 2^-k], ..., [c/4, c/2], [c/2, c] resolve the peak near n / l
    edges = [q.u_cut / 2.0**k for k in range(40, -1, -1)]
    edges = [0.0] + edges
    parts = []
    for a, b in zip(edges, edges[1:]):
        whole = _panel(n, ell, a, b)
        val, capped = _adaptive(n, ell, a, b, whole, abs_tol / len(edges), 0)
        if capped:
            raise AccuracyCap(f"panel recursion did not converge on [{a:g}, {b:g}]")
        parts.append(val)
    return math.fsum(parts)


def basis_norm_quadrature(p: int, ell: int, q: QuadConfig | None = None) -> float:
    """``2 pi int_0^inf u^(p-2) e^(-l u) du`` by quadrature (squared norm of ``z^l``)."""
    q = QuadConfig() if q is None else q
    p, ell = _check_caps(p, ell)
    n = p - 2
    if q.scheme is QuadScheme.GAUSS_LAGUERRE:
        radial = _radial_laguerre(n, ell, q.nodes)
    else:
        radial = _radial_adaptive(n, ell, q)
    return 2.0 * math.pi * radial


def monomial_inner_product(ell1: int, ell2: int, p: int, q: QuadConfig | None = None) -> float:
    """``<z^l1, z^l2>``: exactly 0 for distinct modes, the quadrature norm otherwise."""
    _check_caps(p, ell1)
    _check_caps(p, ell2)
    if ell1 != ell2:
        return 0.0
    return basis_norm_quadrature(p, ell1, q)


def reproduce_basis(
    x: PuncturedPoint | float,
    p: int,
    ell: int,
    q: QuadConfig | None = None,
    cfg: SeriesConfig | None = None,
) -> float:
    """Relative error of ``<e_l, B_p(., x)>`` against ``e_l(x)``.

    ``e_l = z^l / ||z^l||``. The angular integral keeps only the ``l``-th
    mode of the kernel, whose coefficient is ``l^(p-1) / (2 pi (p-2)!)``;
    the radial integral of ``|y|^(2l)`` against the weight is done by
    quadrature. ``cfg`` is accepted for interface symmetry: no kernel
    series is truncated on this path.
    """
    x = x if isinstance(x, PuncturedPoint) else PuncturedPoint(float(x))
    if p > 40 or ell > 10:
        raise AccuracyCap("reproduce_basis is capped at p <= 40, ell <= 10")
    if not 0.1 <= x.u <= 50.0:
        raise DomainError(f"u_x must lie in [0.1, 50], got {x.u!r}")
    p, ell = _check_caps(p, ell)
    norm_exact = basis_norm_sq(p, ell)
    # mode-l part of B_p(y, x): c_l y^l conj(x)^l; pairing with e_l(y) gives
    # c_l x^l ||z^l||^2_quad / ||z^l||
    log_abs_x_l = -0.5 * ell * x.u
    log_lhs = (
        mode_coefficient(p, ell).log_abs
        + log_abs_x_l
        + math.log(basis_norm_quadrature(p, ell, q))
        - 0.5 * norm_exact.log_abs
    )
    log_rhs = log_abs_x_l - 0.5 * norm_exact.log_abs
    # phases e^(i l theta_x) agree on both sides
    return abs(math.expm1(log_lhs - log_rhs))
