"""Self-check suites run by ``punctured-bergman verify``.

Each suite returns a list of :class:`Check` records holding the measured
quantity and the threshold it was compared with. ``fast`` shortens the
p-ladders so a suite finishes in a few seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .asymptotics import bump_profile, compact_coefficient_check, decay_fit
from .gaussian import cor37_scan, lemma_a_scan, nu, sup_scan
from .kernel import (
    Method,
    PuncturedPoint,
    SeriesConfig,
    basis_norm_sq,
    density,
    density_closed_form,
    density_series,
    kernel_offdiag,
    kernel_weighted_modulus,
)
from .exceptions import TruncationFailure
from .orbifold import StabilizerSpec, orbifold_local_density
from .quadrature import QuadConfig, QuadScheme, basis_norm_quadrature, reproduce_basis


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: float
    threshold: float

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "measured": self.measured,
            "threshold": self.threshold,
        }


def _le(name: str, measured: float, threshold: float) -> Check:
    return Check(name, bool(measured <= threshold), float(measured), float(threshold))


def suite_kernel(fast: bool = False) -> list[Check]:
    ps = (2, 5, 50) if fast else (2, 3, 5, 10, 50, 200, 1000)
    us = np.geomspace(1e-4, 50.0, 12 if fast else 40)
    worst = 0.0
    for p in ps:
        for u in us:
            try:
                a = density_series(float(u), p)
                b = density_closed_form(float(u), p)
            except TruncationFailure:
                worst = math.inf
                continue
            worst = max(worst, abs(math.expm1(a.log - b.log)))
    out = [_le("series vs partial fractions, max relative gap", worst, 1e-10)]

    worst = 0.0
    for p in (3, 7, 20):
        worst = max(worst, abs(density(1e-8, p).linear / ((p - 1) / (2 * math.pi)) - 1.0))
    out.append(_le("boundary limit (p-1)/2pi at u=1e-8, relative gap", worst, 1e-6))

    rng = np.random.default_rng(7)
    n = 5 if fast else 12
    excess = -math.inf
    herm = 0.0
    for p in (2, 3, 10):
        pts = [PuncturedPoint(float(u), float(t)) for u, t in
               zip(rng.uniform(0.05, 8.0, n), rng.uniform(0.0, 2 * math.pi, n))]
        dens = [density(pt, p).log for pt in pts]
        for i, x in enumerate(pts):
            for j, y in enumerate(pts):
                m = kernel_weighted_modulus(x, y, p).log_abs
                excess = max(excess, m - 0.5 * (dens[i] + dens[j]))
                if j > i:
                    (mx, px), (my, py) = kernel_offdiag(x, y, p), kernel_offdiag(y, x, p)
                    gap = abs(math.remainder(px + py, 2 * math.pi))
                    herm = max(herm, abs(mx.log_abs - my.log_abs), gap)
    out.append(_le("Cauchy-Schwarz, max log excess", excess, 1e-12))
    out.append(_le("Hermitian symmetry, max log/phase gap", herm, 1e-10))
    return out


def suite_gaussian(fast: bool = False) -> list[Check]:
    ps = np.unique(np.geomspace(1, 1e4, 200 if fast else 2000).round().astype(int))
    worst = max(abs(p * nu(int(p))) for p in ps)
    out = [
        _le("max |p nu(p)| on [1, 1e4]", worst, 0.1),
        _le("|nu(1) + 0.077863|", abs(nu(1) + 0.077863), 1e-5),
    ]
    ladder = (100, 400, 1600) if fast else (100, 400, 1600, 6400)
    reps = {p: sup_scan(p) for p in ladder}
    c0 = abs(reps[400].scaled_sup - 1.0) * math.sqrt(400)
    for p, r in reps.items():
        if p != 400:
            out.append(_le(f"sup law |s_p - 1| sqrt(p) at p={p}", abs(r.scaled_sup - 1) * math.sqrt(p), 2 * c0))
    res400 = abs(reps[400].residual)
    out.append(_le("sup residual / p across ladder vs 2x p=400", max(abs(r.residual) for r in reps.values()), 2 * res400))
    cps = (10, 100) if fast else (10, 100, 1000)
    scans = {p: cor37_scan(p).sup_weighted_error for p in cps}
    ref = scans[100]
    out.append(_le("Gaussian bump error constant vs 2x p=100", max(scans.values()), 2 * ref))
    out.append(Check("Gaussian bump error constant, min >= p=100 value / 2", min(scans.values()) >= ref / 2,
                     min(scans.values()), ref / 2))
    return out


def suite_appendix(fast: bool = False) -> list[Check]:
    ps = (1, 10, 100, 1000) if fast else (1, 10, 100, 1000, 10000)
    reps = {p: lemma_a_scan(p) for p in ps}
    ref = reps[1].sup_weighted_error
    out = [_le(f"bump remainder constant at p={p} vs 2x p=1", r.sup_weighted_error, 2 * ref)
           for p, r in reps.items()]
    from .gaussian import delta_p

    at_one = max(abs(delta_p(1.0, p)) for p in ps)
    out.append(_le("remainder at zeta=1", at_one, 0.0))
    return out


def suite_quadrature(fast: bool = False) -> list[Check]:
    out = []
    p_range = range(2, 31, 4) if fast else range(2, 31)
    for scheme in QuadScheme:
        q = QuadConfig(scheme=scheme)
        worst = 0.0
        for p in p_range:
            for ell in range(1, 11):
                exact = basis_norm_sq(p, ell)
                worst = max(worst, abs(math.log(basis_norm_quadrature(p, ell, q)) - exact.log_abs))
        out.append(_le(f"basis norms ({scheme.value}), max relative gap", worst, 1e-9))
    worst = 0.0
    for p in range(3, 41, 5):
        for ell in (1, 2, 3, 5):
            for u in (0.5, 1.0, 5.0, 20.0):
                worst = max(worst, reproduce_basis(u, p, ell))
    out.append(_le("reproducing property, max relative error", worst, 1e-8))
    return out


def suite_asymptotics(fast: bool = False) -> list[Check]:
    ps = (200, 400) if fast else (200, 400, 1000, 5000)
    vals = compact_coefficient_check(ps, 1.0)
    out = [_le("2 pi B_p(u=1) - p, max distance to -1", max(abs(v + 1) for v in vals), 1e-6)]
    fit = decay_fit(0.5, range(40, 141, 20))
    out.append(Check("annulus decay fit r2 >= 0.99", fit.r2 >= 0.99, fit.r2, 0.99))
    out.append(Check("annulus decay rate > 0", fit.fitted_rate > 0, fit.fitted_rate, 0.0))
    bumps = bump_profile(400, 3)
    loc = max(abs(-math.log(b.location) * ell - 1.0) for ell, b in enumerate(bumps, 1))
    hgt = max(abs(b.height - 1.0 / ell) for ell, b in enumerate(bumps, 1))
    out.append(_le("bump locations, relative gap in log x (p=400)", loc, 0.05))
    out.append(_le("bump heights, gap to 1/l (p=400)", hgt, 0.05))
    return out


def suite_orbifold(fast: bool = False) -> list[Check]:
    v = orbifold_local_density(0.0, 3, StabilizerSpec.cyclic(3)).value
    out = [_le("cyclic n=3, p=3 at z=0 vs 9/pi", abs(v - 9 / math.pi) / (9 / math.pi), 1e-12)]
    worst = 0.0
    for n in (2, 3, 5):
        spec = StabilizerSpec.cyclic(n)
        for z in np.linspace(0.0, 1.0, 10):
            for p in range(1, 11):
                worst = max(worst, orbifold_local_density(float(z), p, spec).imag_residual)
    out.append(_le("imaginary residual", worst, 1e-12))
    trivial = max(abs(orbifold_local_density(0.3, p, StabilizerSpec.cyclic(1)).value - p / math.pi)
                  for p in range(1, 20))
    out.append(_le("trivial stabilizer vs p/pi", trivial, 0.0))
    return out


SUITES: dict[str, Callable[[bool], list[Check]]] = {
    "kernel": suite_kernel,
    "gaussian": suite_gaussian,
    "appendix": suite_appendix,
    "quadrature": suite_quadrature,
    "asymptotics": suite_asymptotics,
    "orbifold": suite_orbifold,
}


def run_suite(name: str, fast: bool = False) -> list[Check]:
    if name == "all":
        return [c for fn in SUITES.values() for c in fn(fast)]
    return SUITES[name](fast)
