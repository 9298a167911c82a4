"""Leading-order Bergman density near an orbifold point.

At a fixed point with finite stabilizer acting on the fiber by phases
``e^(i theta_g)``, the density in a normal coordinate ``z`` is

    (p / pi) * Re[1 + sum_{g != 1} exp(i p theta_g - p (1 - e^(i theta_g)) |z|^2)].

Only this leading model is returned; the bounded remainder is not
modelled. Angles are paired with their inverses so the bracket is real.
"""

from __future__ import annotations

import cmath
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .exceptions import DomainError, InvalidStabilizer

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class StabilizerSpec:
    """Order of the stabilizer and the action angles of its non-identity elements.

    Angles may be given as exact turns (``Fraction`` in ``(0, 1)``) or as
    radians in ``(0, 2 pi)``. Turns make ``p * theta`` exact, so phases
    such as ``e^(2 pi i)`` come out as exactly 1.
    """

    order: int
    angles: tuple[float, ...] = ()
    turns: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        n = self.order
        if isinstance(n, bool) or int(n) != n or n < 1:
            raise InvalidStabilizer(f"order must be an integer >= 1, got {n!r}")
        if self.turns is not None:
            turns = tuple(Fraction(t) for t in self.turns)
            if any(not 0 < t < 1 for t in turns):
                raise InvalidStabilizer("turns must lie strictly between 0 and 1")
            if Counter(turns) != Counter(1 - t for t in turns):
                raise InvalidStabilizer("angles are not closed under inversion")
            object.__setattr__(self, "turns", turns)
            object.__setattr__(self, "angles", tuple(_TWO_PI * float(t) for t in turns))
        else:
            angles = tuple(float(a) for a in self.angles)
            if any(not 0.0 < a < _TWO_PI for a in angles):
                raise InvalidStabilizer("angles must lie strictly between 0 and 2 pi")
            if not _paired(angles):
                raise InvalidStabilizer("angles are not closed under inversion")
            object.__setattr__(self, "angles", angles)
        if len(self.angles) != n - 1:
            raise InvalidStabilizer(f"expected {n - 1} angles for order {n}, got {len(self.angles)}")

    @classmethod
    def cyclic(cls, n: int) -> "StabilizerSpec":
        """Cyclic group of order ``n`` acting by ``2 pi j / n``."""
        return cls(n, turns=tuple(Fraction(j, n) for j in range(1, n)))


def _paired(angles: Sequence[float], tol: float = 1e-12) -> bool:
    rest = sorted(angles)
    mirror = sorted(_TWO_PI - a for a in angles)
    return all(abs(a - b) <= tol * _TWO_PI for a, b in zip(rest, mirror))


class OrbifoldValue(NamedTuple):
    value: float
    imag_residual: float


def _unit(turn_times_p: Fraction | None, angle: float, p: int) -> complex:
    if turn_times_p is not None:
        frac = turn_times_p - math.floor(turn_times_p)
        if frac == 0:
            return complex(1.0, 0.0)
        if frac == Fraction(1, 2):
            return complex(-1.0, 0.0)
        return cmath.exp(1j * _TWO_PI * float(frac))
    return cmath.exp(1j * math.fmod(p * angle, _TWO_PI))


def orbifold_local_density(abs_z: float, p: int, spec: StabilizerSpec) -> OrbifoldValue:
    """Leading-order density at normal coordinate ``|z|`` and its imaginary residual."""
    if not (abs_z >= 0.0 and math.isfinite(abs_z)):
        raise DomainError(f"|z| must be finite and >= 0, got {abs_z!r}")
    if isinstance(p, bool) or int(p) != p or p < 1:
        raise DomainError(f"p must be an integer >= 1, got {p!r}")
    p = int(p)
    r2 = abs_z * abs_z
    re_terms = [1.0]
    im_terms = [0.0]
    turns = spec.turns if spec.turns is not None else (None,) * len(spec.angles)
    for t, theta in zip(turns, spec.angles):
        phase = _unit(None if t is None else t * p, theta, p)
        if r2 == 0.0:
            term = phase
        else:
            e = complex(math.cos(theta), math.sin(theta))
            term = phase * cmath.exp(-p * (1.0 - e) * r2)
        re_terms.append(term.real)
        im_terms.append(term.imag)
    bracket_re = math.fsum(re_terms)
    residual = abs(math.fsum(im_terms))
    return OrbifoldValue(p / math.pi * bracket_re, residual)


def orbifold_sup_prediction(n_gamma: int, q0: int, p: int) -> float:
    """``n_gamma q0 p / pi``."""
    for name, v in (("n_gamma", n_gamma), ("q0", q0), ("p", p)):
        if int(v) != v or v < 1:
            raise DomainError(f"{name} must be an integer >= 1, got {v!r}")
    return n_gamma * q0 * p / math.pi
