import math

import mpmath as mp
import numpy as np
import pytest

from punctured_bergman.exceptions import AccuracyCap, DomainError
from punctured_bergman.kernel import PuncturedPoint, SeriesConfig, basis_norm_sq
from punctured_bergman.quadrature import (
    QuadConfig,
    QuadScheme,
    basis_norm_quadrature,
    monomial_inner_product,
    reproduce_basis,
)

mp.mp.dps = 40
SCHEMES = [QuadConfig(scheme=s) for s in QuadScheme]


def mp_norm(p, ell):
    f = lambda u: u ** (p - 2) * mp.e ** (-ell * u)
    return 2 * mp.pi * mp.quad(f, [0, mp.mpf(p) / ell, mp.inf])


def test_p2_ell1_is_two_pi():
    for q in SCHEMES:
        assert basis_norm_quadrature(2, 1, q) == pytest.approx(2 * math.pi, rel=1e-13)


def test_p5_ell2():
    # 2 pi 3! / 2^4
    for q in SCHEMES:
        assert basis_norm_quadrature(5, 2, q) == pytest.approx(3 * math.pi / 4, rel=1e-12)


@pytest.mark.parametrize("p,ell", [(3, 1), (10, 3), (17, 9), (30, 7), (45, 2), (60, 50)])
@pytest.mark.parametrize("q", SCHEMES, ids=lambda q: q.scheme.value)
def test_norms_against_mpmath_quad(p, ell, q):
    assert basis_norm_quadrature(p, ell, q) == pytest.approx(float(mp_norm(p, ell)), rel=1e-10)


def test_ten_three_value():
    assert basis_norm_quadrature(10, 3) == pytest.approx(12.8709054, rel=1e-8)


def test_schemes_agree_on_capped_range():
    worst = 0.0
    for p in range(2, 61, 3):
        for ell in (1, 4, 13, 50):
            a, b = (basis_norm_quadrature(p, ell, q) for q in SCHEMES)
            worst = max(worst, abs(a / b - 1))
    assert worst <= 1e-9


def test_doubling_nodes_is_stable():
    for p, ell in ((20, 3), (40, 10)):
        a = basis_norm_quadrature(p, ell, QuadConfig(nodes=200))
        b = basis_norm_quadrature(p, ell, QuadConfig(nodes=400))
        assert abs(a / b - 1) <= 1e-12


def test_matches_log_domain_norm():
    for p in range(2, 31):
        for ell in range(1, 11):
            exact = basis_norm_sq(p, ell).to_linear()
            for q in SCHEMES:
                assert basis_norm_quadrature(p, ell, q) == pytest.approx(exact, rel=1e-9)


def test_caps():
    with pytest.raises(AccuracyCap):
        basis_norm_quadrature(61, 1)
    with pytest.raises(AccuracyCap):
        basis_norm_quadrature(10, 51)
    with pytest.raises(AccuracyCap):
        reproduce_basis(1.0, 41, 1)


def test_config_validation():
    with pytest.raises(DomainError):
        QuadConfig(nodes=8)
    with pytest.raises(DomainError):
        QuadConfig(panel_tol=1e-3)
    assert QuadConfig(scheme="adaptive").scheme is QuadScheme.ADAPTIVE_PANELS


def test_inner_products():
    assert monomial_inner_product(1, 2, 3) == 0.0
    assert monomial_inner_product(2, 2, 3) == pytest.approx(math.pi / 2, rel=1e-12)
    assert monomial_inner_product(5, 5, 20) == pytest.approx(basis_norm_sq(20, 5).to_linear(), rel=1e-9)


@pytest.mark.parametrize("u,p,ell", [(1.0, 4, 1), (10.0, 4, 3), (0.5, 38, 5), (20.0, 23, 2), (50.0, 40, 10)])
def test_reproducing_property(u, p, ell):
    assert reproduce_basis(u, p, ell) <= 1e-8


def test_reproducing_property_both_schemes_and_angle():
    pt = PuncturedPoint(5.0, 2.1)
    for q in SCHEMES:
        assert reproduce_basis(pt, 13, 3, q) <= 1e-8


def test_reproduce_domain():
    with pytest.raises(DomainError):
        reproduce_basis(0.05, 4, 1)
    with pytest.raises(DomainError):
        reproduce_basis(60.0, 4, 1)


def test_reproduce_with_tighter_series_tolerance():
    loose = reproduce_basis(1.0, 8, 2, cfg=SeriesConfig(rel_tol=1e-8))
    tight = reproduce_basis(1.0, 8, 2, cfg=SeriesConfig(rel_tol=1e-12))
    assert tight <= max(loose, 1e-14)
