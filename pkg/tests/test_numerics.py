import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from punctured_bergman.exceptions import DomainError
from punctured_bergman.numerics import (
    LogMagnitude,
    golden_max,
    log_factorial,
    log_gamma,
    logsum_accumulate,
    signed_log_pow,
    stirling_remainder,
)

mp.mp.dps = 40


def test_log_gamma_at_one_and_two_is_exactly_zero():
    assert log_gamma(1.0) == 0.0
    assert log_gamma(2.0) == 0.0


def test_log_gamma_eleven_is_log_of_ten_factorial():
    assert log_gamma(11.0) == pytest.approx(math.log(math.prod(range(1, 11))), abs=1e-13)
    assert log_gamma(11.0) == pytest.approx(15.104412573075516, abs=1e-13)


@pytest.mark.parametrize("x", [1e-3, 0.1, 0.5, 1.5, 2.5, 3.7, 7.999, 8.0, 8.001, 12.5, 20.0])
def test_log_gamma_small_x_absolute_accuracy(x):
    assert abs(log_gamma(x) - float(mp.loggamma(x))) <= 1e-13


@pytest.mark.parametrize("x", [25.0, 100.5, 1e3, 12345.678, 1e5, 1e6])
def test_log_gamma_large_x_relative_accuracy(x):
    # at 1e6 the value is ~1.3e7; a double cannot hold it to 1e-13 absolute
    ref = float(mp.loggamma(x))
    assert abs(log_gamma(x) - ref) <= 4e-16 * abs(ref) + 1e-13


def test_factorials_up_to_twenty():
    for n in range(1, 21):
        assert math.exp(log_factorial(n)) == pytest.approx(math.factorial(n), rel=1e-12)


def test_gamma_recurrence_on_grid():
    for x in np.arange(1.0, 100.0 + 1e-9, 0.5):
        assert abs(log_gamma(x + 1) - log_gamma(x) - math.log(x)) <= 1e-12


def test_log_gamma_rejects_nonpositive():
    for bad in (0.0, -1.0, math.nan, math.inf):
        with pytest.raises(DomainError):
            log_gamma(bad)


@pytest.mark.parametrize("x", [1.0, 3.5, 8.0, 50.0, 1e4])
def test_stirling_remainder_matches_high_precision(x):
    ref = mp.loggamma(x) - ((x - mp.mpf(0.5)) * mp.log(x) - x + mp.log(2 * mp.pi) / 2)
    assert stirling_remainder(x) == pytest.approx(float(ref), rel=1e-11, abs=1e-15)


def test_logsum_two_ones():
    r = logsum_accumulate([LogMagnitude.one(), LogMagnitude.one()])
    assert r.sign == 1
    assert r.log_abs == pytest.approx(math.log(2.0), abs=1e-15)


def test_logsum_exact_cancellation():
    r = logsum_accumulate([LogMagnitude(1, math.log(3)), LogMagnitude(-1, math.log(3))])
    assert r.sign == 0
    assert r.to_linear() == 0.0


def test_logsum_tiny_values_do_not_underflow():
    a = LogMagnitude.from_log(math.log(1e-300))
    r = logsum_accumulate([a, a])
    assert r.log_abs == pytest.approx(math.log(2e-300), abs=1e-13)


def test_logsum_far_below_double_range():
    a = LogMagnitude(1, -5000.0)
    r = logsum_accumulate([a] * 4)
    assert r.log_abs == pytest.approx(-5000.0 + math.log(4.0), abs=1e-12)


def test_empty_stream_is_zero():
    assert logsum_accumulate([]).sign == 0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-700, 700), min_size=1, max_size=60), st.randoms())
def test_logsum_permutation_invariance(logs, rnd):
    terms = [LogMagnitude(1, v) for v in logs]
    a = logsum_accumulate(terms)
    shuffled = terms[:]
    rnd.shuffle(shuffled)
    b = logsum_accumulate(shuffled)
    assert abs(a.log_abs - b.log_abs) <= 1e-12
    assert a.log_abs >= max(logs) - 1e-15


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-50, 50), min_size=1, max_size=40))
def test_logsum_matches_fsum(logs):
    terms = [LogMagnitude(1 if i % 3 else -1, v) for i, v in enumerate(logs)]
    exact = mp.fsum([t.sign * mp.e ** mp.mpf(t.log_abs) for t in terms])
    got = logsum_accumulate(terms)
    # each stored log carries ~eps*|log| absolute error, i.e. that much relative in the term
    bound = sum(math.exp(v) * (abs(v) + 2.0) for v in logs) * len(logs) * 2.3e-16
    assert abs(got.to_linear() - float(exact)) <= bound


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-30, 1e30), st.sampled_from([1.0, -1.0]))
def test_round_trip(mag, sign):
    v = sign * mag
    assert LogMagnitude.from_linear(v).to_linear() == pytest.approx(v, rel=1e-14)


@settings(max_examples=100, deadline=None)
@given(st.floats(-1e300, 1e300).filter(lambda v: v != 0.0))
def test_round_trip_whole_range(v):
    # the stored log has an absolute rounding error of about eps * |log|v||
    rel = 2.3e-16 * (abs(math.log(abs(v))) + 2.0)
    assert LogMagnitude.from_linear(v).to_linear() == pytest.approx(v, rel=rel)


def test_zero_absorbs_in_products():
    z = LogMagnitude.zero()
    assert (z * LogMagnitude(1, 3.0)).sign == 0
    assert (LogMagnitude(-1, 3.0) * z).sign == 0
    assert (z / LogMagnitude(1, 2.0)).sign == 0
    with pytest.raises(ZeroDivisionError):
        LogMagnitude.one() / z


def test_invalid_log_magnitude():
    with pytest.raises(DomainError):
        LogMagnitude(2, 0.0)
    with pytest.raises(DomainError):
        LogMagnitude(1, math.inf)


def test_signed_log_pow_examples():
    r = signed_log_pow(LogMagnitude(1, math.log(2)), 3)
    assert (r.sign, r.log_abs) == (1, pytest.approx(3 * math.log(2)))
    r = signed_log_pow(LogMagnitude(-1, math.log(2)), 2)
    assert (r.sign, r.log_abs) == (1, pytest.approx(2 * math.log(2)))
    assert signed_log_pow(LogMagnitude(-1, math.log(2)), 3).sign == -1
    assert signed_log_pow(LogMagnitude.zero(), 5).sign == 0
    with pytest.raises(DomainError):
        signed_log_pow(LogMagnitude(-1, 0.5), 0.5)


def test_golden_max_on_parabola():
    x, fx = golden_max(lambda t: -(t - 0.3) ** 2 + 2.0, -1.0, 4.0)
    assert x == pytest.approx(0.3, abs=1e-6)
    assert fx == pytest.approx(2.0, abs=1e-12)
