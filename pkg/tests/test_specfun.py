import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from keyhole_sop import bessel_k1, z_times_k1

mpmath.mp.dps = 40

# Reference values computed with mpmath.besselk at 40 digits.
K1_AT_1 = 0.6019072301972346
K1_AT_10 = 1.8648773453825585e-05


def test_reference_values():
    assert bessel_k1(1.0) == pytest.approx(K1_AT_1, rel=1e-10)
    assert bessel_k1(10.0) == pytest.approx(K1_AT_10, rel=1e-10)
    assert z_times_k1(1.0) == pytest.approx(K1_AT_1, rel=1e-10)


def test_small_argument_divergence():
    # K1(z) ~ 1/z near zero, i.e. z*K1(z) -> 1
    for z in (1e-8, 1e-6, 1e-4):
        assert z * bessel_k1(z) == pytest.approx(1.0, abs=1e-6)
    assert z_times_k1(1e-6) == pytest.approx(1.0, abs=1e-10)


def test_limit_at_zero_is_exact():
    assert z_times_k1(0.0) == 1.0


def test_underflow_to_zero():
    assert bessel_k1(800.0) == 0.0
    assert bessel_k1(700.0) > 0.0
    assert z_times_k1(700.0) > 0.0


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf, -math.inf])
def test_bessel_k1_domain(bad):
    with pytest.raises(ValueError):
        bessel_k1(bad)


@pytest.mark.parametrize("bad", [-1e-12, -3.0, math.nan, math.inf])
def test_z_times_k1_domain(bad):
    with pytest.raises(ValueError):
        z_times_k1(bad)


def test_agreement_with_high_precision_oracle():
    # Coarse version of the acceptance sweep; the full 1000-point grid is
    # exercised in test_acceptance.py.
    for z in np.logspace(-8, math.log10(700.0), 61):
        ref = float(mpmath.besselk(1, mpmath.mpf(float(z))))
        assert bessel_k1(float(z)) == pytest.approx(ref, rel=1e-10)


def test_consistency_between_the_two_entry_points():
    for z in np.logspace(-6, 2, 400):
        z = float(z)
        a = z_times_k1(z)
        b = z * bessel_k1(z)
        assert abs(a - b) <= 1e-12 * a


def test_range():
    for z in np.logspace(-8, math.log10(700.0), 200):
        v = z_times_k1(float(z))
        assert 0.0 < v <= 1.0


@settings(max_examples=200, deadline=None)
@given(
    a=st.floats(min_value=0.0, max_value=300.0),
    gap=st.floats(min_value=0.01, max_value=100.0),
)
def test_strictly_decreasing_for_separated_arguments(a, gap):
    # Strict decrease holds mathematically everywhere; a finite gap keeps
    # the difference representable in float64.
    assert z_times_k1(a) > z_times_k1(a + gap)
