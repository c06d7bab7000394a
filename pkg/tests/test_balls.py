from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from rootsep.balls import Ball, mpf_to_fraction, round_to_bits, sqrt_bounds

fr = st.fractions(min_value=-100, max_value=100, max_denominator=10**6)
rad = st.fractions(min_value=0, max_value=10, max_denominator=10**6)
balls = st.builds(Ball, fr, fr, rad)


@given(st.fractions(min_value=0, max_value=10**6, max_denominator=10**6), st.integers(8, 200))
def test_sqrt_bounds(q, bits):
    lo, hi = sqrt_bounds(q, bits)
    assert lo * lo <= q <= hi * hi
    if q:
        assert hi - lo <= lo * Fraction(1, 2**bits) + Fraction(1, 2**bits) * hi


@given(fr.filter(bool), st.integers(2, 100))
def test_round_to_bits_directions(x, prec):
    assert round_to_bits(x, prec, "down") <= x <= round_to_bits(x, prec, "up")
    err = abs(round_to_bits(x, prec) - x)
    assert err <= abs(x) / 2 ** (prec - 1)
    with pytest.raises(ValueError):
        round_to_bits(x, prec, "sideways")


def test_mpf_to_fraction_sign_and_exactness():
    assert mpf_to_fraction(mpmath.mpf(-0.375)) == Fraction(-3, 8)
    assert mpf_to_fraction(mpmath.mpf(3) * 2**70) == 3 * 2**70
    with pytest.raises(ValueError):
        mpf_to_fraction(mpmath.inf)


@given(balls, balls, fr, fr, st.fractions(min_value=0, max_value=1), st.fractions(min_value=0, max_value=1))
def test_arithmetic_encloses_members(a, b, t1, t2, s1, s2):
    # points on the real diameter of each ball
    za = (a.re + a.rad * (2 * s1 - 1), a.im)
    zb = (b.re + b.rad * (2 * s2 - 1), b.im)
    sum_ = (za[0] + zb[0], za[1] + zb[1])
    prod = (za[0] * zb[0] - za[1] * zb[1], za[0] * zb[1] + za[1] * zb[0])
    assert (a + b).contains(sum_)
    assert (a - b).contains((za[0] - zb[0], za[1] - zb[1]))
    assert (a * b).contains(prod)
    assert (a * b).rounded(40).contains(prod)


def test_ball_queries():
    b = Ball(Fraction(1), Fraction(0), Fraction(1, 2))
    assert b.real_sign() == 1 and not b.contains_zero()
    assert Ball(0, 0, 1).real_sign() == 0
    assert Ball.from_interval(1, 3) == Ball(2, 0, 1)
    assert Ball(0, 0, 2).contains(Ball(1, 0, 1))
    assert not Ball(0, 0, 2).contains(Ball(1, 0, Fraction(3, 2)))
    assert Ball(0, 0, 1).overlaps(Ball(2, 0, 1))
    assert not Ball(0, 0, 1).overlaps(Ball(3, 0, 1))
    with pytest.raises(ValueError):
        Ball(0, 0, -1)
    with pytest.raises(ValueError):
        Ball.from_interval(2, 1)
