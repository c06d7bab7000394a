from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from rootsep.balls import Ball
from rootsep.errors import PolynomialParseError, UndefinedQuantityError
from rootsep.polycore import (
    FactoredPolynomial,
    IntegerPolynomial,
    derivative,
    discriminant,
    divmod_exact,
    evaluate,
    format_poly,
    gcd,
    height,
    multiply,
    parse_poly,
    pretty_poly,
    resultant,
    squarefree_decomposition,
    squarefree_part,
)

X = sympy.Symbol("x")
P = IntegerPolynomial


def to_sympy(p):
    return sympy.Poly(list(reversed(p.coeffs)) or [0], X, domain="ZZ")


coeff_lists = st.lists(st.integers(-30, 30), min_size=1, max_size=7)
nonzero_polys = coeff_lists.map(P).filter(lambda p: not p.is_zero())


def test_zero_and_normalisation():
    assert P([0, 0]).coeffs == ()
    assert P([]).degree == -1
    assert P([1, 2, 0, 0]).coeffs == (1, 2)
    with pytest.raises(UndefinedQuantityError, match="undefined height of zero polynomial"):
        height(P([]))


@pytest.mark.parametrize(
    "poly, h",
    [(P([-1, 0, 1]), 1), (P([2, -8, 7, 0, 4, 1]), 8), (P([-2, 8, 1]), 8)],
)
def test_height_examples(poly, h):
    assert height(poly) == h


def test_multiply_examples():
    assert multiply(P([-1, 1]), P([1, 1])) == P([-1, 0, 1])
    assert multiply(P([-1, 2, 0, 1]), P([-2, 4, 1])) == P([2, -8, 7, 0, 4, 1])
    a = P([3, -1, 4])
    assert multiply(a, P([1])) == a


def test_derivative_examples():
    assert derivative(P([-1, 0, 1])) == P([0, 2])
    assert derivative(P([-1, 10, 0, 1])) == P([10, 0, 3])
    assert derivative(P([5])).is_zero()


def test_squarefree_examples():
    assert squarefree_part(P([1, -2, 1])) == P([-1, 1])
    assert squarefree_part(P([-1, 0, 1])) == P([-1, 0, 1])
    p = multiply(multiply(P([-2, 0, 1]), P([-2, 0, 1])), P([1, 1]))
    assert squarefree_part(p) == P([-2, -2, 1, 1])
    with pytest.raises(ValueError):
        squarefree_part(P([3]))


def test_discriminant_examples():
    assert discriminant(P([-1, 0, 1])) == 4
    assert discriminant(P([-1, 2, 0, 1])) == -59
    assert discriminant(P([1, -2, 1])) == 0
    with pytest.raises(ValueError):
        discriminant(P([1, 1]))


def test_evaluate_examples():
    assert evaluate(P([-1, 0, 1]), 1).is_exact and evaluate(P([-1, 0, 1]), 1).contains_zero()
    v = evaluate(P([-1, 10, 0, 1]), 0)
    assert v.is_exact and v.re == -1
    ball = Ball(Fraction(999, 10000), 0, Fraction(1, 1000))
    assert evaluate(P([-1, 10, 0, 1]), ball).contains_zero()


def test_text_formats():
    p = P([2, -8, 7, 0, 4, 1])
    assert format_poly(p) == "2,-8,7,0,4,1"
    assert pretty_poly(p) == "x^5+4x^4+7x^2-8x+2"
    assert parse_poly("2,-8,7,0,4,1") == p
    assert parse_poly("−1,0,1") == P([-1, 0, 1])
    assert parse_poly(" -1 , 0 , 1 ") == P([-1, 0, 1])
    for bad in ["", "1,,2", "1,x", "1.5"]:
        with pytest.raises(PolynomialParseError):
            parse_poly(bad)


def test_factored_polynomial():
    fp = FactoredPolynomial([P([-1, 2, 0, 1]), P([-2, 4, 1])])
    assert fp.product == P([2, -8, 7, 0, 4, 1])
    assert fp.degree == 5
    with pytest.raises(ValueError):
        FactoredPolynomial([P([1, 2])])
    with pytest.raises(ValueError):
        FactoredPolynomial([P([1])])
    with pytest.raises(ValueError):
        FactoredPolynomial([P([0, 1])], product=P([1, 1]))


@given(coeff_lists)
def test_format_roundtrip(cs):
    p = P(cs)
    if not p.is_zero():
        assert parse_poly(format_poly(p)) == p


@given(nonzero_polys, nonzero_polys)
def test_multiply_matches_sympy(a, b):
    assert to_sympy(multiply(a, b)) == to_sympy(a) * to_sympy(b)


@given(nonzero_polys, nonzero_polys)
def test_gcd_matches_sympy(a, b):
    g = gcd(a, b)
    ref = sympy.gcd(to_sympy(a), to_sympy(b))
    # both normalise to positive leading coefficient
    assert to_sympy(g) == ref or to_sympy(g) == -ref
    assert g.leading > 0


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=3), nonzero_polys.filter(lambda p: p.degree >= 1))
def test_resultant_root_product(roots, b):
    # Res(prod (x - r), B) = prod B(r) for monic A with integer roots
    a = P([1])
    expected = 1
    for r in roots:
        a = multiply(a, P([-r, 1]))
        expected *= b(r)
    assert resultant(a, b) == expected


@given(nonzero_polys.filter(lambda p: p.degree >= 1), nonzero_polys.filter(lambda p: p.degree >= 1))
def test_resultant_matches_sylvester_det(a, b):
    m, n = a.degree, b.degree
    rows = []
    ad, bd = list(reversed(a.coeffs)), list(reversed(b.coeffs))
    for i in range(n):
        rows.append([0] * i + ad + [0] * (m + n - i - len(ad)))
    for i in range(m):
        rows.append([0] * i + bd + [0] * (m + n - i - len(bd)))
    assert resultant(a, b) == sympy.Matrix(rows).det()
    assert abs(resultant(a, b)) == abs(sympy.resultant(to_sympy(a), to_sympy(b)))


@given(nonzero_polys.filter(lambda p: p.degree >= 2))
def test_discriminant_matches_sympy(p):
    assert discriminant(p) == sympy.discriminant(to_sympy(p))


@given(nonzero_polys.filter(lambda p: p.degree >= 1), st.integers(1, 3), nonzero_polys.filter(lambda p: p.degree >= 1))
def test_squarefree_properties(p, k, q):
    f = multiply(q, P(p.coeffs))
    for _ in range(k - 1):
        f = multiply(f, p)
    sf = squarefree_part(f)
    divmod_exact(f, sf)
    if sf.degree >= 2:
        assert discriminant(sf) != 0
    assert sf.degree == sympy.sqf_part(to_sympy(f)).degree()
    dec = squarefree_decomposition(f)
    assert sum(g.degree * m for g, m in dec) == f.degree


@given(nonzero_polys)
def test_derivative_height_bound(p):
    d = derivative(p)
    if not d.is_zero():
        assert height(d) <= p.degree * height(p)


monic = st.lists(st.integers(-50, 50), min_size=1, max_size=5).map(lambda cs: P(cs + [1]))


@given(monic, monic)
def test_gelfond_on_products(a, b):
    m = a.degree + b.degree
    hp = height(multiply(a, b))
    assert Fraction(height(a) * height(b), 2**m) <= hp <= 2**m * height(a) * height(b)


@given(
    nonzero_polys,
    st.fractions(min_value=-3, max_value=3, max_denominator=50),
    st.fractions(min_value=0, max_value=1, max_denominator=50),
    st.fractions(min_value=0, max_value=1, max_denominator=50),
)
def test_evaluate_encloses_and_is_monotone(p, c, r, shrink):
    outer = Ball(c, 0, r)
    inner = Ball(c + r * shrink / 2, 0, r * (1 - shrink) / 2)
    vo = evaluate(p, outer, prec=64)
    vi = evaluate(p, inner, prec=64)
    # exact values at the inner ball's endpoints lie in both enclosures
    for t in (inner.real_lo, inner.real_hi, inner.re):
        assert vo.contains(p(t)) and vi.contains(p(t))
    # the inner enclosure stays within the outer guarantee
    assert vo.overlaps(vi)


@given(nonzero_polys, st.fractions(min_value=-5, max_value=5, max_denominator=1000))
def test_evaluate_exact_point(p, t):
    assert evaluate(p, t, prec=None) == Ball.exact(p(t))
    assert evaluate(p, t, prec=80).contains(p(t))
