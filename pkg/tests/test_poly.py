from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from chainforge.errors import DegreeOrder, DuplicateAbscissa, IrrationalPole, NonRealRoots, RepeatedPole
from chainforge.poly import (
    Poly,
    count_real_roots,
    divrem,
    interlacing_pattern,
    inverse_mod,
    is_real_rooted,
    isolate_real_roots,
    lagrange_interpolate,
    min_abs_critical_value,
    partial_fractions,
    partial_fractions_numeric,
    poly_from_roots,
    poly_gcd,
    rational_roots,
    refine_root,
    squarefree_decomposition,
    strongly_interlaces,
)

from conftest import rationals

x = sp.Symbol("x")


def to_sympy(p: Poly):
    return sum((sp.Rational(c.numerator, c.denominator) * x**k for k, c in enumerate(p.coeffs)), sp.Integer(0))


def from_sympy(q) -> Poly:
    return Poly([Fraction(int(c.p), int(c.q)) for c in reversed(sp.Poly(q, x).all_coeffs())])


polys = st.lists(rationals(), min_size=1, max_size=7).map(Poly).filter(lambda p: p.degree >= 0)
nonzero = polys.filter(lambda p: p.degree >= 1)
int_roots = st.lists(st.integers(-6, 6), min_size=1, max_size=7)


def test_zero_poly_degree():
    assert Poly([0, 0]).degree == -1
    assert Poly([]).is_zero()


def test_format_and_roundtrip():
    p = Poly(["-5/2", 0, 1])
    assert Poly.from_json(p.to_json()) == p
    assert p(Fraction(1)) == Fraction(-3, 2)


@given(polys, polys)
def test_arithmetic_matches_sympy(p, q):
    assert sp.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0
    assert sp.expand(to_sympy(p + q) - to_sympy(p) - to_sympy(q)) == 0


@given(polys, nonzero)
def test_divrem_matches_sympy(a, b):
    q, r = divrem(a, b)
    sq, sr = sp.div(to_sympy(a), to_sympy(b), x)
    assert sp.expand(to_sympy(q) - sq) == 0
    assert sp.expand(to_sympy(r) - sr) == 0
    assert q * b + r == a


@given(int_roots, int_roots)
def test_gcd_matches_sympy(r1, r2):
    a, b = poly_from_roots(r1), poly_from_roots(r2)
    g = poly_gcd(a, b)
    assert g.is_monic()
    assert sp.expand(to_sympy(g) - sp.Poly(sp.gcd(to_sympy(a), to_sympy(b)), x).monic().as_expr()) == 0
    assert divrem(a, g)[1].is_zero() and divrem(b, g)[1].is_zero()


def test_inverse_mod():
    m = poly_from_roots([1, 2, 3])
    a = Poly([1, 1])
    inv = inverse_mod(a, m)
    assert divrem(inv * a - Poly([1]), m)[1].is_zero()


@given(st.lists(st.tuples(rationals(), rationals()), min_size=1, max_size=6, unique_by=lambda t: t[0]))
def test_lagrange_interpolates(points):
    p = lagrange_interpolate(points)
    assert p.degree < len(points)
    for xi, yi in points:
        assert p(xi) == yi
    ref = sp.interpolate([(sp.Rational(a.numerator, a.denominator), sp.Rational(b.numerator, b.denominator)) for a, b in points], x)
    assert sp.expand(to_sympy(p) - ref) == 0


def test_lagrange_duplicate_abscissa():
    with pytest.raises(DuplicateAbscissa):
        lagrange_interpolate([(1, 2), (1, 3)])


@given(int_roots)
def test_squarefree_decomposition(roots):
    p = poly_from_roots(roots)
    dec = squarefree_decomposition(p)
    prod = Poly([1])
    for f, k in dec:
        prod = prod * f**k
    assert prod == p
    mults = sorted(k for _, k in dec)
    assert mults == sorted(set(mults))


@given(int_roots)
def test_integer_roots_exact(roots):
    p = poly_from_roots(roots)
    rs = isolate_real_roots(p)
    assert rs.all_exact
    assert [r.exact for r in rs] == sorted(set(Fraction(r) for r in roots))
    assert [r.multiplicity for r in rs] == [roots.count(int(r.exact)) for r in rs]


@given(nonzero)
def test_real_root_count_matches_sympy(p):
    rs = isolate_real_roots(p)
    ref = sp.real_roots(sp.Poly(to_sympy(p), x))
    assert rs.total_multiplicity == len(ref)
    distinct = sorted(set(ref), key=lambda r: float(r))
    assert len(rs) == len(distinct)
    for root, r in zip(rs, distinct):
        assert root.lo <= sp.Rational(r.evalf(60)) + sp.Rational(1, 10**40)
        assert abs(root.witness - float(r)) <= 1e-12 * max(1.0, abs(float(r)))


def test_irrational_root_brackets():
    p = Poly([-2, 0, 1])
    rs = isolate_real_roots(p)
    assert len(rs) == 2 and not rs.all_exact
    for r in rs:
        assert r.lo < r.hi
        assert p(r.lo) * p(r.hi) < 0
        assert abs(abs(r.witness) - 2**0.5) < 1e-15
    lo, hi = refine_root(p, rs[1], Fraction(1, 2**120))
    assert hi - lo <= Fraction(2, 2**120)
    assert lo * lo < 2 < hi * hi


def test_count_real_roots_half_open():
    p = poly_from_roots([0, 1, 2])
    assert count_real_roots(p) == 3
    assert count_real_roots(p, 0, 2) == 2
    assert count_real_roots(p, -1, 0) == 1


def test_real_rooted_and_rational_roots():
    assert is_real_rooted(poly_from_roots([1, 1, -3]))
    assert not is_real_rooted(Poly([1, 0, 1]))
    assert rational_roots(Poly([-1, 0, 4]) * Poly([-2, 0, 1])) == [Fraction(-1, 2), Fraction(1, 2)]


@pytest.mark.parametrize(
    "low,high,expected",
    [
        ([0], [-1, 1], True),
        ([-1, 1], [-2, 0, 2], True),
        ([-1, 1], [-2, -1, 0, 2], True),  # shared root allowed
        ([-1, 1], [-2, -1, 2], False),  # shared root does not fill the gap
        ([-1, 1], [-2, 2, 3], False),  # no root between -1 and 1
        ([-2, 1], [-2, 0, 2], False),  # low root at the span edge
        ([3], [-1, 1], False),
    ],
)
def test_strong_interlacing_cases(low, high, expected):
    assert strongly_interlaces(poly_from_roots(low), poly_from_roots(high)) is expected


def test_strong_interlacing_errors():
    with pytest.raises(DegreeOrder):
        strongly_interlaces(poly_from_roots([1, 2]), poly_from_roots([1, 2]))
    with pytest.raises(NonRealRoots):
        strongly_interlaces(Poly([0, 1]), Poly([1, 0, 0, 1]))


@given(st.lists(st.integers(-8, 8), min_size=2, max_size=7, unique=True))
def test_interior_roots_interlace_iff_brute_force(roots):
    roots = sorted(roots)
    high = poly_from_roots(roots)
    # the derivative's roots always strictly interlace
    assert strongly_interlaces(high.derivative().monic(), high)
    low_roots = roots[1:-1]
    if low_roots:
        assert strongly_interlaces(poly_from_roots(low_roots), high) is _brute(low_roots, roots)


def _brute(low, high):
    if not (min(high) < min(low) and max(low) < max(high)):
        return False
    return all(any(a < h < b for h in high) for a, b in zip(low, low[1:]))


@given(st.lists(st.integers(-8, 8), min_size=1, max_size=4, unique=True), st.lists(st.integers(-8, 8), min_size=2, max_size=6, unique=True))
def test_interlacing_brute_force_general(low, high):
    if len(low) >= len(high):
        return
    got = strongly_interlaces(poly_from_roots(low), poly_from_roots(high))
    assert got is _brute(sorted(low), sorted(high))


def test_interlacing_pattern_labels():
    assert interlacing_pattern(poly_from_roots([0]), poly_from_roots([-1, 0, 1])) == ["high", "both", "high"]


def test_partial_fractions_exact():
    den = poly_from_roots([2, 1, -1, -2])
    num = Poly([0, 0, 0, 1]) - Poly([0, Fraction(5, 2)])
    pf = partial_fractions(num, den)
    assert [p for p, _ in pf] == [2, 1, -1, -2]
    assert sum(r for _, r in pf) == 1
    ref = sp.apart(to_sympy(num) / to_sympy(den), x)
    for pole, res in pf:
        assert ref.coeff(1 / (x - sp.Integer(int(pole)))) == sp.Rational(res.numerator, res.denominator)


def test_partial_fractions_errors():
    with pytest.raises(RepeatedPole):
        partial_fractions(Poly([1]), poly_from_roots([1, 1]))
    with pytest.raises(IrrationalPole):
        partial_fractions(Poly([1]), Poly([-2, 0, 1]))
    pf = partial_fractions_numeric(Poly([1]), Poly([-2, 0, 1]))
    assert pf[0][1] == pytest.approx(1 / (2 * 2**0.5))


def test_min_abs_critical_value():
    p = poly_from_roots([0, 1, 2])
    v = min_abs_critical_value(p)
    exact = abs(2 / (3 * 3**0.5))
    assert 0 < v <= exact + 1e-15
    assert float(v) == pytest.approx(exact, rel=1e-5)
    assert min_abs_critical_value(Poly([0, 1])) is None
