import itertools
import math
import random

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from chainforge.chain import eigen, ops_from_chain
from chainforge.cospec import is_cospectral
from chainforge.errors import InfeasibleSpectrum, ParityMismatch, SizeMismatch, WrongClass, WrongPosition
from chainforge.poly import Poly
from chainforge.pst import build_pst_chain, check_pst, is_periodic
from chainforge.pte import (
    E1,
    E2,
    F1,
    F2,
    Invalid,
    NonConstant,
    PTESolution,
    chain_to_pte,
    classify,
    halved_spectrum,
    kleiman,
    power_sums,
    pte_interlacing_check,
    pte_poly_gap,
    pte_to_chain,
    pte_to_pst_chain,
    search_pte,
    verify_pte,
)

x = sp.Symbol("x")


def brute_pte(n, lo, hi):
    """All ideal solutions of size n in [lo, hi], by pairwise power-sum comparison."""
    sets = list(itertools.combinations_with_replacement(range(lo, hi + 1), n))
    out = set()
    for A, B in itertools.combinations(sets, 2):
        if all(sum(a**k for a in A) == sum(b**k for b in B) for k in range(1, n)):
            out.add((A, B) if A < B else (B, A))
    return out


def canon(E, F):
    """Translate to min 0 and order the pair; written independently of the library."""
    t = min(E + F)
    E = tuple(sorted(v - t for v in E))
    F = tuple(sorted(v - t for v in F))
    return min((E, F), (F, E), key=lambda p: (p[0][0], p[0]))


def sympy_gap(E, F):
    d = sp.expand(sp.prod([x - e for e in E]) - sp.prod([x - f for f in F]))
    return sp.Poly(d, x)


def test_known_solutions_verify():
    for E, F in ((E1, F1), (E2, F2)):
        sol = verify_pte(E, F)
        assert sol and sol.cls == "pte0" and sol.n == 5
        assert pte_interlacing_check(E, F)
        ok, diff, fact = kleiman(E, F)
        assert ok and fact == 24 and diff % 24 == 0
    assert kleiman(E1, F1)[1] == 5040
    assert verify_pte([0, 3], [1, 2]).cls == "pte0"


def test_gap():
    assert pte_poly_gap([2, -2], [1, -1]) == -3
    assert pte_poly_gap(E1, F1) == 5040
    assert isinstance(pte_poly_gap([0, 1], [0, 2]), NonConstant)


def test_invalid_and_size():
    res = verify_pte([0, 1], [0, 2])
    assert isinstance(res, Invalid) and not res
    assert not verify_pte([1, 2], [1, 2])
    with pytest.raises(SizeMismatch):
        verify_pte([1, 2], [1])


def test_classify():
    assert classify((0, 3), (1, 2)) == "pte0"
    assert classify((0, 2), (1, 1)) == "pte1"
    assert classify((0, 3, 3), (1, 1, 4)) == "general"


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=5), st.lists(st.integers(-6, 6), min_size=1, max_size=5))
def test_verify_agrees_with_gap(E, F):
    if len(E) != len(F):
        return
    sol = verify_pte(E, F)
    gap = sympy_gap(E, F)
    ideal = gap.degree() <= 0 and sorted(E) != sorted(F)
    assert bool(sol) is ideal
    if sol:
        assert pte_poly_gap(E, F) == gap.as_expr()
        assert pte_interlacing_check(E, F)
        assert kleiman(E, F)[0]


def test_random_non_solutions_rejected():
    rng = random.Random(5)
    for _ in range(10_000):
        n = rng.randint(2, 5)
        E = [rng.randint(-20, 20) for _ in range(n)]
        F = [rng.randint(-20, 20) for _ in range(n)]
        sol = verify_pte(E, F)
        gap = pte_poly_gap(E, F)
        assert bool(sol) == (not isinstance(gap, NonConstant) and sorted(E) != sorted(F))


def test_interlacing_examples():
    assert pte_interlacing_check([2, -2], [1, -1])
    assert not pte_interlacing_check([0, 1], [2, 3])


def test_search_small():
    assert ((0, 3), (1, 2)) in {(s.E, s.F) for s in search_pte(2, 0, 3)}
    literal = {(s.E, s.F) for s in search_pte(3, 0, 7, dedupe_translations=False)}
    assert ((1, 5, 6), (2, 3, 7)) in literal


@pytest.mark.parametrize("n,lo,hi", [(2, 0, 3), (2, -2, 4), (3, 0, 7), (3, -1, 6), (4, 0, 9)])
def test_search_matches_brute_force(n, lo, hi):
    ref = brute_pte(n, lo, hi)
    literal = search_pte(n, lo, hi, dedupe_translations=False)
    assert {canon(s.E, s.F) for s in literal} == {canon(a, b) for a, b in ref}
    assert {tuple(sorted((s.E, s.F))) for s in literal} == ref
    canonical = search_pte(n, lo, hi)
    assert {(s.E, s.F) for s in canonical} == {canon(a, b) for a, b in ref}


def test_search_class_filter():
    assert all(s.cls == "pte0" for s in search_pte(3, 0, 7, "pte0"))
    assert {(s.E, s.F) for s in search_pte(3, 0, 7, "general")} == {((0, 3, 3), (1, 1, 4))}


def test_search_rediscovers_size_five():
    t = min(E1 + F1)
    hits = search_pte(5, 0, 18, "pte0")
    assert canon(E1, F1) in {(s.E, s.F) for s in hits}
    assert canon(tuple(v - t for v in E1), tuple(v - t for v in F1)) == canon(E1, F1)


def test_pte_to_chain_example():
    sol = verify_pte([2, -2], [1, -1])
    c = pte_to_chain(sol)
    assert c.d == 3
    assert ops_from_chain(c)[2] == Poly(["-5/2", 0, 1])
    assert is_cospectral(c, 0, 2, mode="exact") and is_periodic(c, 0)


def test_chain_to_pte_example(example_chain):
    sol = chain_to_pte(example_chain, 2)
    assert set(sol.E) == {2, -2} and set(sol.F) == {1, -1}
    assert sol.cls == "pte0"


def test_chain_to_pte_wrong_position():
    c = build_pst_chain([5, 4, 3, 1, 0, -2, -3, -4], 5)
    with pytest.raises(WrongPosition):
        chain_to_pte(c, 5)


def test_size_five_chain():
    sol = verify_pte(E1, F1)
    c = pte_to_chain(sol)
    assert c.d == 9 and c.size == 10
    assert is_cospectral(c, 0, 5, mode="exact")
    back = chain_to_pte(c, 5)
    assert canon(back.E, back.F) == canon(E1, F1)


def test_even_branch_with_repeat():
    sol = verify_pte([0, 2], [1, 1])
    assert sol.cls == "pte1"
    c = pte_to_chain(sol)
    assert c.d == 2
    back = chain_to_pte(c, 2)
    assert canon(back.E, back.F) == canon(sol.E, sol.F)


def test_even_branch_pruned():
    sol = verify_pte(E1, F1)
    c = pte_to_chain(sol, even=True)
    assert c.d == 8
    back = chain_to_pte(c, 5)
    assert canon(back.E, back.F) == canon(E1, F1)


def test_wrong_class():
    with pytest.raises(WrongClass):
        pte_to_chain(PTESolution((0, 3, 3), (1, 1, 4), "general"))
    with pytest.raises(WrongClass):
        pte_to_chain(verify_pte([0, 2], [1, 1]), even=False)


@pytest.mark.parametrize("n,lo,hi", [(2, 0, 3), (3, 0, 7)])
def test_round_trip_all_hits(n, lo, hi):
    for sol in search_pte(n, lo, hi):
        if sol.cls == "general":
            continue
        c = pte_to_chain(sol)
        back = chain_to_pte(c, (c.d + 2) // 2)
        assert canon(back.E, back.F) == canon(sol.E, sol.F)


def test_seven_chain_recipe():
    sol = verify_pte(E1, F1)
    c = pte_to_pst_chain(sol)
    spec = eigen(c).exact_values()
    assert spec == [5, 4, 3, 1, 0, -2, -3, -4]
    assert ops_from_chain(c)[5] == Poly(["-315/4", 144, 40, -25, "-5/2", 1])
    assert check_pst(c, 0, 5).fidelity >= 1 - 1e-9


def test_second_solution_has_no_transfer_chain():
    """The halved even elements of the second solution do not alternate in parity
    with the sign classes, so no degree-5 transfer polynomial exists."""
    sol = verify_pte(E2, F2)
    with pytest.raises(InfeasibleSpectrum):
        pte_to_pst_chain(sol)
    # independent check: on the integer zeros, the average of the halved
    # polynomials has sign set by E/F membership, which must match parity
    e = [sp.Rational(v, 2) for v in E2]
    f = [sp.Rational(v, 2) for v in F2]
    avg = (sp.prod([x - v for v in e]) + sp.prod([x - v for v in f])) / 2
    spectrum = halved_spectrum(sol)
    signs = [sp.sign(avg.subs(x, t)) for t in spectrum]
    parity = [(-1) ** (spectrum[0] - t) for t in spectrum]
    assert signs != parity and signs != [-p for p in parity]
    # the full parity interpolant on these eight points has degree 7
    g = sp.interpolate(list(zip(spectrum, parity)), x)
    assert sp.Poly(g, x).degree() == 7


def test_parity_mismatch():
    with pytest.raises(ParityMismatch):
        pte_to_pst_chain(verify_pte([1, 5, 6], [2, 3, 7]))
    with pytest.raises(InfeasibleSpectrum):
        pte_to_pst_chain(verify_pte([0, 3], [1, 2]))


def test_power_sums():
    assert power_sums((1, 2), 2) == (3, 5)
    assert kleiman(E1, F1)[2] == math.factorial(4)


def test_json_roundtrip():
    sol = verify_pte(E1, F1)
    assert PTESolution.from_json(sol.to_json()) == sol
    assert sol.to_json()["class"] == "pte0"


def test_canonical():
    sol = verify_pte([1, 5, 6], [2, 3, 7]).canonical()
    assert (sol.E, sol.F) == canon((1, 5, 6), (2, 3, 7))
    assert min(sol.E + sol.F) == 0
