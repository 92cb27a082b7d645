import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from chainforge.chain import Chain, ops_from_chain
from chainforge.errors import InterlacingViolation
from chainforge.opsbuild import BuildOptions, build_ops, build_q_hat, choose_weights, common_zeros, empty_intervals
from chainforge.poly import Poly, poly_from_roots, poly_gcd
from chainforge.sampling import random_interlacing_pair, random_non_interlacing_pair

Q2 = Poly(["-5/2", 0, 1])
Q4 = poly_from_roots([2, 1, -1, -2])
P5 = Poly(["-315/4", 144, 40, -25, "-5/2", 1])
P8 = poly_from_roots([5, 4, 3, 1, 0, -2, -3, -4])


def test_common_zeros():
    assert common_zeros(Q2, Q4) == []
    J = common_zeros(Poly([0, 1]), poly_from_roots([1, 0, -1]))
    assert J == [1]  # index of 0 in decreasing order


def test_rejects_non_interlacing():
    with pytest.raises(InterlacingViolation):
        build_ops(poly_from_roots([3]), poly_from_roots([1, 2]))
    with pytest.raises(InterlacingViolation):
        build_ops(Poly([1, 0, 1]), poly_from_roots([-2, 0, 2]))


def test_q_hat_example():
    q_hat, mus = build_q_hat(Q2, Q4)
    assert q_hat == Poly([0, 1])
    assert mus == [0]
    assert empty_intervals(Q2, Q4) == [1]


def test_q_hat_forced_by_shared_root():
    q_hat, mus = build_q_hat(Poly([0, 1]), poly_from_roots([1, 0, -1]))
    assert q_hat == Poly([0, 1]) and mus == []


def test_example_weights_against_sympy():
    theta = [2, 1, -1, -2]
    raw = []
    for s, th in enumerate(theta):
        prod = sp.prod([th - r for k, r in enumerate(theta) if k != s])
        raw.append(sp.Rational(th * th * 2 - 5, 2) / th / prod)
    assert all(r > 0 for r in raw)
    Lam = 1 / sum(raw)
    cert = build_ops(Q2, Q4)
    assert cert.Lambda == Fraction(int(Lam.p), int(Lam.q)) == Fraction(8, 5)
    assert cert.tau == (Fraction(1, 10), Fraction(2, 5), Fraction(2, 5), Fraction(1, 10))
    assert cert.chain == Chain([0, 0, 0, 0], [Fraction(5, 2), Fraction(9, 10), Fraction(8, 5)])


def test_shared_root_weights():
    cert = build_ops(Poly([0, 1]), poly_from_roots([1, 0, -1]))
    assert cert.J == (1,)
    assert cert.rho[0] > Fraction(1, 6)
    assert sum(cert.tau) == 1 and all(t > 0 for t in cert.tau)
    assert (cert.Lambda, cert.rho, cert.tau) == (Fraction(1, 8), (Fraction(1),), (Fraction(1, 16), Fraction(7, 8), Fraction(1, 16)))


def test_adjacent_degrees():
    cert = build_ops(Poly([0, 1]), Poly([-1, 0, 1]))
    assert cert.chain == Chain([0, 0], [1])


def test_seven_chain_from_transfer_polynomial():
    cert = build_ops(P5, P8)
    ops = ops_from_chain(cert.chain)
    assert ops[5] == P5 and ops[8] == P8
    assert cert.chain.d == 7


def test_irrational_spectrum_builds():
    # roots of x^3 - 3x + 1 are irrational; x interlaces
    q_top = Poly([1, -3, 0, 1])
    cert = build_ops(Poly([0, 1]), q_top)
    assert cert.tau is None
    ops = ops_from_chain(cert.chain)
    assert ops[1] == Poly([0, 1]) and ops.top == q_top


def test_float_input_rejected():
    with pytest.raises(TypeError):
        Poly([2.5, 0, 1])


@given(st.integers(0, 10**6), st.integers(1, 10))
def test_interlacing_pairs_always_build(seed, d):
    rng = random.Random(seed)
    q_m, q_top = random_interlacing_pair(rng, d)
    cert = build_ops(q_m, q_top)
    ops = ops_from_chain(cert.chain)
    assert ops[q_m.degree] == q_m and ops.top == q_top
    assert all(v > 0 for v in cert.chain.lambda_sq)
    assert poly_gcd(q_m, q_top) == poly_gcd(cert.q_hat, q_top)


@given(st.integers(0, 10**6), st.integers(1, 10))
def test_non_interlacing_pairs_rejected(seed, d):
    q_m, q_top = random_non_interlacing_pair(random.Random(seed), d)
    with pytest.raises(InterlacingViolation):
        build_ops(q_m, q_top)


def test_degrees_of_freedom():
    q_m = poly_from_roots([0])
    q_top = poly_from_roots([-3, -1, 1, 3])
    chains = set()
    for mu in ([-2, 2], [Fraction(-3, 2), 2], [-2, Fraction(5, 2)]):
        cert = build_ops(q_m, q_top, BuildOptions(mu=mu))
        ops = ops_from_chain(cert.chain)
        assert ops[1] == q_m and ops.top == q_top
        chains.add(cert.chain)
    assert len(chains) == 3
    cert = build_ops(q_m, q_top, BuildOptions(mu="random", seed=7))
    assert cert == build_ops(q_m, q_top, BuildOptions(mu="random", seed=7))


def test_bad_mu_rejected():
    with pytest.raises((ValueError, InterlacingViolation)):
        build_ops(poly_from_roots([0]), poly_from_roots([-3, -1, 1, 3]), BuildOptions(mu=[0, 2]))


def test_supplied_rho():
    q_m, q_top = Poly([0, 1]), poly_from_roots([-2, 0, 1, 3])
    q_hat, _ = build_q_hat(q_m, q_top)
    Lam, rho, q_d = choose_weights(q_m, q_top, q_hat, [2], BuildOptions(rho=[Fraction(1, 2)]))
    assert (Lam, rho) == (4, (Fraction(1, 2),))
    cert = build_ops(q_m, q_top, BuildOptions(rho=[Fraction(1, 2)]))
    assert cert.q_d == q_d and all(t > 0 for t in cert.tau)
    assert ops_from_chain(cert.chain)[1] == q_m


def test_supplied_rho_infeasible():
    # raw residues sum to zero here, so rho = 1 is forced
    q_m, q_top = Poly([0, 1]), poly_from_roots([1, 0, -1])
    with pytest.raises(ValueError):
        build_ops(q_m, q_top, BuildOptions(rho=[Fraction(1, 2)]))
