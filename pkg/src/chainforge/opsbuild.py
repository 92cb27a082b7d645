"""Build a chain whose orthogonal polynomials pass through two prescribed ones.

Given monic ``q_m`` and ``q_top`` (degree ``d+1``) that strongly interlace, we
pick the complementary polynomial ``q_hat`` (degree ``d-m``), residues ``tau``
and recover ``q_d`` from ``q_d/q_top = sum tau_s/(x - theta_s)``. The chain is
then read off by running the recurrence downward from ``(q_top, q_d)``.

Everything is exact. The interpolation step is done modulo ``q_top`` so the
spectrum may be irrational; residues are reported only when it is rational.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from .chain import Chain, chain_from_top_pair, ops_from_chain
from .errors import (
    CertificationFailure,
    DegreeDrop,
    InterlacingViolation,
    NonPositiveCoupling,
    NonRealRoots,
)
from .poly import (
    ONE,
    Poly,
    Root,
    as_fraction,
    format_fraction,
    interlacing_pattern,
    inverse_mod,
    isolate_real_roots,
    poly_from_roots,
    poly_gcd,
    refine_root,
    strongly_interlaces,
)


@dataclass(frozen=True)
class BuildOptions:
    """Free choices left by the construction.

    ``mu``: ``"midpoint"``, ``"random"`` (uses ``seed``) or an explicit list of
    rationals, one per empty interval in increasing order. ``rho``: ``None``
    for the uniform split, or positive rationals for the shared roots in
    decreasing order. ``lambda_``: override for the scale when roots are shared.
    """

    mu: str | Sequence = "midpoint"
    seed: int | None = None
    rho: Sequence | None = None
    lambda_: Fraction | None = None


@dataclass(frozen=True)
class BuildCertificate:
    q_m: Poly
    q_top: Poly
    q_hat: Poly
    mu: tuple[Fraction, ...]
    J: tuple[int, ...]
    Lambda: Fraction
    rho: tuple[Fraction, ...]
    tau: tuple[Fraction, ...] | None
    spectrum: tuple[Root, ...]
    q_d: Poly
    chain: Chain
    checks: dict = field(default_factory=dict)

    @property
    def m(self) -> int:
        return self.q_m.degree

    @property
    def d(self) -> int:
        return self.q_top.degree - 1

    def to_json(self) -> dict:
        fmt = format_fraction
        return {
            "m": self.m,
            "d": self.d,
            "q_m": self.q_m.to_json(),
            "q_top": self.q_top.to_json(),
            "q_hat": self.q_hat.to_json(),
            "mu": [fmt(v) for v in self.mu],
            "J": list(self.J),
            "Lambda": fmt(self.Lambda),
            "rho": [fmt(v) for v in self.rho],
            "tau": None if self.tau is None else [fmt(v) for v in self.tau],
            "spectrum": [str(r) for r in self.spectrum],
            "q_d": self.q_d.to_json(),
            "chain": self.chain.to_json(),
            "checks": dict(self.checks),
        }


def _spectrum_desc(q_top: Poly) -> list[Root]:
    roots = isolate_real_roots(q_top)
    if roots.total_multiplicity != q_top.degree:
        raise InterlacingViolation(f"{q_top} is not real-rooted")
    if not roots.all_simple:
        raise InterlacingViolation(f"{q_top} has a repeated root")
    return list(roots)[::-1]


def common_zeros(q_m: Poly, q_top: Poly) -> list[int]:
    """Indices ``s`` (eigenvalues in decreasing order) with ``q_m(theta_s) = 0``."""
    if q_m.degree <= 0:
        return []
    labels = [lab for lab in interlacing_pattern(q_m, q_top) if lab != "low"]
    d = q_top.degree - 1
    return sorted(d - i for i, lab in enumerate(labels) if lab == "both")


def _check_inputs(q_m: Poly, q_top: Poly) -> None:
    if not (q_m.is_monic() and q_top.is_monic()):
        raise ValueError("q_m and q_top must be monic")
    if q_m.degree >= q_top.degree:
        raise InterlacingViolation(f"deg q_m = {q_m.degree} must be below deg q_top = {q_top.degree}")
    _spectrum_desc(q_top)
    try:
        ok = strongly_interlaces(q_m, q_top)
    except NonRealRoots as exc:
        raise InterlacingViolation(str(exc)) from exc
    if not ok:
        raise InterlacingViolation(f"{q_m} and {q_top} do not strongly interlace")


def _gap_point(q_top: Poly, upper: Root, lower: Root) -> tuple[Fraction, Fraction]:
    """Rational ``(a, b)`` with ``lower < a < b < upper`` hugging the gap."""
    if upper.exact is not None and lower.exact is not None:
        return lower.exact, upper.exact
    width = Fraction(1, 2**20)
    while True:
        lo_lo, lo_hi = refine_root(q_top, lower, width)
        up_lo, up_hi = refine_root(q_top, upper, width)
        if lo_hi < up_lo:
            return lo_hi, up_lo
        width /= 2**8


def empty_intervals(q_m: Poly, q_top: Poly) -> list[int]:
    """Indices ``s`` whose closed interval ``[theta_{s+1}, theta_s]`` holds no root of ``q_m``.

    Eigenvalues are indexed in decreasing order; the result is sorted by
    position on the real line (increasing).
    """
    labels = interlacing_pattern(q_m, q_top)
    d = q_top.degree - 1
    top_pos = [k for k, lab in enumerate(labels) if lab != "low"]
    out = []
    for i in range(len(top_pos) - 1):
        k0, k1 = top_pos[i], top_pos[i + 1]
        if labels[k0] == "both" or labels[k1] == "both":
            continue
        if k1 - k0 == 1:
            # increasing index i+1 is eigenvalue s = d - i - 1 (upper end is theta_{s})
            out.append(d - i - 1)
    return out


def _choose_mu(q_top: Poly, spec: list[Root], gaps: list[int], opts: BuildOptions) -> list[Fraction]:
    """One rational point strictly inside each empty interval ``(theta_{s+1}, theta_s)``."""
    if isinstance(opts.mu, str):
        rng = random.Random(opts.seed)
        out = []
        for s in gaps:
            a, b = _gap_point(q_top, spec[s], spec[s + 1])
            if opts.mu == "midpoint":
                out.append((a + b) / 2)
            elif opts.mu == "random":
                k = rng.randint(1, 15)
                out.append(a + (b - a) * Fraction(k, 16))
            else:
                raise ValueError(f"unknown mu strategy {opts.mu!r}")
        return out
    mus = sorted(as_fraction(v) for v in opts.mu)
    if len(mus) != len(gaps):
        raise ValueError(f"need {len(gaps)} mu values, got {len(mus)}")
    for mu, s in zip(mus, gaps):
        if not _strictly_between(q_top, mu, spec[s + 1], spec[s]):
            raise ValueError(f"mu = {format_fraction(mu)} is not inside empty interval {s}")
    return mus


def _strictly_between(q_top: Poly, x: Fraction, lower: Root, upper: Root) -> bool:
    if q_top(x) == 0:
        return False
    width = Fraction(1, 2**20)
    while True:
        _, lo_hi = refine_root(q_top, lower, width)
        up_lo, _ = refine_root(q_top, upper, width)
        if lo_hi < x < up_lo:
            return True
        lo_low, _ = refine_root(q_top, lower, width)
        _, up_hi = refine_root(q_top, upper, width)
        if x <= lo_low or x >= up_hi:
            return False
        width /= 2**8


def _mp(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def _mp_eval(p: Poly, t):
    acc = mpmath.mpf(0)
    for c in reversed(p.coeffs):
        acc = acc * t + _mp(c)
    return acc


def _raw_interpolant(q_m: Poly, q_top: Poly, q_hat: Poly, g: Poly) -> Poly:
    """``R`` of degree <= d with ``R(theta_s) = (q_m/q_hat)(theta_s)`` at every root of ``q_top``."""
    r = q_m / g
    h = q_hat / g
    return (r * inverse_mod(h, q_top)) % q_top


def _max_abs_raw(R: Poly, q_top: Poly, spec: list[Root]) -> Fraction:
    """Rational upper bound on ``max_s |R(theta_s)/q_top'(theta_s)|``."""
    dq = q_top.derivative()
    best = Fraction(0)
    for r in spec:
        if r.exact is not None:
            v = abs(R(r.exact) / dq(r.exact))
        else:
            lo, hi = refine_root(q_top, r, Fraction(1, 2**120))
            with mpmath.workdps(50):
                t = _mp((lo + hi) / 2)
                approx = abs(_mp_eval(R, t) / _mp_eval(dq, t))
                # generous slack over the rounding error at this precision
                v = Fraction(mpmath.nstr(approx, 40)) * (1 + Fraction(1, 2**30))
        best = max(best, v)
    return best


def choose_weights(
    q_m: Poly, q_top: Poly, q_hat: Poly, J: Sequence[int], opts: BuildOptions = BuildOptions()
) -> tuple[Fraction, tuple[Fraction, ...], Poly]:
    """``(Lambda, rho, q_d)``.

    Without shared roots ``Lambda`` is the normalization making ``q_d`` monic.
    With shared roots it is the largest power of 1/2 keeping every scaled raw
    residue below ``1/(2(d+1))`` and the deficit is split evenly as ``rho``.
    """
    d = q_top.degree - 1
    g = poly_gcd(q_m, q_top)
    R = _raw_interpolant(q_m, q_top, q_hat, g)
    total_raw = R[d]  # sum of raw residues
    if not J:
        if opts.rho:
            raise ValueError("rho given but q_m and q_top share no roots")
        if total_raw <= 0:
            raise CertificationFailure(f"raw residues sum to {total_raw}, expected > 0")
        Lam = 1 / total_raw
        if opts.lambda_ is not None and as_fraction(opts.lambda_) != Lam:
            raise ValueError(f"Lambda is forced to {format_fraction(Lam)} when no roots are shared")
        return Lam, (), R * Lam
    spread = (q_top / g) * g.derivative()  # sum over J of prod_{r != s}(x - theta_r)
    nJ = len(J)
    if opts.rho is not None:
        rho = [as_fraction(v) for v in opts.rho]
        if len(rho) != nJ or any(v <= 0 for v in rho):
            raise ValueError(f"need {nJ} positive rho values")
        if len(set(rho)) != 1:
            raise ValueError("only a uniform rho is supported by the exact interpolation route")
        if total_raw == 0:
            raise ValueError("Lambda is undetermined for this rho")
        Lam = (1 - sum(rho)) / total_raw
        if Lam <= 0:
            raise ValueError(f"rho = {rho} forces Lambda = {format_fraction(Lam)} <= 0")
    else:
        if opts.lambda_ is not None:
            Lam = as_fraction(opts.lambda_)
        else:
            bound = Fraction(1, 2 * (d + 1))
            top = _max_abs_raw(R, q_top, _spectrum_desc(q_top))
            Lam = Fraction(1)
            while top * Lam >= bound:
                Lam /= 2
        rho = [(1 - Lam * total_raw) / nJ] * nJ
    q_d = R * Lam + spread * rho[0]
    return Lam, tuple(rho), q_d


def build_q_hat(q_m: Poly, q_top: Poly, opts: BuildOptions = BuildOptions()) -> tuple[Poly, list[Fraction]]:
    """Monic ``q_hat`` of degree ``d-m``: shared roots times one chosen point per empty interval."""
    _check_inputs(q_m, q_top)
    spec = _spectrum_desc(q_top)
    gaps = empty_intervals(q_m, q_top)
    mus = _choose_mu(q_top, spec, gaps, opts)
    g = poly_gcd(q_m, q_top)
    q_hat = g * poly_from_roots(mus)
    d, m = q_top.degree - 1, q_m.degree
    if q_hat.degree != d - m:
        raise InterlacingViolation(
            f"found {len(gaps)} empty intervals and {g.degree} shared roots; expected {d - m} in total"
        )
    return q_hat, mus


def build_ops(q_m: Poly, q_top: Poly, opts: BuildOptions = BuildOptions()) -> BuildCertificate:
    """Chain whose orthogonal polynomials satisfy ``p_m = q_m`` and ``p_{d+1} = q_top``."""
    _check_inputs(q_m, q_top)
    spec = _spectrum_desc(q_top)
    d, m = q_top.degree - 1, q_m.degree
    J = tuple(common_zeros(q_m, q_top))
    if m == d:
        q_hat, mus = ONE, []
        Lam, rho, q_d = Fraction(1), (), q_m
    else:
        q_hat, mus = build_q_hat(q_m, q_top, opts)
        Lam, rho, q_d = choose_weights(q_m, q_top, q_hat, J, opts)
    tau = None
    if all(r.exact is not None for r in spec):
        dq = q_top.derivative()
        tau = tuple(q_d(r.exact) / dq(r.exact) for r in spec)
    state = dict(q_m=str(q_m), q_top=str(q_top), q_hat=str(q_hat), Lambda=str(Lam), q_d=str(q_d))
    if tau is not None and (any(t <= 0 for t in tau) or sum(tau) != 1):
        raise CertificationFailure(f"residues {tau} are not a probability vector; state {state}")
    try:
        chain = chain_from_top_pair(q_top, q_d)
    except (NonPositiveCoupling, DegreeDrop) as exc:
        raise type(exc)(f"{exc}; state {state}") from exc
    ops = ops_from_chain(chain)
    checks = {"p_m == q_m": ops[m] == q_m, "p_top == q_top": ops.top == q_top, "p_d == q_d": ops[d] == q_d}
    if not all(checks.values()):
        raise CertificationFailure(f"re-expansion failed {checks}; state {state}")
    return BuildCertificate(
        q_m=q_m,
        q_top=q_top,
        q_hat=q_hat,
        mu=tuple(mus),
        J=J,
        Lambda=Lam,
        rho=tuple(rho),
        tau=tau,
        spectrum=tuple(spec),
        q_d=q_d,
        chain=chain,
        checks=checks,
    )
