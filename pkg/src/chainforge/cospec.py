"""Cospectral vertex pairs in weighted chains.

Vertices ``l`` and ``m`` are cospectral when every eigenvector has the same
absolute entry at both, equivalently when deleting either vertex leaves the
same characteristic polynomial. In a chain this can only happen with
``l < d/2 < m``; :func:`construct_cospectral` realizes every such position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .chain import (
    Chain,
    alpha,
    alpha_deleted,
    block_charpoly,
    block_polys,
    chain_from_top_pair,
    coupling_product,
    eigen,
    vertex_deleted_charpoly,
)
from .errors import (
    CertificationFailure,
    InfeasiblePosition,
    NotCospectralInput,
    PoleCollision,
)
from .poly import (
    Poly,
    format_fraction,
    isolate_real_roots,
    min_abs_critical_value,
    poly_from_roots,
    refine_root,
)

NUMERIC_TOL = 1e-8


@dataclass(frozen=True)
class CospectralCertificate:
    """Evidence that ``pair`` is cospectral.

    ``C_sq = prod_{l < j <= m} lambda_j^2``, so that ``|p_m| = C |p_l|`` on the
    spectrum. Exact mode carries the common vertex-deleted polynomial; numeric
    mode carries the table of absolute eigenvector entries.
    """

    mode: str
    pair: tuple[int, int]
    C_sq: Fraction
    deleted_charpoly: Poly | None = None
    table: tuple[tuple[float, float, float], ...] = ()
    max_deviation: float = 0.0

    def __bool__(self) -> bool:
        return True

    @property
    def C(self) -> float:
        return math.sqrt(self.C_sq)

    @property
    def C_exact(self) -> Fraction | None:
        n, d = self.C_sq.numerator, self.C_sq.denominator
        rn, rd = math.isqrt(n), math.isqrt(d)
        if rn * rn == n and rd * rd == d:
            return Fraction(rn, rd)
        return None

    def to_json(self) -> dict:
        out = {
            "cospectral": True,
            "mode": self.mode,
            "pair": list(self.pair),
            "C_sq": format_fraction(self.C_sq),
            "C": self.C,
        }
        if self.C_exact is not None:
            out["C_exact"] = format_fraction(self.C_exact)
        if self.deleted_charpoly is not None:
            out["deleted_charpoly"] = self.deleted_charpoly.to_json()
        if self.table:
            out["table"] = [list(row) for row in self.table]
            out["max_deviation"] = self.max_deviation
        return out


@dataclass(frozen=True)
class NotCospectral:
    pair: tuple[int, int]
    reason: str
    max_deviation: float | None = None

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        out = {"cospectral": False, "pair": list(self.pair), "reason": self.reason}
        if self.max_deviation is not None:
            out["max_deviation"] = self.max_deviation
        return out


def _ordered(c: Chain, l: int, m: int) -> tuple[int, int]:
    c.check_vertex(l)
    c.check_vertex(m)
    if l == m:
        raise ValueError("need two distinct vertices")
    return (l, m) if l < m else (m, l)


def _abs_table(c: Chain, l: int, m: int):
    spec = eigen(c)
    U = spec.vectors
    rows = tuple((float(th), float(abs(U[l, s])), float(abs(U[m, s]))) for s, th in enumerate(spec.values))
    dev = float(max(abs(a - b) for _, a, b in rows))
    return rows, dev


def is_cospectral(c: Chain, l: int, m: int, mode: str = "auto"):
    """Certificate or :class:`NotCospectral` (falsy).

    ``exact`` compares vertex-deleted characteristic polynomials. ``numeric``
    compares absolute eigenvector entries to within 1e-8. ``auto`` tries the
    exact route and falls back to the numeric one, which is how chains built
    from irrational spectra (then rounded) are recognized.
    """
    l, m = _ordered(c, l, m)
    C_sq = coupling_product(c, l + 1, m)
    if mode not in ("auto", "exact", "numeric"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode in ("auto", "exact"):
        fl = vertex_deleted_charpoly(c, [l])
        fm = vertex_deleted_charpoly(c, [m])
        if fl == fm:
            return CospectralCertificate("exact", (l, m), C_sq, deleted_charpoly=fl)
        if mode == "exact":
            return NotCospectral((l, m), "vertex-deleted characteristic polynomials differ")
    table, dev = _abs_table(c, l, m)
    if dev <= NUMERIC_TOL:
        return CospectralCertificate("numeric", (l, m), C_sq, table=table, max_deviation=dev)
    return NotCospectral((l, m), "absolute eigenvector entries differ", dev)


def cospectral_classes(c: Chain) -> list[list[int]]:
    """Vertices grouped by their exact vertex-deleted characteristic polynomial."""
    groups: dict[Poly, list[int]] = {}
    for v in range(c.size):
        groups.setdefault(vertex_deleted_charpoly(c, [v]), []).append(v)
    return [g for g in groups.values() if len(g) > 1]


def equivalent_criteria(c: Chain, l: int, m: int) -> dict[str, bool]:
    """Exact forms of cospectrality that must agree.

    ``deleted``: equal vertex-deleted polynomials; ``alpha``: equal alpha
    functions; ``cross``: alpha of ``l`` after deleting ``m`` equals alpha of
    ``m`` after deleting ``l``.
    """
    l, m = _ordered(c, l, m)
    return {
        "deleted": vertex_deleted_charpoly(c, [l]) == vertex_deleted_charpoly(c, [m]),
        "alpha": alpha(c, l) == alpha(c, m),
        "cross": alpha_deleted(c, l, [m]) == alpha_deleted(c, m, [l]),
    }


def position_feasible(l: int, m: int, d: int) -> bool:
    """Whether some d-chain has ``l`` and ``m`` cospectral: ``l < d/2 < m``."""
    if not 0 <= l < m <= d:
        raise ValueError(f"need 0 <= l < m <= d, got ({l}, {m}, {d})")
    return 2 * l < d < 2 * m


# ---------------------------------------------------------------------------
# base construction with l = 0


def _dyadic_floor(q: Fraction) -> Fraction:
    """Largest power of two not exceeding ``q > 0``."""
    k = q.numerator.bit_length() - q.denominator.bit_length()
    v = Fraction(2) ** k
    while v > q:
        v /= 2
    while v * 2 <= q:
        v *= 2
    return v


_DPS = 80
_ROUND_BITS = 96


def _mp(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def _roots_mp(p: Poly) -> list:
    out = []
    for r in isolate_real_roots(p):
        lo, hi = refine_root(p, r, Fraction(1, 2**300))
        out.append(_mp((lo + hi) / 2))
    return out


def _stieltjes(nodes: Sequence, weights: Sequence) -> tuple[list, list]:
    """Recurrence coefficients of the discrete measure ``sum w_s delta(nodes_s)``.

    Returns ``alpha_0..alpha_n`` and ``beta_1..beta_n`` (squared couplings).
    """
    n = len(nodes)
    prev = [mpmath.mpf(0)] * n
    cur = [mpmath.mpf(1)] * n
    norm_prev = None
    alphas, betas = [], []
    for k in range(n):
        norm = mpmath.fsum(w * p * p for w, p in zip(weights, cur))
        a = mpmath.fsum(w * x * p * p for w, x, p in zip(weights, nodes, cur)) / norm
        alphas.append(a)
        b = norm / norm_prev if norm_prev is not None else mpmath.mpf(0)
        if k > 0:
            betas.append(b)
        nxt = [(x - a) * p - b * q for x, p, q in zip(nodes, cur, prev)]
        prev, cur, norm_prev = cur, nxt, norm
    return alphas, betas


def _round(x) -> Fraction:
    return Fraction(int(mpmath.nint(x * 2**_ROUND_BITS)), 2**_ROUND_BITS)


def base_spectrum_plan(m: int, d: int, odd_choice: Sequence[int] | None = None):
    """``(p_m, eps, selected indices)`` for the base construction.

    ``p_m`` has roots ``0..m-1``; the roots of ``p_m -+ eps`` are labelled
    ``rho_0 > ... > rho_{2m-1}``; ``rho_0``, ``rho_{2m-1}`` and every even
    ``rho`` are always used, plus ``d - m`` of the odd ones.
    """
    if not 0 < m <= d or 2 * m <= d:
        raise InfeasiblePosition(f"(0, {m}) cannot be cospectral in a {d}-chain")
    p_m = poly_from_roots(range(m))
    bound = min_abs_critical_value(p_m)
    eps = Fraction(1) if bound is None else _dyadic_floor(bound / 2)
    odds = list(range(1, 2 * m - 2, 2))
    if odd_choice is None:
        picked = odds[: d - m]
    else:
        picked = sorted(set(int(i) for i in odd_choice))
        if len(picked) != d - m or not set(picked) <= set(odds):
            raise ValueError(f"choose {d - m} distinct indices from {odds}")
    chosen = sorted({0, 2 * m - 1} | set(range(2, 2 * m - 1, 2)) | set(picked))
    return p_m, eps, chosen


def construct_cospectral_base(m: int, d: int, odd_choice: Sequence[int] | None = None) -> Chain:
    """A d-chain in which vertices 0 and m are cospectral.

    The spectrum is a subset of the roots of ``p_m - eps`` and ``p_m + eps`` so
    that ``|p_m|`` is constant on it. These roots are irrational in general;
    the chain is computed in extended precision and rounded to 96-bit dyadic
    rationals, so cospectrality is certified numerically.
    """
    p_m, eps, chosen = base_spectrum_plan(m, d, odd_choice)
    with mpmath.workdps(_DPS):
        rho = sorted(_roots_mp(p_m - eps) + _roots_mp(p_m + eps), reverse=True)
        theta = [rho[i] for i in chosen]  # decreasing
        pm = [_mp(c) for c in p_m.coeffs]

        def p_at(x):
            acc = mpmath.mpf(0)
            for cf in reversed(pm):
                acc = acc * x + cf
            return acc

        # one point in each gap of theta that holds no root of p_m
        mus = []
        for s in range(d):
            hi, lo = theta[s], theta[s + 1]
            if not any(lo < j < hi for j in range(m)):
                mus.append((hi + lo) / 2)
        if len(mus) != d - m:
            raise CertificationFailure(f"expected {d - m} free gaps, found {len(mus)}")
        raw = []
        for s, th in enumerate(theta):
            val = p_at(th)
            for mu in mus:
                val /= th - mu
            for r, other in enumerate(theta):
                if r != s:
                    val /= th - other
            raw.append(val)
        if min(raw) <= 0:
            raise CertificationFailure("non-positive residue in the base construction")
        total = mpmath.fsum(raw)
        tau = [v / total for v in raw]
        # tau is the spectral measure of the last vertex; Stieltjes gives the
        # chain read from that end
        alphas, betas = _stieltjes(theta, tau)
        a = [_round(v) for v in reversed(alphas)]
        lam = [_round(v) for v in reversed(betas)]
    return Chain(a, lam)


# ---------------------------------------------------------------------------
# extension


def _head_poles(c: Chain, l: int) -> Poly:
    """Denominator ``p_l`` of the head function ``lambda_l^2 p_{l-1}/p_l``."""
    return block_charpoly(c, 0, l)


def _tail_poles(c: Chain, m: int) -> Poly:
    return block_charpoly(c, m + 1, c.size)


def default_pole(c: Chain, l: int, m: int) -> Fraction:
    """``floor(min pole) - 1`` over the head and tail functions at ``(l, m)``."""
    lows = []
    for p in (_head_poles(c, l), _tail_poles(c, m)):
        if p.degree > 0:
            roots = isolate_real_roots(p)
            r = roots[0]
            lows.append(r.exact if r.exact is not None else r.lo)
    if not lows:
        lows = list(c.a)
    return Fraction(math.floor(min(lows)) - 1)


def _insert_head(c: Chain, l: int, u: Fraction) -> Chain:
    """Add the pole ``u`` (residue 1) to the head function seen from vertex ``l``.

    The new chain has one more vertex; old vertex ``l`` becomes ``l+1``.
    """
    polys = block_polys(c, 0, l)  # p_0..p_l
    p_l = polys[l]
    p_lm1 = polys[l - 1] if l >= 1 else Poly()
    lam_l = c.lambda_sq[l - 1] if l >= 1 else Fraction(0)
    xu = Poly([-u, 1])
    new_lam = lam_l + 1
    q_top = p_l * xu
    q_next = (p_lm1 * xu * lam_l + p_l) / new_lam
    head = chain_from_top_pair(q_top, q_next)
    a = list(head.a) + list(c.a[l:])
    lam = list(head.lambda_sq) + [new_lam] + list(c.lambda_sq[l:])
    return Chain(a, lam)


def extend_once(c: Chain, l: int, m: int, u: Fraction | None = None) -> tuple[Chain, Fraction]:
    """One extension step: ``(l, m)`` in a d-chain to ``(l+1, m+1)`` in a (d+2)-chain."""
    head_p, tail_p = _head_poles(c, l), _tail_poles(c, m)
    auto = u is None
    u = default_pole(c, l, m) if auto else Fraction(u)
    while (head_p.degree > 0 and head_p(u) == 0) or (tail_p.degree > 0 and tail_p(u) == 0):
        if not auto:
            raise PoleCollision(f"u = {format_fraction(u)} is already a pole")
        u -= 1
    step = _insert_head(c, l, u)
    # old m now sits at m+1; in the reflection it is at (d+1) - (m+1) = d - m
    r = _insert_head(step.reflect(), c.d - m, u)
    return r.reflect(), u


def extend_cospectral(
    c: Chain, l: int, m: int, k: int, u: Fraction | None = None, *, check: bool = True
) -> Chain:
    """(d+2k)-chain in which ``l+k`` and ``m+k`` are cospectral."""
    l, m = _ordered(c, l, m)
    if k < 0:
        raise ValueError("k must be non-negative")
    if check and not is_cospectral(c, l, m):
        raise NotCospectralInput(f"vertices {l} and {m} are not cospectral")
    for i in range(k):
        c, used = extend_once(c, l + i, m + i, u)
        if u is not None:
            u = used
    return c


def construct_cospectral(l: int, m: int, d: int, odd_choice: Sequence[int] | None = None) -> Chain:
    """A d-chain in which ``l`` and ``m`` are cospectral, for any ``l < d/2 < m``."""
    if not position_feasible(l, m, d):
        raise InfeasiblePosition(f"no {d}-chain has {l} and {m} cospectral (need l < d/2 < m)")
    flip = l + m > d
    if flip:
        l, m = d - m, d - l
    base = construct_cospectral_base(m - l, d - 2 * l, odd_choice)
    out = extend_cospectral(base, 0, m - l, l, check=False)
    return out.reflect() if flip else out
