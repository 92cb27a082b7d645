"""Prouhet-Tarry-Escott solutions and their correspondence with chains.

An ideal PTE solution of size ``n`` is a pair of integer multisets ``E != F``
with equal power sums for ``k = 1..n-1``; equivalently ``p_E - p_F`` is a
nonzero constant, where ``p_E = prod (x - e)``. Such pairs are the sign
classes of the spectrum of a chain in which vertex 0 and the half-way vertex
are cospectral and periodic.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .chain import Chain, eigen, ops_from_chain
from .cospec import is_cospectral
from .errors import (
    CertificationFailure,
    InfeasibleSpectrum,
    IrrationalSpectrum,
    NotPeriodicCospectral,
    ParityMismatch,
    SizeMismatch,
    WrongClass,
    WrongPosition,
)
from .opsbuild import build_ops
from .poly import Poly, as_fraction, format_fraction, poly_from_roots
from .pst import build_pst_chain, is_periodic, normalize_spectrum


def _ints(xs: Iterable) -> tuple[int, ...]:
    out = []
    for v in xs:
        q = as_fraction(v)
        if q.denominator != 1:
            raise ValueError(f"PTE elements must be integers, got {format_fraction(q)}")
        out.append(int(q))
    return tuple(sorted(out))


def classify(E: Sequence[int], F: Sequence[int]) -> str:
    """``pte0`` (no repeats in ``E + F``), ``pte1`` (one element exactly twice) or ``general``."""
    counts = Counter(list(E) + list(F))
    reps = [v for v, k in counts.items() if k > 1]
    if not reps:
        return "pte0"
    if len(reps) == 1 and counts[reps[0]] == 2:
        return "pte1"
    return "general"


@dataclass(frozen=True)
class PTESolution:
    E: tuple[int, ...]
    F: tuple[int, ...]
    cls: str

    def __bool__(self) -> bool:
        return True

    @property
    def n(self) -> int:
        return len(self.E)

    def canonical(self) -> PTESolution:
        """Translate so the smallest element is 0 and orient so ``e_1 < f_1``."""
        t = min(self.E + self.F)
        E = tuple(v - t for v in self.E)
        F = tuple(v - t for v in self.F)
        if (F[0], F) < (E[0], E):
            E, F = F, E
        return PTESolution(E, F, self.cls)

    def to_json(self) -> dict:
        return {"n": self.n, "E": list(self.E), "F": list(self.F), "class": self.cls}

    @classmethod
    def from_json(cls, obj: dict) -> PTESolution:
        sol = verify_pte(obj["E"], obj["F"])
        if not sol:
            raise ValueError(f"not a PTE solution: {sol.reason}")
        return sol


@dataclass(frozen=True)
class Invalid:
    reason: str

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"valid": False, "reason": self.reason}


@dataclass(frozen=True)
class NonConstant:
    difference: Poly

    def __bool__(self) -> bool:
        return False


def power_sums(xs: Sequence[int], kmax: int) -> tuple[int, ...]:
    return tuple(sum(v**k for v in xs) for k in range(1, kmax + 1))


def pte_poly_gap(E: Sequence, F: Sequence):
    """The constant ``p_E - p_F``, or :class:`NonConstant`."""
    E, F = _ints(E), _ints(F)
    if len(E) != len(F):
        raise SizeMismatch(f"|E| = {len(E)} but |F| = {len(F)}")
    diff = poly_from_roots(E) - poly_from_roots(F)
    if diff.degree > 0:
        return NonConstant(diff)
    return int(diff[0])


def verify_pte(E: Sequence, F: Sequence):
    """:class:`PTESolution` or :class:`Invalid`.

    Power sums and the polynomial gap are checked independently and must agree.
    """
    E, F = _ints(E), _ints(F)
    n = len(E)
    if n != len(F):
        raise SizeMismatch(f"|E| = {n} but |F| = {len(F)}")
    if n == 0:
        raise SizeMismatch("empty multisets")
    sums_ok = power_sums(E, n - 1) == power_sums(F, n - 1)
    gap = pte_poly_gap(E, F)
    gap_ok = not isinstance(gap, NonConstant) and gap != 0
    if E == F:
        return Invalid("E and F are the same multiset")
    if sums_ok != gap_ok:
        raise CertificationFailure(f"power sums say {sums_ok} but p_E - p_F says {gap_ok} for {E}, {F}")
    if not sums_ok:
        for k in range(1, n):
            a, b = sum(v**k for v in E), sum(v**k for v in F)
            if a != b:
                return Invalid(f"power sums differ at k = {k}: {a} != {b}")
    return PTESolution(E, F, classify(E, F))


def kleiman(E: Sequence, F: Sequence) -> tuple[bool, int, int]:
    """``((n-1)! | p_E(0) - p_F(0), difference, (n-1)!)``."""
    E, F = _ints(E), _ints(F)
    n = len(E)
    diff = poly_from_roots(E)(0) - poly_from_roots(F)(0)
    fact = math.factorial(n - 1)
    return int(diff) % fact == 0, int(diff), fact


def interlacing_groups(n: int) -> list[list[tuple[str, int]]]:
    """The ordered groups ``e1 < (f1 f2) < (e2 e3) < ... < last`` for size ``n``."""
    groups: list[list[tuple[str, int]]] = [[("E", 0)]]
    side, i, j = "F", 0, 1
    # i indexes F, j indexes E
    while True:
        if side == "F":
            grp = [("F", k) for k in (i, i + 1) if k < n]
            i += 2
        else:
            grp = [("E", k) for k in (j, j + 1) if k < n]
            j += 2
        if not grp:
            break
        groups.append(grp)
        side = "E" if side == "F" else "F"
    return groups


def pte_interlacing_check(E: Sequence, F: Sequence) -> bool:
    """Sorted elements follow ``e_1 < f_1 <= f_2 < e_2 <= e_3 < ...`` (after orienting ``e_1 < f_1``)."""
    E, F = _ints(E), _ints(F)
    if len(E) != len(F):
        raise SizeMismatch(f"|E| = {len(E)} but |F| = {len(F)}")
    if F[0] < E[0]:
        E, F = F, E
    if E[0] == F[0]:
        return False
    sets = {"E": E, "F": F}
    groups = interlacing_groups(len(E))
    vals = [[sets[s][k] for s, k in g] for g in groups]
    if sum(len(v) for v in vals) != 2 * len(E):
        return False
    return all(max(a) < min(b) for a, b in zip(vals, vals[1:]))


# ---------------------------------------------------------------------------
# chains <-> solutions


def _half(d: int) -> int:
    return (d + 2) // 2  # ceil((d+1)/2)


def chain_to_pte(c: Chain, m: int) -> PTESolution:
    """Split the spectrum by the sign of ``p_m``; needs ``m = ceil((d+1)/2)``."""
    d = c.d
    if m != _half(d):
        raise WrongPosition(f"m = {m}, but the correspondence needs m = {_half(d)} for d = {d}")
    if not is_cospectral(c, 0, m, mode="exact"):
        raise NotPeriodicCospectral(f"vertices 0 and {m} are not cospectral")
    try:
        is_periodic(c, 0)
    except IrrationalSpectrum as exc:
        raise NotPeriodicCospectral(str(exc)) from exc
    spec = eigen(c)
    vals = spec.exact_values()
    norm = normalize_spectrum(vals)
    if all(v.denominator == 1 for v in vals):
        to_int = {v: int(v) for v in vals}
        conv = lambda x: x  # noqa: E731
    else:
        to_int = {v: n for v, n in zip(norm.values, norm.ints)}
        conv = lambda x: (x - norm.shift) / norm.scale  # noqa: E731
    p_m = ops_from_chain(c)[m]
    plus = [v for v in vals if p_m(v) > 0]
    minus = [v for v in vals if p_m(v) < 0]
    if d % 2 == 1:
        E, F = [to_int[v] for v in plus], [to_int[v] for v in minus]
    else:
        C = abs(p_m(vals[0]))
        small, big = (plus, minus) if len(plus) < len(minus) else (minus, plus)
        sign = 1 if small is plus else -1
        q, r = divmod(p_m - sign * C, poly_from_roots(small))
        if r or q.degree != 1:
            raise CertificationFailure(f"p_m - ({sign})C is not divisible by the small sign class")
        xi = conv(-q[0])
        if Fraction(xi).denominator != 1:
            raise CertificationFailure(f"extra element {xi} is not an integer")
        E = [to_int[v] for v in big]
        F = [to_int[v] for v in small] + [int(xi)]
    sol = verify_pte(E, F)
    if not sol:
        raise CertificationFailure(f"sign classes do not form a PTE solution: {sol.reason}")
    return sol


def _prune_element(sol: PTESolution) -> int:
    n = sol.n
    counts = Counter(sol.E + sol.F)
    reps = [v for v, k in counts.items() if k == 2]
    if reps:
        return reps[0]
    E, F = sol.E, sol.F
    banned = {E[0], F[0], E[n - 1], F[n - 1]}
    pool = sorted(v for v in set(E + F) if v not in banned)
    if not pool:
        raise WrongClass("no interior element available to drop")
    return pool[0]


def pte_to_chain(sol: PTESolution, *, even: bool | None = None) -> Chain:
    """Chain with spectrum from ``E + F`` where 0 and ``ceil((d+1)/2)`` are cospectral and periodic.

    PTE0 gives odd ``d = 2n-1``. PTE1 (or ``even=True``) gives ``d = 2n-2`` by
    dropping one copy of the repeated element, or the smallest element not at
    either end of E or F.
    """
    if sol.cls == "general":
        raise WrongClass("only PTE0 and PTE1 solutions correspond to chains")
    if even is None:
        even = sol.cls == "pte1"
    if not even and sol.cls != "pte0":
        raise WrongClass("odd length needs a solution without repeats")
    pE, pF = poly_from_roots(sol.E), poly_from_roots(sol.F)
    top = pE * pF
    if even:
        xi = _prune_element(sol)
        top = top / Poly([-xi, 1])
    p_m = (pE + pF) / 2
    cert = build_ops(p_m, top)
    chain = cert.chain
    m = _half(chain.d)
    if p_m.degree != m:
        raise CertificationFailure(f"half position is {m} but p_m has degree {p_m.degree}")
    if not is_cospectral(chain, 0, m, mode="exact"):
        raise CertificationFailure("0 and the half vertex are not cospectral")
    is_periodic(chain, 0)
    return chain


def pte_to_pst_chain(sol: PTESolution) -> Chain:
    """Halve a PTE0 solution with one odd element per side and build a PST chain.

    The halved even elements (``2n-2`` integers) are the spectrum; transfer is
    between 0 and ``n``.
    """
    if sol.cls != "pte0":
        raise WrongClass("needs a PTE0 solution")
    odd_E = [v for v in sol.E if v % 2]
    odd_F = [v for v in sol.F if v % 2]
    if len(odd_E) != 1 or len(odd_F) != 1:
        raise ParityMismatch(f"need exactly one odd element on each side, got {odd_E} and {odd_F}")
    spectrum = [v // 2 for v in sol.E + sol.F if v % 2 == 0]
    if len(spectrum) <= sol.n:
        raise InfeasibleSpectrum(f"{len(spectrum)} eigenvalues leave no vertex {sol.n}")
    return build_pst_chain(spectrum, sol.n)


def halved_spectrum(sol: PTESolution) -> list[int]:
    return sorted((v // 2 for v in sol.E + sol.F if v % 2 == 0), reverse=True)


# ---------------------------------------------------------------------------
# search


def search_pte(
    n: int,
    lo: int,
    hi: int,
    class_filter: str | None = None,
    *,
    dedupe_translations: bool = True,
) -> list[PTESolution]:
    """All PTE solutions of size ``n`` with elements in ``[lo, hi]``.

    Multisets are bucketed by their first ``n-1`` power sums; every pair in a
    bucket is a solution. By default solutions are returned in canonical form
    (smallest element 0, ``e_1 < f_1``) with translates merged; with
    ``dedupe_translations=False`` the in-window solutions are returned as found.
    """
    if n < 1 or hi < lo:
        raise ValueError("need n >= 1 and lo <= hi")
    buckets: dict[tuple, list[tuple[int, ...]]] = defaultdict(list)
    for ms in itertools.combinations_with_replacement(range(lo, hi + 1), n):
        buckets[power_sums(ms, n - 1)].append(ms)
    fact = math.factorial(n - 1)
    seen = set()
    out = []
    for group in buckets.values():
        if len(group) < 2:
            continue
        for E, F in itertools.combinations(group, 2):
            cls = classify(E, F)
            if class_filter is not None and cls != class_filter:
                continue
            if not pte_interlacing_check(E, F):
                raise CertificationFailure(f"interlacing pattern fails for {E}, {F}")
            diff = poly_from_roots(E)(0) - poly_from_roots(F)(0)
            if diff % fact:
                raise CertificationFailure(f"divisibility fails for {E}, {F}")
            sol = PTESolution(E, F, cls)
            if dedupe_translations:
                sol = sol.canonical()
            elif (F[0], F) < (E[0], E):
                sol = PTESolution(F, E, cls)
            key = (sol.E, sol.F)
            if key not in seen:
                seen.add(key)
                out.append(sol)
    out.sort(key=lambda s: (s.E, s.F))
    return out


E1 = (-8, -4, 0, 8, 9)
F1 = (-7, -6, 2, 6, 10)
E2 = (-55, -24, -6, 32, 58)
F2 = (-52, -34, 9, 22, 60)
