"""Weighted chains (Jacobi matrices) and their orthogonal polynomial sequences.

A d-chain has vertex weights ``a[0..d]`` and squared couplings
``lambda_sq[0..d-1]``; ``lambda_sq[k-1]`` is the squared weight of the edge
between vertices ``k-1`` and ``k``. Couplings are kept squared so that every
polynomial built from a chain stays rational.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .errors import DegreeDrop, IndexOutOfRange, NonPositiveCoupling
from .poly import (
    ONE,
    ZERO,
    Poly,
    Root,
    as_fraction,
    format_fraction,
    isolate_real_roots,
    poly_gcd,
    refine_root,
)


class Chain:
    __slots__ = ("a", "lambda_sq")

    def __init__(self, a: Iterable, lambda_sq: Iterable, *, check: bool = True):
        a = tuple(as_fraction(v) for v in a)
        lambda_sq = tuple(as_fraction(v) for v in lambda_sq)
        if not a:
            raise ValueError("a chain needs at least one vertex")
        if len(a) != len(lambda_sq) + 1:
            raise ValueError(f"{len(a)} vertex weights need {len(a) - 1} couplings, got {len(lambda_sq)}")
        if check:
            for k, v in enumerate(lambda_sq, start=1):
                if v <= 0:
                    raise NonPositiveCoupling(f"lambda_{k}^2 = {v} is not positive")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "lambda_sq", lambda_sq)

    def __setattr__(self, name, value):
        raise AttributeError("Chain is immutable")

    @classmethod
    def path(cls, n: int) -> Chain:
        """Unweighted path on ``n`` vertices."""
        return cls([0] * n, [1] * (n - 1))

    @property
    def d(self) -> int:
        return len(self.a) - 1

    @property
    def size(self) -> int:
        return len(self.a)

    def is_valid(self) -> bool:
        return all(v > 0 for v in self.lambda_sq)

    def lambdas(self) -> np.ndarray:
        return np.sqrt(np.array([float(v) for v in self.lambda_sq]))

    def matrix(self) -> np.ndarray:
        """Float Jacobi matrix."""
        J = np.diag([float(v) for v in self.a])
        off = self.lambdas()
        idx = np.arange(self.d)
        J[idx, idx + 1] = off
        J[idx + 1, idx] = off
        return J

    def reflect(self) -> Chain:
        return Chain(self.a[::-1], self.lambda_sq[::-1], check=False)

    def check_vertex(self, v: int) -> int:
        if not 0 <= v <= self.d:
            raise IndexOutOfRange(f"vertex {v} outside 0..{self.d}")
        return v

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self.a == other.a and self.lambda_sq == other.lambda_sq

    def __hash__(self) -> int:
        return hash((self.a, self.lambda_sq))

    def __repr__(self) -> str:
        a = ", ".join(format_fraction(v) for v in self.a)
        ls = ", ".join(format_fraction(v) for v in self.lambda_sq)
        return f"Chain(a=[{a}], lambda_sq=[{ls}])"

    def to_json(self, spectrum: Sequence[Fraction] | None = None) -> dict:
        out = {
            "d": self.d,
            "a": [format_fraction(v) for v in self.a],
            "lambda_sq": [format_fraction(v) for v in self.lambda_sq],
        }
        if spectrum is not None:
            out["spectrum"] = [format_fraction(as_fraction(v)) for v in spectrum]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> Chain:
        c = cls(obj["a"], obj["lambda_sq"])
        if "d" in obj and int(obj["d"]) != c.d:
            raise ValueError(f"declared d={obj['d']} but {len(c.a)} vertex weights given")
        return c


def reflect_chain(c: Chain) -> Chain:
    return c.reflect()


# ---------------------------------------------------------------------------
# characteristic polynomials


def block_polys(c: Chain, start: int, stop: int) -> list[Poly]:
    """Characteristic polynomials of the leading blocks of vertices ``start..stop-1``.

    Entry ``k`` is the polynomial of vertices ``start..start+k-1``.
    """
    out = [ONE]
    prev = ZERO
    for k in range(start, stop):
        nxt = Poly([-c.a[k], 1]) * out[-1]
        if k > start:
            nxt = nxt - prev * c.lambda_sq[k - 1]
        prev = out[-1]
        out.append(nxt)
    return out


def block_charpoly(c: Chain, start: int, stop: int) -> Poly:
    """Characteristic polynomial of vertices ``start..stop-1``.

    An empty block gives 1, and the "block of size -1" gives 0, matching
    ``p_0 = 1`` and ``p_{-1} = 0`` in the three-term recurrence.
    """
    if stop - start == -1:
        return ZERO
    if stop < start:
        raise ValueError(f"bad block {start}..{stop - 1}")
    return block_polys(c, start, stop)[-1]


@dataclass(frozen=True)
class OPSequence:
    """``p_0 = 1, p_1, ..., p_{d+1}`` with ``p_{k+1} = (x - a_k) p_k - lambda_k^2 p_{k-1}``."""

    polys: tuple[Poly, ...]

    def __getitem__(self, k: int) -> Poly:
        if k == -1:
            return ZERO
        return self.polys[k]

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    @property
    def top(self) -> Poly:
        return self.polys[-1]


def ops_from_chain(c: Chain) -> OPSequence:
    return OPSequence(tuple(block_polys(c, 0, c.size)))


def charpoly(c: Chain) -> Poly:
    return block_charpoly(c, 0, c.size)


def subchain_polys(c: Chain, m: int) -> tuple[Poly, Poly]:
    """``(hat, bar)`` for the Christoffel-Darboux split at vertex ``m``.

    ``hat`` is the polynomial of the trailing block ``m+1..d`` and ``bar`` the
    polynomial of the block strictly between ``m`` and ``d`` (size ``d-m-1``;
    zero when ``m = d``). With these, ``hat*p_d - bar*p_{d+1} = prod(lambda_t^2, t>m) * p_m``.
    """
    if not 0 <= m <= c.d:
        raise IndexOutOfRange(f"m={m} outside 0..{c.d}")
    return block_charpoly(c, m + 1, c.d + 1), block_charpoly(c, m + 1, c.d)


def bar_by_division(c: Chain, m: int) -> Poly:
    """The polynomial forced by the Christoffel-Darboux identity, by exact division."""
    if not 0 <= m <= c.d:
        raise IndexOutOfRange(f"m={m} outside 0..{c.d}")
    ops = ops_from_chain(c)
    hat = block_charpoly(c, m + 1, c.d + 1)
    lam = coupling_product(c, m + 1, c.d)
    num = hat * ops[c.d] - ops[m] * lam
    q, r = divmod(num, ops.top)
    if r:
        raise ArithmeticError("Christoffel-Darboux remainder is nonzero")
    return q


def literal_bar(c: Chain, m: int) -> Poly:
    """Polynomial of rows/columns ``d-m+1 .. d-1`` read literally (size ``m-1``)."""
    if not 0 <= m <= c.d:
        raise IndexOutOfRange(f"m={m} outside 0..{c.d}")
    return block_charpoly(c, c.d - m + 1, c.d)


def bar_matches_literal_range(c: Chain, m: int) -> bool:
    return subchain_polys(c, m)[1] == literal_bar(c, m)


def coupling_product(c: Chain, first: int, last: int) -> Fraction:
    """``prod_{t=first}^{last} lambda_t^2`` (1-based coupling indices)."""
    out = Fraction(1)
    for t in range(first, last + 1):
        out *= c.lambda_sq[t - 1]
    return out


def cd_identity_check(c: Chain, m: int) -> bool:
    """Exact Christoffel-Darboux check at ``m``; invalid chains are rejected outright."""
    if not 0 <= m <= c.d:
        raise IndexOutOfRange(f"m={m} outside 0..{c.d}")
    if not c.is_valid():
        return False
    ops = ops_from_chain(c)
    hat, bar = subchain_polys(c, m)
    lhs = hat * ops[c.d] - bar * ops.top
    return lhs == ops[m] * coupling_product(c, m + 1, c.d)


def gcd_triple(c: Chain, m: int) -> tuple[Poly, Poly, Poly]:
    """``gcd(p_m, p_{d+1})``, ``gcd(hat, p_{d+1})`` and ``gcd(p_m, hat)``; all three agree."""
    if not 0 <= m <= c.d:
        raise IndexOutOfRange(f"m={m} outside 0..{c.d}")
    ops = ops_from_chain(c)
    hat = block_charpoly(c, m + 1, c.d + 1)
    return poly_gcd(ops[m], ops.top), poly_gcd(hat, ops.top), poly_gcd(ops[m], hat)


def vertex_deleted_charpoly(c: Chain, removed: Iterable[int]) -> Poly:
    """Characteristic polynomial of the chain with the given vertices deleted."""
    gone = {c.check_vertex(v) for v in removed}
    out = ONE
    start = 0
    for v in range(c.size + 1):
        if v == c.size or v in gone:
            if v > start:
                out = out * block_charpoly(c, start, v)
            start = v + 1
    return out


# ---------------------------------------------------------------------------
# rational functions


@dataclass(frozen=True)
class RationalFn:
    """``num/den`` kept coprime with a monic denominator."""

    num: Poly
    den: Poly

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator")
        num, den = self.num, self.den
        g = poly_gcd(num, den) if num else den.monic()
        if g.degree > 0:
            num, den = num / g, den / g
        lead = den.lead
        object.__setattr__(self, "num", num / lead)
        object.__setattr__(self, "den", den / lead)

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def __sub__(self, other: RationalFn) -> RationalFn:
        return RationalFn(self.num * other.den - other.num * self.den, self.den * other.den)

    def __add__(self, other: RationalFn) -> RationalFn:
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    def __str__(self) -> str:
        return f"({self.num}) / ({self.den})"


def alpha(c: Chain, v: int) -> RationalFn:
    """``phi(P) / phi(P minus v) = p_{d+1} / (p_v * hat_{d-v})``."""
    c.check_vertex(v)
    return RationalFn(charpoly(c), vertex_deleted_charpoly(c, [v]))


def alpha_deleted(c: Chain, v: int, removed: Iterable[int]) -> RationalFn:
    """``phi(P minus S) / phi(P minus S minus v)``."""
    removed = set(removed)
    return RationalFn(vertex_deleted_charpoly(c, removed), vertex_deleted_charpoly(c, removed | {v}))


# ---------------------------------------------------------------------------
# inverse problem


def chain_from_top_pair(p_top: Poly, p_next: Poly) -> Chain:
    """Run the three-term recurrence downward from ``(p_{d+1}, p_d)``."""
    if not (p_top.is_monic() and p_next.is_monic()):
        raise ValueError("both polynomials must be monic")
    if p_top.degree != p_next.degree + 1:
        raise ValueError(f"degrees {p_top.degree}, {p_next.degree} are not consecutive")
    d = p_next.degree
    a = [Fraction(0)] * (d + 1)
    lam = [Fraction(0)] * d
    hi, lo = p_top, p_next
    for k in range(d, -1, -1):
        q, r = divmod(hi, lo)
        # q = x - a_k, r = -lambda_k^2 p_{k-1}
        a[k] = -q[0]
        if k == 0:
            if r:
                raise DegreeDrop(f"nonzero remainder {r} at the bottom of the recurrence")
            break
        if r.degree != k - 1:
            raise DegreeDrop(f"remainder at step {k} has degree {r.degree}, expected {k - 1}")
        lsq = -r.lead
        if lsq <= 0:
            raise NonPositiveCoupling(f"lambda_{k}^2 = {lsq} (inputs do not interlace)")
        lam[k - 1] = lsq
        hi, lo = lo, r / (-lsq)
    return Chain(a, lam)


# ---------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class SpectralData:
    """Eigenvalues ``theta_0 > ... > theta_d`` and normalized eigenvectors.

    ``vectors[:, s]`` is the unit eigenvector for ``theta_s`` with a positive
    first entry. ``exact_sq[k][s]`` is the exact squared entry when ``theta_s``
    is rational (else ``None``).
    """

    eigenvalues: tuple[Root, ...]
    values: np.ndarray
    vectors: np.ndarray
    norms: np.ndarray
    exact_sq: tuple[tuple[Fraction | None, ...], ...]

    @property
    def is_rational(self) -> bool:
        return all(r.is_exact for r in self.eigenvalues)

    def exact_values(self) -> list[Fraction] | None:
        if not self.is_rational:
            return None
        return [r.exact for r in self.eigenvalues]

    def squared_entry(self, vertex: int, s: int):
        ex = self.exact_sq[vertex][s]
        return ex if ex is not None else float(self.vectors[vertex, s] ** 2)


def _eigvec_exact(c: Chain, theta: Fraction) -> tuple[list[Fraction], list[int]]:
    """Squared unnormalized entries ``p_k(theta)^2 / prod_{j<=k} lambda_j^2`` and signs."""
    vals = [Fraction(1)]
    prev, cur = Fraction(0), Fraction(1)
    for k in range(c.d):
        nxt = (theta - c.a[k]) * cur - (c.lambda_sq[k - 1] * prev if k > 0 else 0)
        prev, cur = cur, nxt
        vals.append(cur)
    sq, signs = [], []
    lam = Fraction(1)
    for k, v in enumerate(vals):
        if k > 0:
            lam *= c.lambda_sq[k - 1]
        sq.append(v * v / lam)
        signs.append((v > 0) - (v < 0))
    return sq, signs


_MP_DPS = 60


def _eigvec_mp(c: Chain, theta) -> tuple[list, list[int]]:
    with mpmath.workdps(_MP_DPS):
        a = [mpmath.mpf(v.numerator) / v.denominator for v in c.a]
        ls = [mpmath.mpf(v.numerator) / v.denominator for v in c.lambda_sq]
        vals = [mpmath.mpf(1)]
        prev, cur = mpmath.mpf(0), mpmath.mpf(1)
        for k in range(c.d):
            nxt = (theta - a[k]) * cur - (ls[k - 1] * prev if k > 0 else 0)
            prev, cur = cur, nxt
            vals.append(cur)
        sq, signs = [], []
        lam = mpmath.mpf(1)
        for k, v in enumerate(vals):
            if k > 0:
                lam *= ls[k - 1]
            sq.append(v * v / lam)
            signs.append(int(mpmath.sign(v)))
        return sq, signs


def eigen(c: Chain) -> SpectralData:
    """Spectrum of ``c`` with eigenvectors from the orthogonal polynomials.

    Rational eigenvalues are found exactly; the rest are bracketed by Sturm
    bisection and their eigenvectors evaluated in extended precision.
    """
    top = charpoly(c)
    roots = list(isolate_real_roots(top))[::-1]
    if len(roots) != c.size:
        raise ArithmeticError(f"expected {c.size} simple real eigenvalues, found {len(roots)}")
    n = c.size
    vectors = np.zeros((n, n))
    norms = np.zeros(n)
    exact_sq: list[list] = [[None] * n for _ in range(n)]
    for s, r in enumerate(roots):
        if r.exact is not None:
            sq, signs = _eigvec_exact(c, r.exact)
            total = sum(sq)
            for k in range(n):
                exact_sq[k][s] = sq[k] / total
            norms[s] = math.sqrt(total)
            vectors[:, s] = [sg * math.sqrt(q / total) for q, sg in zip(sq, signs)]
        else:
            lo, hi = refine_root(top, r, Fraction(1, 2**200))
            with mpmath.workdps(_MP_DPS):
                mid = (lo + hi) / 2
                theta = mpmath.mpf(mid.numerator) / mid.denominator
                sq, signs = _eigvec_mp(c, theta)
                total = mpmath.fsum(sq)
                norms[s] = float(mpmath.sqrt(total))
                vectors[:, s] = [sg * float(mpmath.sqrt(q / total)) for q, sg in zip(sq, signs)]
    values = np.array([r.witness for r in roots])
    return SpectralData(
        tuple(roots),
        values,
        vectors,
        norms,
        tuple(tuple(row) for row in exact_sq),
    )


def eigvec_relation_exact(c: Chain, theta: Fraction) -> bool:
    """Exact check that the polynomial eigenvector solves ``J v = theta v``.

    Works with entries scaled by ``prod lambda`` so that only ``lambda^2`` appears.
    """
    ops = ops_from_chain(c)
    vals = [p(theta) for p in ops]
    if vals[-1] != 0:
        return False
    for k in range(c.size):
        left = c.a[k] * vals[k] + vals[k + 1] if k < c.d else c.a[k] * vals[k]
        if k > 0:
            left += c.lambda_sq[k - 1] * vals[k - 1]
        if left != theta * vals[k]:
            return False
    return True


def transition_matrix(c: Chain, t: float, spec: SpectralData | None = None) -> np.ndarray:
    """``exp(i t J)`` via the spectral decomposition."""
    spec = spec or eigen(c)
    U = spec.vectors
    phases = np.exp(1j * t * spec.values)
    return (U * phases) @ U.T


def transition_amplitude(
    c: Chain, t: float, ell: int, m: int, spec: SpectralData | None = None
) -> complex:
    """``<m| exp(i t J) |ell>``."""
    c.check_vertex(ell)
    c.check_vertex(m)
    spec = spec or eigen(c)
    U = spec.vectors
    return complex(sum(cmath.exp(1j * t * th) * U[m, s] * U[ell, s] for s, th in enumerate(spec.values)))
