"""Exact univariate polynomials over the rationals.

Coefficients are stored lowest degree first as :class:`fractions.Fraction`.
Real roots are isolated with Sturm sequences evaluated in integer arithmetic;
rational roots are always reported exactly.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import (
    DegreeOrder,
    DuplicateAbscissa,
    IrrationalPole,
    NonRealRoots,
    RepeatedPole,
)


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; reject floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, float):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(
        f"exact construction needs a rational, got {type(value).__name__} {value!r}; "
        "rationalize first, e.g. Fraction('5/2') or Fraction(x).limit_denominator()"
    )


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Poly:
    """Immutable dense polynomial with rational coefficients.

    The zero polynomial has ``degree == -1`` and an empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # constructors
    @classmethod
    def const(cls, c) -> Poly:
        return cls([c])

    @classmethod
    def x(cls) -> Poly:
        return cls([0, 1])

    @classmethod
    def monomial(cls, k: int, c=1) -> Poly:
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> Poly:
        return poly_from_roots(roots)

    # basic properties
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    # arithmetic
    @staticmethod
    def _coerce(other) -> Poly:
        if isinstance(other, Poly):
            return other
        return Poly([other])

    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> Poly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Poly:
        return self._coerce(other) - self

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            c = as_fraction(other)
            return Poly(c * a for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Poly:
        """Division by a scalar, or *exact* division by a polynomial."""
        if isinstance(other, Poly):
            q, r = divmod(self, other)
            if r:
                raise ValueError(f"{other} does not divide {self}")
            return q
        c = as_fraction(other)
        return Poly(a / c for a in self.coeffs)

    def __pow__(self, k: int) -> Poly:
        out = Poly([1])
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other) -> tuple[Poly, Poly]:
        return divrem(self, other)

    def __floordiv__(self, other) -> Poly:
        return divrem(self, other)[0]

    def __mod__(self, other) -> Poly:
        return divrem(self, other)[1]

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    # evaluation
    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return Fraction(acc) if isinstance(acc, int) else acc

    def evalf(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def monic(self) -> Poly:
        if not self.coeffs:
            return self
        return self / self.lead

    def derivative(self) -> Poly:
        return Poly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def reflect(self) -> Poly:
        """``(-1)^deg p(-x)``: negates every root, keeps the leading coefficient."""
        n = self.degree
        return Poly(c if (n - k) % 2 == 0 else -c for k, c in enumerate(self.coeffs))

    def shift(self, t) -> Poly:
        """``p(x + t)``."""
        t = as_fraction(t)
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * Poly([t, 1]) + c
        return out

    # text
    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = format_fraction(mag)
            else:
                xk = "x" if k == 1 else f"x^{k}"
                if mag == 1:
                    body = xk
                elif mag.denominator == 1:
                    body = f"{mag.numerator}{xk}"
                else:
                    body = f"({format_fraction(mag)}){xk}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> dict:
        return {"coeffs": [format_fraction(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> Poly:
        if isinstance(obj, dict):
            obj = obj["coeffs"]
        return cls(obj)


X = Poly.x()
ONE = Poly([1])
ZERO = Poly()


def poly_from_roots(roots: Iterable) -> Poly:
    out = ONE
    for r in roots:
        out = out * Poly([-as_fraction(r), 1])
    return out


def eval_exact(p: Poly, x) -> Fraction:
    return p(as_fraction(x))


def divrem(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not isinstance(b, Poly):
        b = Poly([b])
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a.coeffs)
    db = b.degree
    if len(rem) - 1 < db:
        return ZERO, a
    quot = [Fraction(0)] * (len(rem) - db)
    lead = b.lead
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if c == 0:
            continue
        c = c / lead
        quot[k - db] = c
        for j, bc in enumerate(b.coeffs):
            rem[k - db + j] -= c * bc
    return Poly(quot), Poly(rem[:db])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; ``gcd(0, 0) == 0``."""
    while b:
        a, b = b, a % b
    return a.monic()


def inverse_mod(a: Poly, m: Poly) -> Poly:
    """``b`` with ``a*b = 1 (mod m)``; ``a`` and ``m`` must be coprime."""
    r0, r1 = m, a % m
    s0, s1 = ZERO, ONE
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.degree != 0:
        raise ValueError("not invertible: common factor with the modulus")
    return (s0 / r0[0]) % m


def derivative(p: Poly) -> Poly:
    return p.derivative()


def reflect_poly(p: Poly) -> Poly:
    return p.reflect()


def lagrange_interpolate(points: Sequence[tuple]) -> Poly:
    """Unique polynomial of degree < len(points) through the given points (Newton form)."""
    xs = [as_fraction(px) for px, _ in points]
    if len(set(xs)) != len(xs):
        raise DuplicateAbscissa(f"abscissae must be distinct: {[format_fraction(v) for v in xs]}")
    coef = [as_fraction(py) for _, py in points]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = ZERO
    for i in range(n - 1, -1, -1):
        out = out * Poly([-xs[i], 1]) + coef[i]
    return out


# ---------------------------------------------------------------------------
# integer kernels for sign evaluation


def _int_coeffs(p: Poly) -> list[int]:
    """Positive rational multiple of ``p`` with coprime integer coefficients."""
    if not p.coeffs:
        return []
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return [v // g for v in ints]


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _sign_at(cs: list[int], x: Fraction) -> int:
    """Sign of the integer polynomial ``cs`` at the rational ``x``."""
    a, b = x.numerator, x.denominator
    acc = 0
    bpow = 1
    # homogeneous Horner: sum c_k a^k b^(n-k)
    for c in reversed(cs):
        acc = acc * a + c * bpow
        bpow *= b
    return _sign(acc)


class _SqfPoly:
    """Square-free polynomial prepared for Sturm counting."""

    def __init__(self, p: Poly):
        self.poly = p
        self.ints = _int_coeffs(p)
        self.degree = p.degree
        seq = [p, p.derivative()]
        while seq[-1].degree > 0:
            r = seq[-2] % seq[-1]
            if r.is_zero():
                break
            seq.append(-r)
        self.sturm = [_int_coeffs(s) for s in seq if s]

    def sign(self, x: Fraction) -> int:
        return _sign_at(self.ints, x)

    def variations(self, x: Fraction) -> int:
        count = 0
        last = 0
        for s in self.sturm:
            v = _sign_at(s, x)
            if v == 0:
                continue
            if last and v != last:
                count += 1
            last = v
        return count

    def count(self, lo: Fraction, hi: Fraction) -> int:
        """Number of distinct roots in the half-open interval ``(lo, hi]``."""
        return self.variations(lo) - self.variations(hi)

    def cauchy_bound(self) -> int:
        lead = abs(self.ints[-1])
        m = max((abs(c) for c in self.ints[:-1]), default=0)
        return 1 + -(-m // lead)

    def root_bound(self) -> int:
        """Power of two strictly above every |root| (Fujiwara, checked exactly)."""
        cs = self.ints
        n = len(cs) - 1
        lead = abs(cs[-1])
        best = 1
        while True:
            # 2^k bounds |roots| if |a_{n-j}| / |a_n| <= (2^k / 2)^j for every j
            half = best // 2 if best > 1 else Fraction(1, 2)
            if all(abs(cs[n - j]) <= lead * half**j for j in range(1, n + 1)):
                return 2 * best
            best *= 2


@dataclass
class _Bracket:
    label: int
    lo: Fraction
    hi: Fraction
    exact: Fraction | None = None

    def overlaps(self, other: "_Bracket") -> bool:
        if self.exact is not None and other.exact is not None:
            return self.exact == other.exact
        if self.exact is not None:
            return other.lo < self.exact < other.hi
        if other.exact is not None:
            return self.lo < other.exact < self.hi
        return self.lo < other.hi and other.lo < self.hi


def _isolate_sqf(f: _SqfPoly, label: int = 0) -> list[_Bracket]:
    if f.degree <= 0:
        return []
    B = Fraction(f.root_bound())
    out: list[_Bracket] = []
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        n = f.count(lo, hi)
        if n == 0:
            continue
        if n == 1:
            if f.sign(hi) == 0:
                out.append(_Bracket(label, hi, hi, hi))
            else:
                out.append(_Bracket(label, lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    out.sort(key=lambda b: b.lo)
    return out


def _bisect(f: _SqfPoly, br: _Bracket) -> None:
    """Halve the bracket in place, keeping the unique root of ``f`` inside."""
    if br.exact is not None:
        return
    mid = (br.lo + br.hi) / 2
    s = f.sign(mid)
    if s == 0:
        br.lo = br.hi = br.exact = mid
    elif s == f.sign(br.hi):
        br.hi = mid
    else:
        br.lo = mid


def _separate(polys: Sequence[_SqfPoly]) -> list[_Bracket]:
    """Isolate the roots of pairwise coprime square-free polynomials, jointly sorted."""
    brs: list[_Bracket] = []
    for i, f in enumerate(polys):
        brs.extend(_isolate_sqf(f, i))
    while True:
        brs.sort(key=lambda b: (b.lo, b.hi))
        clash = False
        for i in range(len(brs)):
            for j in range(i + 1, len(brs)):
                if brs[j].lo >= brs[i].hi:
                    break
                if brs[i].overlaps(brs[j]):
                    clash = True
                    _bisect(polys[brs[i].label], brs[i])
                    _bisect(polys[brs[j].label], brs[j])
        if not clash:
            return brs


def _refine(f: _SqfPoly, br: _Bracket, rel_width: Fraction) -> None:
    """Refine until a rational root is pinned exactly or the bracket is narrow.

    A rational root p/q of the primitive integer polynomial has q | lead, so once
    ``lead * width < 1`` there is at most one candidate to try.
    """
    lead = abs(f.ints[-1])
    checked_rational = False
    while br.exact is None:
        width = br.hi - br.lo
        if not checked_rational and lead * width < 1:
            k = math.floor(lead * br.lo) + 1
            if k < lead * br.hi:
                cand = Fraction(k, lead)
                if f.sign(cand) == 0:
                    br.lo = br.hi = br.exact = cand
                    break
            checked_rational = True
        scale = max(Fraction(1), abs(br.lo), abs(br.hi))
        if checked_rational and width <= rel_width * scale:
            break
        _bisect(f, br)


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: monic square-free factors ``g_i`` with ``p = c * prod g_i^i``."""
    if p.degree <= 0:
        return []
    f = p.monic()
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f / a
    c = df / a
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        g = poly_gcd(b, d)
        if g.degree > 0:
            out.append((g, i))
        b = b / g
        c = d / g
        d = c - b.derivative()
        i += 1
    return out


def squarefree_part(p: Poly) -> Poly:
    if p.degree <= 0:
        return ONE
    g = poly_gcd(p, p.derivative())
    return (p / g).monic()


@dataclass(frozen=True)
class Root:
    """A real root: exact rational, or an isolating interval with a float witness."""

    lo: Fraction
    hi: Fraction
    witness: float
    multiplicity: int = 1
    exact: Fraction | None = None

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def __float__(self) -> float:
        return self.witness

    def __str__(self) -> str:
        if self.exact is not None:
            body = format_fraction(self.exact)
        else:
            body = f"{self.witness!r} in ({format_fraction(self.lo)}, {format_fraction(self.hi)})"
        return body if self.multiplicity == 1 else f"{body} (x{self.multiplicity})"


@dataclass(frozen=True)
class RootSet:
    """Real roots in strictly increasing order."""

    roots: tuple[Root, ...]

    def __iter__(self) -> Iterator[Root]:
        return iter(self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    def __getitem__(self, i: int) -> Root:
        return self.roots[i]

    @property
    def total_multiplicity(self) -> int:
        return sum(r.multiplicity for r in self.roots)

    @property
    def all_exact(self) -> bool:
        return all(r.is_exact for r in self.roots)

    @property
    def all_simple(self) -> bool:
        return all(r.multiplicity == 1 for r in self.roots)

    def exact_values(self) -> list[Fraction]:
        return [r.exact for r in self.roots if r.exact is not None]

    def witnesses(self) -> list[float]:
        return [r.witness for r in self.roots]

    def with_multiplicity(self) -> list[Root]:
        out = []
        for r in self.roots:
            out.extend([r] * r.multiplicity)
        return out


_DEFAULT_REL_WIDTH = Fraction(1, 2**52)


def isolate_real_roots(p: Poly, rel_width: Fraction = _DEFAULT_REL_WIDTH) -> RootSet:
    """All real roots of ``p`` with multiplicities; rational ones exact.

    Irrational roots are bracketed by rational intervals refined to a width of
    ``rel_width * max(1, |root|)``.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no isolated roots")
    return _isolate_cached(p, Fraction(rel_width))


@functools.lru_cache(maxsize=4096)
def _isolate_cached(p: Poly, rel_width: Fraction) -> RootSet:
    factors = squarefree_decomposition(p)
    sqfs = [_SqfPoly(g) for g, _ in factors]
    brs = _separate(sqfs)
    roots = []
    for br in brs:
        _refine(sqfs[br.label], br, rel_width)
        w = float(br.exact) if br.exact is not None else float((br.lo + br.hi) / 2)
        roots.append(Root(br.lo, br.hi, w, factors[br.label][1], br.exact))
    return RootSet(tuple(roots))


def count_real_roots(p: Poly, lo=None, hi=None) -> int:
    """Distinct real roots of ``p`` in ``(lo, hi]`` (whole line by default)."""
    f = _SqfPoly(squarefree_part(p))
    if f.degree <= 0:
        return 0
    lo = Fraction(-f.cauchy_bound()) if lo is None else as_fraction(lo)
    hi = Fraction(f.cauchy_bound()) if hi is None else as_fraction(hi)
    return f.count(lo, hi)


def is_real_rooted(p: Poly) -> bool:
    if p.degree <= 0:
        return True
    return isolate_real_roots(p).total_multiplicity == p.degree


def rational_roots(p: Poly) -> list[Fraction]:
    """Distinct rational roots, increasing."""
    return isolate_real_roots(p).exact_values()


def strongly_interlaces(low: Poly, high: Poly) -> bool:
    """Strong interlacing of ``low`` (smaller degree) and ``high``.

    Every open interval between consecutive roots of ``low`` must contain a root
    of ``high``, and every root of ``low`` must lie strictly between the
    smallest and largest roots of ``high``. Shared roots are allowed.
    """
    if low.degree >= high.degree:
        raise DegreeOrder(f"deg(low)={low.degree} must be < deg(high)={high.degree}")
    if low.is_zero():
        raise ValueError("zero polynomial")
    low_roots = isolate_real_roots(low) if low.degree > 0 else RootSet(())
    high_roots = isolate_real_roots(high)
    if low_roots.total_multiplicity != low.degree:
        raise NonRealRoots(f"{low} has non-real roots")
    if high_roots.total_multiplicity != high.degree:
        raise NonRealRoots(f"{high} has non-real roots")
    if low.degree == 0:
        return True
    if not low_roots.all_simple:
        return False
    lo_sqf = squarefree_part(low)
    hi_sqf = squarefree_part(high)
    common = poly_gcd(lo_sqf, hi_sqf)
    parts = [lo_sqf / common, hi_sqf / common, common]
    merged = _separate([_SqfPoly(q) for q in parts])
    # labels: 0 low only, 1 high only, 2 shared
    seq = [b.label for b in merged]
    if seq[0] != 1 or seq[-1] != 1:
        return False
    low_pos = [i for i, lab in enumerate(seq) if lab in (0, 2)]
    for i, j in zip(low_pos, low_pos[1:]):
        if not any(seq[k] == 1 for k in range(i + 1, j)):
            return False
    return True


def interlacing_pattern(low: Poly, high: Poly) -> list[str]:
    """Merged increasing root order as labels ``'low'``, ``'high'``, ``'both'``."""
    lo_sqf = squarefree_part(low)
    hi_sqf = squarefree_part(high)
    common = poly_gcd(lo_sqf, hi_sqf)
    merged = _separate([_SqfPoly(q) for q in (lo_sqf / common, hi_sqf / common, common)])
    names = ("low", "high", "both")
    return [names[b.label] for b in merged]


def partial_fractions(num: Poly, den: Poly) -> list[tuple[Fraction, Fraction]]:
    """Exact ``num/den = sum residue/(x - pole)``; poles in decreasing order."""
    if not den.is_monic():
        raise ValueError("denominator must be monic")
    if num.degree >= den.degree:
        raise ValueError("need deg(num) < deg(den)")
    roots = isolate_real_roots(den)
    if roots.total_multiplicity != den.degree:
        raise IrrationalPole(f"{den} has non-real poles")
    if not roots.all_simple:
        raise RepeatedPole(f"{den} has a repeated pole")
    if not roots.all_exact:
        raise IrrationalPole(f"{den} has irrational poles; use partial_fractions_numeric")
    dden = den.derivative()
    out = [(r.exact, num(r.exact) / dden(r.exact)) for r in roots]
    out.sort(key=lambda pr: pr[0], reverse=True)
    return out


def partial_fractions_numeric(num: Poly, den: Poly) -> list[tuple[float, float]]:
    """Float counterpart of :func:`partial_fractions` for simple irrational real poles."""
    if num.degree >= den.degree:
        raise ValueError("need deg(num) < deg(den)")
    roots = isolate_real_roots(den)
    if roots.total_multiplicity != den.degree:
        raise IrrationalPole(f"{den} has non-real poles")
    if not roots.all_simple:
        raise RepeatedPole(f"{den} has a repeated pole")
    dden = den.derivative()
    out = []
    for r in roots:
        if r.exact is not None:
            out.append((float(r.exact), float(num(r.exact) / dden(r.exact))))
        else:
            w = r.witness
            out.append((w, num.evalf(w) / dden.evalf(w)))
    out.sort(key=lambda pr: pr[0], reverse=True)
    return out


def refine_root(p: Poly, root: Root, rel_width: Fraction) -> tuple[Fraction, Fraction]:
    """Narrower rational bracket ``(lo, hi)`` for a simple root from :func:`isolate_real_roots`."""
    if root.exact is not None:
        return root.exact, root.exact
    f = _SqfPoly(squarefree_part(p))
    br = _Bracket(0, root.lo, root.hi)
    scale = max(Fraction(1), abs(root.lo), abs(root.hi))
    while br.exact is None and br.hi - br.lo > rel_width * scale:
        _bisect(f, br)
    if br.exact is not None:
        return br.exact, br.exact
    return br.lo, br.hi


def min_abs_critical_value(p: Poly) -> Fraction | None:
    """Rational lower bound on ``min |p(c)|`` over the critical points ``c`` of ``p``.

    ``p`` must be real-rooted with simple roots, so that ``|p|`` peaks at each
    critical point. Returns ``None`` when there are no critical points.
    """
    if p.degree < 2:
        return None
    roots = isolate_real_roots(p)
    if roots.total_multiplicity != p.degree or not roots.all_simple:
        raise ValueError("min_abs_critical_value needs a real-rooted p with simple roots")
    dp = p.derivative()
    f = _SqfPoly(squarefree_part(p))
    best: Fraction | None = None
    for c in isolate_real_roots(dp, rel_width=Fraction(1, 2**20)):
        if c.exact is not None:
            bound = abs(p(c.exact))
        else:
            lo, hi = c.lo, c.hi
            fd = _SqfPoly(squarefree_part(dp))
            br = _Bracket(0, lo, hi)
            # shrink until p has no root in the closed bracket
            while br.exact is None and (f.count(br.lo, br.hi) > 0 or f.sign(br.lo) == 0):
                _bisect(fd, br)
            if br.exact is not None:
                bound = abs(p(br.exact))
            else:
                bound = max(abs(p(br.lo)), abs(p(br.hi)))
        if best is None or bound < best:
            best = bound
    return best
