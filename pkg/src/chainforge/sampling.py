"""Seeded generators for random chains and interlacing polynomial pairs."""

from __future__ import annotations

import random
from fractions import Fraction

from .chain import Chain
from .poly import Poly, poly_from_roots, strongly_interlaces


def random_rational(rng: random.Random, lo: int = -5, hi: int = 5, max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(lo * max_den, hi * max_den), rng.randint(1, max_den))


def random_chain(rng: random.Random, d: int, *, max_den: int = 4, integer_diag: bool = False) -> Chain:
    """Chain with rational weights; couplings are positive."""
    if integer_diag:
        a = [Fraction(rng.randint(-3, 3)) for _ in range(d + 1)]
    else:
        a = [random_rational(rng, -3, 3, max_den) for _ in range(d + 1)]
    lam = [Fraction(rng.randint(1, 4 * max_den), rng.randint(1, max_den)) for _ in range(d)]
    return Chain(a, lam)


def random_interlacing_pair(
    rng: random.Random, d: int, m: int | None = None, *, share_prob: float = 0.3
) -> tuple[Poly, Poly]:
    """Integer-root ``(q_m, q_top)`` with ``deg q_top = d+1`` that strongly interlace.

    The roots of ``q_top`` are spaced at least 2 apart so each gap has an
    interior integer; a ``q_m`` root either sits inside a gap or, with
    probability ``share_prob``, on an interior root of ``q_top``.
    """
    if m is None:
        m = rng.randint(0, d)
    while True:
        q_m, q_top = _interlacing_attempt(rng, d, m, share_prob)
        if strongly_interlaces(q_m, q_top):
            return q_m, q_top


def _interlacing_attempt(rng: random.Random, d: int, m: int, share_prob: float) -> tuple[Poly, Poly]:
    steps = [rng.randint(2, 4) for _ in range(d)]
    start = rng.randint(-2 * d - 2, 0)
    theta = [start]
    for s in steps:
        theta.append(theta[-1] + s)
    gaps = sorted(rng.sample(range(d), m))  # gap i is (theta[i], theta[i+1])
    chosen = set(gaps)
    roots = []
    for i in gaps:
        lo, hi = theta[i], theta[i + 1]
        r = rng.randint(lo + 1, hi - 1)
        # snap to the left endpoint if it is interior and the gap on its other side is free
        if rng.random() < share_prob and i > 0 and (i - 1) not in chosen:
            r = lo
        elif rng.random() < share_prob and i + 1 < d and (i + 1) not in chosen:
            r = hi
        roots.append(r)
    return poly_from_roots(roots), poly_from_roots(theta)


def random_non_interlacing_pair(rng: random.Random, d: int) -> tuple[Poly, Poly]:
    """Integer-root pair with ``deg q_m <= d`` that fails strong interlacing."""
    theta = sorted(rng.sample(range(-3 * d - 3, 3 * d + 4), d + 1))
    m = rng.randint(1, d)
    kind = rng.choice(["outside", "crowded", "double", "complex"])
    if kind == "outside" or m == 1 and kind in ("crowded", "double"):
        # a root at or beyond the extreme roots of q_top
        extreme = rng.choice([theta[0] - rng.randint(0, 2), theta[-1] + rng.randint(0, 2)])
        others = rng.sample(range(theta[0] + 1, theta[-1]), min(m - 1, theta[-1] - theta[0] - 1))
        roots = [extreme] + others
    elif kind == "crowded":
        # two roots of q_m with no root of q_top strictly between them
        i = rng.randrange(d)
        lo, hi = theta[i], theta[i + 1]
        a = Fraction(lo) + Fraction(hi - lo, 3)
        b = Fraction(lo) + Fraction(2 * (hi - lo), 3)
        pool = [v for v in range(theta[0] + 1, theta[-1]) if not lo <= v <= hi]
        roots = [a, b] + rng.sample(pool, min(m - 2, len(pool)))
    elif kind == "double":
        i = rng.randrange(d)
        r = Fraction(theta[i] + theta[i + 1], 2)
        roots = [r, r] + [Fraction(theta[0] + theta[-1], 2) + k for k in range(m - 2)]
    else:
        # complex roots: (x^2 + 1) factor
        inner = poly_from_roots(rng.sample(range(theta[0] + 1, theta[-1]), min(m - 1, theta[-1] - theta[0] - 1))[: max(m - 2, 0)])
        return inner * Poly([1, 0, 1]), poly_from_roots(theta)
    return poly_from_roots(roots), poly_from_roots(theta)
