"""Perfect state transfer on chains with integer spectra.

After translating and rescaling the spectrum to integers ``n_s``, transfer
from ``l`` to ``m`` at time ``pi`` happens exactly when
``p_l(theta_s) = (-1)^(n_0 - n_s) * C * p_m(theta_s)`` for one constant ``C``.
A PST chain from a given integer spectrum is then an interpolation problem
followed by the two-polynomial chain construction.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .chain import Chain, SpectralData, eigen, ops_from_chain, transition_amplitude
from .errors import (
    CertificationFailure,
    InfeasibleSpectrum,
    IrrationalSpectrum,
    NotEnoughSlack,
)
from .opsbuild import build_ops
from .poly import (
    Poly,
    as_fraction,
    format_fraction,
    is_real_rooted,
    lagrange_interpolate,
    poly_from_roots,
    strongly_interlaces,
)

FIDELITY_TOL = 1e-9


def _frac_gcd(values: Iterable[Fraction]) -> Fraction:
    num, den = 0, 1
    for v in values:
        num = math.gcd(num * v.denominator, v.numerator * den)
        den *= v.denominator
        g = math.gcd(num, den)
        if g:
            num, den = num // g, den // g
    return Fraction(num, den) if num else Fraction(0)


@dataclass(frozen=True)
class NormalizedSpectrum:
    """``theta_s = shift + scale * n_s`` with integers ``n_s``, listed in decreasing order."""

    values: tuple[Fraction, ...]
    ints: tuple[int, ...]
    shift: Fraction
    scale: Fraction

    def parity(self, s: int) -> int:
        """``(-1)^(n_0 - n_s)``."""
        return -1 if (self.ints[0] - self.ints[s]) % 2 else 1


def normalize_spectrum(values: Iterable) -> NormalizedSpectrum:
    vals = sorted({as_fraction(v) for v in values}, reverse=True)
    if not vals:
        raise ValueError("empty spectrum")
    shift = vals[-1]
    scale = _frac_gcd(v - shift for v in vals) or Fraction(1)
    ints = tuple(int((v - shift) / scale) for v in vals)
    return NormalizedSpectrum(tuple(vals), ints, shift, scale)


def _exact_spectrum(spec: SpectralData) -> list[Fraction]:
    vals = spec.exact_values()
    if vals is None:
        bad = [str(r) for r in spec.eigenvalues if not r.is_exact]
        raise IrrationalSpectrum(f"irrational eigenvalues {bad}")
    return vals


def _support(c: Chain, v: int, values: Sequence[Fraction]) -> list[Fraction]:
    p_v = ops_from_chain(c)[v]
    return [th for th in values if p_v(th) != 0]


def is_periodic(c: Chain, v: int) -> bool:
    """Periodicity of vertex ``v``; requires rational eigenvalues on its support.

    With rational support eigenvalues every ratio of differences is rational,
    so the vertex is periodic.
    """
    c.check_vertex(v)
    if c.size == 1:
        return True
    spec = eigen(c)
    ops = ops_from_chain(c)
    p_v = ops[v]
    for r in spec.eigenvalues:
        if r.exact is None:
            # eigenvalue outside the support only if p_v vanishes there, which
            # needs a common factor of p_v with the characteristic polynomial
            from .poly import poly_gcd

            g = poly_gcd(p_v, ops.top)
            if g.degree > 0 and g.evalf(r.witness) == 0:
                continue
            raise IrrationalSpectrum(f"eigenvalue {r} on the support of vertex {v} is irrational")
    normalize_spectrum(_support(c, v, _exact_spectrum(spec)))
    return True


@dataclass(frozen=True)
class PSTCertificate:
    pair: tuple[int, int]
    spectrum: NormalizedSpectrum
    C: Fraction
    table: tuple[tuple[Fraction, int, Fraction, Fraction, int], ...]
    time: float
    fidelity: float
    amplitude: complex

    def __bool__(self) -> bool:
        return True

    def to_json(self) -> dict:
        fmt = format_fraction
        return {
            "pst": True,
            "pair": list(self.pair),
            "spectrum": [fmt(v) for v in self.spectrum.values],
            "normalized": list(self.spectrum.ints),
            "shift": fmt(self.spectrum.shift),
            "scale": fmt(self.spectrum.scale),
            "C": fmt(self.C),
            "table": [
                {"theta": fmt(th), "n": n, "p_l": fmt(pl), "p_m": fmt(pm), "sign": sg}
                for th, n, pl, pm, sg in self.table
            ],
            "time": self.time,
            "fidelity": self.fidelity,
            "phase": [self.amplitude.real, self.amplitude.imag],
        }


@dataclass(frozen=True)
class NoPST:
    pair: tuple[int, int]
    reason: str

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"pst": False, "pair": list(self.pair), "reason": self.reason}


def check_pst(c: Chain, l: int, m: int, spec: SpectralData | None = None):
    """Exact PST certificate between ``l`` and ``m`` or :class:`NoPST`.

    ``C`` is reported for the ordered pair ``(min, max)`` so that swapping the
    arguments gives the same certificate.
    """
    c.check_vertex(l)
    c.check_vertex(m)
    if l == m:
        raise ValueError("need two distinct vertices")
    l, m = min(l, m), max(l, m)
    spec = spec or eigen(c)
    ops = ops_from_chain(c)
    p_l, p_m = ops[l], ops[m]
    values = []
    for r in spec.eigenvalues:
        if r.exact is None:
            if p_l.evalf(r.witness) == 0 and p_m.evalf(r.witness) == 0:
                continue
            raise IrrationalSpectrum(f"irrational eigenvalue {r}; use pst_numeric_evidence")
        values.append(r.exact)
    support = [th for th in values if p_l(th) != 0 or p_m(th) != 0]
    norm = normalize_spectrum(support)
    C = None
    table = []
    for s, th in enumerate(norm.values):
        a, b = p_l(th), p_m(th)
        sg = norm.parity(s)
        if a == 0 or b == 0:
            return NoPST((l, m), f"only one of p_{l}, p_{m} vanishes at {format_fraction(th)}")
        ratio = a / b * sg
        if C is None:
            C = ratio
        elif ratio != C:
            return NoPST(
                (l, m),
                f"sign condition fails at theta = {format_fraction(th)}: ratio {format_fraction(ratio)} != {format_fraction(C)}",
            )
        table.append((th, norm.ints[s], a, b, sg))
    if C is None or C <= 0:
        return NoPST((l, m), "no positive constant")
    t = math.pi / float(norm.scale)
    amp = transition_amplitude(c, t, l, m, spec)
    fid = abs(amp)
    if fid < 1 - FIDELITY_TOL:
        raise CertificationFailure(f"exact sign condition holds but fidelity at t = {t} is {fid}")
    return PSTCertificate((l, m), norm, C, tuple(table), t, fid, amp)


@dataclass(frozen=True)
class NumericEvidence:
    """Best transfer found on a time grid; evidence only."""

    pair: tuple[int, int]
    time: float
    fidelity: float
    phase: complex

    def to_json(self) -> dict:
        return {
            "pair": list(self.pair),
            "time": self.time,
            "fidelity": self.fidelity,
            "phase": [self.phase.real, self.phase.imag],
            "certified": False,
        }


def pst_numeric_evidence(
    c: Chain, l: int, m: int, t_max: float | None = None, steps: int = 4000
) -> NumericEvidence:
    """Maximize ``|<m|exp(itJ)|l>|`` over ``(0, t_max]`` by grid search plus golden section."""
    spec = eigen(c)
    vals = np.sort(spec.values)
    if t_max is None:
        gaps = np.diff(vals)
        t_max = 2 * math.pi / float(gaps.min()) if len(gaps) else 2 * math.pi
    U = spec.vectors
    w = U[m, :] * U[l, :]

    def fid(t: float) -> float:
        return float(abs(np.sum(np.exp(1j * t * spec.values) * w)))

    ts = np.linspace(t_max / steps, t_max, steps)
    fs = np.abs(np.exp(1j * np.outer(ts, spec.values)) @ w)
    k = int(np.argmax(fs))
    lo = ts[max(k - 1, 0)] if k > 0 else 0.0
    hi = ts[min(k + 1, steps - 1)]
    g = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    x1, x2 = b - g * (b - a), a + g * (b - a)
    f1, f2 = fid(x1), fid(x2)
    for _ in range(80):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + g * (b - a)
            f2 = fid(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - g * (b - a)
            f1 = fid(x1)
    best_t = (a + b) / 2
    if fs[k] > fid(best_t):
        best_t = float(ts[k])
    amp = complex(np.sum(np.exp(1j * best_t * spec.values) * w))
    return NumericEvidence((min(l, m), max(l, m)), best_t, abs(amp), amp / abs(amp) if abs(amp) else 0j)


# ---------------------------------------------------------------------------
# sign patterns


@dataclass(frozen=True)
class SignPattern:
    """Signs of ``p_m`` on a decreasing spectrum (no zeros)."""

    spectrum: tuple[Fraction, ...]
    signs: tuple[int, ...]

    @classmethod
    def from_poly(cls, p_m: Poly, spectrum: Iterable) -> SignPattern:
        vals = sorted((as_fraction(v) for v in spectrum), reverse=True)
        signs = []
        for v in vals:
            x = p_m(v)
            if x == 0:
                raise ValueError(f"p_m vanishes at {format_fraction(v)}")
            signs.append(1 if x > 0 else -1)
        return cls(tuple(vals), tuple(signs))

    @property
    def plus(self) -> list[Fraction]:
        return [v for v, s in zip(self.spectrum, self.signs) if s > 0]

    @property
    def minus(self) -> list[Fraction]:
        return [v for v, s in zip(self.spectrum, self.signs) if s < 0]

    def runs(self) -> list[list[int]]:
        """Index runs of equal sign, along decreasing eigenvalues."""
        out: list[list[int]] = []
        for i, s in enumerate(self.signs):
            if out and self.signs[out[-1][0]] == s:
                out[-1].append(i)
            else:
                out.append([i])
        return out


def _as_signs(sp) -> tuple[int, ...]:
    if isinstance(sp, SignPattern):
        return sp.signs
    out = []
    for s in sp:
        if s in ("+", 1, True):
            out.append(1)
        elif s in ("-", -1):
            out.append(-1)
        else:
            raise ValueError(f"bad sign {s!r}")
    return tuple(out)


def admissible_pattern(sp, m: int) -> bool:
    """Necessary shape of the signs of a degree-``m`` transfer polynomial.

    Along decreasing eigenvalues the signs form ``m+1`` alternating runs; the
    first is a single ``+``, the last a single sign ``(-1)^m``, and each inner
    run has length 1 or 2.
    """
    signs = _as_signs(sp)
    if not signs:
        return False
    runs = [len(list(g)) for _, g in itertools.groupby(signs)]
    if len(runs) != m + 1:
        return False
    if signs[0] != 1 or signs[-1] != (-1) ** m:
        return False
    if runs[0] != 1 or runs[-1] != 1:
        return False
    return all(r in (1, 2) for r in runs[1:-1])


# ---------------------------------------------------------------------------
# building PST chains from integer spectra


@dataclass(frozen=True)
class PSTInterpolant:
    p_m: Poly
    C: Fraction
    spectrum: tuple[int, ...]

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Infeasible:
    reason: str
    interpolant: Poly | None = None

    def __bool__(self) -> bool:
        return False


def _int_spectrum(spectrum: Iterable) -> list[int]:
    out = []
    for v in spectrum:
        q = as_fraction(v)
        if q.denominator != 1:
            raise ValueError(f"spectrum must be integral, got {format_fraction(q)}")
        out.append(int(q))
    if len(set(out)) != len(out):
        raise ValueError("spectrum must consist of distinct values")
    return sorted(out, reverse=True)


def pst_interpolant(spectrum: Iterable, m: int):
    """``p_m`` with ``p_m(theta_s) = (-1)^(theta_0 - theta_s) C``, or :class:`Infeasible`."""
    theta = _int_spectrum(spectrum)
    if not 0 <= m < len(theta):
        raise ValueError(f"m = {m} out of range for {len(theta)} eigenvalues")
    pts = [(t, 1 if (theta[0] - t) % 2 == 0 else -1) for t in theta]
    g = lagrange_interpolate(pts)
    if g.degree != m:
        return Infeasible(f"interpolant has degree {g.degree}, need {m}", g)
    if g.lead <= 0:
        return Infeasible("interpolant has a non-positive leading coefficient", g)
    p_m = g.monic()
    if not is_real_rooted(p_m):
        return Infeasible("interpolant is not real-rooted", g)
    top = poly_from_roots(theta)
    if not strongly_interlaces(p_m, top):
        return Infeasible("interpolant does not strongly interlace the spectrum", g)
    return PSTInterpolant(p_m, 1 / g.lead, tuple(theta))


def build_pst_chain(spectrum: Iterable, m: int) -> Chain:
    """Chain with the given integer spectrum and PST between 0 and ``m`` at time pi."""
    chain, _ = build_pst_chain_certified(spectrum, m)
    return chain


def build_pst_chain_certified(spectrum: Iterable, m: int) -> tuple[Chain, PSTCertificate]:
    interp = pst_interpolant(spectrum, m)
    if not interp:
        raise InfeasibleSpectrum(interp.reason)
    cert = build_ops(interp.p_m, poly_from_roots(interp.spectrum))
    pst = check_pst(cert.chain, 0, m)
    if not pst:
        raise CertificationFailure(f"built chain fails the PST check: {pst.reason}")
    return cert.chain, pst


def shrink(p_m: Poly, spectrum: Iterable, d_target: int) -> list[Fraction]:
    """Drop ``d - d_target`` eigenvalues while keeping the transfer structure.

    Each dropped eigenvalue is the smaller of a pair that sits between two
    consecutive roots of ``p_m``; pairs are taken from the left.
    """
    sp = SignPattern.from_poly(p_m, spectrum)
    d = len(sp.spectrum) - 1
    m = p_m.degree
    if not m <= d_target <= d:
        raise ValueError(f"need {m} <= d_target <= {d}")
    k = d - d_target
    runs = sp.runs()[1:-1]
    doubles = [r for r in runs if len(r) == 2]
    doubles.sort(key=lambda r: sp.spectrum[r[1]])  # leftmost first
    if len(doubles) < k:
        raise NotEnoughSlack(f"need {k} doubly occupied gaps, found {len(doubles)}")
    drop = {r[1] for r in doubles[:k]}  # r[1] is the smaller eigenvalue
    return [v for i, v in enumerate(sp.spectrum) if i not in drop]


# ---------------------------------------------------------------------------
# exhaustive scan at the half position


def _scan_chunk(args) -> list[tuple[int, ...]]:
    d, bound, second = args
    m = (d + 2) // 2  # ceil((d+1)/2)
    lo = -bound
    found = []
    for rest in itertools.combinations(range(second + 1, bound + 1), d - 1):
        spec = (lo, second) + rest
        if pst_interpolant(spec, m):
            found.append(tuple(sorted(spec, reverse=True)))
    return found


def scan_no_pst_half(d: int, bound: int, workers: int | None = None) -> list[tuple[int, ...]]:
    """Integer spectra in ``[-bound, bound]`` that admit PST between 0 and ``ceil((d+1)/2)``.

    Spectra are enumerated up to translation by fixing the smallest element at
    ``-bound``. Results are sorted, so the output does not depend on ``workers``
    (default: ``CHAINFORGE_WORKERS`` or 1).
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    if workers is None:
        workers = int(os.environ.get("CHAINFORGE_WORKERS", "1") or 1)
    jobs = [(d, bound, s) for s in range(-bound + 1, bound + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_chunk, jobs))
    else:
        parts = [_scan_chunk(j) for j in jobs]
    return sorted(itertools.chain.from_iterable(parts))


def scan_count(d: int, bound: int) -> int:
    """Number of spectra examined by :func:`scan_no_pst_half`."""
    return math.comb(2 * bound, d)
