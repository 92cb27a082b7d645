"""``chainforge`` command line.

Results go to stdout as JSON, a one-line summary to stderr. Exit status is 0
on success, 2 when a check ran and came out negative, 1 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from typing import Callable

from . import __version__
from .chain import (
    Chain,
    alpha,
    eigen,
    ops_from_chain,
    transition_amplitude,
)
from .cospec import construct_cospectral, extend_cospectral, is_cospectral
from .errors import ChainforgeError
from .io import (
    RunManifest,
    dumps,
    load_chain,
    load_json,
    load_poly,
    parse_ints,
    parse_rationals,
    sha256_file,
    sha256_text,
    to_jsonable,
)
from .opsbuild import BuildOptions, build_ops
from .poly import Poly, format_fraction, poly_from_roots
from .pst import (
    build_pst_chain_certified,
    check_pst,
    pst_interpolant,
    pst_numeric_evidence,
    scan_count,
    scan_no_pst_half,
    shrink,
)
from .pte import (
    E1,
    E2,
    F1,
    F2,
    PTESolution,
    chain_to_pte,
    halved_spectrum,
    kleiman,
    pte_interlacing_check,
    pte_poly_gap,
    pte_to_chain,
    pte_to_pst_chain,
    search_pte,
    verify_pte,
)

OK, NEGATIVE, ERROR = 0, 2, 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(ERROR)


class Outcome:
    """Result of a subcommand: JSON payload, exit status and a summary line."""

    def __init__(self, payload, status: int = OK, summary: str = "", lines: list | None = None):
        self.payload = payload
        self.status = status
        self.summary = summary
        self.lines = lines


# ---------------------------------------------------------------------------
# helpers


def emit_fidelity_table(c: Chain, l: int, m: int, t_max: float, steps: int) -> list[tuple[float, float]]:
    """Rows ``(t, |<m|exp(itJ)|l>|^2)`` on an even grid from 0 to ``t_max``."""
    if steps < 2:
        raise ValueError("steps must be at least 2")
    spec = eigen(c)
    rows = []
    for k in range(steps):
        t = t_max * k / (steps - 1)
        rows.append((t, abs(transition_amplitude(c, t, l, m, spec)) ** 2))
    return rows


def _pair(values) -> tuple[int, int]:
    if len(values) != 2:
        raise UsageError("--pair takes two vertices")
    return int(values[0]), int(values[1])


def _sol_from_args(args) -> PTESolution:
    if getattr(args, "file", None):
        obj = load_json(args.file)
        E, F = obj["E"], obj["F"]
    elif args.E is not None and args.F is not None:
        E, F = parse_ints(args.E), parse_ints(args.F)
    else:
        raise UsageError("give --file or both --E and --F")
    sol = verify_pte(E, F)
    if not sol:
        raise UsageError(f"not a PTE solution: {sol.reason}")
    return sol


def _spectrum(text: str) -> list[int]:
    return parse_ints(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_build(args) -> Outcome:
    q_m, q_top = load_poly(args.qm), load_poly(args.qtop)
    mu = args.mu
    if mu not in ("midpoint", "random"):
        mu = parse_rationals(mu)
    rho = parse_rationals(args.rho) if args.rho else None
    lam = Fraction(args.Lambda) if args.Lambda else None
    opts = BuildOptions(mu=mu, seed=args.seed, rho=rho, lambda_=lam)
    cert = build_ops(q_m, q_top, opts)
    return Outcome(cert.to_json(), OK, f"built a {cert.d}-chain through p_{cert.m} and p_{cert.d + 1}")


def cmd_chain(args) -> Outcome:
    c = load_chain(args.chain)
    if args.action == "eigen":
        spec = eigen(c)
        payload = {
            "eigenvalues": [str(r) for r in spec.eigenvalues],
            "exact": [None if r.exact is None else format_fraction(r.exact) for r in spec.eigenvalues],
            "values": spec.values.tolist(),
            "vectors": spec.vectors.tolist(),
            "norms": spec.norms.tolist(),
        }
        return Outcome(payload, OK, f"{c.size} eigenvalues")
    if args.action == "ops":
        ops = ops_from_chain(c)
        return Outcome({"ops": [p.to_json() | {"text": str(p)} for p in ops]}, OK, f"p_0..p_{c.d + 1}")
    if args.action == "alpha":
        if args.vertex is None:
            raise UsageError("alpha needs --vertex")
        fn = alpha(c, args.vertex)
        return Outcome({"vertex": args.vertex, "num": fn.num, "den": fn.den, "text": str(fn)}, OK, str(fn))
    if args.action == "amplitude":
        if args.source is None or args.target is None or args.t is None:
            raise UsageError("amplitude needs --t, --from and --to")
        amp = transition_amplitude(c, args.t, args.source, args.target)
        payload = {"t": args.t, "from": args.source, "to": args.target, "amplitude": [amp.real, amp.imag], "abs": abs(amp)}
        return Outcome(payload, OK, f"|amplitude| = {abs(amp):.12f}")
    raise UsageError(f"unknown chain action {args.action}")


def cmd_cospec(args) -> Outcome:
    if args.action == "check":
        c = load_chain(args.chain)
        l, m = _pair(args.pair)
        res = is_cospectral(c, l, m, mode="exact" if args.exact else "auto")
        return Outcome(res.to_json(), OK if res else NEGATIVE, "cospectral" if res else res.reason)
    if args.action == "construct":
        c = construct_cospectral(args.l, args.m, args.d, parse_ints(args.odd_choice) if args.odd_choice else None)
        cert = is_cospectral(c, args.l, args.m, mode="exact" if args.exact else "auto")
        if not cert:
            return Outcome({"chain": c, "certificate": cert}, NEGATIVE, "construction did not certify")
        return Outcome({"chain": c, "certificate": cert}, OK, f"{cert.mode} certificate at ({args.l}, {args.m})")
    if args.action == "extend":
        c = load_chain(args.chain)
        l, m = _pair(args.pair)
        u = Fraction(args.u) if args.u is not None else None
        out = extend_cospectral(c, l, m, args.k, u)
        cert = is_cospectral(out, l + args.k, m + args.k, mode="exact" if args.exact else "auto")
        status = OK if cert else NEGATIVE
        return Outcome({"chain": out, "certificate": cert}, status, f"extended by {args.k}")
    raise UsageError(f"unknown cospec action {args.action}")


def cmd_pst(args) -> Outcome:
    if args.action == "check":
        c = load_chain(args.chain)
        l, m = _pair(args.pair)
        if args.numeric:
            ev = pst_numeric_evidence(c, l, m, t_max=args.t_max)
            return Outcome(ev.to_json(), OK, f"best fidelity {ev.fidelity:.12f} at t = {ev.time:.6f}")
        res = check_pst(c, l, m)
        return Outcome(res.to_json(), OK if res else NEGATIVE, "PST certified" if res else res.reason)
    if args.action == "build":
        spectrum = _spectrum(args.spectrum)
        chain, cert = build_pst_chain_certified(spectrum, args.m)
        return Outcome({"chain": chain.to_json(spectrum), "certificate": cert}, OK, f"PST between 0 and {args.m}")
    if args.action == "shrink":
        spectrum = _spectrum(args.spectrum)
        if args.pm:
            p_m = load_poly(args.pm)
        else:
            interp = pst_interpolant(spectrum, args.m)
            if not interp:
                raise UsageError(f"no transfer polynomial: {interp.reason}")
            p_m = interp.p_m
        reduced = shrink(p_m, spectrum, args.d_target)
        payload = {"spectrum": reduced, "p_m": p_m}
        status = OK
        if args.certify:
            chain, cert = build_pst_chain_certified(reduced, p_m.degree)
            payload.update(chain=chain, certificate=cert)
        return Outcome(payload, status, f"kept {len(reduced)} eigenvalues")
    if args.action == "scan":
        found = scan_no_pst_half(args.d, args.bound, args.workers)
        lines = [{"spectrum": list(s)} for s in found]
        summary = {"summary": True, "d": args.d, "bound": args.bound, "examined": scan_count(args.d, args.bound), "found": len(found)}
        return Outcome(summary, OK if found else NEGATIVE, f"{len(found)} feasible spectra", lines=lines)
    raise UsageError(f"unknown pst action {args.action}")


def cmd_pte(args) -> Outcome:
    if args.action == "verify":
        if args.file:
            obj = load_json(args.file)
            E, F = obj["E"], obj["F"]
        else:
            E, F = parse_ints(args.E or ""), parse_ints(args.F or "")
        res = verify_pte(E, F)
        if not res:
            return Outcome(res.to_json(), NEGATIVE, res.reason)
        ok, diff, fact = kleiman(res.E, res.F)
        payload = res.to_json() | {
            "valid": True,
            "gap": pte_poly_gap(res.E, res.F),
            "kleiman": {"divides": ok, "difference": diff, "factorial": fact},
            "interlacing": pte_interlacing_check(res.E, res.F),
        }
        return Outcome(payload, OK, f"valid {res.cls} of size {res.n}")
    if args.action == "search":
        sols = search_pte(args.n, args.lo, args.hi, args.cls, dedupe_translations=not args.literal)
        lines = [s.to_json() for s in sols]
        summary = {"summary": True, "n": args.n, "lo": args.lo, "hi": args.hi, "found": len(sols)}
        return Outcome(summary, OK if sols else NEGATIVE, f"{len(sols)} solutions", lines=lines)
    if args.action == "to-chain":
        sol = _sol_from_args(args)
        chain = pte_to_chain(sol, even=True if args.even else None)
        return Outcome({"solution": sol, "chain": chain}, OK, f"{chain.d}-chain")
    if args.action == "to-pst-chain":
        sol = _sol_from_args(args)
        chain = pte_to_pst_chain(sol)
        cert = check_pst(chain, 0, sol.n)
        return Outcome({"solution": sol, "chain": chain, "certificate": cert}, OK if cert else NEGATIVE, f"{chain.d}-chain")
    if args.action == "from-chain":
        c = load_chain(args.chain)
        sol = chain_to_pte(c, args.m)
        return Outcome(sol.to_json(), OK, f"{sol.cls} of size {sol.n}")
    raise UsageError(f"unknown pte action {args.action}")


# ---------------------------------------------------------------------------
# reproductions


def repro_example_6_1() -> Outcome:
    q_m = Poly(["-5/2", 0, 1])
    q_top = poly_from_roots([2, 1, -1, -2])
    cert = build_ops(q_m, q_top)
    ops = ops_from_chain(cert.chain)
    pst = check_pst(cert.chain, 0, 2)
    cos = is_cospectral(cert.chain, 0, 2, mode="exact")
    checks = {
        "p_2 == x^2 - 5/2": ops[2] == q_m,
        "p_4 == x^4 - 5x^2 + 4": ops[4] == q_top,
        "fidelity >= 1 - 1e-9": bool(pst) and pst.fidelity >= 1 - 1e-9,
        "cospectral (0, 2)": bool(cos),
    }
    payload = {"build": cert, "pst": pst, "cospectral": cos, "checks": checks}
    ok = all(checks.values())
    return Outcome(payload, OK if ok else NEGATIVE, "3-chain with PST between 0 and 2" if ok else "check failed")


_P5 = Poly(["-315/4", 144, 40, -25, "-5/2", 1])
_SEVEN_SPECTRUM = [5, 4, 3, 1, 0, -2, -3, -4]


def repro_seven_chain() -> Outcome:
    sol = verify_pte(E1, F1)
    chain = pte_to_pst_chain(sol)
    spec = eigen(chain).exact_values()
    pst = check_pst(chain, 0, 5)
    checks = {
        "spectrum": sorted(spec, reverse=True) == [Fraction(v) for v in _SEVEN_SPECTRUM],
        "p_5": ops_from_chain(chain)[5] == _P5,
        "pst (0, 5)": bool(pst) and pst.fidelity >= 1 - 1e-9,
    }
    ok = all(checks.values())
    payload = {"solution": sol, "chain": chain.to_json(spec), "p_5": _P5, "pst": pst, "checks": checks}
    return Outcome(payload, OK if ok else NEGATIVE, "7-chain with PST between 0 and 5" if ok else "check failed")


def repro_six_chain() -> Outcome:
    reduced = shrink(_P5, _SEVEN_SPECTRUM, 6)
    chain, pst = build_pst_chain_certified(reduced, 5)
    checks = {
        "spectrum": reduced == [Fraction(v) for v in (5, 4, 3, 1, 0, -3, -4)],
        "p_5": ops_from_chain(chain)[5] == _P5,
        "pst (0, 5)": bool(pst) and pst.fidelity >= 1 - 1e-9,
    }
    ok = all(checks.values())
    payload = {"spectrum": reduced, "chain": chain.to_json(reduced), "pst": pst, "checks": checks}
    return Outcome(payload, OK if ok else NEGATIVE, "6-chain with PST between 0 and 5" if ok else "check failed")


def repro_pte5_list() -> Outcome:
    rows = []
    ok = True
    for E, F in ((E1, F1), (E2, F2)):
        sol = verify_pte(E, F)
        row = {"E": list(E), "F": list(F), "valid": bool(sol)}
        if sol:
            div, diff, fact = kleiman(E, F)
            row.update(
                cls=sol.cls,
                gap=pte_poly_gap(E, F),
                kleiman={"divides": div, "difference": diff, "factorial": fact},
                interlacing=pte_interlacing_check(E, F),
                halved_spectrum=halved_spectrum(sol),
            )
            ok &= sol.cls == "pte0" and div and row["interlacing"]
            try:
                chain = pte_to_pst_chain(sol)
                pst = check_pst(chain, 0, sol.n)
                row["pst_chain"] = {"chain": chain, "pst": pst}
            except ChainforgeError as exc:
                row["pst_chain"] = {"error": type(exc).__name__, "reason": str(exc)}
        else:
            ok = False
        rows.append(row)
    return Outcome({"solutions": rows}, OK if ok else NEGATIVE, "both size-5 solutions verify" if ok else "check failed")


REPROS: dict[str, Callable[[], Outcome]] = {
    "example-6-1": repro_example_6_1,
    "sec-6-1-seven-chain": repro_seven_chain,
    "sec-6-1-six-chain": repro_six_chain,
    "pte5-list": repro_pte5_list,
}


def cmd_repro(args) -> Outcome:
    return REPROS[args.name]()


def cmd_fidelity(args) -> Outcome:
    c = load_chain(args.chain)
    t_max = args.t_max if args.t_max is not None else math.pi
    rows = emit_fidelity_table(c, args.source, args.target, t_max, args.steps)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "fidelity"])
    for t, f in rows:
        w.writerow([repr(t), repr(f)])
    return Outcome(buf.getvalue(), OK, f"{len(rows)} rows, final {rows[-1][1]:.12f}")


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="chainforge", description="Weighted chains, cospectral vertices and perfect state transfer.")
    p.add_argument("--version", action="version", version=f"chainforge {__version__}")
    p.add_argument("--workers", type=int, default=None, help="process count for scans (env CHAINFORGE_WORKERS)")
    p.add_argument("--manifest", help="write the run manifest to this file")
    p.add_argument("-o", "--output", help="write the JSON result here instead of stdout")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="chain through two prescribed orthogonal polynomials")
    b.add_argument("--qm", required=True, help='JSON polynomial: {"coeffs": [...]} or {"roots": [...]}')
    b.add_argument("--qtop", required=True)
    b.add_argument("--mu", default="midpoint", help='"midpoint", "random" or comma-separated rationals')
    b.add_argument("--seed", type=int, default=None)
    b.add_argument("--rho", default=None)
    b.add_argument("--Lambda", default=None)
    b.set_defaults(func=cmd_build)

    ch = sub.add_parser("chain", help="inspect a chain")
    ch.add_argument("action", choices=["eigen", "ops", "alpha", "amplitude"])
    ch.add_argument("--chain", required=True)
    ch.add_argument("--vertex", type=int)
    ch.add_argument("--t", type=float)
    ch.add_argument("--from", dest="source", type=int)
    ch.add_argument("--to", dest="target", type=int)
    ch.set_defaults(func=cmd_chain)

    cs = sub.add_parser("cospec", help="cospectral vertices")
    cs.add_argument("action", choices=["check", "construct", "extend"])
    cs.add_argument("--chain")
    cs.add_argument("--pair", nargs=2, type=int)
    cs.add_argument("--l", type=int)
    cs.add_argument("--m", type=int)
    cs.add_argument("--d", type=int)
    cs.add_argument("--k", type=int, default=1)
    cs.add_argument("--u", default=None)
    cs.add_argument("--odd-choice", default=None)
    cs.add_argument("--exact", action="store_true", help="accept only exact certificates")
    cs.set_defaults(func=cmd_cospec)

    ps = sub.add_parser("pst", help="perfect state transfer")
    ps.add_argument("action", choices=["check", "build", "shrink", "scan"])
    ps.add_argument("--chain")
    ps.add_argument("--pair", nargs=2, type=int)
    ps.add_argument("--numeric", action="store_true")
    ps.add_argument("--t-max", type=float, default=None)
    ps.add_argument("--spectrum")
    ps.add_argument("--m", type=int)
    ps.add_argument("--pm")
    ps.add_argument("--d-target", type=int)
    ps.add_argument("--certify", action="store_true")
    ps.add_argument("--d", type=int)
    ps.add_argument("--bound", type=int)
    ps.set_defaults(func=cmd_pst)

    pt = sub.add_parser("pte", help="Prouhet-Tarry-Escott solutions")
    pt.add_argument("action", choices=["verify", "search", "to-chain", "to-pst-chain", "from-chain"])
    pt.add_argument("--file")
    pt.add_argument("--E")
    pt.add_argument("--F")
    pt.add_argument("--n", type=int)
    pt.add_argument("--lo", type=int)
    pt.add_argument("--hi", type=int)
    pt.add_argument("--class", dest="cls", choices=["pte0", "pte1", "general"])
    pt.add_argument("--literal", action="store_true", help="keep in-window translates")
    pt.add_argument("--even", action="store_true", help="even-length chain from a repeat-free solution")
    pt.add_argument("--chain")
    pt.add_argument("--m", type=int)
    pt.set_defaults(func=cmd_pte)

    rp = sub.add_parser("repro", help="rebuild a worked example")
    rp.add_argument("name", choices=sorted(REPROS))
    rp.set_defaults(func=cmd_repro)

    fd = sub.add_parser("fidelity", help="CSV of |<to|exp(itJ)|from>|^2 over time")
    fd.add_argument("--chain", required=True)
    fd.add_argument("--from", dest="source", type=int, required=True)
    fd.add_argument("--to", dest="target", type=int, required=True)
    fd.add_argument("--t-max", type=float, default=None)
    fd.add_argument("--steps", type=int, default=101)
    fd.set_defaults(func=cmd_fidelity)
    return p


_REQUIRED = {
    ("cospec", "check"): ["chain", "pair"],
    ("cospec", "construct"): ["l", "m", "d"],
    ("cospec", "extend"): ["chain", "pair"],
    ("pst", "check"): ["chain", "pair"],
    ("pst", "build"): ["spectrum", "m"],
    ("pst", "shrink"): ["spectrum", "d_target"],
    ("pst", "scan"): ["d", "bound"],
    ("pte", "search"): ["n", "lo", "hi"],
    ("pte", "from-chain"): ["chain", "m"],
}


def _check_required(args) -> None:
    key = (args.cmd, getattr(args, "action", None))
    missing = [f"--{k.replace('_', '-')}" for k in _REQUIRED.get(key, []) if getattr(args, k, None) is None]
    if key == ("pst", "shrink") and args.pm is None and args.m is None:
        missing.append("--m or --pm")
    if missing:
        raise UsageError(f"{args.cmd} {key[1]} needs {', '.join(missing)}")


def _input_files(args) -> dict[str, str]:
    out = {}
    for name in ("qm", "qtop", "chain", "file", "pm"):
        path = getattr(args, name, None)
        if isinstance(path, str):
            out[name] = sha256_file(path)
    return out


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.workers is None:
        args.workers = int(os.environ.get("CHAINFORGE_WORKERS", "1") or 1)
    try:
        _check_required(args)
        outcome = args.func(args)
    except (UsageError, ChainforgeError, ValueError, TypeError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"chainforge: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return ERROR

    if isinstance(outcome.payload, str):
        text = outcome.payload
    elif outcome.lines is not None:
        text = "".join(json.dumps(to_jsonable(x)) + "\n" for x in outcome.lines + [outcome.payload])
    else:
        text = dumps(outcome.payload) + "\n"
    options = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "manifest", "output")}
    manifest = RunManifest(
        command=["chainforge"] + argv,
        version=__version__,
        inputs=_input_files(args),
        options=options,
        seed=getattr(args, "seed", None),
        outputs={"stdout" if not args.output else args.output: sha256_text(text)},
    )
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.manifest:
        with open(args.manifest, "w") as fh:
            fh.write(dumps(manifest.to_json()) + "\n")
    if outcome.summary:
        print(outcome.summary, file=sys.stderr)
    return outcome.status


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
