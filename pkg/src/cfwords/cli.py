"""Command line front end.

Subcommands: orbit, word, complexity, bispecial, conjugacy, lyapunov,
balance. Output is deterministic byte for byte for fixed arguments (seeds
included), so reports can be diffed across runs. Exit codes: 0 success,
1 audit or computation failure, 2 usage error. The CFWORDS_FORMAT
environment variable sets the default output format and nothing else.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import factors, metrics, morphisms, sadic
from .exactlin import DomainError, Vector3, mat_mul, vector_payload
from .mcf import (C1, C2, CASSAIGNE, S1, S2, SELMER, Z, NonExpansiveError,
                  cocycle, conjugate_to_selmer, orbit_steps, step_cassaigne,
                  step_selmer)
from .morphisms import apply, c1, c2, compose, s1, s2, z_left, z_right
from .sadic import NonConvergentError

FORMATS = ("text", "json", "csv")
ENV_FORMAT = "CFWORDS_FORMAT"

PRESETS = {
    "golden-e-pi": (1.0, math.e, math.pi),
}


class UsageError(ValueError):
    """Bad arguments; reported on stderr with exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    fmt: str
    out: Optional[str]
    algorithm: str = CASSAIGNE
    vector: Optional[Vector3] = None
    seed: Optional[int] = None


def parse_vector(text: str, mode: str = "auto") -> Vector3:
    """Parse 'p/q,p/q,p/q', 'a,b,c', or a named preset into a Vector3.

    Plain integers and fractions give rational mode; a decimal point or
    exponent anywhere (or a float preset) gives float64. mode=rational or
    mode=float64 forces the arithmetic.
    """
    text = text.strip()
    if text in PRESETS:
        a, b, c = PRESETS[text]
        if mode == "rational":
            raise UsageError(f"preset {text!r} is a float vector; rational mode impossible")
        return Vector3.floats(a, b, c)
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise UsageError(f"expected three comma-separated components, got {text!r}")
    floaty = any(("." in p or "e" in p.lower()) and "/" not in p for p in parts)
    use_float = mode == "float64" or (mode == "auto" and floaty)
    try:
        if use_float:
            if any("/" in p for p in parts):
                vals = [float(Fraction(p)) for p in parts]
            else:
                vals = [float(p) for p in parts]
            return Vector3.floats(*vals)
        return Vector3.exact(*(Fraction(p) for p in parts))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad vector component in {text!r}: {exc}") from None
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _scalar_text(e) -> str:
    if isinstance(e, Fraction):
        return str(e)
    return f"{float(e):.6f}"


def _emit(payload: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _json_report(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _failure(command: str, fmt: str, out: Optional[str], kind: str, message: str) -> int:
    if fmt == "json":
        _emit(_json_report({"command": command, "status": "failure",
                            "error": {"type": kind, "message": message}}), out)
    else:
        _emit(f"{command}: FAILURE ({kind}) {message}\n", out)
    return 1


def _require_format(fmt: str, allowed: tuple[str, ...], command: str) -> None:
    if fmt not in allowed:
        raise UsageError(f"format {fmt!r} is not defined for {command!r} "
                         f"(choose from {', '.join(allowed)})")


def _cmd_orbit(args) -> int:
    v = parse_vector(args.vector, args.mode)
    _require_format(args.format, ("text", "json"), "orbit")
    try:
        steps = orbit_steps(v, args.steps, args.algorithm)
        matrix, d = cocycle(v, args.steps, args.algorithm)
    except (DomainError, NonExpansiveError) as exc:
        return _failure("orbit", args.format, args.out, type(exc).__name__, str(exc))
    if args.format == "json":
        payload = {
            "command": "orbit",
            "status": "ok",
            "algorithm": args.algorithm,
            "vector": vector_payload(v),
            "steps": [
                {"branch": st.branch,
                 "before": vector_payload(st.vector_before),
                 "after": vector_payload(st.vector_after)}
                for st in steps],
            "directive": str(d),
            "cocycle": [list(row) for row in matrix.rows],
        }
        _emit(_json_report(payload), args.out)
        return 0
    lines = [f"orbit of ({', '.join(str(e) for e in vector_payload(v))}) "
             f"under {args.algorithm}"]
    for k, st in enumerate(steps):
        after = ", ".join(_scalar_text(e) for e in st.vector_after.entries())
        lines.append(f"  step {k + 1}: branch {st.branch} -> ({after})")
    lines.append(f"directive: {d}")
    lines.append("cocycle rows: " + "; ".join(" ".join(str(e) for e in row)
                                              for row in matrix.rows))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_word(args) -> int:
    v = parse_vector(args.vector, args.mode)
    _require_format(args.format, ("text", "json"), "word")
    try:
        gw = sadic.generate(v, args.length)
    except (NonConvergentError, NonExpansiveError, DomainError) as exc:
        return _failure("word", args.format, args.out, type(exc).__name__, str(exc))
    if args.format == "json":
        payload = {
            "command": "word",
            "status": "ok",
            "vector": vector_payload(v),
            "length": gw.length,
            "word": gw.word,
            "directive_prefix": str(gw.directive),
            "anchored_index": gw.anchored_index,
            "converged": gw.converged,
        }
        _emit(_json_report(payload), args.out)
    else:
        _emit(gw.word + "\n", args.out)
    return 0


def _cmd_complexity(args) -> int:
    v = parse_vector(args.vector, args.mode)
    try:
        gw = sadic.generate(v, args.length)
        gw2 = sadic.generate(v, 2 * args.length)
        idx = factors.build_index(gw.word, args.nmax, ext_max=0)
        idx2 = factors.build_index(gw2.word, args.nmax, ext_max=0)
    except (NonConvergentError, NonExpansiveError, DomainError) as exc:
        return _failure("complexity", args.format, args.out, type(exc).__name__, str(exc))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    counts = idx.complexity()
    horizon = factors.stabilized_horizon(counts, idx2.complexity())
    deviations = [(n, counts[n]) for n in range(horizon + 1) if counts[n] != 2 * n + 1]
    ok = not deviations
    if args.format == "json":
        payload = {
            "command": "complexity",
            "status": "ok" if ok else "failure",
            "vector": vector_payload(v),
            "length": args.length,
            "nmax": args.nmax,
            "horizon": horizon,
            "complexity_table": [[n, p] for n, p in enumerate(counts)],
            "deviations": [[n, p] for n, p in deviations],
            "affine_below_horizon": ok,
        }
        _emit(_json_report(payload), args.out)
    elif args.format == "csv":
        lines = ["n,p(n)"] + [f"{n},{p}" for n, p in enumerate(counts)]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        lines = [f"factor counts of the length-{args.length} prefix "
                 f"(nmax={args.nmax}, stabilized horizon {horizon})"]
        lines += [f"  p({n}) = {p}" for n, p in enumerate(counts)]
        lines.append("verdict: p(n) = 2n+1 up to the horizon" if ok else
                     "verdict: DEVIATES from 2n+1 at " +
                     ", ".join(f"n={n} (p={p})" for n, p in deviations))
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if ok else 1


def _cmd_bispecial(args) -> int:
    v = parse_vector(args.vector, args.mode)
    _require_format(args.format, ("text", "json"), "bispecial")
    try:
        report = factors.audit_tree_word(v, args.length, args.maxlen, with_chains=True)
    except (NonConvergentError, NonExpansiveError, DomainError,
            morphisms.NoDecodingError, morphisms.AmbiguousDecodingError,
            ValueError) as exc:
        return _failure("bispecial", args.format, args.out, type(exc).__name__, str(exc))
    chains = report.chains
    if args.format == "json":
        payload = report.to_json_dict()
        payload.update({
            "command": "bispecial",
            "status": "ok" if report.passed else "failure",
            "chains": [
                {"factor": f,
                 "steps": [{"block": r.block.label, "x": r.x, "y": r.y,
                            "antecedent": r.antecedent} for r in chain]}
                for f, chain in chains],
        })
        _emit(_json_report(payload), args.out)
    else:
        lines = [f"tree word audit: L={report.length} maxlen={report.maxlen} "
                 f"horizon={report.horizon}",
                 f"bispecial factors: {report.bispecial_count}",
                 f"non-ordinary sets: {len(report.non_ordinary)} "
                 f"(outside known family: {len(report.outside_family)})",
                 f"tree failures: {len(report.tree_failures)}",
                 f"complexity deviations below horizon: "
                 f"{len(report.complexity_deviations)}"]
        for f, chain in chains:
            trail = " -> ".join(
                f"{r.antecedent!r}[{r.block.label},x={r.x!r},y={r.y!r}]" for r in chain)
            lines.append(f"  chain {f!r}: {trail if trail else '(empty word)'}")
        lines.append("verdict: PASS" if report.passed else "verdict: FAIL")
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if report.passed else 1


def _cmd_conjugacy(args) -> int:
    _require_format(args.format, ("text", "json"), "conjugacy")
    checks: list[tuple[str, bool]] = []
    checks.append(("S1.Z == Z.C1", mat_mul(S1, Z).rows == mat_mul(Z, C1).rows))
    checks.append(("S2.Z == Z.C2", mat_mul(S2, Z).rows == mat_mul(Z, C2).rows))
    checks.append(("s1.z_left == z_right.c1",
                   compose(s1, z_left).images == compose(z_right, c1).images))
    checks.append(("s2.z_right == z_left.c2",
                   compose(s2, z_right).images == compose(z_left, c2).images))

    shift_ok = True
    for k in range(9):
        for letters in itertools.product("123", repeat=k):
            w = "".join(letters)
            if apply(z_left, w) + "1" != "1" + apply(z_right, w):
                shift_ok = False
                break
        if not shift_ok:
            break
    checks.append(("z_left(w).1 == 1.z_right(w) for |w| <= 8", shift_ok))

    rng = random.Random(args.seed)
    semi_ok = True
    witness = ""
    for _ in range(args.samples):
        v = Vector3.exact(Fraction(rng.randint(1, 40), rng.randint(1, 40)),
                          Fraction(rng.randint(1, 40), rng.randint(1, 40)),
                          Fraction(rng.randint(1, 40), rng.randint(1, 40)))
        stepped = step_cassaigne(v).vector_after
        lhs = step_selmer(conjugate_to_selmer(v)).vector_after
        rhs = conjugate_to_selmer(stepped)
        if lhs.entries() != rhs.entries():
            semi_ok = False
            witness = str(vector_payload(v))
            break
    checks.append((f"F_S(Zv) == Z F_C(v) on {args.samples} rational samples", semi_ok))

    ok = all(flag for _, flag in checks)
    if args.format == "json":
        payload = {
            "command": "conjugacy",
            "status": "ok" if ok else "failure",
            "seed": args.seed,
            "samples": args.samples,
            "checks": [{"name": name, "passed": flag} for name, flag in checks],
        }
        if witness:
            payload["counterexample"] = witness
        _emit(_json_report(payload), args.out)
    else:
        lines = [f"conjugacy checks (seed={args.seed}, samples={args.samples})"]
        lines += [f"  [{'ok' if flag else 'FAIL'}] {name}" for name, flag in checks]
        if witness:
            lines.append(f"  counterexample: {witness}")
        lines.append("verdict: PASS" if ok else "verdict: FAIL")
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if ok else 1


def _cmd_lyapunov(args) -> int:
    _require_format(args.format, ("text", "json"), "lyapunov")
    try:
        est = metrics.lyapunov(args.seed, args.iterations, args.renorm,
                               args.algorithm, walkers=args.walkers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        payload = est.to_json_dict()
        payload.update({"command": "lyapunov", "status": "ok"})
        _emit(_json_report(payload), args.out)
    else:
        _emit(
            f"lyapunov ({est.algorithm}, seed={est.seed}, "
            f"steps={est.steps_accumulated}, renorm={est.renorm})\n"
            f"  theta1 = {est.theta1:.6f}\n"
            f"  theta2 = {est.theta2:.6f}\n"
            f"  theta3 = {est.theta3:.6f} (zero-sum)\n"
            f"  restarts = {est.restarts}\n"
            f"  convention: {est.convention}\n", args.out)
    return 0


def _cmd_balance(args) -> int:
    v = parse_vector(args.vector, args.mode)
    try:
        gw = sadic.generate(v, args.length)
        table = metrics.balance(gw.word, args.nmax)
    except (NonConvergentError, NonExpansiveError, DomainError, ValueError) as exc:
        if isinstance(exc, (NonConvergentError, NonExpansiveError, DomainError)):
            return _failure("balance", args.format, args.out, type(exc).__name__, str(exc))
        raise UsageError(str(exc)) from None
    if args.format == "json":
        payload = table.to_json_dict()
        payload.update({
            "command": "balance",
            "status": "ok",
            "vector": vector_payload(v),
        })
        _emit(_json_report(payload), args.out)
    elif args.format == "csv":
        _emit(table.to_csv(), args.out)
    else:
        lines = [f"balance table of the length-{args.length} prefix (nmax={args.nmax})",
                 f"  overall bound observed: {table.overall}"]
        lines.append("  n: B1 B2 B3")
        for k in range(table.nmax):
            lines.append(f"  {k + 1}: {table.b1[k]} {table.b2[k]} {table.b3[k]}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfwords",
        description="Ternary continued fraction orbits and their S-adic words")
    default_fmt = os.environ.get(ENV_FORMAT, "text")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, vector=True):
        p.add_argument("--format", choices=FORMATS, default=default_fmt)
        p.add_argument("--out", default=None, help="write output to this file")
        if vector:
            p.add_argument("--vector", required=True,
                           help="'a,b,c', 'p/q,p/q,p/q', or preset golden-e-pi")
            p.add_argument("--mode", choices=("auto", "rational", "float64"),
                           default="auto")

    p = sub.add_parser("orbit", help="continued fraction steps, directive, cocycle")
    common(p)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--algorithm", choices=(CASSAIGNE, SELMER), default=CASSAIGNE)
    p.set_defaults(func=_cmd_orbit)

    p = sub.add_parser("word", help="generate a prefix of the vector's word")
    common(p)
    p.add_argument("--length", type=int, required=True)
    p.set_defaults(func=_cmd_word)

    p = sub.add_parser("complexity", help="factor counts and 2n+1 verification")
    common(p)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--nmax", type=int, default=50)
    p.set_defaults(func=_cmd_complexity)

    p = sub.add_parser("bispecial", help="tree/ordinariness audit with chains")
    common(p)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--maxlen", type=int, default=40)
    p.set_defaults(func=_cmd_bispecial)

    p = sub.add_parser("conjugacy", help="bridge identities, exact and sampled")
    common(p, vector=False)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_conjugacy)

    p = sub.add_parser("lyapunov", help="top two Lyapunov exponents")
    common(p, vector=False)
    p.add_argument("--iterations", type=int, default=10**7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--renorm", type=int, default=10)
    p.add_argument("--walkers", type=int, default=2048)
    p.add_argument("--algorithm", choices=(CASSAIGNE, SELMER), default=CASSAIGNE)
    p.set_defaults(func=_cmd_lyapunov)

    p = sub.add_parser("balance", help="balance table of a generated prefix")
    common(p)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--nmax", type=int, default=100)
    p.set_defaults(func=_cmd_balance)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"cfwords {args.command}: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
