"""``frames`` command line tool.

Every command reads a JSON problem file (``--file``, default: the bundled
worked example), prints a JSON report on stdout and exits with

* 0 when the requested property is certified,
* 1 when it fails (the report carries the residual or a witness),
* 2 on malformed input.

The tolerance comes from ``--tol``, else the ``FRAMES_TOL`` environment
variable, else each check's own default.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import duals, frames, golden, sums
from .errors import CertificationError, InputError, ParseError, SchemaError, UnknownCommand
from .measure import FrameMap, Interval
from .module import LEFT, RIGHT, ModuleOperator
from .problem import (
    Problem,
    _scalar,
    algebra_json,
    dumps,
    element_json,
    map_json,
    matrix_json,
    parse_algebra,
    parse_operator,
    parse_problem_file,
    bundled_example,
    real_or_null,
)

PASS, FAIL = 0, 1


class Context:
    def __init__(self, problem: Problem, tol: Optional[float], dump: bool):
        self.problem = problem
        self.tol = tol
        self.dump = dump

    @property
    def rule(self):
        return self.problem.rule

    def map(self, name: str) -> FrameMap:
        return self.problem.map(name)

    def maybe_dump(self, report: dict, key: str, F: FrameMap):
        if self.dump:
            report[key] = map_json(F)


def _literal(text: str, where: str):
    """Inline JSON, ``@path`` to a JSON file, or ``None`` for a plain name."""
    if text.startswith("@"):
        path = Path(text[1:])
        try:
            raw = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"{path}: {exc.strerror}") from None
    elif text.lstrip()[:1] in ("[", "{"):
        raw = text
    else:
        return None
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{where}: {exc.lineno}:{exc.colno}: {exc.msg}") from None


def resolve_operator(ctx: Context, text: str, where: str) -> ModuleOperator:
    value = _literal(text, where)
    if value is None:
        return ctx.problem.operator(text)
    p = ctx.problem
    return parse_operator(p.descriptor, p.rank, value, where)


def resolve_element(ctx: Context, text: str, where: str):
    value = _literal(text, where)
    if value is None:
        return ctx.problem.element(text)
    return parse_algebra(ctx.problem.descriptor, value, where)


def resolve_scalar(ctx: Context, text: str, where: str) -> complex:
    value = _literal(text, where)
    if value is not None:
        return _scalar(value, where)
    try:
        return complex(float(text))
    except ValueError:
        return ctx.problem.scalar(text)


def _complex_json(z: complex) -> list:
    return [float(np.real(z)) + 0.0, float(np.imag(z)) + 0.0]


def _residual_report(cert: frames.DualCertificate) -> dict:
    return {"verdict": cert.verdict, "residual_norm": cert.residual_norm, "tol": cert.tol,
            "residual": matrix_json(cert.residual.dense)}


def _status(ok: bool) -> int:
    return PASS if ok else FAIL


# commands; each returns (exit code, report)


def cmd_bounds(ctx: Context, args) -> tuple[int, dict]:
    cert = frames.certify_frame(ctx.map(args.frame), ctx.rule, ctx.tol)
    return _status(cert.holds), {"verdict": cert.verdict, "optimal": list(cert.optimal),
                                  "frame_operator": matrix_json(
                                      frames.frame_operator(ctx.map(args.frame), ctx.rule).dense)}


def cmd_verify_bounds(ctx: Context, args) -> tuple[int, dict]:
    cert = frames.verify_claimed_bounds(ctx.map(args.frame), args.lower, args.upper,
                                        ctx.rule, ctx.tol)
    report = {"verdict": cert.verdict, "claimed": list(cert.claimed),
              "optimal": list(cert.optimal), "lower_margin": cert.lower_margin,
              "upper_margin": cert.upper_margin}
    if cert.witness is not None:
        report["witness"] = element_json(cert.witness)
    return _status(cert.holds), report


def cmd_canonical_dual(ctx: Context, args) -> tuple[int, dict]:
    F = ctx.map(args.frame)
    D = frames.canonical_dual(F, ctx.rule, ctx.tol)
    cert = frames.is_dual_pair(F, D, ctx.rule, ctx.tol)
    report = {"dual": _residual_report(cert),
              "frame_operator_inverse": matrix_json(
                  frames.operator_inverse(frames.frame_operator(F, ctx.rule)).dense)}
    ctx.maybe_dump(report, "map", D)
    return _status(cert.holds), report


def cmd_dual_check(ctx: Context, args) -> tuple[int, dict]:
    cert = frames.is_dual_pair(ctx.map(args.frame), ctx.map(args.dual), ctx.rule, ctx.tol)
    return _status(cert.holds), _residual_report(cert)


def cmd_dual_seq(ctx: Context, args) -> tuple[int, dict]:
    F, G = ctx.map(args.frame), ctx.map(args.dual)
    if args.steps < 1:
        raise SchemaError("--steps must be at least 1")
    iterates, current = [], G
    for i in range(args.steps):
        if args.closed:
            current = duals.dual_sequence_closed(F, G, i, ctx.rule, args.convention,
                                                 ctx.tol, certify=False)
        else:
            current = duals.dual_sequence_step(F, current, ctx.rule, args.convention,
                                               ctx.tol, certify=False)
        iterates.append(current)
    steps, ok = [], True
    for i, V in enumerate(iterates, start=1):
        cert = frames.is_dual_pair(F, V, ctx.rule, ctx.tol)
        ok &= cert.holds
        entry = {"index": i, "verdict": cert.verdict, "residual_norm": cert.residual_norm}
        if ctx.dump:
            entry["map"] = map_json(V)
        steps.append(entry)
    return _status(ok), {"convention": args.convention, "closed_form": args.closed,
                         "iterates": steps}


def cmd_dual_decompose(ctx: Context, args) -> tuple[int, dict]:
    dec = duals.dual_decompose(ctx.map(args.frame), ctx.map(args.dual), ctx.rule, ctx.tol)
    report = {"is_dual": dec.is_dual, "nullity_residual": dec.nullity_residual}
    ctx.maybe_dump(report, "null_part", dec.null_part)
    return _status(dec.is_dual), report


def cmd_null_family(ctx: Context, args) -> tuple[int, dict]:
    F = ctx.map(args.frame)
    if args.degree < 0:
        raise SchemaError("--degree must be nonnegative")
    rule = ctx.problem.rule_for((F.degree or 0) + args.degree) if F.is_polynomial else ctx.rule
    try:
        basis = duals.null_bessel_family(F, args.degree, rule)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    residuals = [frames.cross_gram(F, L, rule).norm() for L in basis]
    worst = max(residuals, default=0.0)
    tol = 1e-9 if ctx.tol is None else ctx.tol
    report = {"degree": args.degree, "dimension": len(basis), "max_nullity_residual": worst}
    if ctx.dump:
        report["basis"] = [map_json(L) for L in basis]
    return _status(worst <= tol), report


def cmd_k_op(ctx: Context, args) -> tuple[int, dict]:
    F, G = ctx.map(args.frame), ctx.map(args.dual)
    K, checks = duals.k_operator_from_dual(F, G, ctx.rule, samples=args.samples,
                                           rng=np.random.default_rng(args.seed), tol=ctx.tol)
    back = duals.dual_from_k_operator(F, K, ctx.rule, ctx.tol)
    round_trip = float(max(np.max(np.abs(a - b)) for a, b in
                           zip(back.tabulate(ctx.rule).parts, G.tabulate(ctx.rule).parts)))
    tol = 1e-12 if ctx.tol is None else ctx.tol
    ok = checks.synthesis_residual <= tol and checks.bound_holds and round_trip <= 1e-13 + tol
    report = {"synthesis_residual": checks.synthesis_residual,
              "sampled_norm": checks.sampled_norm, "exact_norm": checks.exact_norm,
              "norm_bound": checks.norm_bound, "round_trip_error": round_trip}
    ctx.maybe_dump(report, "null_part", K.null_part)
    return _status(ok), report


def cmd_kernel_symmetry(ctx: Context, args) -> tuple[int, dict]:
    F, G = ctx.map(args.frame), ctx.map(args.dual)
    grid = None
    if args.grid is not None:
        space = ctx.problem.space
        if args.grid < 1:
            raise SchemaError("--grid must be positive")
        if not isinstance(space, Interval) or not (F.is_polynomial and G.is_polynomial):
            raise SchemaError("--grid needs polynomial maps on an interval")
        grid = np.linspace(space.a, space.b, args.grid)
    tol = 1e-10 if ctx.tol is None else ctx.tol
    rep = duals.kernel_symmetry_check(F, G, grid, ctx.rule, tol)
    return _status(rep.symmetric), {"symmetric": rep.symmetric,
                                    "max_deviation": rep.max_deviation,
                                    "witness": [real_or_null(w) for w in rep.witness]}


def cmd_minimality(ctx: Context, args) -> tuple[int, dict]:
    rep = duals.minimality_check(ctx.map(args.frame), ctx.map(args.dual), ctx.rule, ctx.tol)
    return _status(rep.verdict), {"holds": rep.verdict, "margin": rep.margin, "gap": rep.gap,
                                  "canonical": rep.canonical}


def cmd_sum_frame(ctx: Context, args) -> tuple[int, dict]:
    X1 = resolve_operator(ctx, args.op1, "--op1")
    X2 = resolve_operator(ctx, args.op2, "--op2")
    H, cert = sums.operator_sum_frame(ctx.map(args.frame), ctx.map(args.dual), X1, X2,
                                      ctx.rule, ctx.tol)
    report = {"hypothesis_residual": cert.hypothesis_residual,
              "guaranteed": list(cert.guaranteed), "optimal": list(cert.optimal),
              "lower_margin": cert.lower_margin, "upper_margin": cert.upper_margin,
              "holds": cert.holds}
    ctx.maybe_dump(report, "map", H)
    return _status(cert.holds), report


def cmd_sum_dual(ctx: Context, args) -> tuple[int, dict]:
    F, G, K = ctx.map(args.frame), ctx.map(args.dual), ctx.map(args.other)
    modes = [m for m, present in (("operators", args.op1 or args.op2),
                                  ("scalars", args.alpha or args.beta),
                                  ("central", args.a1 or args.a2)) if present]
    if len(modes) != 1:
        raise SchemaError("give exactly one of --op1/--op2, --alpha/--beta or --a1/--a2")
    mode = modes[0]
    report: dict = {"mode": mode}
    if mode == "operators":
        if not (args.op1 and args.op2):
            raise SchemaError("--op1 and --op2 are both required")
        X1 = resolve_operator(ctx, args.op1, "--op1")
        X2 = resolve_operator(ctx, args.op2, "--op2")
        res = sums.operator_sum_dual(F, G, K, X1, X2, ctx.rule, ctx.tol)
        out, cert = res.map, res.certificate
        report["sum_residual"] = res.iff_residual
    elif mode == "scalars":
        if not (args.alpha and args.beta):
            raise SchemaError("--alpha and --beta are both required")
        alpha = resolve_scalar(ctx, args.alpha, "--alpha")
        beta = resolve_scalar(ctx, args.beta, "--beta")
        report["alpha"], report["beta"] = _complex_json(alpha), _complex_json(beta)
        out = sums.affine_sum_dual(F, G, K, alpha, beta, ctx.rule, ctx.tol)
        cert = frames.is_dual_pair(F, out, ctx.rule, ctx.tol)
    else:
        if not (args.a1 and args.a2):
            raise SchemaError("--a1 and --a2 are both required")
        a1 = resolve_element(ctx, args.a1, "--a1")
        a2 = resolve_element(ctx, args.a2, "--a2")
        out = sums.central_sum_dual(F, G, K, a1, a2, ctx.rule, ctx.tol)
        cert = frames.is_dual_pair(F, out, ctx.rule, ctx.tol)
    report["dual"] = _residual_report(cert)
    ctx.maybe_dump(report, "map", out)
    return _status(cert.holds), report


def cmd_scaled(ctx: Context, args) -> tuple[int, dict]:
    a = resolve_element(ctx, args.element, "--element")
    rep = sums.scaled_map(a, ctx.map(args.frame), ctx.rule, samples=args.samples,
                          rng=np.random.default_rng(args.seed))
    tol = 1e-10 if ctx.tol is None else ctx.tol
    residuals = [rep.unitary_residual] if rep.unitary_residual is not None else []
    residuals += list((rep.central_residuals or {}).values())
    ok = rep.bound_holds and all(r <= tol * (1 + rep.claimed_bound) for r in residuals)
    report = {"element": algebra_json(a), "bessel_bound": rep.bessel_bound,
              "claimed_bound": rep.claimed_bound, "bound_holds": rep.bound_holds,
              "unitary_residual": rep.unitary_residual,
              "central_residuals": rep.central_residuals}
    ctx.maybe_dump(report, "map", rep.map)
    return _status(ok), report


def cmd_riesz(ctx: Context, args) -> tuple[int, dict]:
    d = frames.riesz_type_diagnostic(ctx.map(args.frame), ctx.rule, ctx.tol)
    return PASS, {"verdict": d.verdict, "rank": d.rank, "domain_dim": d.domain_dim,
                  "codomain_dim": d.codomain_dim, "structural": d.structural,
                  "smallest_kept": real_or_null(d.smallest_kept),
                  "largest_dropped": d.largest_dropped}


def cmd_example25(ctx: Optional[Context], args) -> tuple[int, dict]:
    tol = None if ctx is None else ctx.tol
    checks = golden.run_example25(tol)
    ok = all(c.passed for c in checks)
    return _status(ok), {"passed": sum(c.passed for c in checks), "total": len(checks),
                         "checks": [{"name": c.name, "error": c.error, "tol": c.tol,
                                     "passed": c.passed} for c in checks]}


COMMANDS: dict[str, Callable] = {
    "bounds": cmd_bounds,
    "verify-bounds": cmd_verify_bounds,
    "canonical-dual": cmd_canonical_dual,
    "dual-check": cmd_dual_check,
    "dual-seq": cmd_dual_seq,
    "dual-decompose": cmd_dual_decompose,
    "null-family": cmd_null_family,
    "k-op": cmd_k_op,
    "kernel-symmetry": cmd_kernel_symmetry,
    "minimality": cmd_minimality,
    "sum-frame": cmd_sum_frame,
    "sum-dual": cmd_sum_dual,
    "scaled": cmd_scaled,
    "riesz-diagnostic": cmd_riesz,
    "example25": cmd_example25,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--file", help="problem file (default: bundled worked example)")
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                        help="tolerance for every check (default: $FRAMES_TOL or per check)")
    common.add_argument("--dump", action="store_true", default=argparse.SUPPRESS,
                        help="include coefficients of constructed maps")

    parser = argparse.ArgumentParser(prog="frames", parents=[common],
                                     description="Certify frames and their duals.")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def add(name, help_, frame=True, dual=False):
        p = sub.add_parser(name, parents=[common], help=help_)
        if frame:
            p.add_argument("--frame", default="F")
        if dual:
            p.add_argument("--dual", default="G")
        return p

    add("bounds", "optimal frame bounds")
    p = add("verify-bounds", "check claimed frame bounds")
    p.add_argument("--lower", type=float, required=True)
    p.add_argument("--upper", type=float, required=True)
    add("canonical-dual", "canonical dual and its certificate")
    add("dual-check", "certify a dual pair", dual=True)
    p = add("dual-seq", "sequence of duals built from a dual", dual=True)
    p.add_argument("--steps", type=int, default=5)
    p.add_argument("--convention", choices=[RIGHT, LEFT], default=RIGHT)
    p.add_argument("--closed", action="store_true", help="use the closed form")
    add("dual-decompose", "split a dual into canonical and null parts", dual=True)
    p = add("null-family", "basis of polynomial null parts")
    p.add_argument("--degree", type=int, default=1)
    for name, help_ in (("k-op", "operator attached to a dual"),
                        ("scaled", "frame scaled by an algebra element")):
        p = add(name, help_, dual=name == "k-op")
        p.add_argument("--samples", type=int, default=100 if name == "k-op" else 20)
        p.add_argument("--seed", type=int, default=0)
    sub.choices["scaled"].add_argument("--element", required=True)
    p = add("kernel-symmetry", "symmetry of the reconstruction kernel", dual=True)
    p.add_argument("--grid", type=int, help="uniform grid size (default: quadrature nodes)")
    add("minimality", "frame operator of a dual against the canonical one", dual=True)
    p = add("sum-frame", "frame from a frame, a dual and two operators", dual=True)
    p.add_argument("--op1", required=True)
    p.add_argument("--op2", required=True)
    p = add("sum-dual", "dual from two duals", dual=True)
    p.add_argument("--other", required=True, help="second dual")
    for flag in ("--op1", "--op2", "--alpha", "--beta", "--a1", "--a2"):
        p.add_argument(flag)
    add("riesz-diagnostic", "does the frame have a unique dual")
    add("example25", "reproduce the worked example", frame=False)
    return parser


def resolve_tol(args) -> Optional[float]:
    if getattr(args, "tol", None) is not None:
        tol = args.tol
    else:
        env = os.environ.get("FRAMES_TOL")
        if env is None or not env.strip():
            return None
        try:
            tol = float(env)
        except ValueError:
            raise SchemaError(f"FRAMES_TOL={env!r} is not a number") from None
    if not np.isfinite(tol) or tol <= 0:
        raise SchemaError(f"tolerance must be positive, got {tol}")
    return tol


def execute(command: str, args, problem: Optional[Problem], tol: Optional[float] = None,
            dump: bool = False) -> tuple[int, dict]:
    """Run one command and return ``(exit code, report)``."""
    if command not in COMMANDS:
        raise UnknownCommand(f"unknown command {command!r}")
    ctx = None if problem is None else Context(problem, tol, dump)
    code, body = COMMANDS[command](ctx, args)
    report = {"command": command, "status": "pass" if code == PASS else "fail"}
    if tol is not None:
        report["tol"] = tol
    report.update(body)
    return code, report


def _emit(report: dict, stream) -> None:
    stream.write(dumps(report) + "\n")


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        tol = resolve_tol(args)
        problem = None
        if args.command != "example25" or args.file:
            problem = parse_problem_file(args.file or bundled_example())
        code, report = execute(args.command, args, problem, tol, getattr(args, "dump", False))
    except InputError as exc:
        print(f"frames: error: {exc}", file=sys.stderr)
        _emit({"command": args.command, "status": "error",
               "error": type(exc).__name__, "message": str(exc)}, sys.stdout)
        return 2
    except CertificationError as exc:
        print(f"frames: {type(exc).__name__}: {exc}", file=sys.stderr)
        _emit({"command": args.command, "status": "fail", "error": type(exc).__name__,
               "message": str(exc), "residual": real_or_null(exc.residual)}, sys.stdout)
        return 1
    _emit(report, sys.stdout)
    return code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
