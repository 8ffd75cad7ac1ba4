"""Command-line surface: analyze operators, run the difference-operator demo,
and execute the invariant check suites on a group spec.

Exit codes: 0 all verifications pass, 1 a mathematical verification failed,
2 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import jsonio
from .fiberization import fiber_context, determining_function, zak, zak_inverse, zak_matrix
from .groups import make_group, pairing, subgroup_from_generators, translate, translation_matrix
from .operators import (
    RangeOperatorField,
    check_translation_preserving,
    extract_range_operator,
    hs_trace_report,
    norm_identity_report,
    solve_range_field,
    structural_flags,
    synthesize_operator,
)
from .spaces import (
    full_range_function,
    principal_decomposition,
    range_function,
    space_from_range,
    translate_parseval_frame,
)


@dataclass(frozen=True)
class RunConfig:
    """Tolerance overrides, seed and output routing for one CLI run."""

    tol_rel: float | None = None
    tol_abs: float | None = None
    seed: int = 0
    json_out: bool = False
    out_path: str | None = None

    def __post_init__(self) -> None:
        for name, value in (("tol-rel", self.tol_rel), ("tol-abs", self.tol_abs)):
            if value is not None and not value > 0:
                raise ValueError(f"--{name} must be positive, got {value}")

    def rel_tol(self, default: float) -> float:
        return self.tol_rel if self.tol_rel is not None else default

    def abs_tol(self, default: float) -> float:
        return self.tol_abs if self.tol_abs is not None else default


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        tol_rel=args.tol_rel,
        tol_abs=args.tol_abs,
        seed=args.seed,
        json_out=args.json,
        out_path=args.out,
    )


def _load_json(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path} is not valid JSON: {exc}") from exc


def _context_from_spec(path: str):
    g, gamma = jsonio.group_spec_from_json(_load_json(path))
    return fiber_context(g, gamma)


def _emit(report: dict, cfg: RunConfig) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if cfg.out_path:
        Path(cfg.out_path).write_text(text + "\n", encoding="utf-8")
    if cfg.json_out:
        print(text)
    else:
        _print_summary(report)


def _print_summary(report: dict, indent: str = "") -> None:
    for key in sorted(report):
        value = report[key]
        if isinstance(value, dict):
            print(f"{indent}{key}:")
            _print_summary(value, indent + "  ")
        elif isinstance(value, list) and len(value) > 8:
            print(f"{indent}{key}: [{len(value)} entries]")
        else:
            print(f"{indent}{key}: {value}")


def _pipeline(ctx, u, cfg: RunConfig) -> tuple[dict, bool]:
    """check -> extract -> norm/HS/trace/structural on the full signal space."""
    rangefn = full_range_function(ctx)
    report: dict = {}
    verdict = check_translation_preserving(ctx, u, tol=cfg.abs_tol(1e-10))
    report["translation_preserving"] = {
        "passed": bool(verdict),
        "residual": verdict.residual,
        "witness_gamma": list(verdict.witness_gamma) if verdict.witness_gamma else None,
        "witness_entry": list(verdict.witness_entry) if verdict.witness_entry else None,
    }
    if not verdict:
        return report, False
    field, solve_residual = solve_range_field(ctx, u, rangefn)
    if solve_residual > cfg.abs_tol(1e-8):
        report["fiber_solve"] = {"passed": False, "residual": solve_residual}
        return report, False
    report["fiber_solve"] = {"passed": True, "residual": solve_residual}
    report["range_field"] = jsonio.field_to_json(field, rangefn)

    norm = norm_identity_report(ctx, u, field, rangefn, tol=cfg.rel_tol(1e-8))
    report["norm_identity"] = norm.to_dict()

    generators = principal_decomposition(ctx, space_from_range(ctx, rangefn))
    frame = translate_parseval_frame(ctx, generators)
    hs = hs_trace_report(ctx, u, field, rangefn, frame, tol=cfg.rel_tol(1e-8))
    report["hs_trace"] = hs.to_dict()

    structural = structural_flags(ctx, u, field, rangefn, tol=cfg.abs_tol(1e-9))
    report["structural"] = structural.to_dict()

    ok = norm.passed and hs.passed and structural.passed
    return report, ok


def cmd_analyze(args) -> int:
    cfg = _config_from_args(args)
    ctx = _context_from_spec(args.group_spec)
    u = jsonio.operator_from_json(ctx, _load_json(args.operator))
    body, ok = _pipeline(ctx, u, cfg)
    report = {
        "command": "analyze",
        "group": jsonio.group_spec_to_json(ctx.group, ctx.gamma),
        "sizes": {"group": ctx.group.size, "gamma": ctx.gamma.size, "omega": ctx.n_omega, "c": ctx.n_c},
        "seed": cfg.seed,
        "passed": ok,
    }
    report.update(body)
    _emit(report, cfg)
    return 0 if ok else 1


def cmd_demo_diffop(args) -> int:
    cfg = _config_from_args(args)
    n = args.modulus
    if n < 2:
        raise ValueError(f"modulus must be at least 2, got {n}")
    if args.step < 0:
        raise ValueError(f"step must be non-negative, got {args.step}")
    g = make_group([n])
    step = (args.step % n,)
    gamma = subgroup_from_generators(g, [step])
    ctx = fiber_context(g, gamma)
    u = np.eye(g.size, dtype=complex) - translation_matrix(g, step)

    body, ok = _pipeline(ctx, u, cfg)
    expected = [1.0 - pairing(g, step, w) for w in ctx.omega.reps]
    symbols = []
    scalar_residual = 0.0
    if "range_field" in body:
        for wi, rows in enumerate(body["range_field"]["matrices"]):
            mat = jsonio.matrix_from_json(rows, shape=(ctx.n_c, ctx.n_c))
            symbol = complex(mat[0, 0]) if ctx.n_c else 0.0
            symbols.append(symbol)
            scalar_residual = max(
                scalar_residual, float(np.abs(mat - symbol * np.eye(ctx.n_c)).max())
            )
    symbol_residual = (
        max(abs(s - e) for s, e in zip(symbols, expected)) if symbols else float("inf")
    )
    symbols_ok = bool(symbols) and symbol_residual <= cfg.abs_tol(1e-10) and scalar_residual <= cfg.abs_tol(1e-10)
    ok = ok and symbols_ok

    report = {
        "command": "demo-diffop",
        "modulus": n,
        "step": step[0],
        "gamma": [list(t) for t in gamma.elements],
        "omega_reps": [list(w) for w in ctx.omega.reps],
        "fiber_symbols": [jsonio.complex_to_pair(s) for s in symbols],
        "expected_symbols": [jsonio.complex_to_pair(e) for e in expected],
        "symbol_residual": symbol_residual if symbols else None,
        "symbol_scalar_residual": scalar_residual,
        "symbols_passed": symbols_ok,
        "operator_norm": body.get("norm_identity", {}).get("values", {}).get("operator_norm"),
        "expected_norm": max(abs(e) for e in expected),
        "seed": cfg.seed,
        "passed": ok,
    }
    report.update(body)
    _emit(report, cfg)
    return 0 if ok else 1


def _check_suites(ctx, cfg: RunConfig) -> dict:
    rng = np.random.default_rng(cfg.seed)
    n = ctx.group.size
    suites: dict[str, dict] = {}

    def record(name: str, residual: float, tolerance: float) -> None:
        suites[name] = {
            "residual": float(residual),
            "tolerance": float(tolerance),
            "passed": bool(residual <= tolerance),
        }

    signals = [rng.standard_normal(n) + 1j * rng.standard_normal(n) for _ in range(20)]

    r_iso = max(
        abs(np.linalg.norm(zak(ctx, f)) - np.linalg.norm(f)) / np.linalg.norm(f)
        for f in signals
    )
    record("zak_isometry", r_iso, cfg.rel_tol(1e-10))

    r_round = max(np.abs(zak_inverse(ctx, zak(ctx, f)) - f).max() for f in signals)
    record("zak_roundtrip", r_round, cfg.abs_tol(1e-10))

    r_inter = 0.0
    for f in signals[:5]:
        fibers = zak(ctx, f)
        for t in ctx.gamma.elements:
            lhs = zak(ctx, translate(ctx.group, f, t))
            rhs = determining_function(ctx, t)[:, None] * fibers
            r_inter = max(r_inter, float(np.abs(lhs - rhs).max()))
    record("zak_intertwining", r_inter, cfg.abs_tol(1e-10))

    chars = np.column_stack([determining_function(ctx, t) for t in ctx.gamma.elements])
    r_det = np.abs(chars @ chars.conj().T / ctx.gamma.size - np.eye(ctx.n_omega)).max()
    record("determining_set", r_det, cfg.abs_tol(1e-10))

    delta0 = np.zeros(n, dtype=complex)
    delta0[0] = 1.0
    r_range = 0.0
    for gens in ([delta0], [signals[0], signals[1]]):
        rangefn = range_function(ctx, gens)
        basis = space_from_range(ctx, rangefn)
        rangefn2 = range_function(ctx, [basis[:, j] for j in range(basis.shape[1])])
        for b1, b2 in zip(rangefn.bases, rangefn2.bases):
            r_range = max(r_range, float(np.abs(b1 @ b1.conj().T - b2 @ b2.conj().T).max()))
    record("range_roundtrip", r_range, cfg.abs_tol(1e-9))

    rangefn = full_range_function(ctx)
    mats = tuple(
        rng.standard_normal((ctx.n_c, ctx.n_c)) + 1j * rng.standard_normal((ctx.n_c, ctx.n_c))
        for _ in range(ctx.n_omega)
    )
    field = RangeOperatorField(mats)
    u = synthesize_operator(ctx, field, rangefn)
    recovered = extract_range_operator(ctx, u, rangefn)
    r_bij = max(
        float(np.abs(a - b).max()) for a, b in zip(recovered.matrices, field.matrices)
    )
    record("field_bijection", r_bij, cfg.abs_tol(1e-9))

    return suites


def cmd_check(args) -> int:
    cfg = _config_from_args(args)
    ctx = _context_from_spec(args.group_spec)
    suites = _check_suites(ctx, cfg)
    ok = all(entry["passed"] for entry in suites.values())
    report = {
        "command": "check",
        "group": jsonio.group_spec_to_json(ctx.group, ctx.gamma),
        "sizes": {"group": ctx.group.size, "gamma": ctx.gamma.size, "omega": ctx.n_omega, "c": ctx.n_c},
        "seed": cfg.seed,
        "suites": suites,
        "passed": ok,
    }
    _emit(report, cfg)
    return 0 if ok else 1


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--tol-rel", type=float, default=None, help="override relative tolerances")
    sub.add_argument("--tol-abs", type=float, default=None, help="override absolute tolerances")
    sub.add_argument("--seed", type=int, default=0, help="random seed for sampled suites")
    sub.add_argument("--json", action="store_true", help="print the JSON report to stdout")
    sub.add_argument("--out", type=str, default=None, help="write the JSON report to a file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zakfiber",
        description="Fiberize signals on finite abelian groups and verify the "
        "block structure of translation-commuting operators.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="run the verification pipeline on an operator")
    analyze.add_argument("group_spec", help="path to a group spec JSON file")
    analyze.add_argument("operator", help="path to an operator JSON file")
    _add_common_flags(analyze)
    analyze.set_defaults(func=cmd_analyze)

    demo = commands.add_parser(
        "demo-diffop", help="analyze the difference operator I - T_d on Z_N"
    )
    demo.add_argument("modulus", type=int, help="modulus N of the cyclic group")
    demo.add_argument("step", type=int, help="translation step d")
    _add_common_flags(demo)
    demo.set_defaults(func=cmd_demo_diffop)

    check = commands.add_parser("check", help="run the invariant suites on a group spec")
    check.add_argument("group_spec", help="path to a group spec JSON file")
    _add_common_flags(check)
    check.set_defaults(func=cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code in (None, 0):
            return 0
        return 2
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    raise SystemExit(main(sys.argv[1:]))
