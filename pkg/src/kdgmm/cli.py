"""Command-line entry point.

Exit codes: 0 on success, 1 on hard errors, 2 on partial success
(per-row solver failures in a sweep, or failing points in a comparison).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .compare import compare, format_table
from .configfile import (
    apply_env_overrides,
    apply_set_overrides,
    build_spec,
    dump_resolved,
    load_config,
)
from .params import ModelParams
from .solver import SolverConfig, SolverError, solve_bo_kd, solve_kd, solve_teacher
from .sweep import run_sweep, write_csv


def _add_param_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, required=True)
    parser.add_argument("--delta", type=float, required=True)
    parser.add_argument("--rho", type=float, required=True)
    parser.add_argument("--eta", type=float, default=1.0)
    parser.add_argument("--lambda-t", type=float, default=0.1)
    parser.add_argument("--lambda-s", type=float, default=1e-5)
    parser.add_argument("--chi", type=float, default=1.0)
    parser.add_argument("--temp", type=float, default=1.0)
    parser.add_argument("--eps-smooth", type=float, default=0.0)


def _add_solver_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--damping", type=float, default=0.5)
    parser.add_argument("--solver-tol", type=float, default=1e-10)
    parser.add_argument("--max-iters", type=int, default=20000)
    parser.add_argument("--quad-order", type=int, default=60)


def _params(args) -> ModelParams:
    return ModelParams(
        alpha=args.alpha, delta=args.delta, rho=args.rho, eta=args.eta,
        lambda_t=args.lambda_t, lambda_s=args.lambda_s, chi=args.chi,
        temp=args.temp, eps_smooth=args.eps_smooth,
    )


def _solver_cfg(args) -> SolverConfig:
    return SolverConfig(
        damping=args.damping, tol=args.solver_tol,
        max_iters=args.max_iters, quad_order=args.quad_order,
    )


def _emit(payload: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload, indent=2))
    else:
        for key, value in payload.items():
            print(f"{key} = {value:.10g}" if isinstance(value, float) else f"{key} = {value}")


def _cmd_solve_teacher(args) -> int:
    res = solve_teacher(_params(args), _solver_cfg(args))
    _emit({
        "m": res.m_t, "q": res.q_t, "dq": res.dq_t, "b": res.b_t,
        "gen_error": res.gen_error, "free_entropy": res.phi,
        "iterations": res.iterations,
    }, args.json)
    return 0


def _cmd_solve_kd(args) -> int:
    params = _params(args)
    cfg = _solver_cfg(args)
    teacher = solve_teacher(params, cfg)
    student = solve_kd(params, teacher, cfg)
    _emit({
        "teacher_m": teacher.m_t, "teacher_q": teacher.q_t,
        "teacher_b": teacher.b_t, "teacher_gen_error": teacher.gen_error,
        "m": student.m, "q": student.q, "dq": student.dq, "s": student.s,
        "ds": student.ds, "b": student.b, "gen_error": student.gen_error,
        "free_entropy": student.phi, "iterations": student.iterations,
    }, args.json)
    return 0


def _cmd_solve_bo_kd(args) -> int:
    student = solve_bo_kd(_params(args), _solver_cfg(args), variant=args.variant)
    _emit({
        "m": student.m, "q": student.q, "dq": student.dq,
        "s_noise": student.s, "teacher_overlap": student.teacher_overlap,
        "b": student.b, "gen_error": student.gen_error,
        "free_entropy": student.phi, "iterations": student.iterations,
    }, args.json)
    return 0


def _cmd_simulate(args) -> int:
    from .sweep import SweepSpec, _run_simulate_point

    spec = SweepSpec(
        base=_params(args), axes=(), modes=("simulate",),
        n_seeds=args.n_seeds, n_dim=args.n_dim, seed=args.seed,
        n_test=args.n_test, teacher_kind=args.teacher,
    )
    record = _run_simulate_point(spec, 0, spec.base)
    payload = {k: v for k, v in sorted(record.values.items()) if v is not None}
    _emit(payload, args.json)
    return 0


def _resolved_spec(args):
    cfg = load_config(args.config) if args.config else {}
    apply_env_overrides(cfg)
    apply_set_overrides(cfg, args.set)
    for dotted, value in (
        ("out", args.out), ("n_dim", args.n_dim), ("n_seeds", args.n_seeds),
        ("seed", args.seed),
    ):
        if value is not None:
            cfg[dotted] = value
    return build_spec(cfg)


def _cmd_sweep(args) -> int:
    spec = _resolved_spec(args)
    if spec.out is None:
        print("error: no output path (set out= in the config or pass --out)",
              file=sys.stderr)
        return 1
    out = Path(spec.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    records = run_sweep(spec, workers=args.workers)
    write_csv(records, out, timing=args.timing)
    dump_resolved(spec, out.with_suffix(out.suffix + ".resolved.toml"))
    n_bad = sum(rec.status != "ok" for rec in records)
    print(f"wrote {len(records)} records to {out}"
          + (f" ({n_bad} with non-ok status)" if n_bad else ""))
    return 2 if n_bad else 0


def _cmd_compare(args) -> int:
    result = compare(args.replica, args.empirical, sigma=args.sigma)
    print(format_table(result, only_failures=args.only_failures))
    return 0 if result.passed else 2


def _cmd_figures_data(args) -> int:
    specs_dir = Path(args.specs_dir)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec_files = sorted(specs_dir.glob("*.toml"))
    if args.only:
        wanted = set(args.only.split(","))
        spec_files = [p for p in spec_files if p.stem in wanted
                      or any(p.stem.startswith(w) for w in wanted)]
    if not spec_files:
        print(f"error: no sweep specs found in {specs_dir}", file=sys.stderr)
        return 1
    worst = 0
    for path in spec_files:
        cfg = load_config(path)
        apply_env_overrides(cfg)
        spec = build_spec(cfg)
        out = out_dir / f"{path.stem}.csv"
        records = run_sweep(spec, workers=args.workers)
        write_csv(records, out)
        dump_resolved(spec, out.with_suffix(".csv.resolved.toml"))
        n_bad = sum(rec.status != "ok" for rec in records)
        print(f"{path.stem}: {len(records)} records -> {out}"
              + (f" ({n_bad} non-ok)" if n_bad else ""))
        worst = max(worst, 2 if n_bad else 0)
    return worst


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kdgmm",
        description="Replica predictions and finite-size experiments for "
                    "distillation on Gaussian mixtures",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn in (("solve-teacher", _cmd_solve_teacher),
                     ("solve-kd", _cmd_solve_kd),
                     ("solve-bo-kd", _cmd_solve_bo_kd)):
        p = sub.add_parser(name)
        _add_param_args(p)
        _add_solver_args(p)
        p.add_argument("--json", action="store_true")
        if name == "solve-bo-kd":
            p.add_argument("--variant", choices=("plus", "minus"), default="plus")
        p.set_defaults(fn=fn)

    p = sub.add_parser("simulate")
    _add_param_args(p)
    p.add_argument("--n-dim", type=int, default=1000)
    p.add_argument("--n-seeds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-test", type=int, default=100000)
    p.add_argument("--teacher", choices=("erm", "bo-proxy"), default="erm")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("sweep")
    p.add_argument("--config", type=str, default=None)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--n-dim", type=int, default=None)
    p.add_argument("--n-seeds", type=int, default=None)
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("compare")
    p.add_argument("--replica", required=True)
    p.add_argument("--empirical", required=True)
    p.add_argument("--sigma", type=float, default=3.0)
    p.add_argument("--only-failures", action="store_true")
    p.set_defaults(fn=_cmd_compare)

    p = sub.add_parser("figures-data")
    p.add_argument("--specs-dir", type=str, default="specs")
    p.add_argument("--out-dir", type=str, default="data/figures")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--only", type=str, default=None)
    p.set_defaults(fn=_cmd_figures_data)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (SolverError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
