"""Sweep orchestration: grids, seed management, CSV emission.

One record per (grid point x mode). Replica modes warm-start along the
sorted alpha axis (continuation); simulation and estimator modes run
independent seeds per point. Grid points are distributed over worker
processes, but each record is a pure function of (spec, grid point, seed),
and rows are emitted in canonical grid order, so the CSV is byte-identical
for any worker count.

Per-run seeds derive from SeedSequence([spec.seed, grid_index, seed_index,
stream]); nothing is shared between tasks.
"""
from __future__ import annotations

import csv
import dataclasses
import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .data import sample_dataset
from .estimators import bayes_optimal_error, bo_teacher_proxy, sparse_hebbian_estimator
from .params import PARAM_FIELDS, ModelParams
from .solver import (
    SolverConfig,
    SolverError,
    solve_bo_kd,
    solve_kd,
    solve_teacher,
)
from .training import (
    HARD_CUTOFF,
    diagnostics,
    empirical_test_errors_paired,
    measure_macro_state,
    train_student_kd,
    train_teacher,
)

MODES = ("replica-teacher", "replica-kd", "replica-bo-kd", "simulate", "estimators")

REP_COLS = (
    "rep_m", "rep_q", "rep_dq", "rep_s", "rep_ds", "rep_b",
    "rep_gen_error", "rep_free_entropy", "rep_converged", "rep_iters",
    "rep_teacher_m", "rep_teacher_q", "rep_teacher_dq", "rep_teacher_b",
    "rep_teacher_gen_error",
    "rep_train_loss", "rep_output_mse", "rep_preact_mse",
)

_EMP_STATS = (
    "emp_m", "emp_q", "emp_s", "emp_b", "emp_test_error",
    "emp_teacher_m", "emp_teacher_q", "emp_teacher_b", "emp_teacher_test_error",
    "emp_train_loss", "emp_output_mse", "emp_preact_mse",
)
EMP_COLS = tuple(
    f"{name}_{suffix}" for name in _EMP_STATS for suffix in ("mean", "stderr")
) + ("emp_n_seeds", "emp_n_converged")

CSV_COLUMNS = PARAM_FIELDS + ("mode",) + REP_COLS + EMP_COLS + ("status",)


@dataclass(frozen=True)
class SweepSpec:
    base: ModelParams
    axes: tuple = ()                     # ((field, (v0, v1, ...)), ...)
    modes: tuple = ("replica-teacher",)
    n_seeds: int = 10
    n_dim: int = 1000
    seed: int = 0
    n_test: int = 100000
    train_tol: float = 1e-6
    train_max_iter: int = HARD_CUTOFF
    solver: SolverConfig = field(default_factory=SolverConfig)
    teacher_kind: str = "erm"            # "erm" | "bo-proxy" (simulate mode)
    bo_variant: str = "plus"
    out: str | None = None

    def __post_init__(self):
        for name, grid in self.axes:
            if name not in PARAM_FIELDS:
                raise ValueError(f"unknown sweep axis {name!r}")
            if len(grid) == 0:
                raise ValueError(f"empty grid for axis {name!r}")
            if list(grid) != sorted(grid):
                raise ValueError(f"grid for axis {name!r} must be sorted")
        for mode in self.modes:
            if mode not in MODES:
                raise ValueError(f"unknown mode {mode!r}")
        if self.teacher_kind not in ("erm", "bo-proxy"):
            raise ValueError(f"unknown teacher_kind {self.teacher_kind!r}")
        if self.n_seeds < 1 or self.n_dim < 1:
            raise ValueError("n_seeds and n_dim must be >= 1")

    def grid(self) -> list[ModelParams]:
        if not self.axes:
            return [self.base]
        names = [name for name, _ in self.axes]
        values = [grid for _, grid in self.axes]
        points = []
        for combo in itertools.product(*values):
            points.append(self.base.replace(**dict(zip(names, combo))))
        return points


@dataclass(frozen=True)
class SweepRecord:
    grid_index: int
    params: ModelParams
    mode: str
    values: dict
    status: str = "ok"
    wall_time: float = 0.0

    def row(self) -> dict:
        row = {name: getattr(self.params, name) for name in PARAM_FIELDS}
        row["mode"] = self.mode
        for col in REP_COLS + EMP_COLS:
            row[col] = self.values.get(col)
        row["status"] = self.status
        row["wall_time_s"] = self.wall_time
        return row


def _derive_seed(base: int, grid_index: int, seed_index: int, stream: int) -> int:
    ss = np.random.SeedSequence([base, grid_index, seed_index, stream])
    return int(ss.generate_state(1)[0])


def _limit_threads():
    try:
        import threadpoolctl

        threadpoolctl.threadpool_limits(1)
    except Exception:
        pass


# --- per-task evaluation (top level, picklable) -----------------------------

def _teacher_block(teacher) -> dict:
    return {
        "rep_teacher_m": teacher.m_t, "rep_teacher_q": teacher.q_t,
        "rep_teacher_dq": teacher.dq_t, "rep_teacher_b": teacher.b_t,
        "rep_teacher_gen_error": teacher.gen_error,
    }


def _student_block(student) -> dict:
    return {
        "rep_m": student.m, "rep_q": student.q, "rep_dq": student.dq,
        "rep_s": student.teacher_overlap, "rep_ds": student.ds,
        "rep_b": student.b, "rep_gen_error": student.gen_error,
        "rep_free_entropy": student.phi, "rep_converged": 1,
        "rep_iters": student.iterations,
        "rep_train_loss": student.diagnostics.get("train_loss"),
        "rep_output_mse": student.diagnostics.get("output_mse"),
        "rep_preact_mse": student.diagnostics.get("preact_mse"),
    }


def _run_replica_chain(spec: SweepSpec, mode: str, chain) -> list[SweepRecord]:
    """Solve a sequence of grid points warm-starting along ascending alpha."""
    _limit_threads()
    records = []
    warm_teacher = None
    warm_student = None
    for grid_index, params in chain:
        t0 = time.perf_counter()
        values: dict = {}
        status = "ok"
        try:
            if mode == "replica-teacher":
                teacher = solve_teacher(params, spec.solver, warm=warm_teacher)
                warm_teacher = teacher
                values = {
                    "rep_m": teacher.m_t, "rep_q": teacher.q_t,
                    "rep_dq": teacher.dq_t, "rep_b": teacher.b_t,
                    "rep_gen_error": teacher.gen_error,
                    "rep_free_entropy": teacher.phi, "rep_converged": 1,
                    "rep_iters": teacher.iterations,
                }
            elif mode == "replica-kd":
                teacher = solve_teacher(params, spec.solver, warm=warm_teacher)
                warm_teacher = teacher
                student = solve_kd(params, teacher, spec.solver, warm=warm_student)
                warm_student = student
                values = {**_student_block(student), **_teacher_block(teacher)}
            elif mode == "replica-bo-kd":
                student = solve_bo_kd(
                    params, spec.solver, warm=warm_student,
                    variant=spec.bo_variant,
                )
                warm_student = student
                qt = 1.0 + params.delta / params.alpha
                bt = 0.5 * params.delta * qt * math.log(params.rho / (1 - params.rho))
                values = {
                    **_student_block(student),
                    "rep_teacher_m": 1.0, "rep_teacher_q": qt, "rep_teacher_b": bt,
                    "rep_teacher_gen_error": bayes_optimal_error(
                        params.alpha, params.delta, params.rho, 1.0
                    ),
                }
            else:
                raise ValueError(f"not a replica mode: {mode}")
        except SolverError as exc:
            status = "diverged" if "diverged" in str(exc) else "non-convergence"
            values = {"rep_converged": 0}
            warm_teacher = None
            warm_student = None
        records.append(SweepRecord(
            grid_index=grid_index, params=params, mode=mode, values=values,
            status=status, wall_time=time.perf_counter() - t0,
        ))
    return records


def _aggregate(samples: dict[str, list]) -> dict:
    out = {}
    for name, vals in samples.items():
        arr = np.array([v for v in vals if v is not None], dtype=float)
        if arr.size == 0:
            continue
        out[f"{name}_mean"] = float(np.mean(arr))
        out[f"{name}_stderr"] = (
            float(np.std(arr, ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else None
        )
    return out


def _run_simulate_point(spec: SweepSpec, grid_index: int,
                        params: ModelParams) -> SweepRecord:
    _limit_threads()
    t0 = time.perf_counter()
    samples: dict[str, list] = {name: [] for name in _EMP_STATS}
    n_converged = 0
    for seed_index in range(spec.n_seeds):
        data = sample_dataset(
            spec.n_dim, params, _derive_seed(spec.seed, grid_index, seed_index, 0)
        )
        if spec.teacher_kind == "bo-proxy":
            teacher = bo_teacher_proxy(
                spec.n_dim, params.alpha, params.delta, params.rho,
                seed=_derive_seed(spec.seed, grid_index, seed_index, 1),
                signal=data.signal,
            )
        else:
            teacher = train_teacher(
                data, params.lambda_t, params.eps_smooth,
                tol=spec.train_tol, max_iter=spec.train_max_iter,
            )
        student = train_student_kd(
            data, teacher, params, tol=spec.train_tol,
            max_iter=spec.train_max_iter,
        )
        ms = measure_macro_state(student, data, teacher)
        tms = measure_macro_state(teacher, data)
        (err, _), (terr, _) = empirical_test_errors_paired(
            [student, teacher], params, spec.n_test,
            _derive_seed(spec.seed, grid_index, seed_index, 2), data.signal,
        )
        report = diagnostics(teacher, student, data, params)
        n_converged += int(teacher.meta.converged and student.meta.converged)
        for name, value in (
            ("emp_m", ms.m), ("emp_q", ms.q), ("emp_s", ms.s), ("emp_b", ms.b),
            ("emp_test_error", err),
            ("emp_teacher_m", tms.m), ("emp_teacher_q", tms.q),
            ("emp_teacher_b", tms.b), ("emp_teacher_test_error", terr),
            ("emp_train_loss", report.per_pattern_loss),
            ("emp_output_mse", report.output_mse),
            ("emp_preact_mse", report.preact_mse),
        ):
            samples[name].append(value)
    values = _aggregate(samples)
    values["emp_n_seeds"] = spec.n_seeds
    values["emp_n_converged"] = n_converged
    return SweepRecord(
        grid_index=grid_index, params=params, mode="simulate", values=values,
        status="ok", wall_time=time.perf_counter() - t0,
    )


def _run_estimators_point(spec: SweepSpec, grid_index: int,
                          params: ModelParams) -> SweepRecord:
    _limit_threads()
    t0 = time.perf_counter()
    qt = 1.0 + params.delta / params.alpha
    bias = 0.5 * params.delta * qt * math.log(params.rho / (1.0 - params.rho))
    values = {
        "rep_m": params.eta, "rep_q": params.eta * qt, "rep_b": bias,
        "rep_gen_error": bayes_optimal_error(
            params.alpha, params.delta, params.rho, params.eta
        ),
        "rep_converged": 1, "rep_iters": 0,
    }
    samples: dict[str, list] = {n: [] for n in
                                ("emp_m", "emp_q", "emp_b", "emp_test_error")}
    for seed_index in range(spec.n_seeds):
        data = sample_dataset(
            spec.n_dim, params, _derive_seed(spec.seed, grid_index, seed_index, 0)
        )
        clf = sparse_hebbian_estimator(data, params.eta, params.delta, params.rho)
        ms = measure_macro_state(clf, data)
        (err, _), = empirical_test_errors_paired(
            [clf], params, spec.n_test,
            _derive_seed(spec.seed, grid_index, seed_index, 2), data.signal,
        )
        samples["emp_m"].append(ms.m)
        samples["emp_q"].append(ms.q)
        samples["emp_b"].append(ms.b)
        samples["emp_test_error"].append(err)
    values.update(_aggregate(samples))
    values["emp_n_seeds"] = spec.n_seeds
    values["emp_n_converged"] = spec.n_seeds
    return SweepRecord(
        grid_index=grid_index, params=params, mode="estimators", values=values,
        status="ok", wall_time=time.perf_counter() - t0,
    )


def _run_task(payload):
    spec, kind, arg = payload
    if kind == "chain":
        mode, chain = arg
        return _run_replica_chain(spec, mode, chain)
    if kind == "simulate":
        return [_run_simulate_point(spec, *arg)]
    if kind == "estimators":
        return [_run_estimators_point(spec, *arg)]
    raise ValueError(kind)


def _build_tasks(spec: SweepSpec):
    points = list(enumerate(spec.grid()))
    axis_names = [name for name, _ in spec.axes]
    tasks = []
    for mode in spec.modes:
        if mode in ("replica-teacher", "replica-kd", "replica-bo-kd"):
            # group into alpha-continuation chains over the other axes
            def chain_key(item):
                _, params = item
                return tuple(
                    getattr(params, name) for name in axis_names if name != "alpha"
                )

            groups: dict[tuple, list] = {}
            for item in points:
                groups.setdefault(chain_key(item), []).append(item)
            for _, chain in sorted(groups.items()):
                chain = sorted(chain, key=lambda it: it[1].alpha)
                tasks.append((spec, "chain", (mode, chain)))
        elif mode == "simulate":
            for grid_index, params in points:
                tasks.append((spec, "simulate", (grid_index, params)))
        elif mode == "estimators":
            for grid_index, params in points:
                tasks.append((spec, "estimators", (grid_index, params)))
    return tasks


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRecord]:
    """Evaluate every grid point in every requested mode.

    Per-point solver failures become status rows; they never abort the
    sweep. Records come back sorted by (grid_index, mode order).
    """
    tasks = _build_tasks(spec)
    if workers <= 1:
        _limit_threads()
        results = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=1))
    records = [rec for group in results for rec in group]
    mode_order = {mode: i for i, mode in enumerate(spec.modes)}
    records.sort(key=lambda r: (r.grid_index, mode_order[r.mode]))
    return records


# --- CSV emission ------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return f"{value:.12g}"
    return str(value)


def write_csv(records: list[SweepRecord], path, timing: bool = False) -> None:
    """Fixed column order, 12 significant digits, empty fields for missing.

    Wall times vary between runs, so the timing column is opt-in; without
    it the file is byte-identical across repeated runs.
    """
    columns = list(CSV_COLUMNS) + (["wall_time_s"] if timing else [])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for rec in records:
            row = rec.row()
            writer.writerow([_fmt(row.get(col)) for col in columns])


def read_csv(path) -> list[dict]:
    """Rows as dicts; numeric fields parsed, empty fields as None."""
    rows = []
    with open(path, newline="") as fh:
        for raw in csv.DictReader(fh):
            row: dict = {}
            for key, value in raw.items():
                if value is None or value == "":
                    row[key] = None
                elif key in ("mode", "status"):
                    row[key] = value
                else:
                    try:
                        row[key] = float(value)
                    except ValueError:
                        row[key] = value
            rows.append(row)
    return rows
