"""Replica-vs-empirical comparison tables (z-scores per grid point)."""
from __future__ import annotations

from dataclasses import dataclass

from .params import PARAM_FIELDS
from .sweep import read_csv

# quantities compared per replica mode: (replica column, empirical mean/stderr stem)
_TEACHER_QUANTITIES = (
    ("rep_m", "emp_teacher_m"),
    ("rep_q", "emp_teacher_q"),
    ("rep_b", "emp_teacher_b"),
    ("rep_gen_error", "emp_teacher_test_error"),
)
_STUDENT_QUANTITIES = (
    ("rep_m", "emp_m"),
    ("rep_q", "emp_q"),
    ("rep_s", "emp_s"),
    ("rep_b", "emp_b"),
    ("rep_gen_error", "emp_test_error"),
)


@dataclass(frozen=True)
class PointComparison:
    key: tuple
    mode: str
    quantity: str
    replica: float
    empirical: float
    stderr: float | None
    z: float | None
    passed: bool
    flagged: bool  # excluded from pass/fail (non-converged simulation)


@dataclass(frozen=True)
class ComparisonResult:
    rows: list
    sigma: float

    @property
    def tested(self) -> list:
        return [r for r in self.rows if not r.flagged and r.z is not None]

    @property
    def n_pass(self) -> int:
        return sum(r.passed for r in self.tested)

    @property
    def n_fail(self) -> int:
        return len(self.tested) - self.n_pass

    @property
    def pass_fraction(self) -> float:
        tested = self.tested
        return 1.0 if not tested else self.n_pass / len(tested)

    @property
    def passed(self) -> bool:
        return self.n_fail == 0

    def failures(self) -> list:
        return [r for r in self.tested if not r.passed]

    def quantity_pass_fraction(self, replica_col: str) -> float:
        rows = [r for r in self.tested if r.quantity.startswith(replica_col)]
        return 1.0 if not rows else sum(r.passed for r in rows) / len(rows)


def _key(row: dict) -> tuple:
    return tuple(row[name] for name in PARAM_FIELDS)


def compare(replica_csv, empirical_csv, sigma: float = 3.0) -> ComparisonResult:
    """Per-point z-scores |empirical - replica| / stderr for matched grids.

    Replica rows match empirical rows on all model parameters; a replica
    row without an empirical counterpart is a hard error. Simulation rows
    with any non-converged seed are flagged and excluded from pass/fail,
    as are replica rows that themselves failed to converge.
    """
    replica_rows = [
        r for r in read_csv(replica_csv) if str(r["mode"]).startswith("replica-")
    ]
    empirical_rows = {
        _key(r): r for r in read_csv(empirical_csv) if r["mode"] == "simulate"
    }
    if not replica_rows:
        raise ValueError(f"no replica rows in {replica_csv}")
    if not empirical_rows:
        raise ValueError(f"no simulate rows in {empirical_csv}")

    unmatched = [r for r in replica_rows if _key(r) not in empirical_rows]
    if unmatched:
        listing = "; ".join(
            f"{r['mode']} at " + ", ".join(
                f"{n}={r[n]:g}" for n in PARAM_FIELDS
            )
            for r in unmatched[:10]
        )
        raise ValueError(
            f"{len(unmatched)} replica rows have no matching simulate row: {listing}"
        )

    out = []
    for rep in replica_rows:
        emp = empirical_rows[_key(rep)]
        flagged = (
            rep["status"] != "ok"
            or rep.get("rep_converged") != 1
            or emp.get("emp_n_converged") != emp.get("emp_n_seeds")
        )
        quantities = (
            _TEACHER_QUANTITIES if rep["mode"] == "replica-teacher"
            else _STUDENT_QUANTITIES
        )
        for rep_col, emp_stem in quantities:
            replica_value = rep.get(rep_col)
            emp_mean = emp.get(f"{emp_stem}_mean")
            emp_se = emp.get(f"{emp_stem}_stderr")
            if replica_value is None or emp_mean is None:
                continue
            z = None
            passed = False
            if emp_se is not None and emp_se > 0:
                z = abs(emp_mean - replica_value) / emp_se
                passed = z <= sigma
            out.append(PointComparison(
                key=_key(rep), mode=rep["mode"],
                quantity=f"{rep_col} vs {emp_stem}",
                replica=replica_value, empirical=emp_mean, stderr=emp_se,
                z=z, passed=passed, flagged=flagged,
            ))
    return ComparisonResult(rows=out, sigma=sigma)


def format_table(result: ComparisonResult, only_failures: bool = False) -> str:
    lines = [
        f"{'mode':<18} {'quantity':<36} {'replica':>12} {'empirical':>12} "
        f"{'stderr':>10} {'z':>8}  status"
    ]
    for r in result.rows:
        if only_failures and (r.passed or r.flagged):
            continue
        status = "FLAGGED" if r.flagged else ("pass" if r.passed else "FAIL")
        z = f"{r.z:8.2f}" if r.z is not None else "     n/a"
        se = f"{r.stderr:10.3g}" if r.stderr is not None else "       n/a"
        lines.append(
            f"{r.mode:<18} {r.quantity:<36} {r.replica:12.6g} "
            f"{r.empirical:12.6g} {se} {z}  {status}"
        )
    lines.append(
        f"-- {result.n_pass}/{len(result.tested)} tested comparisons within "
        f"{result.sigma} stderr "
        f"({sum(r.flagged for r in result.rows)} flagged rows excluded)"
    )
    return "\n".join(lines)
