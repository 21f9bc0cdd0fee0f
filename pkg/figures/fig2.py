"""Regularization inheritance: distilled students track their teachers."""
from common import FigureSpec, Panel, Series, standard_cli

COLORS = {1e-05: "0.45", 0.05: "tab:blue", 0.5: "tab:red"}


def build_spec(csv_dir):
    inputs = {
        "curves": csv_dir / "fig2_curves.csv",
        "bound": csv_dir / "fig2_bound.csv",
        "points": csv_dir / "fig2_points.csv",
    }
    series = []
    for lam, color in COLORS.items():
        series.append(Series(
            "curves", "alpha", "rep_gen_error", f"student, teacher ridge {lam:g}",
            where=(("mode", "replica-kd"), ("lambda_t", lam)), color=color))
        series.append(Series(
            "curves", "alpha", "rep_gen_error", f"teacher, ridge {lam:g}",
            where=(("mode", "replica-teacher"), ("lambda_t", lam)),
            style="dashed", color=color))
        series.append(Series(
            "points", "alpha", "emp_test_error_mean",
            f"student, ridge {lam:g}, N=1000", yerr="emp_test_error_stderr",
            where=(("mode", "simulate"), ("lambda_t", lam)),
            style="errorbar", color=color))
    series.append(Series("bound", "alpha", "rep_gen_error", "student floor",
                         where=(("mode", "estimators"), ("eta", 0.5)),
                         color="black"))
    series.append(Series("bound", "alpha", "rep_gen_error", "teacher floor",
                         where=(("mode", "estimators"), ("eta", 1.0)),
                         style="dashed", color="black"))
    return FigureSpec(2, inputs, (Panel(tuple(series)),),
                      suptitle="pure distillation inherits the teacher ridge")


if __name__ == "__main__":
    raise SystemExit(standard_cli(build_spec))
