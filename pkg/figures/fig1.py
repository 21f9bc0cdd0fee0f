"""Unbalanced-mixture generalization gap: tuned ridge logistic vs the floor."""
from common import FigureSpec, Panel, Series, standard_cli

TEACHER = ("mode", "replica-teacher")
SIM = ("mode", "simulate")
EST = ("mode", "estimators")


def build_spec(csv_dir):
    inputs = {
        "curves": csv_dir / "fig1_curves.csv",
        "bound": csv_dir / "fig1_bound.csv",
        "points": csv_dir / "fig1_points.csv",
    }
    series = (
        Series("curves", "alpha", "rep_gen_error", "ridge logistic, tuned intensity",
               where=(TEACHER,), reduce="min", color="crimson"),
        Series("curves", "alpha", "rep_gen_error", "ridge 0.1",
               where=(TEACHER, ("lambda_t", 0.1)), color="tab:blue"),
        Series("curves", "alpha", "rep_gen_error", "ridge 0.5",
               where=(TEACHER, ("lambda_t", 0.5)), color="tab:green"),
        Series("bound", "alpha", "rep_gen_error", "error floor",
               where=(EST,), color="black"),
        Series("bound", "alpha", "emp_test_error_mean", "plug-in estimator, N=1000",
               yerr="emp_test_error_stderr", where=(EST,), style="errorbar",
               color="black"),
        Series("points", "alpha", "emp_teacher_test_error_mean",
               "ridge 0.1, N=1000", yerr="emp_teacher_test_error_stderr",
               where=(SIM, ("lambda_t", 0.1)), style="errorbar", color="tab:blue"),
        Series("points", "alpha", "emp_teacher_test_error_mean",
               "ridge 0.5, N=1000", yerr="emp_teacher_test_error_stderr",
               where=(SIM, ("lambda_t", 0.5)), style="errorbar", color="tab:green"),
    )
    return FigureSpec(1, inputs, (Panel(series),),
                      suptitle="ridge logistic regression vs the error floor")


if __name__ == "__main__":
    raise SystemExit(standard_cli(build_spec))
