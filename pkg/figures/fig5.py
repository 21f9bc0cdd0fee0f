"""Double descent: interpolation-type and separability-type peaks."""
from common import FigureSpec, Guide, Panel, Series, standard_cli

KD = ("mode", "replica-kd")
BASE = ("lambda_t", 1e-05)
REG = ("lambda_t", 0.1)


def build_spec(csv_dir):
    inputs = {
        "curves": csv_dir / "fig5_curves.csv",
        "bound": csv_dir / "fig5_bound.csv",
        "points": csv_dir / "fig5_points.csv",
    }
    series = (
        Series("bound", "alpha", "rep_gen_error", "student floor",
               where=(("mode", "estimators"),), color="black"),
        Series("curves", "alpha", "rep_gen_error", "baseline-ridge teacher",
               where=(KD, BASE), color="tab:blue"),
        Series("curves", "alpha", "rep_gen_error", "regularized teacher (0.1)",
               where=(KD, REG), color="tab:red"),
        Series("points", "alpha", "emp_test_error_mean",
               "baseline-ridge teacher, N=1000", yerr="emp_test_error_stderr",
               where=(("mode", "simulate"), BASE), style="errorbar",
               color="tab:blue"),
        Series("points", "alpha", "emp_test_error_mean",
               "regularized teacher, N=1000", yerr="emp_test_error_stderr",
               where=(("mode", "simulate"), REG), style="errorbar",
               color="tab:red"),
    )
    guides = (
        Guide("curves", "vline-column", "interpolation threshold", "eta",
              where=(KD, REG)),
        Guide("curves", "vline-argmax", "student separability threshold",
              "rep_q", x="alpha", where=(KD, BASE)),
        Guide("curves", "vline-argmax", "teacher separability threshold",
              "rep_teacher_q", x="alpha", where=(KD, BASE)),
    )
    return FigureSpec(5, inputs, (Panel(series, guides=guides),),
                      suptitle="double descent in pure distillation")


if __name__ == "__main__":
    raise SystemExit(standard_cli(build_spec))
