"""Distilling an optimal teacher nearly closes the gap to the floor."""
from common import FigureSpec, Panel, Series, standard_cli

KD = ("mode", "replica-kd")


def build_spec(csv_dir):
    inputs = {
        "direct": csv_dir / "fig4_direct.csv",
        "bokd": csv_dir / "fig4_bokd.csv",
        "bound": csv_dir / "fig4_bound.csv",
        "points": csv_dir / "fig4_points.csv",
    }
    series = (
        Series("bound", "alpha", "rep_gen_error", "student floor",
               where=(("mode", "estimators"),), color="black"),
        Series("direct", "alpha", "rep_gen_error", "baseline ridge",
               where=(KD, ("lambda_s", 1e-05)), color="0.45"),
        Series("direct", "alpha", "rep_gen_error", "tuned direct ridge",
               where=(KD,), reduce="min", color="crimson"),
        Series("bokd", "alpha", "rep_gen_error",
               "distilled from optimal teacher",
               where=(("mode", "replica-bo-kd"),), color="tab:blue"),
        Series("points", "alpha", "emp_test_error_mean",
               "distilled, N=1000", yerr="emp_test_error_stderr",
               where=(("mode", "simulate"),), style="errorbar", color="tab:blue"),
    )
    return FigureSpec(4, inputs, (Panel(series),),
                      suptitle="learning from an optimal teacher")


if __name__ == "__main__":
    raise SystemExit(standard_cli(build_spec))
