"""Balanced clusters: inheritance with no generalization gap to close."""
from common import FigureSpec, Panel, Series, standard_cli

COLORS = {0.1: "tab:blue", 1.0: "tab:green", 10.0: "tab:red"}


def build_spec(csv_dir):
    inputs = {
        "curves": csv_dir / "fig9_curves.csv",
        "bound": csv_dir / "fig9_bound.csv",
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
    series.append(Series("bound", "alpha", "rep_gen_error", "student floor",
                         where=(("mode", "estimators"), ("eta", 0.5)),
                         color="black"))
    series.append(Series("bound", "alpha", "rep_gen_error", "teacher floor",
                         where=(("mode", "estimators"), ("eta", 1.0)),
                         style="dashed", color="black"))
    return FigureSpec(9, inputs, (Panel(tuple(series)),),
                      suptitle="balanced mixture: stronger ridge is simply better")


if __name__ == "__main__":
    raise SystemExit(standard_cli(build_spec))
