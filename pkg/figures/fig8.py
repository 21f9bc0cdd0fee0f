"""Distillation temperature softens the interpolation peak."""
from common import FigureSpec, Guide, Panel, Series, standard_cli

KD = ("mode", "replica-kd")
SIM = ("mode", "simulate")


def build_spec(csv_dir):
    inputs = {
        "curves": csv_dir / "fig8_curves.csv",
        "bound": csv_dir / "fig8_bound.csv",
        "points": csv_dir / "fig8_points.csv",
    }
    series = [Series("bound", "alpha", "rep_gen_error", "student floor",
                     where=(("mode", "estimators"),), color="black")]
    for temp, color in ((1.0, "tab:blue"), (2.0, "tab:green"), (4.0, "tab:red")):
        series.append(Series(
            "curves", "alpha", "rep_gen_error", f"temperature {temp:g}",
            where=(KD, ("temp", temp)), color=color))
        series.append(Series(
            "points", "alpha", "emp_test_error_mean",
            f"temperature {temp:g}, N=1000", yerr="emp_test_error_stderr",
            where=(SIM, ("temp", temp)), style="errorbar", color=color))
    guides = (Guide("curves", "vline-column", "interpolation threshold", "eta",
                    where=(KD,)),)
    return FigureSpec(8, inputs, (Panel(tuple(series), guides=guides),),
                      suptitle="tempered outputs around the interpolation peak")


if __name__ == "__main__":
    raise SystemExit(standard_cli(build_spec))
