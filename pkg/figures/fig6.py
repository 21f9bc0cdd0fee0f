"""Label smoothing: direct use vs distillation from a smoothed teacher."""
from common import FigureSpec, Panel, Series, standard_cli

SIM = ("mode", "simulate")


def build_spec(csv_dir):
    inputs = {"points": csv_dir / "fig6_points.csv"}
    series = []
    for alpha, color in ((2.0, "tab:blue"), (4.5, "tab:red")):
        series.append(Series(
            "points", "eps_smooth", "emp_test_error_mean",
            f"smoothed labels directly, alpha={alpha:g}",
            where=(SIM, ("chi", 0.0), ("alpha", alpha)), color=color))
        series.append(Series(
            "points", "eps_smooth", "emp_test_error_mean",
            f"distilled from smoothed teacher, alpha={alpha:g}",
            yerr="emp_test_error_stderr",
            where=(SIM, ("chi", 1.0), ("alpha", alpha)),
            style="errorbar", color=color))
    panel = Panel(tuple(series), xlabel="label smoothing amount")
    return FigureSpec(6, inputs, (panel,),
                      suptitle="smoothing transfers losslessly through distillation"
                      " (N=1000)")


if __name__ == "__main__":
    raise SystemExit(standard_cli(build_spec))
