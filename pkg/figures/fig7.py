"""Training-set diagnostics across both double-descent regimes."""
from common import FigureSpec, Guide, Panel, Series, standard_cli

KD = ("mode", "replica-kd")
SIM = ("mode", "simulate")
LAMBDAS = ((1e-05, "black"), (0.1, "tab:purple"), (1.0, "tab:red"))
PANELS = (
    ("rep_train_loss", "emp_train_loss_mean", "emp_train_loss_stderr",
     "training loss per sample", "linear"),
    ("rep_q", "emp_q_mean", "emp_q_stderr", "student norm", "log"),
    ("rep_output_mse", "emp_output_mse_mean", "emp_output_mse_stderr",
     "output MSE", "linear"),
    ("rep_preact_mse", "emp_preact_mse_mean", "emp_preact_mse_stderr",
     "preactivation MSE", "log"),
)


def build_spec(csv_dir):
    inputs = {
        "curves": csv_dir / "fig7_curves.csv",
        "points": csv_dir / "fig7_points.csv",
    }
    guides = (
        Guide("curves", "vline-column", "interpolation threshold", "eta",
              where=(KD, ("lambda_t", 0.1))),
        Guide("curves", "vline-argmax", "student separability threshold",
              "rep_q", x="alpha", where=(KD, ("lambda_t", 1e-05))),
        Guide("curves", "vline-argmax", "teacher separability threshold",
              "rep_teacher_q", x="alpha", where=(KD, ("lambda_t", 1e-05))),
    )
    panels = []
    for rep_col, emp_col, emp_err, ylabel, yscale in PANELS:
        series = []
        for lam, color in LAMBDAS:
            series.append(Series(
                "curves", "alpha", rep_col, f"teacher ridge {lam:g}",
                where=(KD, ("lambda_t", lam)), color=color))
            series.append(Series(
                "points", "alpha", emp_col, f"teacher ridge {lam:g}, N=800",
                yerr=emp_err, where=(SIM, ("lambda_t", lam)),
                style="errorbar", color=color))
        panels.append(Panel(tuple(series), guides=guides, ylabel=ylabel,
                            yscale=yscale))
    return FigureSpec(7, inputs, tuple(panels),
                      suptitle="what the student fits in each regime")


if __name__ == "__main__":
    raise SystemExit(standard_cli(build_spec))
