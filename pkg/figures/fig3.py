"""Limits of distillation: ridge scans and the mixing-parameter scan."""
from common import FigureSpec, Guide, Panel, Series, standard_cli

KD = ("mode", "replica-kd")


def build_spec(csv_dir):
    inputs = {
        "distill": csv_dir / "fig3_top_distill.csv",
        "direct": csv_dir / "fig3_top_direct.csv",
        "mixing": csv_dir / "fig3_bottom.csv",
        "bound": csv_dir / "fig3_bound.csv",
    }
    top = Panel(
        series=(
            Series("distill", "lambda_t", "rep_gen_error",
                   "distilled, alpha=1.5", where=(KD, ("alpha", 1.5)),
                   color="tab:red"),
            Series("distill", "lambda_t", "rep_gen_error",
                   "distilled, alpha=4.5", where=(KD, ("alpha", 4.5)),
                   color="tab:blue"),
            Series("direct", "lambda_s", "rep_gen_error",
                   "direct ridge, alpha=1.5", where=(KD, ("alpha", 1.5)),
                   style="dashed", color="tab:red"),
            Series("direct", "lambda_s", "rep_gen_error",
                   "direct ridge, alpha=4.5", where=(KD, ("alpha", 4.5)),
                   style="dashed", color="tab:blue"),
        ),
        guides=(
            Guide("bound", "hline-value", "floor, alpha=1.5", "rep_gen_error",
                  where=(("mode", "estimators"), ("alpha", 1.5)), color="tab:red"),
            Guide("bound", "hline-value", "floor, alpha=4.5", "rep_gen_error",
                  where=(("mode", "estimators"), ("alpha", 4.5)), color="tab:blue"),
        ),
        xlabel="ridge intensity (teacher for distilled, student for direct)",
        xscale="log",
        title="teacher ridge vs direct student ridge",
    )
    bottom = Panel(
        series=tuple(
            Series("mixing", "chi", "rep_gen_error", f"student ridge {lam:g}",
                   where=(KD, ("lambda_s", lam)), color=color)
            for lam, color in ((0.1, "tab:purple"), (0.2, "tab:green"),
                               (0.5, "tab:orange"))
        ),
        guides=(
            Guide("direct", "hline-min", "tuned direct ridge", "rep_gen_error",
                  where=(KD, ("alpha", 4.5)), color="0.3"),
            Guide("bound", "hline-value", "floor, alpha=4.5 ", "rep_gen_error",
                  where=(("mode", "estimators"), ("alpha", 4.5)), color="black"),
        ),
        xlabel="mixing weight",
        title="mixing scan at alpha=4.5, teacher ridge 0.1",
    )
    return FigureSpec(3, inputs, (top, bottom),
                      suptitle="distillation at best matches tuned direct ridge")


if __name__ == "__main__":
    raise SystemExit(standard_cli(build_spec))
