"""Render all nine figures from the harness CSVs."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import fig1, fig2, fig3, fig4, fig5, fig6, fig7, fig8, fig9  # noqa: E401
from common import render

MODULES = (fig1, fig2, fig3, fig4, fig5, fig6, fig7, fig8, fig9)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--csv-dir", default="data/figures")
    parser.add_argument("--out-dir", default="figures/out")
    args = parser.parse_args(argv)
    csv_dir = Path(args.csv_dir)
    failures = 0
    for module in MODULES:
        try:
            out = render(module.build_spec(csv_dir), args.out_dir)
            print(out)
        except Exception as exc:  # keep going; report at the end
            failures += 1
            print(f"error rendering {module.__name__}: {exc}", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
