"""Shared figure-rendering machinery.

Figures are a pure function of (CSV files, figure spec): matplotlib is
pinned to the SVG backend with a fixed hash salt and stripped metadata, so
re-rendering the same inputs is byte-identical. The only computations
allowed here are reading CSV columns, row filtering, grouping reductions
(min over a column, argmax locations for threshold guides) and plotting.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("svg")
import matplotlib.pyplot as plt  # noqa: E402

matplotlib.rcParams.update({
    "svg.hashsalt": "kdgmm-figures",
    "svg.fonttype": "none",
    "figure.dpi": 100,
    "axes.grid": True,
    "grid.alpha": 0.25,
    "font.size": 9,
    "legend.fontsize": 7.5,
})


class MissingColumnError(ValueError):
    pass


def load_rows(path) -> list[dict]:
    """CSV rows with numeric fields parsed; empty fields become None."""
    rows = []
    with open(path, newline="") as fh:
        for raw in csv.DictReader(fh):
            row = {}
            for key, value in raw.items():
                if value is None or value == "":
                    row[key] = None
                elif key in ("mode", "status"):
                    row[key] = value
                else:
                    try:
                        row[key] = float(value)
                    except ValueError:
                        row[key] = value
            rows.append(row)
    if not rows:
        raise ValueError(f"no rows in {path}")
    return rows


def _check_columns(rows: list[dict], columns, source) -> None:
    header = rows[0].keys()
    for col in columns:
        if col not in header:
            raise MissingColumnError(f"column {col!r} not present in {source}")


def _match(row: dict, where) -> bool:
    return all(row.get(col) == value for col, value in where)


@dataclass(frozen=True)
class Series:
    csv: str
    x: str
    y: str
    label: str
    yerr: str | None = None
    where: tuple = ()            # ((column, value), ...)
    reduce: str | None = None    # "min": min of y per x over matching rows
    style: str = "line"          # line | dashed | errorbar
    color: str | None = None


@dataclass(frozen=True)
class Guide:
    """Threshold marker derived from CSV columns.

    kind "vline-column": vertical line at the (constant) value of `y`;
    kind "vline-argmax": vertical line at the x of the maximal y;
    kind "hline-value": horizontal line at the value of `y` (single row);
    kind "hline-min": horizontal line at the minimum of `y`.
    """

    csv: str
    kind: str
    label: str
    y: str
    x: str | None = None
    where: tuple = ()
    color: str = "0.4"


@dataclass(frozen=True)
class Panel:
    series: tuple
    guides: tuple = ()
    xlabel: str = "samples per dimension"
    ylabel: str = "test error"
    title: str = ""
    xscale: str = "linear"
    yscale: str = "linear"


@dataclass(frozen=True)
class FigureSpec:
    figure_id: int
    inputs: dict
    panels: tuple
    suptitle: str = ""

    def __post_init__(self):
        if not 1 <= self.figure_id <= 9:
            raise ValueError(f"figure id must be 1..9, got {self.figure_id}")


def _series_points(spec: FigureSpec, tables: dict, s: Series):
    rows = tables[s.csv]
    needed = [s.x, s.y] + ([s.yerr] if s.yerr else [])
    _check_columns(rows, needed + [c for c, _ in s.where], spec.inputs[s.csv])
    selected = [
        r for r in rows
        if _match(r, s.where) and r[s.x] is not None and r[s.y] is not None
    ]
    if not selected:
        raise ValueError(
            f"series {s.label!r} selects no rows from {spec.inputs[s.csv]}"
        )
    if s.reduce == "min":
        grouped: dict[float, float] = {}
        for r in selected:
            grouped[r[s.x]] = min(grouped.get(r[s.x], float("inf")), r[s.y])
        xs = sorted(grouped)
        return xs, [grouped[x] for x in xs], None
    selected.sort(key=lambda r: r[s.x])
    xs = [r[s.x] for r in selected]
    ys = [r[s.y] for r in selected]
    errs = [r[s.yerr] or 0.0 for r in selected] if s.yerr else None
    return xs, ys, errs


def _guide_value(spec: FigureSpec, tables: dict, g: Guide) -> float:
    rows = tables[g.csv]
    _check_columns(rows, [g.y] + ([g.x] if g.x else []) +
                   [c for c, _ in g.where], spec.inputs[g.csv])
    selected = [r for r in rows if _match(r, g.where) and r[g.y] is not None]
    if not selected:
        raise ValueError(f"guide {g.label!r} selects no rows")
    if g.kind == "vline-column":
        return selected[0][g.y]
    if g.kind == "vline-argmax":
        best = max(selected, key=lambda r: r[g.y])
        return best[g.x]
    if g.kind == "hline-value":
        return selected[0][g.y]
    if g.kind == "hline-min":
        return min(r[g.y] for r in selected)
    raise ValueError(f"unknown guide kind {g.kind!r}")


def render(spec: FigureSpec, out_dir) -> Path:
    """Render one figure to SVG; returns the written path.

    Hard errors (missing columns, empty series, duplicate labels) are
    raised before any file is written.
    """
    tables = {name: load_rows(path) for name, path in spec.inputs.items()}

    # validate everything up front so errors never leave a partial file
    prepared = []
    for panel in spec.panels:
        items = []
        panel_labels = []
        for s in panel.series:
            items.append((s, _series_points(spec, tables, s)))
            panel_labels.append(s.label)
        duplicates = {l for l in panel_labels if panel_labels.count(l) > 1}
        if duplicates:
            raise ValueError(f"duplicate series labels: {sorted(duplicates)}")
        guides = [(g, _guide_value(spec, tables, g)) for g in panel.guides]
        prepared.append((panel, items, guides))

    n = len(spec.panels)
    ncols = 2 if n > 1 else 1
    nrows = (n + ncols - 1) // ncols
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(5.0 * ncols, 3.6 * nrows), squeeze=False
    )
    flat = axes.ravel()
    for ax in flat[n:]:
        ax.set_visible(False)

    handles, legend_labels = [], []

    def _register(handle, label):
        # one legend entry per label, shared across panels
        if label not in legend_labels:
            handles.append(handle)
            legend_labels.append(label)

    for ax, (panel, items, guides) in zip(flat, prepared):
        for s, (xs, ys, errs) in items:
            kwargs = {"color": s.color} if s.color else {}
            if s.style == "errorbar":
                h = ax.errorbar(xs, ys, yerr=errs, fmt="o", markersize=3,
                                capsize=2, linestyle="none", **kwargs)
            elif s.style == "dashed":
                (h,) = ax.plot(xs, ys, linestyle="--", linewidth=1.2, **kwargs)
            else:
                (h,) = ax.plot(xs, ys, linewidth=1.4, **kwargs)
            _register(h, s.label)
        for g, value in guides:
            if g.kind.startswith("vline"):
                h = ax.axvline(value, color=g.color, linestyle=":", linewidth=1.0)
            else:
                h = ax.axhline(value, color=g.color, linestyle=":", linewidth=1.0)
            _register(h, g.label)
        ax.set_xlabel(panel.xlabel)
        ax.set_ylabel(panel.ylabel)
        ax.set_xscale(panel.xscale)
        ax.set_yscale(panel.yscale)
        if panel.title:
            ax.set_title(panel.title, fontsize=9)

    fig.legend(handles, legend_labels, loc="upper center",
               bbox_to_anchor=(0.5, -0.01), ncol=3, frameon=False)
    if spec.suptitle:
        fig.suptitle(spec.suptitle, fontsize=10)
    fig.tight_layout()

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    out = out_dir / f"fig{spec.figure_id}.svg"
    fig.savefig(out, bbox_inches="tight", metadata={"Date": None})
    plt.close(fig)
    return out


def standard_cli(build_spec):
    """--csv-dir/--out-dir entry point shared by the per-figure scripts."""
    import argparse

    parser = argparse.ArgumentParser()
    parser.add_argument("--csv-dir", default="data/figures")
    parser.add_argument("--out-dir", default="figures/out")
    args = parser.parse_args()
    out = render(build_spec(Path(args.csv_dir)), args.out_dir)
    print(out)
    return 0
