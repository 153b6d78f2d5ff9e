"""Render sweep CSVs into figures.

The boundary with the training side is a file contract: this package parses
the documented CSV schemas and never imports training code. Every renderer
validates its input columns up front and refuses to emit an image for empty
or malformed data.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

KINDS = ("loss_vs_lr", "lrs_vs_size", "bratio_hist", "zloss_1d", "zloss_2d",
         "diagnostics")

SIZE_ORDER = ("tiny", "small", "medium")


class SchemaError(ValueError):
    """Input CSV does not match the documented schema."""


@dataclass
class FigureSpec:
    kind: str
    in_path: str
    out_path: str
    axis: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")


def _read_rows(path: str, required: tuple[str, ...]) -> list[dict]:
    if not os.path.exists(path):
        raise SchemaError(f"input file {path} does not exist")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in required:
            if col not in header:
                raise SchemaError(f"missing column {col!r} in {path}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"no data rows in {path}")
    return rows


def _float(row: dict, col: str, path: str) -> float:
    raw = (row.get(col) or "").strip()
    if raw in ("", "None", "null"):
        return math.nan
    try:
        return float(raw)
    except ValueError as exc:
        raise SchemaError(f"column {col!r} in {path} is not numeric: {raw!r}") from exc


def _groups(rows, keys):
    out: dict[tuple, list[dict]] = {}
    for r in rows:
        out.setdefault(tuple(r.get(k, "") for k in keys), []).append(r)
    return out


def _size_key(tag: str):
    return (SIZE_ORDER.index(tag) if tag in SIZE_ORDER else len(SIZE_ORDER), tag)


def render(spec: FigureSpec) -> str:
    """Render one figure; returns the output path."""
    fig = globals()[f"_render_{spec.kind}"](spec)
    fig.savefig(spec.out_path)
    plt.close(fig)
    return spec.out_path


def _render_loss_vs_lr(spec):
    rows = _read_rows(spec.in_path,
                      ("strategy", "size", "eta", "final_loss", "init_loss",
                       "diverged"))
    fig, ax = plt.subplots(figsize=(5.5, 4))
    multi_size = len({r["size"] for r in rows}) > 1
    for (strategy, size), grp in sorted(_groups(rows, ("strategy", "size")).items()):
        grp = sorted(grp, key=lambda r: _float(r, "eta", spec.in_path))
        etas = [_float(r, "eta", spec.in_path) for r in grp]
        finals, init = [], math.nan
        capped_x, capped_y = [], []
        for r, eta in zip(grp, etas):
            loss = _float(r, "final_loss", spec.in_path)
            init = _float(r, "init_loss", spec.in_path)
            diverged = r.get("diverged", "").strip().lower() in ("true", "1")
            if diverged or not math.isfinite(loss):
                # diverged cells collapse to the clip level, drawn capped
                capped_x.append(eta)
                capped_y.append(init)
                finals.append(math.nan)
            else:
                finals.append(loss)
        label = f"{strategy} ({size})" if multi_size else strategy
        (line,) = ax.plot(etas, finals, marker="o", label=label)
        if capped_x:
            ax.plot(capped_x, capped_y, linestyle="none", marker="^",
                    markersize=9, color=line.get_color())
    ax.set_xscale("log")
    ax.set_xlabel("learning rate")
    ax.set_ylabel("final test loss")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def _render_lrs_vs_size(spec):
    rows = _read_rows(spec.in_path, ("strategy", "size", "lrs"))
    fig, ax = plt.subplots(figsize=(5.5, 4))
    sizes = sorted({r["size"] for r in rows}, key=_size_key)
    xpos = {s: i for i, s in enumerate(sizes)}
    for (strategy,), grp in sorted(_groups(rows, ("strategy",)).items()):
        grp = sorted(grp, key=lambda r: _size_key(r["size"]))
        ax.plot([xpos[r["size"]] for r in grp],
                [_float(r, "lrs", spec.in_path) for r in grp],
                marker="s", label=strategy)
    ax.set_xticks(range(len(sizes)), sizes)
    ax.set_xlabel("model size")
    ax.set_ylabel("learning rate sensitivity")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def _render_bratio_hist(spec):
    rows = _read_rows(spec.in_path, ("b_ratio",))
    values = []
    for r in rows:
        if (r.get("error") or "").strip():
            continue
        v = _float(r, "b_ratio", spec.in_path)
        if math.isfinite(v):
            values.append(v)
    if not values:
        raise SchemaError(f"no readable b_ratio values in {spec.in_path}")
    fig, ax = plt.subplots(figsize=(5.5, 4))
    ax.hist(values, bins=min(20, max(5, len(values) // 2)), edgecolor="black")
    ax.axvline(1.0, color="black", linestyle="--", linewidth=1)
    ax.set_xlabel("bound ratio")
    ax.set_ylabel("count")
    fig.tight_layout()
    return fig


def _render_zloss_1d(spec):
    rows = _read_rows(spec.in_path, ("s", "l", "zloss"))
    fig, ax = plt.subplots(figsize=(5.5, 4))
    for (s,), grp in sorted(_groups(rows, ("s",)).items(), key=lambda kv: float(kv[0][0])):
        grp = sorted(grp, key=lambda r: _float(r, "l", spec.in_path))
        ax.plot([_float(r, "l", spec.in_path) for r in grp],
                [_float(r, "zloss", spec.in_path) for r in grp],
                label=f"S = {float(s):g}")
    ax.set_xlabel("logit")
    ax.set_ylabel("z-loss term")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def _render_zloss_2d(spec):
    rows = _read_rows(spec.in_path, ("l1", "l2", "z", "zloss", "on_curve"))
    grid_rows = [r for r in rows if r["on_curve"].strip() != "1"]
    curve = [r for r in rows if r["on_curve"].strip() == "1"]
    if not grid_rows:
        raise SchemaError(f"no grid rows in {spec.in_path}")
    l1 = np.array([_float(r, "l1", spec.in_path) for r in grid_rows])
    l2 = np.array([_float(r, "l2", spec.in_path) for r in grid_rows])
    z = np.array([_float(r, "z", spec.in_path) for r in grid_rows])
    lz = np.array([_float(r, "zloss", spec.in_path) for r in grid_rows])
    xs, ys = np.unique(l1), np.unique(l2)
    if xs.size * ys.size != len(grid_rows):
        raise SchemaError(f"grid rows in {spec.in_path} do not form a full l1 x l2 grid")
    order = np.lexsort((l2, l1))
    z_grid = z[order].reshape(xs.size, ys.size).T
    lz_grid = lz[order].reshape(xs.size, ys.size).T
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    for ax, values, title in ((axes[0], np.log(z_grid), "log normalizer"),
                              (axes[1], lz_grid, "z-loss term")):
        im = ax.contourf(xs, ys, values, levels=25)
        fig.colorbar(im, ax=ax)
        if curve:
            cx = [_float(r, "l1", spec.in_path) for r in curve]
            cy = [_float(r, "l2", spec.in_path) for r in curve]
            ax.plot(cx, cy, color="black", linewidth=1.5)
        ax.set_xlabel("logit 1")
        ax.set_ylabel("logit 2")
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    return fig


def _render_diagnostics(spec):
    rows = _read_rows(spec.in_path,
                      ("strategy", "size", "eta", "mu_norm", "logit_mean",
                       "logit_std", "logit_max_abs"))
    panels = (("logit_mean", "logit mean"), ("logit_std", "logit std"),
              ("mu_norm", "mean embedding norm"), ("logit_max_abs", "max |logit|"))
    fig, axes = plt.subplots(2, 2, figsize=(9, 7))
    for ax, (col, title) in zip(axes.ravel(), panels):
        for (strategy,), grp in sorted(_groups(rows, ("strategy",)).items()):
            grp = sorted(grp, key=lambda r: _float(r, "eta", spec.in_path))
            ax.plot([_float(r, "eta", spec.in_path) for r in grp],
                    [_float(r, col, spec.in_path) for r in grp],
                    marker="o", markersize=3, label=strategy)
        ax.set_xscale("log")
        ax.set_xlabel("learning rate")
        ax.set_title(title, fontsize=10)
        ax.grid(True, alpha=0.3)
    axes[0, 0].legend(fontsize=7)
    fig.tight_layout()
    return fig
