"""Figure rendering for sweep outputs.

Renders the scaled column of every series against the axis, masking
singular points, and writes a PNG next to the delimited data file.  The
divergent combinations near the balanced regime are kept visible but the
vertical range is clipped to the bulk of the finite values.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .sweep import SweepResult


def _finite_limits(values: np.ndarray) -> tuple[float, float] | None:
    finite = values[np.isfinite(values)]
    if finite.size == 0:
        return None
    lo, hi = np.percentile(finite, [1.0, 99.0])
    if not (hi > lo):
        lo, hi = float(finite.min()) - 1.0, float(finite.max()) + 1.0
    pad = 0.08 * (hi - lo)
    return float(lo - pad), float(hi + pad)


def render_figure(result: SweepResult, path: str | Path, title: str | None = None,
                  dpi: int = 150) -> Path:
    """Plot every scaled series of a sweep result and save it as an image."""
    target = Path(path)
    axis_name = result.config.axis.name
    cols = result.columns
    axis_vals = np.array([row[0] for row in result.rows], dtype=float)

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    all_vals = []
    for series in result.config.series:
        col = cols.index(f"{series.label}_scaled")
        vals = np.array([np.nan if row[col] is None else row[col]
                         for row in result.rows], dtype=float)
        ax.plot(axis_vals, vals, lw=1.4, label=series.label)
        all_vals.append(vals)
    limits = _finite_limits(np.concatenate(all_vals))
    if limits is not None:
        ax.set_ylim(*limits)

    singular_col = cols.index("singular")
    flagged = axis_vals[[bool(row[singular_col]) for row in result.rows]]
    for x in flagged:
        ax.axvline(x, color="0.75", lw=0.8, ls=":")

    ax.set_xlabel(axis_name)
    ax.set_ylabel("scaled value")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8, ncol=2)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    target.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(target, dpi=dpi)
    plt.close(fig)
    return target


def figure_path_for(data_path: str | Path) -> Path:
    """PNG sibling of a data file (same stem, .png suffix)."""
    p = Path(data_path)
    return p.with_suffix(".png")
