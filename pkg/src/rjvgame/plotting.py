"""SVG region maps of sweep results.

The output is deterministic: a fixed hash salt, no creation date and a
palette keyed by :class:`~rjvgame.sweep.RegionLabel` declaration order.
"""

from __future__ import annotations

import io
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402
from matplotlib.patches import Patch  # noqa: E402

from rjvgame.sweep import RegionLabel, SweepRow, SweepSpec  # noqa: E402

__all__ = ["REGION_COLORS", "render_svg"]

REGION_COLORS = (
    "#4d4d4d",  # EXCLUDED_DRASTIC
    "#bdbdbd",  # EXCLUDED_BUDGET
    "#1a9850",  # RJV_UP_PROFITABLE
    "#a6d96a",  # RJV_UP_UNPROFITABLE
    "#d73027",  # RJV_DOWN_PROFITABLE
    "#fdae61",  # RJV_DOWN_UNPROFITABLE
    "#4575b4",  # EQUAL
)

_RC = {
    "svg.hashsalt": "rjvgame-region-map",
    "svg.fonttype": "path",
    "path.simplify": False,
}


def _edges(values: np.ndarray) -> np.ndarray:
    mid = 0.5 * (values[1:] + values[:-1])
    return np.concatenate(([values[0] - (mid[0] - values[0])], mid, [values[-1] + (values[-1] - mid[-1])]))


def render_svg(rows: Sequence[SweepRow], spec: SweepSpec, title: str = "") -> str:
    """Draw one rectangle per grid point coloured by its region label.

    Args:
        rows: Sweep rows in x-major order, as returned by
            :func:`~rjvgame.sweep.run_sweep`.
        spec: The grid the rows came from.
        title: Optional plot title.

    Returns:
        A standalone SVG document.
    """
    labels = list(RegionLabel)
    index = {label: i for i, label in enumerate(labels)}
    nx, ny = spec.x.steps, spec.y.steps
    grid = np.array([index[r.region_label] for r in rows], dtype=float).reshape(nx, ny).T
    cmap = ListedColormap(REGION_COLORS)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(7.5, 5.5))
        ax.pcolormesh(
            _edges(spec.x.values),
            _edges(spec.y.values),
            grid,
            cmap=cmap,
            vmin=-0.5,
            vmax=len(labels) - 0.5,
            shading="flat",
        )
        ax.set_xlabel(spec.x.path)
        ax.set_ylabel(spec.y.path)
        if title:
            ax.set_title(title)
        handles = [Patch(facecolor=color, label=label.value) for label, color in zip(labels, REGION_COLORS)]
        ax.legend(handles=handles, loc="center left", bbox_to_anchor=(1.02, 0.5), fontsize=8, frameon=False)
        fig.tight_layout()
        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buffer.getvalue()
