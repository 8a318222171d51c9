"""Two-parameter region sweeps over a scenario.

Every grid point is an independent, pure evaluation of the two-firm
venture-versus-competition comparison. Points are labelled by
:class:`RegionLabel` using only the rounded values written to the CSV, so
the label column can be re-derived from the other columns.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from rjvgame.comparisons import VERDICT_TOL, compare_rjv_vs_competition
from rjvgame.cutoffs import compute_cutoffs
from rjvgame.errors import ConfigurationError, InvalidInputError
from rjvgame.extensions import licensing_compare, spillover_fc_compare
from rjvgame.model import licensing_transform, spillover_transform, validate_race_regularity, validate_regularity
from rjvgame.scenario import Scenario, parse_scenario, round_sig, set_path

__all__ = [
    "CSV_COLUMNS",
    "RegionLabel",
    "Axis",
    "SweepSpec",
    "SweepRow",
    "parse_axis",
    "evaluate_point",
    "label_from_fields",
    "run_sweep",
    "rows_to_csv",
]

CSV_COLUMNS = (
    "x",
    "y",
    "regime",
    "theta1",
    "theta2",
    "theta_star",
    "innov_comp",
    "innov_rjv",
    "spend_comp",
    "spend_rjv",
    "net_profit_delta",
    "region_label",
)


class RegionLabel(str, enum.Enum):
    """Region of a sweep point. The declaration order fixes the plot colours."""

    EXCLUDED_DRASTIC = "EXCLUDED_DRASTIC"
    EXCLUDED_BUDGET = "EXCLUDED_BUDGET"
    RJV_UP_PROFITABLE = "RJV_UP_PROFITABLE"
    RJV_UP_UNPROFITABLE = "RJV_UP_UNPROFITABLE"
    RJV_DOWN_PROFITABLE = "RJV_DOWN_PROFITABLE"
    RJV_DOWN_UNPROFITABLE = "RJV_DOWN_UNPROFITABLE"
    EQUAL = "EQUAL"


@dataclass(frozen=True)
class Axis:
    """One sweep axis: a dotted scenario path and an evenly spaced range."""

    path: str
    lo: float
    hi: float
    steps: int

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or not self.lo < self.hi:
            raise InvalidInputError(f"axis {self.path}: need finite min < max, got {self.lo}, {self.hi}")
        if self.steps < 2:
            raise InvalidInputError(f"axis {self.path}: need at least 2 steps, got {self.steps}")

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass(frozen=True)
class SweepSpec:
    """Grid definition of a sweep."""

    x: Axis
    y: Axis


def parse_axis(text: str) -> Axis:
    """Parse ``path:min:max:steps``.

    Raises:
        InvalidInputError: If the text does not have four parts or the
            numbers do not parse.
    """
    parts = text.split(":")
    if len(parts) != 4 or not parts[0]:
        raise InvalidInputError(f"axis {text!r} must look like path:min:max:steps")
    try:
        lo, hi = float(parts[1]), float(parts[2])
        steps = int(parts[3])
    except ValueError as exc:
        raise InvalidInputError(f"axis {text!r}: {exc}") from exc
    return Axis(parts[0], lo, hi, steps)


@dataclass(frozen=True)
class SweepRow:
    """One CSV row. Numeric fields are already rounded; ``None`` means empty."""

    x: float
    y: float
    regime: Optional[str]
    theta1: Optional[float]
    theta2: Optional[float]
    theta_star: Optional[float]
    innov_comp: Optional[float]
    innov_rjv: Optional[float]
    spend_comp: Optional[float]
    spend_rjv: Optional[float]
    net_profit_delta: Optional[float]
    region_label: RegionLabel

    def cells(self) -> List[str]:
        out = []
        for name in CSV_COLUMNS:
            value = getattr(self, name)
            if value is None:
                out.append("")
            elif isinstance(value, RegionLabel):
                out.append(value.value)
            elif isinstance(value, str):
                out.append(value)
            else:
                out.append(format(value, ".12g"))
        return out


def label_from_fields(
    innov_comp: Optional[float],
    innov_rjv: Optional[float],
    net_profit_delta: Optional[float],
    excluded: Optional[RegionLabel] = None,
) -> RegionLabel:
    """Region label from the rounded row fields.

    The innovation verdict uses the same tolerance as the comparison
    reports; a venture counts as profitable when the net profit change is
    strictly positive.
    """
    if excluded is not None:
        return excluded
    delta = innov_rjv - innov_comp
    if abs(delta) <= VERDICT_TOL:
        return RegionLabel.EQUAL
    profitable = net_profit_delta > 0.0
    if delta > 0.0:
        return RegionLabel.RJV_UP_PROFITABLE if profitable else RegionLabel.RJV_UP_UNPROFITABLE
    return RegionLabel.RJV_DOWN_PROFITABLE if profitable else RegionLabel.RJV_DOWN_UNPROFITABLE


def _excluded(x: float, y: float, label: RegionLabel) -> SweepRow:
    return SweepRow(round_sig(x), round_sig(y), None, None, None, None, None, None, None, None, None, label)


def evaluate_point(sc: Scenario, x: float, y: float) -> SweepRow:
    """Evaluate one parsed scenario and label it.

    Exclusions come first: market primitives failing their validity screen
    or profits failing regularity give ``EXCLUDED_DRASTIC``; a budget that
    covers the catch-up portfolio gives ``EXCLUDED_BUDGET``.
    """
    if sc.tables is None or validate_regularity(sc.tables.quad):
        return _excluded(x, y, RegionLabel.EXCLUDED_DRASTIC)
    quad, cost, fin = sc.tables.quad, sc.cost, sc.financing
    comp_quad = quad
    if sc.spillover is not None:
        comp_quad = spillover_transform(quad, sc.spillover)
    elif sc.licensing is not None:
        comp_quad = licensing_transform(quad, sc.licensing)[0]
    if validate_race_regularity(comp_quad):
        return _excluded(x, y, RegionLabel.EXCLUDED_DRASTIC)
    theta2 = compute_cutoffs(comp_quad, cost, fin).theta2
    if not fin.budget < cost.mass(theta2):
        return _excluded(x, y, RegionLabel.EXCLUDED_BUDGET)
    if sc.spillover is not None:
        report = spillover_fc_compare(quad, sc.spillover, cost, fin)
    elif sc.licensing is not None:
        report = licensing_compare(quad, sc.licensing, cost, fin)
    else:
        report = compare_rjv_vs_competition(quad, cost, fin)
    comp, venture = report.baseline, report.alternative
    fields = dict(
        theta1=round_sig(comp.cutoffs["theta1"]),
        theta2=round_sig(comp.cutoffs["theta2"]),
        theta_star=round_sig(venture.cutoffs["theta_star"]),
        innov_comp=round_sig(comp.innovation_prob),
        innov_rjv=round_sig(venture.innovation_prob),
        spend_comp=round_sig(comp.gamma),
        spend_rjv=round_sig(venture.gamma),
        net_profit_delta=round_sig(report.net_profit_delta),
    )
    label = label_from_fields(fields["innov_comp"], fields["innov_rjv"], fields["net_profit_delta"])
    return SweepRow(round_sig(x), round_sig(y), report.regime.value, region_label=label, **fields)


def _point_scenario(tree: Dict[str, Any], spec: SweepSpec, x: float, y: float) -> Scenario:
    return parse_scenario(set_path(set_path(tree, spec.x.path, float(x)), spec.y.path, float(y)))


def _evaluate_column(args: Tuple[Dict[str, Any], SweepSpec, int]) -> List[SweepRow]:
    tree, spec, i = args
    x = float(spec.x.values[i])
    return [evaluate_point(_point_scenario(tree, spec, x, float(y)), x, float(y)) for y in spec.y.values]


def run_sweep(sc: Scenario, spec: SweepSpec, *, workers: int = 1) -> List[SweepRow]:
    """Evaluate the whole grid, x-major then y, independent of ``workers``.

    Raises:
        InvalidInputError: If an axis path does not resolve in the scenario.
        ConfigurationError: If the scenario is not a two-firm market.
    """
    if sc.firms != 2:
        raise ConfigurationError("sweeps cover two-firm markets only")
    if spec.x.path == spec.y.path:
        raise InvalidInputError(f"both axes use the path '{spec.x.path}'")
    # Resolve both paths up front so a typo fails before any work starts.
    _point_scenario(sc.raw, spec, spec.x.lo, spec.y.lo)
    jobs = [(sc.raw, spec, i) for i in range(spec.x.steps)]
    workers = max(1, int(workers))
    if workers == 1:
        columns = [_evaluate_column(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            columns = list(pool.map(_evaluate_column, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [row for column in columns for row in column]


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    """Render rows as CSV text with the fixed header and ``\\n`` line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.cells())
    return buffer.getvalue()
