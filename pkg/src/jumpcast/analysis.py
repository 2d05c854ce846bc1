"""Relative performance as a function of relative volatility, for fixed T and S."""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from typing import List, NamedTuple

from .errors import DomainError
from .forecasts import ForecastKind, relative_performance
from .model_core import Horizon

CSV_HEADER = "gamma,best_measurable,best_linear,blue,trivial"

# (gamma_min, gamma_max, step): the left-open ranges (0, 5] and (5, 20]
FIGURE_1_RANGE = (0.05, 5.0, 0.05)
FIGURE_2_RANGE = (5.15, 20.0, 0.15)


class SweepRow(NamedTuple):
    gamma: float
    best_measurable: float
    best_linear: float
    blue: float
    trivial: float


@dataclass(frozen=True)
class SweepTable:
    t_obs: float
    s_target: float
    rows: List[SweepRow]

    @property
    def horizon(self) -> Horizon:
        return Horizon(self.t_obs, self.s_target)


class FigureFormat(str, enum.Enum):
    CSV = "csv"
    SVG = "svg"


def sweep_row(h: Horizon, gamma: float) -> SweepRow:
    g2 = gamma * gamma
    return SweepRow(gamma, *(relative_performance(k, h, g2) for k in ForecastKind))


def gamma_grid(gamma_min: float, gamma_max: float, step: float) -> List[float]:
    if not step > 0:
        raise DomainError(f"step must be > 0, got {step!r}")
    if not 0 < gamma_min < gamma_max:
        raise DomainError(f"need 0 < gamma_min < gamma_max, got {gamma_min!r}, {gamma_max!r}")
    if not math.isfinite(gamma_max):
        raise DomainError("gamma_max must be finite")
    count = math.floor(round((gamma_max - gamma_min) / step, 9)) + 1
    # index times step, rounded, so grid points do not drift
    return [round(gamma_min + k * step, 12) for k in range(count)]


def gamma_sweep(h: Horizon, gamma_min: float, gamma_max: float, step: float) -> SweepTable:
    return SweepTable(h.t_obs, h.s_target, [sweep_row(h, g) for g in gamma_grid(gamma_min, gamma_max, step)])


def crossing_point(h: Horizon) -> float:
    """gamma at which the best-linear-unbiased and trivial curves meet: sqrt(T)."""
    return math.sqrt(h.t_obs)


def sweep_to_csv(table: SweepTable) -> str:
    lines = [CSV_HEADER]
    lines.extend(",".join(repr(v) for v in row) for row in table.rows)
    return "\n".join(lines) + "\n"


def sweep_from_csv(text: str, t_obs: float, s_target: float) -> SweepTable:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if ",".join(header) != CSV_HEADER:
        raise ValueError(f"unexpected sweep header {header!r}")
    rows = [SweepRow(*map(float, rec)) for rec in reader if rec]
    return SweepTable(t_obs, s_target, rows)


def emit_figure(table: SweepTable, fmt=FigureFormat.CSV) -> bytes:
    if not table.rows:
        raise DomainError("cannot emit an empty sweep table")
    fmt = FigureFormat(fmt)
    if fmt is FigureFormat.CSV:
        return sweep_to_csv(table).encode()
    from .plotting import figure_bytes, sweep_figure

    return figure_bytes(sweep_figure(table), "svg")


def sweep_filename(h: Horizon, ext: str) -> str:
    return f"sweep_T{h.t_obs:g}_S{h.s_target:g}.{ext}"
