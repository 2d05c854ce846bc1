"""The four forecasts of p_S from p_T, their mean square errors and relative performances.

The target is p_S itself, so no conditional-expectation correction term
appears in the errors. All formulas consume ``gamma2``; the sign of gamma
never matters.
"""
from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass
from typing import List

from .errors import DomainError, UndefinedGammaError
from .model_core import DerivedParams, Horizon


class ForecastKind(str, enum.Enum):
    BEST_MEASURABLE = "best_measurable"
    BEST_LINEAR = "best_linear"
    BLUE = "blue"
    TRIVIAL = "trivial"

    @classmethod
    def parse(cls, name: str) -> "ForecastKind":
        key = name.strip().lower().replace("-", "_")
        aliases = {
            "bestmeasurable": "best_measurable",
            "bestlinear": "best_linear",
            "best_linear_unbiased": "blue",
        }
        return cls(aliases.get(key, key))


ALL_KINDS = tuple(ForecastKind)


def forecast_value(kind: ForecastKind, p_t: float, h: Horizon, d: DerivedParams) -> float:
    """Point forecast of p_S given the observed p_T.

    ``BLUE`` and ``TRIVIAL`` never look at beta. The other two need it and
    raise :class:`UndefinedGammaError` for beta = 0; use
    :func:`coincident_forecast_beta_zero` (or :func:`predict`) there.
    """
    kind = ForecastKind(kind)
    t, s = h.t_obs, h.s_target
    if kind is ForecastKind.TRIVIAL:
        return p_t
    if kind is ForecastKind.BLUE:
        return p_t * s / t
    if d.beta == 0:
        raise UndefinedGammaError(
            f"{kind.value} forecast needs beta != 0; for beta = 0 all forecasts coincide with p_T"
        )
    if kind is ForecastKind.BEST_MEASURABLE:
        return p_t + d.beta * (s - t)
    g2 = d.require_gamma2()
    return p_t * (s + g2) / (t + g2)


def coincident_forecast_beta_zero(p_t: float) -> float:
    return p_t


def predict(kind: ForecastKind, p_t, h: Horizon, d: DerivedParams):
    """Forecast that honours the beta = 0 coincidence rule. Works on arrays too."""
    if d.beta == 0:
        return coincident_forecast_beta_zero(p_t)
    return forecast_value(kind, p_t, h, d)


def theoretical_mse(kind: ForecastKind, h: Horizon, d: DerivedParams) -> float:
    kind = ForecastKind(kind)
    t, s = h.t_obs, h.s_target
    if not s > t:
        raise DomainError(f"need S > T, got T={t!r}, S={s!r}")
    gap = s - t
    base = d.mu_sq * gap
    if d.beta == 0:
        # every forecast equals p_T; E((p_S - p_T)^2) = mu^2 (S - T)
        return base
    g2 = d.require_gamma2()
    if kind is ForecastKind.BEST_MEASURABLE:
        return base
    if kind is ForecastKind.BEST_LINEAR:
        return base * (s + g2) / (t + g2)
    if kind is ForecastKind.BLUE:
        return base * s / t
    return base * (1.0 + gap / g2)


def relative_performance(kind: ForecastKind, h: Horizon, gamma2: float) -> float:
    kind = ForecastKind(kind)
    t, s = h.t_obs, h.s_target
    if not s > t:
        raise DomainError(f"need S > T, got T={t!r}, S={s!r}")
    if gamma2 < 0:
        raise DomainError(f"gamma2 must be >= 0, got {gamma2!r}")
    if kind is ForecastKind.BEST_MEASURABLE:
        return 1.0
    if kind is ForecastKind.BEST_LINEAR:
        return (t + gamma2) / (s + gamma2)
    if kind is ForecastKind.BLUE:
        return t / s
    if gamma2 == 0:
        return 0.0
    return gamma2 / (gamma2 + (s - t))


@dataclass(frozen=True)
class MseBreakdown:
    kind: ForecastKind
    mse: float
    relative_performance: float

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "mse": self.mse, "delta": self.relative_performance}

    def csv_row(self) -> str:
        return f"{self.kind.value},{self.mse!r},{self.relative_performance!r}"


def mse_table(h: Horizon, d: DerivedParams) -> List[MseBreakdown]:
    rows = []
    for kind in ALL_KINDS:
        mse = theoretical_mse(kind, h, d)
        delta = 1.0 if d.beta == 0 else relative_performance(kind, h, d.require_gamma2())
        rows.append(MseBreakdown(kind, mse, delta))
    return rows


def breakdowns_to_csv(rows: List[MseBreakdown]) -> str:
    return "kind,mse,delta\n" + "".join(r.csv_row() + "\n" for r in rows)


def breakdowns_to_json(rows: List[MseBreakdown]) -> str:
    return json.dumps([r.to_dict() for r in rows], indent=2)


def breakdowns_from_csv(text: str) -> List[MseBreakdown]:
    reader = csv.DictReader(io.StringIO(text))
    return [
        MseBreakdown(ForecastKind(r["kind"]), float(r["mse"]), float(r["delta"]))
        for r in reader
    ]
