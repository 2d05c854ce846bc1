"""Monte Carlo estimates checked against the closed forms.

Sums go through :func:`math.fsum`, which is correctly rounded, so every
estimate is independent of how the batch was split across workers.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .errors import DomainError, InsufficientSampleError
from .forecasts import ALL_KINDS, ForecastKind, predict, theoretical_mse
from .model_core import DerivedParams, Horizon, ModelParams, derive, mean_return, second_moment
from .simulation import JumpSpec, PairBatch, batch_pairs, sample_grid

MIN_SAMPLE = 1000
DEFAULT_Z = 4.0


def mean_and_stderr(x: np.ndarray):
    """Sample mean and its standard error, both by exact-rounded two-pass sums."""
    n = x.size
    if n < 2:
        raise InsufficientSampleError(f"need at least 2 samples, got {n}")
    vals = x.tolist()
    mean = math.fsum(vals) / n
    var = math.fsum(((x - mean) ** 2).tolist()) / (n - 1)
    return mean, math.sqrt(var / n)


def z_score(empirical: float, theoretical: float, std_error: float) -> float:
    diff = empirical - theoretical
    if std_error == 0:
        return 0.0 if diff == 0 else math.copysign(math.inf, diff)
    return diff / std_error


@dataclass(frozen=True)
class MseEstimate:
    kind: ForecastKind
    mean_sq_err: float
    std_error: float
    n: int
    master_seed: int


@dataclass(frozen=True)
class VerificationReport:
    kind: ForecastKind
    theoretical: float
    empirical: MseEstimate
    z_score: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "theory": self.theoretical,
            "empirical": self.empirical.mean_sq_err,
            "stderr": self.empirical.std_error,
            "z": self.z_score,
            "pass": self.passed,
            "n": self.empirical.n,
            "master_seed": self.empirical.master_seed,
        }

    def csv_row(self) -> str:
        return (
            f"{self.kind.value},{self.theoretical!r},{self.empirical.mean_sq_err!r},"
            f"{self.empirical.std_error!r},{self.z_score!r},{str(self.passed).lower()}"
        )


def reports_to_csv(reports: Sequence[VerificationReport]) -> str:
    return "kind,theory,empirical,stderr,z,pass\n" + "".join(r.csv_row() + "\n" for r in reports)


def reports_to_json(reports: Sequence[VerificationReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)


def _check_n(n: int):
    if n < MIN_SAMPLE:
        raise InsufficientSampleError(f"n = {n} is below the minimum sample size {MIN_SAMPLE}")


def squared_errors(kind: ForecastKind, batch: PairBatch, h: Horizon, d: DerivedParams) -> np.ndarray:
    # beta = 0 routes every kind to p_T
    forecast = predict(kind, batch.p_t_obs, h, d)
    return (batch.p_s_target - forecast) ** 2


def estimate_from_batch(
    kind: ForecastKind, batch: PairBatch, h: Horizon, d: DerivedParams
) -> MseEstimate:
    kind = ForecastKind(kind)
    mean, se = mean_and_stderr(squared_errors(kind, batch, h, d))
    return MseEstimate(kind, mean, se, len(batch), batch.master_seed)


def empirical_mse(
    kind: ForecastKind,
    params: ModelParams,
    jumps: JumpSpec,
    h: Horizon,
    n: int,
    master_seed: int,
    workers: int = 1,
) -> MseEstimate:
    """Average of (p_S - forecast)^2 over ``n`` simulated pairs, forecasts using the true beta, mu."""
    _check_n(n)
    batch = batch_pairs(params, jumps, h, n, master_seed, workers)
    return estimate_from_batch(kind, batch, h, derive(params))


def verify_all(
    params: ModelParams,
    jumps: JumpSpec,
    h: Horizon,
    n: int,
    master_seed: int,
    z_threshold: float = DEFAULT_Z,
    workers: int = 1,
    theory_bias: float = 0.0,
) -> List[VerificationReport]:
    """One report per forecast kind; all kinds share one batch of pairs.

    ``theory_bias`` inflates every closed-form value by that fraction. It
    exists only to prove the harness can fail.
    """
    _check_n(n)
    d = derive(params)
    batch = batch_pairs(params, jumps, h, n, master_seed, workers)
    reports = []
    for kind in ALL_KINDS:
        est = estimate_from_batch(kind, batch, h, d)
        theory = theoretical_mse(kind, h, d) * (1.0 + theory_bias)
        z = z_score(est.mean_sq_err, theory, est.std_error)
        reports.append(VerificationReport(kind, theory, est, z, abs(z) <= z_threshold))
    return reports


@dataclass(frozen=True)
class MomentCell:
    statistic: str  # "mean" (s is unused, equals t) or "product"
    s: float
    t: float
    theoretical: float
    empirical: float
    std_error: float
    z_score: float
    passed: bool


@dataclass(frozen=True)
class MomentReport:
    cells: List[MomentCell] = field(default_factory=list)
    jump_kind: Optional[str] = None
    n: int = 0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cells)

    def to_dict(self) -> dict:
        return {
            "jump_kind": self.jump_kind,
            "n": self.n,
            "pass": self.passed,
            "cells": [c.__dict__ for c in self.cells],
        }


def moment_check(
    params: ModelParams,
    jumps: JumpSpec,
    time_grid: Sequence[float],
    n: int,
    master_seed: int,
    z_threshold: float = DEFAULT_Z,
    workers: int = 1,
) -> MomentReport:
    """Sample E(p_t) and E(p_s p_t) against beta t and beta^2 s t + mu^2 min(s, t)."""
    times = sorted(float(t) for t in time_grid)
    if not times or times[0] <= 0:
        raise DomainError("moment grid needs at least one positive time")
    d = derive(params)
    vals = sample_grid(params, jumps, times, n, master_seed, workers)
    cells = []
    for j, t in enumerate(times):
        emp, se = mean_and_stderr(vals[:, j])
        theory = mean_return(t, d)
        z = z_score(emp, theory, se)
        cells.append(MomentCell("mean", t, t, theory, emp, se, z, abs(z) <= z_threshold))
    for i, s in enumerate(times):
        for j in range(i, len(times)):
            t = times[j]
            emp, se = mean_and_stderr(vals[:, i] * vals[:, j])
            theory = second_moment(s, t, d)
            z = z_score(emp, theory, se)
            cells.append(MomentCell("product", s, t, theory, emp, se, z, abs(z) <= z_threshold))
    return MomentReport(cells, jumps.kind.value, n)


def moments_agree(a: MomentReport, b: MomentReport, z_threshold: float = DEFAULT_Z) -> bool:
    """Cellwise agreement of two moment reports within joint standard-error bands."""
    if len(a.cells) != len(b.cells):
        return False
    for ca, cb in zip(a.cells, b.cells):
        if (ca.statistic, ca.s, ca.t) != (cb.statistic, cb.s, cb.t):
            return False
        joint = math.hypot(ca.std_error, cb.std_error)
        if abs(z_score(ca.empirical, cb.empirical, joint)) > z_threshold:
            return False
    return True
