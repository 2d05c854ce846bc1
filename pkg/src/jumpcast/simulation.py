"""Exact simulation of the jump-augmented return process.

Two routes are provided and deliberately kept separate:

* :func:`simulate_path` draws one trajectory on a user grid with numpy's
  PCG64, placing every jump time explicitly.
* :func:`sample_grid` / :func:`batch_pairs` draw many realizations at a few
  time points from the counter-based stream in :mod:`jumpcast.rng`, using
  independent increments and the exact law of the compound Poisson sum over
  each interval.

Neither route discretizes the dynamics, so neither has time-step bias.
"""
from __future__ import annotations

import enum
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np
from scipy import stats
from scipy.special import ndtri

from . import rng
from .errors import DomainError, EmptyBatchError, ParameterError
from .model_core import Horizon, ModelParams

SLOTS_PER_INTERVAL = 3
DEFAULT_CHUNK = 16384


class JumpKind(str, enum.Enum):
    GAUSSIAN = "gaussian"
    CONSTANT = "constant"
    TWO_POINT = "two_point"

    @classmethod
    def parse(cls, name: str) -> "JumpKind":
        key = name.strip().lower().replace("-", "_")
        aliases = {"twopoint": "two_point", "normal": "gaussian"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ParameterError("jumps", f"unknown jump kind {name!r}") from None


@dataclass(frozen=True)
class JumpSpec:
    """Jump-size law with mean ``nu`` and variance ``tau2``.

    ``TWO_POINT`` puts mass 1/2 on ``nu - tau`` and ``nu + tau``.
    """

    kind: JumpKind
    nu: float
    tau2: float

    def __post_init__(self):
        object.__setattr__(self, "kind", JumpKind(self.kind))
        if self.tau2 < 0:
            raise ParameterError("tau2", "must be >= 0")
        if self.kind is JumpKind.CONSTANT and self.tau2 != 0:
            raise ParameterError("tau2", "constant jumps require tau2 = 0")

    @classmethod
    def for_params(cls, params: ModelParams, kind=JumpKind.GAUSSIAN) -> "JumpSpec":
        if isinstance(kind, str):
            kind = JumpKind.parse(kind)
        return cls(kind, params.nu, params.tau2)

    @property
    def tau(self) -> float:
        return math.sqrt(self.tau2)

    def sample(self, gen: np.random.Generator, size: int) -> np.ndarray:
        if self.kind is JumpKind.GAUSSIAN:
            return gen.normal(self.nu, self.tau, size)
        if self.kind is JumpKind.CONSTANT:
            return np.full(size, self.nu)
        signs = 2.0 * gen.integers(0, 2, size) - 1.0
        return self.nu + self.tau * signs

    def sum_of(self, counts: np.ndarray, aux_uniform: np.ndarray) -> np.ndarray:
        """Exact draw of the sum of ``counts`` iid jumps, one uniform per sum."""
        counts = np.asarray(counts, dtype=np.int64)
        nf = counts.astype(np.float64)
        if self.kind is JumpKind.CONSTANT or self.tau2 == 0:
            return self.nu * nf
        if self.kind is JumpKind.GAUSSIAN:
            z = ndtri(aux_uniform)
            return self.nu * nf + np.sqrt(self.tau2 * nf) * z
        heads = np.where(counts > 0, stats.binom.ppf(aux_uniform, counts, 0.5), 0.0)
        return self.nu * nf + self.tau * (2.0 * heads - nf)


def _check_consistent(params: ModelParams, jumps: JumpSpec):
    if params.lam > 0 and (jumps.nu != params.nu or jumps.tau2 != params.tau2):
        raise ParameterError(
            "jumps", "jump spec (nu, tau2) must match the model parameters"
        )


def _check_grid(times) -> np.ndarray:
    t = np.asarray(times, dtype=np.float64)
    if t.ndim != 1 or t.size < 1:
        raise DomainError("time grid must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(t)):
        raise DomainError("time grid must be finite")
    if np.any(t < 0):
        raise DomainError("time grid must not contain negative times")
    if np.any(np.diff(t) <= 0):
        raise DomainError("time grid must be strictly increasing")
    return t


@dataclass(frozen=True)
class PathGrid:
    times: np.ndarray
    returns: np.ndarray
    jump_times: np.ndarray
    seed: int

    def prices(self, p0: float) -> np.ndarray:
        return p0 * np.exp(self.returns)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("time,return\n")
        for t, p in zip(self.times.tolist(), self.returns.tolist()):
            buf.write(f"{t!r},{p!r}\n")
        return buf.getvalue()


def simulate_path(
    params: ModelParams, jumps: JumpSpec, grid_times: Sequence[float], seed: int
) -> PathGrid:
    _check_consistent(params, jumps)
    t = _check_grid(grid_times)
    if t[0] != 0:
        raise DomainError("time grid must start at 0")
    seed = rng.check_seed(seed)
    gen = np.random.default_rng(seed)

    dt = np.diff(t)
    w = np.concatenate(([0.0], np.cumsum(gen.standard_normal(dt.size) * np.sqrt(dt))))

    t_max = float(t[-1])
    n_jumps = int(gen.poisson(params.lam * t_max)) if params.lam > 0 else 0
    # conditional on the count, Poisson arrival times are iid uniform order statistics
    jump_times = np.sort(t_max - gen.uniform(0.0, t_max, n_jumps))
    sizes = jumps.sample(gen, n_jumps)
    cum = np.concatenate(([0.0], np.cumsum(sizes)))
    jump_part = cum[np.searchsorted(jump_times, t, side="right")]

    returns = params.alpha * t + params.sigma * w + jump_part
    returns[0] = 0.0
    return PathGrid(t, returns, jump_times, seed)


def _grid_values(
    params: ModelParams, jumps: JumpSpec, times: np.ndarray, seeds: np.ndarray
) -> np.ndarray:
    """Realizations at ``times`` (all > 0) for each seed; shape (len(seeds), len(times))."""
    out = np.empty((seeds.size, times.size))
    level = np.zeros(seeds.size)
    prev = 0.0
    for k, t in enumerate(times.tolist()):
        dt = t - prev
        base = SLOTS_PER_INTERVAL * k
        inc = params.alpha * dt + params.sigma * math.sqrt(dt) * rng.normals(seeds, base)
        rate = params.lam * dt
        if rate > 0:
            counts = stats.poisson.ppf(rng.uniforms(seeds, base + 1), rate).astype(np.int64)
            inc = inc + jumps.sum_of(counts, rng.uniforms(seeds, base + 2))
        level = level + inc
        out[:, k] = level
        prev = t
    return out


def _chunks(n: int, chunk: int):
    return [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]


def sample_grid(
    params: ModelParams,
    jumps: JumpSpec,
    times: Sequence[float],
    n: int,
    master_seed: int,
    workers: int = 1,
    chunk: int = DEFAULT_CHUNK,
) -> np.ndarray:
    """``n`` joint realizations of ``(p_t1, ..., p_tm)``; row ``i`` depends only on ``(master_seed, i)``."""
    _check_consistent(params, jumps)
    t = _check_grid(times)
    if t[0] <= 0:
        raise DomainError("sample times must be > 0")
    if n < 1:
        raise EmptyBatchError("batch size must be >= 1")
    rng.check_seed(master_seed)

    def work(span):
        lo, hi = span
        return _grid_values(params, jumps, t, rng.child_seeds(master_seed, np.arange(lo, hi)))

    spans = _chunks(n, chunk)
    if workers <= 1 or len(spans) == 1:
        parts = [work(s) for s in spans]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, spans))
    return np.concatenate(parts, axis=0)


@dataclass(frozen=True)
class TerminalPair:
    p_t_obs: float
    p_s_target: float
    seed: int


def simulate_terminal_pair(
    params: ModelParams, jumps: JumpSpec, h: Horizon, seed: int
) -> TerminalPair:
    _check_consistent(params, jumps)
    seed = rng.check_seed(seed)
    vals = _grid_values(
        params, jumps, np.array([h.t_obs, h.s_target]), np.array([seed], dtype=np.uint64)
    )
    return TerminalPair(float(vals[0, 0]), float(vals[0, 1]), seed)


@dataclass(frozen=True)
class PairBatch:
    """Columnar batch of terminal pairs; iterating yields :class:`TerminalPair`."""

    p_t_obs: np.ndarray
    p_s_target: np.ndarray
    seeds: np.ndarray
    master_seed: int

    def __len__(self) -> int:
        return self.p_t_obs.size

    def __iter__(self) -> Iterator[TerminalPair]:
        for a, b, s in zip(self.p_t_obs.tolist(), self.p_s_target.tolist(), self.seeds.tolist()):
            yield TerminalPair(a, b, int(s))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("seed_index,p_T,p_S\n")
        for i, (a, b) in enumerate(zip(self.p_t_obs.tolist(), self.p_s_target.tolist())):
            buf.write(f"{i},{a!r},{b!r}\n")
        return buf.getvalue()


def batch_pairs(
    params: ModelParams,
    jumps: JumpSpec,
    h: Horizon,
    n: int,
    master_seed: int,
    workers: int = 1,
) -> PairBatch:
    if n < 1:
        raise EmptyBatchError("batch size must be >= 1")
    vals = sample_grid(params, jumps, [h.t_obs, h.s_target], n, master_seed, workers)
    return PairBatch(
        vals[:, 0].copy(),
        vals[:, 1].copy(),
        rng.child_seeds(master_seed, np.arange(n)),
        rng.check_seed(master_seed),
    )
