"""Run configuration: flat ``key=value`` files with dotted keys.

Example::

    # months
    model.alpha = 0.05
    model.sigma = 0.2
    model.lambda = 1
    model.nu = 0.01
    model.tau2 = 0.04
    jumps = gaussian
    horizon.t_obs = 6
    horizon.s_target = 9
    n = 100000
    seed = 12345

Later sources win: built-in defaults, then the file, then command-line flags.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Mapping, Optional

from .errors import ParameterError
from .model_core import Horizon, ModelParams
from .rng import check_seed
from .simulation import JumpKind, JumpSpec

DEFAULTS: Dict[str, str] = {
    "model.alpha": "0.05",
    "model.sigma": "0.2",
    "model.lambda": "1",
    "model.nu": "0.01",
    "model.tau2": "0.04",
    "model.p0": "1",
    "jumps": "gaussian",
    "horizon.t_obs": "6",
    "horizon.s_target": "9",
    "n": "100000",
    "seed": "12345",
    "out": "out",
    "z_threshold": "4",
}

ALIASES = {
    "model.lam": "model.lambda",
    "jumps.kind": "jumps",
    "horizon.t": "horizon.t_obs",
    "horizon.s": "horizon.s_target",
    "master_seed": "seed",
    "output_dir": "out",
}


def parse_config_text(text: str) -> Dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError("config", f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        key = ALIASES.get(key, key)
        if key not in DEFAULTS:
            raise ParameterError("config", f"line {lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _num(values: Mapping[str, str], key: str, kind=float):
    try:
        return kind(values[key])
    except ValueError:
        raise ParameterError(key, f"not a valid {kind.__name__}: {values[key]!r}") from None


@dataclass(frozen=True)
class RunConfig:
    model: ModelParams
    jumps: JumpKind
    horizon: Horizon
    n: int
    master_seed: int
    output_dir: Path
    z_threshold: float

    @property
    def jump_spec(self) -> JumpSpec:
        return JumpSpec.for_params(self.model, self.jumps)

    @classmethod
    def from_values(cls, values: Mapping[str, str]) -> "RunConfig":
        v = dict(DEFAULTS)
        v.update(values)
        model = ModelParams(
            alpha=_num(v, "model.alpha"),
            sigma=_num(v, "model.sigma"),
            lam=_num(v, "model.lambda"),
            nu=_num(v, "model.nu"),
            tau2=_num(v, "model.tau2"),
            p0=_num(v, "model.p0"),
        )
        horizon = Horizon(_num(v, "horizon.t_obs"), _num(v, "horizon.s_target"))
        try:
            seed = check_seed(_num(v, "seed", int))
        except ValueError as exc:
            raise ParameterError("seed", str(exc)) from None
        z = _num(v, "z_threshold")
        if not z > 0:
            raise ParameterError("z_threshold", "must be > 0")
        cfg = cls(
            model=model,
            jumps=JumpKind.parse(v["jumps"]),
            horizon=horizon,
            n=_num(v, "n", int),
            master_seed=seed,
            output_dir=Path(v["out"]),
            z_threshold=z,
        )
        cfg.jump_spec  # validates kind against tau2
        return cfg


def load(path: Optional[str], overrides: Mapping[str, Optional[str]]) -> RunConfig:
    values: Dict[str, str] = {}
    if path:
        values.update(parse_config_text(Path(path).read_text()))
    values.update({k: str(val) for k, val in overrides.items() if val is not None})
    return RunConfig.from_values(values)
