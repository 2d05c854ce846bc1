"""Model parameters, derived quantities, return moments and the critical relation.

Returns follow ``p_t = alpha*t + sigma*W_t + J_t`` with ``J_t`` a compound
Poisson sum of iid jumps (mean ``nu``, variance ``tau2``) at rate ``lam``.
Everything downstream only needs the adjusted trend ``beta`` and the total
volatility ``mu``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError, ParameterError, UndefinedGammaError

# slack for the T == gamma^2 tie, in units of ulp(T)
TIE_ULPS = 8
NEAR_ZERO_BETA_RTOL = 1e-12


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ParameterError(name, f"must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ModelParams:
    alpha: float
    sigma: float
    lam: float = 0.0
    nu: float = 0.0
    tau2: float = 0.0
    p0: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "sigma", "lam", "nu", "tau2", "p0"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        if self.sigma <= 0:
            raise ParameterError("sigma", f"must be > 0, got {self.sigma!r}")
        if self.lam < 0:
            raise ParameterError("lambda", f"must be >= 0, got {self.lam!r}")
        if self.tau2 < 0:
            raise ParameterError("tau2", f"must be >= 0, got {self.tau2!r}")
        if self.p0 <= 0:
            raise ParameterError("p0", f"must be > 0, got {self.p0!r}")

    @property
    def has_jumps(self) -> bool:
        return self.lam > 0


@dataclass(frozen=True)
class DerivedParams:
    """Adjusted trend, total volatility and (signed) relative volatility.

    ``mu_sq`` is kept alongside ``mu`` so that ``gamma2`` never goes through a
    sqrt/square round trip.
    """

    beta: float
    mu: float
    mu_sq: float

    @classmethod
    def from_values(cls, beta: float, mu: float) -> "DerivedParams":
        if not mu > 0:
            raise ParameterError("mu", f"must be > 0, got {mu!r}")
        return cls(float(beta), float(mu), float(mu) * float(mu))

    @property
    def gamma(self) -> Optional[float]:
        if self.beta == 0:
            return None
        return self.mu / self.beta

    @property
    def gamma2(self) -> Optional[float]:
        if self.beta == 0:
            return None
        return self.mu_sq / (self.beta * self.beta)

    def require_gamma2(self) -> float:
        g2 = self.gamma2
        if g2 is None:
            raise UndefinedGammaError()
        return g2


@dataclass(frozen=True)
class Horizon:
    t_obs: float
    s_target: float

    def __post_init__(self):
        t, s = float(self.t_obs), float(self.s_target)
        object.__setattr__(self, "t_obs", t)
        object.__setattr__(self, "s_target", s)
        if not (math.isfinite(t) and math.isfinite(s)):
            raise DomainError("horizon endpoints must be finite")
        if not 0 < t < s:
            raise DomainError(f"need 0 < T < S, got T={t!r}, S={s!r}")

    @classmethod
    def degenerate(cls, t: float) -> "Horizon":
        """S == T; only meaningful for identity checks on forecast formulas."""
        h = object.__new__(cls)
        object.__setattr__(h, "t_obs", float(t))
        object.__setattr__(h, "s_target", float(t))
        return h

    @property
    def gap(self) -> float:
        return self.s_target - self.t_obs


class Relation(str, enum.Enum):
    BLUE_BETTER = "BlueBetter"
    TIE = "Tie"
    TRIVIAL_BETTER = "TrivialBetter"


@dataclass(frozen=True)
class CriticalVerdict:
    relation: Relation
    critical_time: float
    critical_volatility: float


def derive(params: ModelParams) -> DerivedParams:
    beta = params.alpha + params.lam * params.nu
    mu_sq = params.sigma**2 + params.lam * (params.nu**2 + params.tau2)
    return DerivedParams(beta, math.sqrt(mu_sq), mu_sq)


def near_zero_beta(d: DerivedParams, h: Horizon) -> bool:
    """Advisory: beta is nonzero but so small that gamma^2 dwarfs any usable T."""
    return abs(d.beta) * math.sqrt(h.t_obs) < NEAR_ZERO_BETA_RTOL * d.mu


def mean_return(t: float, d: DerivedParams) -> float:
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t!r}")
    return d.beta * t


def second_moment(s: float, t: float, d: DerivedParams) -> float:
    """E(p_s p_t) = beta^2 s t + mu^2 min(s, t)."""
    if s < 0 or t < 0:
        raise DomainError(f"times must be >= 0, got s={s!r}, t={t!r}")
    return d.beta * d.beta * s * t + d.mu_sq * min(s, t)


def covariance(s: float, t: float, d: DerivedParams) -> float:
    if s < 0 or t < 0:
        raise DomainError(f"times must be >= 0, got s={s!r}, t={t!r}")
    return d.mu_sq * min(s, t)


def compare_with_tie(a: float, b: float, ulps: int = TIE_ULPS) -> int:
    """-1, 0 or 1 as ``a`` is below, within ``ulps`` of, or above ``b``."""
    if abs(a - b) <= ulps * math.ulp(max(abs(a), abs(b))):
        return 0
    return -1 if a < b else 1


def classify_critical(h: Horizon, d: DerivedParams) -> CriticalVerdict:
    g2 = d.require_gamma2()
    cmp = compare_with_tie(h.t_obs, g2)
    if cmp < 0:
        relation = Relation.TRIVIAL_BETTER
    elif cmp == 0:
        relation = Relation.TIE
    else:
        relation = Relation.BLUE_BETTER
    return CriticalVerdict(relation, g2, math.sqrt(h.t_obs))
