import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from jumpcast import (
    DerivedParams,
    DomainError,
    Horizon,
    ModelParams,
    ParameterError,
    Relation,
    UndefinedGammaError,
    classify_critical,
    derive,
    mean_return,
    second_moment,
)
from jumpcast.model_core import covariance, near_zero_beta


def test_derive_without_jumps():
    d = derive(ModelParams(alpha=0.05, sigma=0.2))
    assert d.beta == 0.05
    assert d.mu == 0.2
    assert d.gamma == pytest.approx(4.0, rel=1e-15)


def test_derive_zero_beta_has_no_gamma():
    d = derive(ModelParams(alpha=0.1, sigma=0.2, lam=2.0, nu=-0.05, tau2=0.01))
    assert d.beta == 0.0
    assert d.gamma is None and d.gamma2 is None
    with pytest.raises(UndefinedGammaError):
        d.require_gamma2()


def test_derive_with_jumps():
    d = derive(ModelParams(alpha=0.05, sigma=0.2, lam=1.0, nu=0.01, tau2=0.04))
    # 0.04 + 1 * (0.0001 + 0.04) = 0.0801
    assert d.beta == pytest.approx(0.06, rel=1e-15)
    assert d.mu_sq == pytest.approx(0.0801, rel=1e-15)
    assert d.mu == pytest.approx(0.28301943396169813, rel=1e-14)


@pytest.mark.parametrize(
    "kwargs, field",
    [
        (dict(alpha=0.0, sigma=0.0), "sigma"),
        (dict(alpha=0.0, sigma=-1.0), "sigma"),
        (dict(alpha=0.0, sigma=0.1, lam=-1.0), "lambda"),
        (dict(alpha=0.0, sigma=0.1, tau2=-0.1), "tau2"),
        (dict(alpha=0.0, sigma=0.1, p0=0.0), "p0"),
        (dict(alpha=math.nan, sigma=0.1), "alpha"),
        (dict(alpha=0.0, sigma=math.inf), "sigma"),
    ],
)
def test_invalid_params_name_the_field(kwargs, field):
    with pytest.raises(ParameterError) as info:
        ModelParams(**kwargs)
    assert info.value.field == field


@pytest.mark.parametrize("t_obs, s_target", [(0.0, 1.0), (-1.0, 1.0), (2.0, 2.0), (3.0, 2.0)])
def test_horizon_validation(t_obs, s_target):
    with pytest.raises(DomainError):
        Horizon(t_obs, s_target)


def test_mean_return():
    d = DerivedParams.from_values(0.06, 0.3)
    assert mean_return(0.0, d) == 0.0
    assert mean_return(10.0, d) == pytest.approx(0.6, rel=1e-15)
    assert mean_return(7.0, DerivedParams.from_values(0.0, 0.3)) == 0.0
    with pytest.raises(DomainError):
        mean_return(-1.0, d)


def test_second_moment():
    d = DerivedParams.from_values(0.06, 0.3)
    assert second_moment(0.0, 3.0, d) == 0.0
    assert second_moment(4.0, 4.0, d) == pytest.approx(0.4176, rel=1e-14)
    assert second_moment(2.0, 5.0, d) == second_moment(5.0, 2.0, d)
    with pytest.raises(DomainError):
        second_moment(-1.0, 1.0, d)


@given(
    sigma=st.floats(0.01, 2.0),
    lam=st.floats(0.0, 20.0),
    nu=st.floats(-1.0, 1.0),
    tau2=st.floats(0.0, 1.0),
)
def test_total_volatility_dominates_sigma(sigma, lam, nu, tau2):
    d = derive(ModelParams(alpha=0.0, sigma=sigma, lam=lam, nu=nu, tau2=tau2))
    assert d.mu >= sigma
    if lam * (nu * nu + tau2) == 0:
        assert d.mu == sigma


@given(c=st.floats(0.1, 10.0), alpha=st.floats(-1, 1), lam=st.floats(0, 5), nu=st.floats(-1, 1))
def test_trend_scales_with_rates(c, alpha, lam, nu):
    base = ModelParams(alpha=alpha, sigma=0.2, lam=lam, nu=nu, tau2=0.01)
    scaled = ModelParams(alpha=c * alpha, sigma=0.2, lam=c * lam, nu=nu, tau2=0.01)
    assert derive(scaled).beta == pytest.approx(c * alpha + c * lam * nu, abs=1e-12)
    assert derive(scaled).beta == pytest.approx(c * derive(base).beta, abs=1e-12)


@given(
    times=st.lists(st.floats(0.0, 50.0), min_size=4, max_size=4),
    beta=st.floats(-1.0, 1.0),
    mu=st.floats(0.01, 3.0),
)
def test_covariance_kernel_is_psd(times, beta, mu):
    d = DerivedParams.from_values(beta, mu)
    k = np.array([[second_moment(s, t, d) - mean_return(s, d) * mean_return(t, d) for t in times] for s in times])
    direct = np.array([[covariance(s, t, d) for t in times] for s in times])
    np.testing.assert_allclose(k, direct, atol=1e-9 * (1 + np.abs(direct).max()))
    eig = np.linalg.eigvalsh(direct)
    assert eig.min() >= -1e-12 * max(1.0, eig.max())


def test_classify_tie_at_sqrt_six():
    d = DerivedParams.from_values(1.0, math.sqrt(6.0))
    v = classify_critical(Horizon(6.0, 9.0), d)
    assert v.relation is Relation.TIE
    assert v.critical_volatility == pytest.approx(2.449, abs=5e-4)
    assert v.critical_volatility == math.sqrt(6.0)


@pytest.mark.parametrize("gamma, relation", [(4.0, Relation.TRIVIAL_BETTER), (1.0, Relation.BLUE_BETTER)])
def test_classify_examples(gamma, relation):
    v = classify_critical(Horizon(6.0, 9.0), DerivedParams.from_values(0.5, 0.5 * gamma))
    assert v.relation is relation
    assert v.critical_time == pytest.approx(gamma**2, rel=1e-15)


@given(gamma2=st.floats(0.01, 1e4))
def test_classify_flips_at_boundary(gamma2):
    d = DerivedParams(1.0, math.sqrt(gamma2), gamma2)
    below = classify_critical(Horizon(gamma2 * (1 - 1e-9), gamma2 * 3), d)
    above = classify_critical(Horizon(gamma2 * (1 + 1e-9), gamma2 * 3), d)
    at = classify_critical(Horizon(gamma2, gamma2 * 3), d)
    assert below.relation is Relation.TRIVIAL_BETTER
    assert above.relation is Relation.BLUE_BETTER
    assert at.relation is Relation.TIE
    # just outside the tie slack, on representable neighbours
    lo = hi = gamma2
    for _ in range(32):
        lo, hi = math.nextafter(lo, 0), math.nextafter(hi, math.inf)
    assert classify_critical(Horizon(lo, gamma2 * 3), d).relation is Relation.TRIVIAL_BETTER
    assert classify_critical(Horizon(hi, gamma2 * 3), d).relation is Relation.BLUE_BETTER


def test_classify_rejects_zero_beta():
    with pytest.raises(UndefinedGammaError, match="coincide"):
        classify_critical(Horizon(1.0, 2.0), DerivedParams.from_values(0.0, 0.2))


def test_near_zero_beta_flag():
    h = Horizon(6.0, 9.0)
    assert near_zero_beta(DerivedParams.from_values(1e-16, 0.2), h)
    assert not near_zero_beta(DerivedParams.from_values(0.05, 0.2), h)
