import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from wellineq import FitConvergenceError
from wellineq.gb2 import (GB2LorenzRegressor, Gb2Params, GroupedIncome, MomentError,
                          fit_gb2_scale, fit_gb2_shape, gb2_cdf, gb2_lorenz, gb2_mean,
                          gb2_pdf, gb2_quantile, gb2_sample)

DECILES = np.linspace(0.1, 0.9, 9)


def test_lorenz_reference_values():
    # Shape (2, 1, 1.5) evaluated in 40-digit arithmetic.
    ref = [0.01766587322289408, 0.22509823218728276, 0.69492248344604473]
    got = gb2_lorenz([0.1, 0.5, 0.9], (2.0, 1.0, 1.5))
    assert np.allclose(got, ref, atol=1e-13)


def test_singh_maddala_cdf():
    # With p = 1 the cdf is 1 - (1 + (y/b)^a)^(-q).
    assert gb2_cdf(2.0, Gb2Params(2.5, 3.0, 1.0, 1.7)) == pytest.approx(
        0.4092305122541114, abs=1e-14)


@pytest.mark.parametrize("par", [Gb2Params(2.0, 1.0, 1.0, 1.5), Gb2Params(0.9, 5.0, 2.0, 3.0),
                                 Gb2Params(4.0, 2.0, 0.4, 0.6)])
def test_pdf_integrates_to_cdf(par):
    for y in (0.3, 1.0, 4.0):
        area, _ = integrate.quad(lambda t: gb2_pdf(t, par), 0, y, limit=200,
                                 epsabs=1e-13, epsrel=1e-12)
        assert area == pytest.approx(gb2_cdf(y, par), abs=1e-9)


@pytest.mark.parametrize("par", [Gb2Params(2.0, 1.0, 1.0, 1.5), Gb2Params(3.0, 7.0, 0.6, 2.0)])
def test_mean_matches_quadrature(par):
    m, _ = integrate.quad(lambda t: t * gb2_pdf(t, par), 0, np.inf, limit=400)
    assert gb2_mean(par) == pytest.approx(m, rel=1e-8)


def test_lorenz_is_normalized_first_moment():
    par = Gb2Params(2.2, 1.0, 0.9, 1.4)
    mu = gb2_mean(par)
    for u in (0.2, 0.6, 0.95):
        y = gb2_quantile(u, par)
        part, _ = integrate.quad(lambda t: t * gb2_pdf(t, par), 0, y, limit=200)
        assert gb2_lorenz(u, par.shape) == pytest.approx(part / mu, abs=1e-9)


def test_no_mean_when_tail_too_heavy():
    par = Gb2Params(1.0, 1.0, 1.0, 0.8)
    assert not par.has_mean
    with pytest.raises(MomentError):
        gb2_mean(par)
    with pytest.raises(MomentError):
        gb2_lorenz(0.5, par.shape)
    with pytest.raises(MomentError):
        fit_gb2_scale(100.0, par.shape)


@settings(max_examples=60, deadline=None)
@given(a=st.floats(0.5, 5), p=st.floats(0.2, 5), q=st.floats(0.2, 5), u=st.floats(0.001, 0.999))
def test_quantile_inverts_cdf(a, p, q, u):
    par = Gb2Params(a, 2.0, p, q)
    assert gb2_cdf(gb2_quantile(u, par), par) == pytest.approx(u, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(a=st.floats(0.6, 5), p=st.floats(0.2, 5), dq=st.floats(0.05, 4))
def test_lorenz_shape(a, p, dq):
    shape = (a, p, 1.0 / a + dq)
    u = np.linspace(0.0, 1.0, 41)
    L = gb2_lorenz(u, shape)
    assert L[0] == 0.0 and L[-1] == 1.0
    assert np.all(L <= u + 1e-12)
    assert np.all(np.diff(L) >= -1e-13)


def test_scale_reproduces_mean():
    shape = (2.5, 0.8, 1.6)
    b = fit_gb2_scale(12000.0, shape)
    assert gb2_mean(Gb2Params(shape[0], b, shape[1], shape[2])) == pytest.approx(12000.0,
                                                                                 rel=1e-12)


def test_fit_recovers_lorenz_ordinates():
    shape = (2.0, 1.0, 1.5)
    s = gb2_lorenz(DECILES, shape)
    fit = fit_gb2_shape(GroupedIncome(DECILES, s, 5000.0, 1e6))
    assert fit.converged
    assert fit.objective <= 1e-9
    assert np.allclose(gb2_lorenz(DECILES, fit.shape), s, atol=1e-6)


def test_fit_lognormal_lorenz():
    from scipy.stats import norm

    s = norm.cdf(norm.ppf(DECILES) - 0.8)
    fit = fit_gb2_shape(GroupedIncome(DECILES, s, 1.0, 1.0))
    assert fit.objective <= 1e-5


def test_equal_shares_are_flagged_flat():
    fit = fit_gb2_shape(GroupedIncome(DECILES, DECILES, 1.0, 1.0))
    assert fit.flat
    assert fit.objective < 1e-6


def test_sampling_matches_cdf():
    from scipy.stats import kstest

    par = Gb2Params(2.0, 3.0, 1.2, 1.4)
    x = gb2_sample(20000, par, seed=1)
    assert kstest(x, lambda t: gb2_cdf(t, par)).statistic < 1.63 / np.sqrt(x.size)
    assert np.array_equal(x, gb2_sample(20000, par, seed=1))


@pytest.mark.parametrize("u, s, msg", [
    ([0.2, 0.5], [0.1, 0.3], "at least 3"),
    ([0.2, 0.5, 0.5], [0.1, 0.2, 0.3], "strictly increasing"),
    ([0.2, 0.5, 0.8], [0.3, 0.4, 0.6], "exceed"),
    ([0.0, 0.5, 0.8], [0.0, 0.3, 0.6], "inside"),
    ([0.2, 0.5, 0.8], [0.1, 0.4, 0.45], "convex"),
])
def test_grouped_income_validation(u, s, msg):
    with pytest.raises(ValueError, match=msg):
        GroupedIncome(u, s, 1.0, 1.0)


def test_invalid_parameters():
    with pytest.raises(ValueError):
        Gb2Params(0.0, 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        gb2_quantile(1.5, Gb2Params(1.0, 1.0, 1.0, 2.0))


def test_fit_failure_is_reported(monkeypatch):
    import wellineq.gb2 as gb2mod
    from wellineq._optimize import MultiStartResult

    def never(fun, starts, **kw):
        return MultiStartResult(x=np.zeros(3), fun=1.0, converged=False, starts=())

    monkeypatch.setattr(gb2mod, "multistart_nelder_mead", never)
    data = GroupedIncome(DECILES, gb2_lorenz(DECILES, (2.0, 1.0, 1.5)), 1.0, 1.0)
    with pytest.raises(FitConvergenceError) as info:
        fit_gb2_shape(data)
    assert info.value.best is not None
    assert not fit_gb2_shape(data, raise_on_failure=False).converged


def test_regressor_api():
    s = gb2_lorenz(DECILES, (2.0, 1.0, 1.5))
    est = GB2LorenzRegressor(mean_income=8000.0).fit(DECILES, s)
    assert np.allclose(est.predict(DECILES), s, atol=1e-6)
    assert est.params_.mean() == pytest.approx(8000.0, rel=1e-10)
    assert est.get_params() == {"mean_income": 8000.0}
    assert est.score(DECILES, s) > 0.999999
