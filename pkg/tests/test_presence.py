import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwpenh.errors import EmptyInput, UninitializedState
from pwpenh.presence import (PresenceConfig, PresenceState, absence_prob, aposteriori_snr,
                             apriori_snr_dd, mu_subband, presence_from_xi, presence_prob,
                             presence_probs, recursive_xi, shape_params, subband_presence,
                             subband_presence_all, subband_xi, windowed_xi, windowed_xi_all)

CFG = PresenceConfig()
XI_MID = np.sqrt(0.1 * 10 ** -0.5)  # log-midpoint of -10 dB and -5 dB


def test_config_defaults():
    assert CFG.kappa == 0.7 and CFG.w_local == 1 and CFG.w_global == 15
    assert CFG.xi_min == pytest.approx(0.1) and CFG.xi_max == pytest.approx(0.31623, abs=1e-5)
    assert CFG.xi_peak == pytest.approx(10.0)


@pytest.mark.parametrize("kw", [{"kappa": 1.5}, {"kappa_dd": -0.1}, {"xi_min_db": -4.0},
                                {"w_local": -1}])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        PresenceConfig(**kw)


def test_aposteriori():
    assert aposteriori_snr(2.0, 1.0) == 4.0
    assert aposteriori_snr(0.0, 1.0) == 0.0
    assert aposteriori_snr(1.0, 4.0) == 0.25


def test_decision_directed():
    state = PresenceState.initial(3, CFG)
    state.prev_amp_sq[1] = 1.0
    # 0.98 * 1 + 0.02 * (2 - 1)
    assert apriori_snr_dd(state, 1, 2.0, 1.0, CFG) == pytest.approx(1.0, abs=1e-15)
    assert state.prev_eta[1] == pytest.approx(1.0)
    assert apriori_snr_dd(state, 0, 1.0, 1.0, CFG) == pytest.approx(0.0316)
    cfg0 = PresenceConfig(kappa_dd=0.0)
    assert apriori_snr_dd(state, 1, 5.0, 1.0, cfg0) == 4.0


def test_decision_directed_needs_state():
    with pytest.raises(UninitializedState):
        apriori_snr_dd(PresenceState(), 0, 1.0)


def test_presence_prob_oracles():
    assert presence_prob(1.0, 2.0, 0.0) == 1.0
    assert presence_prob(1.0, 2.0, 1.0) == 0.0
    # v = 1, R = 1 / (1 + 2/e)
    assert presence_prob(1.0, 2.0, 0.5) == pytest.approx(0.576117, abs=1e-6)


def test_presence_prob_monotone():
    q = np.linspace(0.01, 0.99, 50)
    assert np.all(np.diff(presence_prob(0.7, 3.0, q)) < 0)
    ups = np.linspace(0.0, 20.0, 50)
    assert np.all(np.diff(presence_prob(0.7, ups, 0.4)) > 0)


def test_recursive_xi():
    assert recursive_xi(5.0, 2.0, 0.0) == 2.0
    assert recursive_xi(5.0, 2.0, 1.0) == 5.0
    assert recursive_xi(1.0, 2.0, 0.7) == pytest.approx(1.3, abs=1e-15)


def test_windowed_xi():
    assert windowed_xi([1.0, 2.0, 3.0], 1, 0) == 2.0
    assert windowed_xi([1.0, 2.0, 3.0], 1, 1) == 2.0
    assert windowed_xi([1.0, 2.0, 3.0, 4.0], 0, 1) == 1.5


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0.0, 100.0), min_size=1, max_size=30), st.integers(0, 20))
def test_windowed_xi_all_matches_loop(xi, w):
    expected = [windowed_xi(xi, k, w) for k in range(len(xi))]
    np.testing.assert_allclose(windowed_xi_all(xi, w), expected, rtol=1e-9, atol=1e-9)


def test_presence_from_xi():
    assert presence_from_xi(CFG.xi_min) == 0.0
    assert presence_from_xi(CFG.xi_max) == 1.0
    assert presence_from_xi(XI_MID) == pytest.approx(0.5, abs=1e-12)
    x = np.geomspace(0.01, 10.0, 300)
    assert np.all(np.diff(presence_from_xi(x)) >= 0)


def test_subband_xi():
    assert subband_xi([0.3] * 5) == pytest.approx(0.3)
    assert subband_xi([1.0, 3.0]) == 2.0
    assert subband_xi([0.0, 0.0, 0.0, 4.0]) == 1.0
    with pytest.raises(EmptyInput):
        subband_xi([])


def test_subband_presence_branches():
    assert subband_presence(0.05, 0.01) == 0.0
    assert subband_presence(0.5, 0.2) == 1.0
    # non-increasing case at xi_peak times the log-midpoint
    assert subband_presence(10.0 * XI_MID, 100.0) == pytest.approx(0.5, abs=1e-12)
    # no predecessor: mu
    assert subband_presence(0.5, None) == mu_subband(0.5)


def test_subband_presence_all_matches_scalar(rng):
    xi = rng.uniform(0.0, 5.0, 24)
    expected = [subband_presence(xi[0], None)] + [subband_presence(xi[k], xi[k - 1]) for k in range(1, 24)]
    np.testing.assert_array_equal(subband_presence_all(xi), expected)


def test_absence_prob():
    assert absence_prob(1, 1, 1) == 0.0
    assert absence_prob(0, 0.3, 0.8) == 0.99
    assert absence_prob(0.5, 0.5, 0.5) == pytest.approx(0.875)


def test_shape_params_oracles():
    sp = shape_params(1.0, 0.0)
    assert (sp.alpha, sp.beta) == (1.0, 1.0)
    sp = shape_params(0.0, 1.0)
    assert (sp.alpha, sp.beta) == (0.25, 4.0)
    sp = shape_params(0.6, 0.2)
    assert sp.alpha == pytest.approx(1.6 / 2.4) and sp.beta == pytest.approx(1.5)


def test_shape_params_bounds_and_product():
    r, q = np.random.default_rng(0).uniform(0.0, 1.0, (2, 100_000))
    sp = shape_params(r, q)
    assert np.max(np.abs(sp.alpha * sp.beta - 1.0)) < 1e-12
    assert sp.alpha.min() >= 0.25 and sp.alpha.max() <= 1.0
    assert sp.beta.min() >= 1.0 and sp.beta.max() <= 4.0


def test_presence_probs_consistency():
    xi = np.linspace(0.05, 0.5, 24)
    p = presence_probs(0.5, 2.0, xi, 7, 0.3, 0.2)
    assert p.Q == pytest.approx(min(1.0 - p.R_local * p.R_global * p.R_subband, 0.99), abs=1e-12)
    assert 0.0 <= p.R <= 1.0
    assert p.v == pytest.approx(0.5 * 2.0 / 1.5)
