import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pwpenh.errors import BadThresholds
from pwpenh.thresholding import custom_threshold, modified_hard, semisoft, soft


def test_custom_oracles():
    assert custom_threshold(0.0, 1.0, 2.0, 0.3, 2.5) == 0.0
    assert custom_threshold(3.0, 1.0, 2.0, 0.3, 2.5) == 3.0
    # 0.5 * 0.5^2 / 1
    assert custom_threshold(0.5, 1.0, 2.0, 0.5, 2.0) == pytest.approx(0.125, abs=1e-15)
    # 0.5 * (2 * 0.5 / 1) + 0.5 * 1.5
    assert custom_threshold(1.5, 1.0, 2.0, 0.5, 1.0) == pytest.approx(1.25, abs=1e-15)


def test_semisoft_oracles():
    assert semisoft(0.5, 1.0, 2.0) == 0.0
    assert semisoft(1.5, 1.0, 2.0) == pytest.approx(1.0, abs=1e-15)
    assert semisoft(-3.0, 1.0, 2.0) == -3.0


def test_modified_hard_oracles():
    assert modified_hard(0.5, 1.0, 2.0) == pytest.approx(0.25, abs=1e-15)
    assert modified_hard(0.5, 1.0, 1.0) == 0.5
    assert modified_hard(1.5, 1.0, 3.0) == 1.5


def test_soft():
    assert soft(np.array([-3.0, 0.5, 2.0]), 1.0).tolist() == [-2.0, 0.0, 1.0]


@pytest.mark.parametrize("l1, l2", [(0.0, 1.0), (-1.0, 1.0), (1.0, 1.0), (2.0, 1.0)])
def test_bad_thresholds(l1, l2):
    with pytest.raises(BadThresholds):
        custom_threshold(1.0, l1, l2)


def test_beta_below_one_rejected():
    with pytest.raises(BadThresholds):
        custom_threshold(0.5, 1.0, 2.0, 0.5, 0.9)
    with pytest.raises(BadThresholds):
        modified_hard(0.5, 1.0, 0.5)


def test_default_lambda2_is_twice_lambda1():
    assert custom_threshold(1.7, 1.0, None, 0.2, 1.5) == custom_threshold(1.7, 1.0, 2.0, 0.2, 1.5)


finite = st.floats(-50.0, 50.0, allow_nan=False)
lam = st.floats(0.01, 10.0)
alpha = st.floats(0.0, 1.0)
beta = st.floats(1.0, 4.0)


@settings(max_examples=300, deadline=None)
@given(finite, lam, alpha, beta)
def test_odd_and_shrinking(y, l1, a, b):
    f = custom_threshold(y, l1, 2 * l1, a, b)
    assert custom_threshold(-y, l1, 2 * l1, a, b) == -f
    assert abs(f) <= abs(y) + 1e-12
    assert f == 0.0 or np.sign(f) == np.sign(y)


@settings(max_examples=300, deadline=None)
@given(st.floats(0.0, 50.0), lam, st.floats(0.0, 1.0), st.floats(0.0, 1.0), beta)
def test_monotone_in_alpha(y, l1, a1, a2, b):
    lo, hi = sorted((a1, a2))
    assert custom_threshold(y, l1, 2 * l1, lo, b) <= custom_threshold(y, l1, 2 * l1, hi, b) + 1e-12
