import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ltar.errors import InsufficientDataError, SingularSystemError
from ltar.var import (
    VarParams,
    build_design,
    companion_matrix,
    ols_fit,
    var_fit,
    var_forecast_one,
)


def test_design_layout_newest_lag_first():
    y = np.array([[1.0, 10.0], [2.0, 20.0], [3.0, 30.0], [4.0, 40.0], [5.0, 50.0]])
    d = build_design(y, 2)
    assert d.X.shape == (3, 5) and d.Y.shape == (3, 2)
    assert d.X[0].tolist() == [1.0, 2.0, 20.0, 1.0, 10.0]
    assert d.Y[0].tolist() == [3.0, 30.0]
    assert d.p == 2


def test_design_with_one_row():
    d = build_design(np.arange(4.0), 3)
    assert d.X.tolist() == [[1.0, 2.0, 1.0, 0.0]] and d.Y.tolist() == [[3.0]]


def test_design_rejects_bad_order():
    with pytest.raises(ValueError):
        build_design(np.zeros((5, 2)), 0)
    with pytest.raises(InsufficientDataError, match="insufficient history"):
        build_design(np.zeros((3, 2)), 3)


def test_fit_rejects_underdetermined():
    with pytest.raises(InsufficientDataError, match="underdetermined"):
        var_fit(np.random.default_rng(0).normal(size=(5, 2)), 2)


@pytest.mark.parametrize("dtype", [np.float64, np.complex128])
@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), ell=st.integers(1, 4), p=st.integers(1, 3))
def test_ols_matches_lstsq(dtype, seed, ell, p):
    rng = np.random.default_rng(seed)
    y = rng.normal(size=(60, ell))
    if dtype is np.complex128:
        y = y + 1j * rng.normal(size=(60, ell))
    d = build_design(y, p)
    ref = np.linalg.lstsq(d.X, d.Y, rcond=None)[0]
    np.testing.assert_allclose(ols_fit(d), ref, atol=1e-10)


def test_fit_recovers_noiseless_var():
    rng = np.random.default_rng(1)
    A = np.array([[0.5, 0.2], [-0.1, 0.3]])
    c = np.array([1.0, -2.0])
    y = [rng.normal(size=2)]
    for _ in range(40):
        y.append(c + A @ y[-1])
    params = var_fit(np.array(y), 1)
    np.testing.assert_allclose(params.coeff[0], A, atol=1e-10)
    np.testing.assert_allclose(params.intercept, c, atol=1e-10)
    assert not params.ridge


def test_constant_series_uses_ridge_and_keeps_intercept():
    y = np.full((30, 2), 3.0)
    params = var_fit(y, 2)
    assert params.ridge
    np.testing.assert_allclose(params.intercept, [3.0, 3.0], atol=1e-6)
    assert max(np.abs(a).max() for a in params.coeff) < 1e-6
    with pytest.raises(SingularSystemError):
        var_fit(y, 2, ridge_fallback=False)


def test_stacked_round_trip():
    rng = np.random.default_rng(2)
    params = VarParams((rng.normal(size=(3, 3)), rng.normal(size=(3, 3))), rng.normal(size=3))
    back = VarParams.from_stacked(params.stacked)
    for a, b in zip(params.coeff, back.coeff):
        np.testing.assert_array_equal(a, b)
    np.testing.assert_array_equal(back.intercept, params.intercept)


def test_forecast_one_by_hand():
    params = VarParams((np.array([[2.0]]), np.array([[0.5]])), np.array([1.0]))
    # 1 + 2 * y_{t-1} + 0.5 * y_{t-2}
    assert var_forecast_one(params, [[4.0], [3.0]]).tolist() == [1.0 + 6.0 + 2.0]
    with pytest.raises(InsufficientDataError):
        var_forecast_one(params, [[3.0]])


def test_companion_matrix_layout():
    A1, A2 = np.array([[0.1]]), np.array([[0.2]])
    assert companion_matrix([A1, A2]).tolist() == [[0.1, 0.2], [1.0, 0.0]]
