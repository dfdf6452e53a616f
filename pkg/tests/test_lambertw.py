import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import lambertw as scipy_lambertw

from d2d_access.lambertw import BRANCH_POINT, lambert_w0, lambert_w0_exp


def bisect_w(x, lo=-1.0, hi=None, tol=1e-13):
    hi = hi if hi is not None else max(1.0, math.log1p(x) + 1)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid * math.exp(mid) < x:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


OMEGA = 0.5671432904097838  # frozen from bisect_w(1.0)


def test_omega_oracle():
    assert bisect_w(1.0) == pytest.approx(OMEGA, abs=1e-12)
    assert lambert_w0(1.0) == pytest.approx(OMEGA, abs=1e-12)


@pytest.mark.parametrize("x, w", [(0.0, 0.0), (math.e, 1.0), (BRANCH_POINT, -1.0)])
def test_anchors(x, w):
    assert lambert_w0(x) == pytest.approx(w, abs=1e-12)


def test_domain_error():
    with pytest.raises(ValueError):
        lambert_w0(-0.4)


def residual_ok(x):
    w = lambert_w0(x)
    return w >= -1 and abs(w * math.exp(w) - x) <= 1e-12 * max(1.0, abs(x))


def test_residual_dense_sweep():
    xs = np.concatenate(
        [
            BRANCH_POINT + np.logspace(-6, math.log10(-BRANCH_POINT), 3000),
            np.logspace(-300, 300, 7000),
        ]
    )
    bad = [x for x in xs if not residual_ok(float(x))]
    assert not bad, bad[:5]


@given(st.floats(min_value=BRANCH_POINT + 1e-12, max_value=1e300))
def test_residual_property(x):
    assert residual_ok(x)


@given(st.floats(min_value=-50, max_value=1e6))
def test_log_domain_residual(y):
    w = lambert_w0_exp(y)
    assert w > 0
    # W(e^y) satisfies w + ln w = y
    assert abs(w + math.log(w) - y) <= 1e-12 * max(1.0, abs(y))


def test_log_domain_agrees_with_direct():
    for y in np.linspace(-20, 600, 200):
        assert lambert_w0_exp(y) == pytest.approx(lambert_w0(math.exp(y)), rel=1e-13)


def test_matches_scipy():
    for x in np.concatenate([np.linspace(-0.36, 5, 100), np.logspace(1, 200, 50)]):
        assert lambert_w0(x) == pytest.approx(scipy_lambertw(x).real, rel=1e-12, abs=1e-14)
