"""Principal-branch Lambert W, with a log-domain entry point for huge arguments."""
from __future__ import annotations

import math

BRANCH_POINT = -1.0 / math.e
_STEP_TOL = 1e-14
_MAX_ITER = 100


def _halley_direct(x: float, w: float) -> float:
    # solves w e^w = x
    for _ in range(_MAX_ITER):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= step
        if abs(step) <= _STEP_TOL * (1.0 + abs(w)):
            break
    return w


def _halley_log(log_x: float, w: float) -> float:
    # solves w + ln w = log_x, valid for w > 0
    for _ in range(_MAX_ITER):
        f = w + math.log(w) - log_x
        d1 = 1.0 + 1.0 / w
        d2 = -1.0 / (w * w)
        step = f / (d1 - 0.5 * f * d2 / d1)
        w_new = w - step
        if w_new <= 0.0:
            w_new = 0.5 * w
        w = w_new
        if abs(step) <= _STEP_TOL * (1.0 + abs(w)):
            break
    return w


def lambert_w0(x: float) -> float:
    """Solve ``w * exp(w) = x`` on the principal branch (``w >= -1``)."""
    x = float(x)
    if math.isnan(x) or x < BRANCH_POINT:
        # tolerate rounding of -1/e itself
        if x >= BRANCH_POINT - 1e-16:
            return -1.0
        raise ValueError(f"lambert_w0 is undefined for x < -1/e (got {x!r})")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return math.inf
    if x > math.e:
        log_x = math.log(x)
        return _halley_log(log_x, log_x - math.log(log_x))
    p2 = 2.0 * (math.e * x + 1.0)
    if p2 <= 0.0:
        return -1.0
    if x < -0.25:
        p = math.sqrt(p2)
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p**3
        if p < 1e-6:
            return w
    else:
        w = math.log1p(x)
    return _halley_direct(x, w)


def lambert_w0_exp(y: float) -> float:
    """Return ``W(exp(y))`` without forming ``exp(y)``."""
    y = float(y)
    if y <= 1.0:
        return lambert_w0(math.exp(y))
    return _halley_log(y, y - math.log(y))
