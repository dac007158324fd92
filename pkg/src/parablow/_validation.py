"""Small argument checks shared across modules."""
import numbers

import numpy as np


def check_positive(value, name, strict=True):
    if not isinstance(value, numbers.Real) or not np.isfinite(value):
        raise ValueError(f"{name} must be a finite real number, got {value!r}")
    if strict and value <= 0:
        raise ValueError(f"{name} must be > 0, got {value!r}")
    if not strict and value < 0:
        raise ValueError(f"{name} must be >= 0, got {value!r}")
    return float(value)


def check_in_range(value, name, low=None, high=None, low_open=False, high_open=False):
    if not isinstance(value, numbers.Real) or not np.isfinite(value):
        raise ValueError(f"{name} must be a finite real number, got {value!r}")
    if low is not None and (value < low or (low_open and value == low)):
        raise ValueError(f"{name}={value!r} is below the allowed range")
    if high is not None and (value > high or (high_open and value == high)):
        raise ValueError(f"{name}={value!r} is above the allowed range")
    return float(value)


def check_field(values, n, name):
    """Return `values` as a contiguous float64 array of length n."""
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise ValueError(f"{name} must have shape ({n},), got {arr.shape}")
    return arr


def check_order(order, allowed):
    if not isinstance(order, numbers.Integral) or int(order) not in allowed:
        raise ValueError(f"derivative order must be one of {sorted(allowed)}, got {order!r}")
    return int(order)


def check_series(t, y, min_len=2):
    t = np.asarray(t, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if t.shape != y.shape:
        raise ValueError(f"time and value arrays differ in length: {t.shape} vs {y.shape}")
    if t.size < min_len:
        raise ValueError(f"need at least {min_len} samples, got {t.size}")
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(y))):
        raise ValueError("series contains non-finite values")
    if np.any(np.diff(t) <= 0):
        raise ValueError("times must be strictly increasing")
    return t, y
