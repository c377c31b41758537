"""Input validation helpers shared by the public functions and estimators."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, DimensionOdd, ValidationError

SYMMETRY_RTOL = 1e-12


def as_float_array(a, ndim=None, name="array"):
    arr = np.asarray(a, dtype=float)
    if ndim is not None and arr.ndim != ndim:
        raise DimensionMismatch(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def check_square(a, name="matrix"):
    arr = as_float_array(a, ndim=2, name=name)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {arr.shape}")
    return arr


def check_even(dim, name="matrix"):
    if dim % 2:
        raise DimensionOdd(f"{name} has odd dimension {dim}; a symplectic structure needs 2n")
    return dim // 2


def check_symmetric(a, rtol=SYMMETRY_RTOL, name="matrix"):
    """Return the symmetric part of ``a`` after checking it is symmetric.

    The tolerance is relative to the largest absolute entry.
    """
    arr = check_square(a, name=name)
    scale = np.max(np.abs(arr)) if arr.size else 0.0
    asym = np.max(np.abs(arr - arr.T)) if arr.size else 0.0
    if asym > rtol * max(scale, np.finfo(float).tiny):
        raise ValidationError(
            f"{name} is not symmetric: max |A - A^T| = {asym:.3e} (scale {scale:.3e})"
        )
    return 0.5 * (arr + arr.T)


def check_vector(v, dim, name="vector"):
    arr = as_float_array(v, ndim=1, name=name)
    if arr.shape[0] != dim:
        raise DimensionMismatch(f"{name} has length {arr.shape[0]}, expected {dim}")
    return arr
