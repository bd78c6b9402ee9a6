"""Compensated, order-deterministic summation helpers."""

import math

import numpy as np


def ksum(values):
    """Correctly rounded sum of real or complex values.

    Real and imaginary parts are accumulated separately with ``math.fsum``,
    so the result does not depend on the order of ``values``.
    """
    arr = np.asarray(values)
    if arr.size == 0:
        return 0.0
    arr = arr.ravel()
    if np.iscomplexobj(arr):
        return complex(math.fsum(arr.real.tolist()), math.fsum(arr.imag.tolist()))
    return math.fsum(arr.tolist())


def kdot(weights, values):
    """Compensated inner product ``sum(weights * values)``."""
    return ksum(np.asarray(weights) * np.asarray(values))
