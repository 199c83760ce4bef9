"""Deterministic reduction helpers.

Every sum that feeds a reported number goes through one of these so that
serial and parallel evaluations agree bit for bit: partials are formed on
fixed index chunks and combined in index order with exact accumulation.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

DEFAULT_CHUNK = 4096


def neumaier_sum(values) -> float:
    """Compensated sum of an iterable of floats, fixed order."""
    total = 0.0
    comp = 0.0
    for v in values:
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


def chunked_sum(values: np.ndarray, chunk: int = DEFAULT_CHUNK, parallel: bool = False):
    """Sum a 1d array by fixed-size chunks combined in index order.

    The chunk partials are exact np.sum reductions; the cross-chunk combine
    uses math.fsum, which is exact, so the result does not depend on whether
    the partials were computed concurrently.
    """
    values = np.asarray(values)
    if values.size == 0:
        return values.dtype.type(0)
    bounds = range(0, values.size, chunk)
    if np.iscomplexobj(values):
        re = chunked_sum(values.real, chunk=chunk, parallel=parallel)
        im = chunked_sum(values.imag, chunk=chunk, parallel=parallel)
        return complex(re, im)
    if parallel:
        with ThreadPoolExecutor(max_workers=4) as pool:
            partials = list(pool.map(lambda i: float(np.sum(values[i:i + chunk])), bounds))
    else:
        partials = [float(np.sum(values[i:i + chunk])) for i in bounds]
    return math.fsum(partials)


def is_nonpositive_integer(z: complex, tol: float = 0.0) -> bool:
    """Exact test used for pole detection; tol widens it for near-pole guards."""
    zr, zi = z.real, z.imag
    if abs(zi) > tol:
        return False
    r = round(zr)
    return r <= 0 and abs(zr - r) <= tol
