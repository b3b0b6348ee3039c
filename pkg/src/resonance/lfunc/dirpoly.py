"""Evaluation of Dirichlet polynomials ``sum_n c_n exp(-i t log n)``.

On a uniform grid ``t_k = t0 + k dt`` the phase factors split as
``exp(-i (t0 + b B dt) log n) * exp(-i j dt log n)`` with ``k = b B + j``,
so blocks of ``B`` consecutive grid points become one complex matrix
product.  That turns the per-point cost into BLAS throughput.
"""

from __future__ import annotations

import numpy as np

_BLOCK = 256
_N_CHUNK = 4096
_POINT_CHUNK = 2048


def poly_grid(coeffs, logs, t0: float, dt: float, count: int, block: int = _BLOCK) -> np.ndarray:
    """Evaluate ``sum_n c_n exp(-i t log n)`` at ``t0 + k dt``, ``0 <= k < count``.

    Args:
        coeffs: Complex coefficients ``c_n``.
        logs: Matching frequencies (usually ``log n``).
        t0: First grid point.
        dt: Grid spacing.
        count: Number of points.
        block: Points per matrix column block.

    Returns:
        Complex array of length ``count``.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    logs = np.asarray(logs, dtype=float)
    count = int(count)
    out = np.zeros(count, dtype=complex)
    if count == 0 or coeffs.size == 0:
        return out
    block = max(1, min(block, count))
    nblocks = -(-count // block)
    offsets = dt * np.arange(block)
    # block groups sized so U stays around a few MB
    group = max(1, _POINT_CHUNK * 8 // block)
    res = np.zeros((nblocks, block), dtype=complex)
    for i0 in range(0, coeffs.size, _N_CHUNK):
        c = coeffs[i0 : i0 + _N_CHUNK]
        lg = logs[i0 : i0 + _N_CHUNK]
        v = np.exp(-1j * np.outer(lg, offsets))
        for g0 in range(0, nblocks, group):
            starts = t0 + dt * block * np.arange(g0, min(g0 + group, nblocks))
            u = c * np.exp(-1j * np.outer(starts, lg))
            res[g0 : g0 + u.shape[0]] += u @ v
    return res.reshape(-1)[:count]


def poly_points(coeffs, logs, t) -> np.ndarray:
    """Evaluate ``sum_n c_n exp(-i t log n)`` at arbitrary points ``t``."""
    coeffs = np.asarray(coeffs, dtype=complex)
    logs = np.asarray(logs, dtype=float)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros(t.shape, dtype=complex)
    if coeffs.size == 0:
        return out
    step = max(1, (1 << 22) // max(1, t.size))
    for i0 in range(0, coeffs.size, step):
        ph = np.exp(-1j * np.multiply.outer(t, logs[i0 : i0 + step]))
        out += ph @ coeffs[i0 : i0 + step]
    return out


def poly_complex_points(coeffs, logs, s) -> np.ndarray:
    """Evaluate ``sum_n c_n exp(-s log n)`` at complex points ``s``."""
    coeffs = np.asarray(coeffs, dtype=complex)
    logs = np.asarray(logs, dtype=float)
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    out = np.zeros(s.shape, dtype=complex)
    step = max(1, (1 << 22) // max(1, s.size))
    for i0 in range(0, coeffs.size, step):
        ph = np.exp(-np.multiply.outer(s, logs[i0 : i0 + step]))
        out += ph @ coeffs[i0 : i0 + step]
    return out
