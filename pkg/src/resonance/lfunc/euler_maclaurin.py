"""Euler-Maclaurin evaluation of zeta and Dirichlet L-functions.

``L(s, chi) = q^-s sum_a chi(a) zeta(s, a/q)`` and each Hurwitz zeta is
summed directly up to ``k < N`` with an Euler-Maclaurin tail at
``x = N + a/q``.  In terms of the integer ``X = qN + a`` the tail of class
``a`` is

    X^(1-s) / (q (s-1)) + X^-s / 2
        + sum_j B_2j / (2j)! (s)_(2j-1) q^(2j-1) X^(-s-2j+1).

The ``1/(s-1)`` pieces are combined as ``(X^(1-s) - 1)/(s-1)`` so that
nonprincipal characters are finite at ``s = 1``; principal characters keep
a pole ``phi(q) / (q (s-1))``.
"""

from __future__ import annotations

from math import factorial

import numpy as np
from scipy.special import bernoulli

from resonance.errors import PoleError, UnsupportedRegionError
from resonance.lfunc.dirpoly import poly_complex_points, poly_grid

TAIL_TERMS = 8
# target size of ((|s| + 2m + 1) / (2 pi x)) in the first omitted term
_RHO = 1e-15 ** (1.0 / (2 * TAIL_TERMS + 1))
_B = bernoulli(2 * TAIL_TERMS + 2)
_COEF = np.array([_B[2 * j] / factorial(2 * j) for j in range(1, TAIL_TERMS + 2)])
SIGMA_MIN = -5.0


def em_length(s_abs: float) -> int:
    """Number of directly summed terms per residue class."""
    return max(16, int(np.ceil((s_abs + 2 * TAIL_TERMS + 1) / (2 * np.pi * _RHO))))


class _Classes:
    """Residue-class data of a periodic coefficient table ``w`` mod ``q``."""

    def __init__(self, table: np.ndarray):
        table = np.asarray(table, dtype=complex)
        self.q = int(table.size)
        self.table = table
        # classes a = 1..q with a nonzero weight; a = q stands for residue 0
        a = np.arange(1, self.q + 1)
        w = table[a % self.q]
        keep = w != 0
        self.a = a[keep]
        self.w = w[keep]
        self.total = complex(np.sum(table))

    def direct_terms(self, n_terms: int):
        """Coefficients and logs of ``sum_{n <= qN} w(n) n^-s``."""
        n = (self.q * np.arange(n_terms)[:, None] + self.a[None, :]).reshape(-1)
        w = np.tile(self.w, n_terms)
        order = np.argsort(n, kind="stable")
        return w[order], np.log(n[order].astype(float))


def _expm1_over(u: np.ndarray) -> np.ndarray:
    """``expm1(u) / u`` with the removable singularity at 0."""
    out = np.ones_like(u)
    small = np.abs(u) < 1e-4
    us = u[small]
    out[small] = 1 + us / 2 + us * us / 6 + us**3 / 24
    ub = u[~small]
    out[~small] = np.expm1(ub) / ub
    return out


def _tail(cls: _Classes, s: np.ndarray, n_terms: int):
    """Euler-Maclaurin tail and its error bound at each ``s`` (1-D array)."""
    s = s[:, None]
    X = (cls.q * n_terms + cls.a).astype(float)[None, :]
    logX = np.log(X)
    q = float(cls.q)
    w = cls.w[None, :]
    u = (1 - s) * logX
    vals = -logX * _expm1_over(u) / q
    xs = np.exp(-s * logX)
    vals = vals + xs / 2
    poch = s.copy()  # (s)_1
    xpow = xs / X  # X^(-s-1)
    qpow = q
    err = None
    for j in range(1, TAIL_TERMS + 2):
        term = _COEF[j - 1] * poch * qpow * xpow
        if j == TAIL_TERMS + 1:
            sig = s.real + 2 * TAIL_TERMS + 1
            err = np.abs(term) * np.abs(s + 2 * TAIL_TERMS + 1) / sig
            break
        vals = vals + term
        poch = poch * (s + 2 * j - 1) * (s + 2 * j)
        xpow = xpow / (X * X)
        qpow = qpow * q * q
    value = np.sum(w * vals, axis=1)
    error = np.sum(np.abs(w) * err, axis=1)
    return value, error


def _rounding(c, lg, sigma, t, tail):
    """Floating-point error model for the direct sum.

    Terms are summed with relative error ~eps each, and every phase
    ``t log n`` carries an absolute error ~eps |t| log n; both accumulate
    like a random walk.
    """
    eps = np.finfo(float).eps
    sigma = np.atleast_1d(sigma)
    absc = np.abs(c)
    s1 = np.empty(sigma.shape)
    s2 = np.empty(sigma.shape)
    for x in np.unique(sigma):
        mags = absc * np.exp(-x * lg)
        s1[sigma == x] = mags.sum()
        s2[sigma == x] = np.sqrt(np.dot(mags, mags))
    top = lg[-1] if lg.size else 0.0
    return eps * (np.sqrt(lg.size) * s2 + 4 * s1 / np.sqrt(max(lg.size, 1)) + np.abs(t) * top * s2 + np.abs(tail))


def _pole_part(cls: _Classes, s: np.ndarray) -> np.ndarray:
    if cls.total == 0:
        return np.zeros(s.shape, dtype=complex)
    if np.any(s == 1):
        raise PoleError("pole at s = 1")
    return cls.total / (cls.q * (s - 1))


def _check_region(s: np.ndarray):
    if np.any(s.real < SIGMA_MIN):
        raise UnsupportedRegionError(f"Re s below {SIGMA_MIN} is outside the supported window")


def periodic_L(table, s):
    """``sum_n w(n mod q) n^-s`` continued by Euler-Maclaurin.

    Args:
        table: Length-``q`` array ``w(0), ..., w(q-1)``.
        s: Complex scalar or array.

    Returns:
        ``(value, error)`` arrays shaped like ``s``.
    """
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    _check_region(s_arr)
    cls = _Classes(table)
    n_terms = em_length(float(np.max(np.abs(s_arr))))
    c, lg = cls.direct_terms(n_terms)
    main = poly_complex_points(c, lg, s_arr)
    tail, err = _tail(cls, s_arr, n_terms)
    val = main + tail + _pole_part(cls, s_arr)
    err = err + _rounding(c, lg, s_arr.real, s_arr.imag, tail)
    return val.reshape(np.shape(s)), err.reshape(np.shape(s))


def periodic_L_line(table, sigma: float, t0: float, dt: float, count: int):
    """Values on the vertical grid ``sigma + i (t0 + k dt)``.

    Returns:
        ``(values, errors)`` arrays of length ``count``.
    """
    cls = _Classes(table)
    t_end = t0 + dt * (count - 1)
    s_abs = abs(complex(sigma, max(abs(t0), abs(t_end))))
    _check_region(np.array([complex(sigma, 0)]))
    n_terms = em_length(s_abs)
    c, lg = cls.direct_terms(n_terms)
    main = poly_grid(c * np.exp(-sigma * lg), lg, t0, dt, count)
    t = t0 + dt * np.arange(count)
    vals = np.empty(count, dtype=complex)
    errs = np.empty(count)
    chunk = 1 << 16
    for i in range(0, count, chunk):
        s = sigma + 1j * t[i : i + chunk]
        tail, err = _tail(cls, s, n_terms)
        vals[i : i + chunk] = main[i : i + chunk] + tail + _pole_part(cls, s)
        errs[i : i + chunk] = err + _rounding(c, lg, np.full(s.shape, sigma), s.imag, tail)
    return vals, errs


def zeta_table() -> np.ndarray:
    return np.ones(1, dtype=complex)


def zeta_em(s):
    """Riemann zeta by Euler-Maclaurin; returns ``(value, error)``."""
    return periodic_L(zeta_table(), s)
