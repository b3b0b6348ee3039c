"""Riemann-Siegel evaluation of Hardy's Z on uniform grids.

``Z(t) = 2 sum_{n <= N} n^-1/2 cos(theta(t) - t log n) + R(t)`` with
``N = floor(sqrt(t / 2 pi))`` and the remainder expanded to five terms in
powers of ``(2 pi / t)^(1/2)``.  The coefficient functions are derivatives
of ``Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p)``; their Taylor
series around ``p = 1/2`` are computed once in high precision.
"""

from __future__ import annotations

from functools import lru_cache

import mpmath
import numpy as np
from numpy.polynomial import polynomial as P
from scipy.special import loggamma

from resonance.lfunc.dirpoly import poly_grid, poly_points

# grids below this height use Euler-Maclaurin instead
T_MIN = 200.0
_DEGREE = 72


@lru_cache(maxsize=1)
def _psi_taylor() -> np.ndarray:
    """Taylor coefficients of ``Psi(1/2 + x)`` in ``x``."""
    with mpmath.workdps(60):
        two_pi = 2 * mpmath.pi
        n = _DEGREE + 1
        # numerator -cos(2 pi x^2 - 5 pi / 8)
        c58, s58 = mpmath.cos(5 * mpmath.pi / 8), mpmath.sin(5 * mpmath.pi / 8)
        num = [mpmath.mpf(0)] * n
        for j in range(0, n):
            if 4 * j < n:
                num[4 * j] += -c58 * (-1) ** j * two_pi ** (2 * j) / mpmath.factorial(2 * j)
            if 4 * j + 2 < n:
                num[4 * j + 2] += -s58 * (-1) ** j * two_pi ** (2 * j + 1) / mpmath.factorial(2 * j + 1)
        # denominator cos(2 pi x)
        den = [mpmath.mpf(0)] * n
        for j in range(0, (n + 1) // 2):
            den[2 * j] = (-1) ** j * two_pi ** (2 * j) / mpmath.factorial(2 * j)
        out = [mpmath.mpf(0)] * n
        for k in range(n):
            acc = num[k] - sum(out[i] * den[k - i] for i in range(k))
            out[k] = acc / den[0]
        return np.array([float(v) for v in out])


@lru_cache(maxsize=1)
def _remainder_polys() -> list[np.ndarray]:
    """Polynomials (in ``x = p - 1/2``) for ``C_0, ..., C_4``."""
    psi = _psi_taylor()

    def d(k):
        return P.polyder(psi, k) if k else psi

    pi2, pi4, pi6, pi8 = np.pi**2, np.pi**4, np.pi**6, np.pi**8
    c0 = d(0)
    c1 = -d(3) / (96 * pi2)
    c2 = P.polyadd(d(2) / (64 * pi2), d(6) / (18432 * pi4))
    c3 = P.polysub(P.polysub(-d(1) / (64 * pi2), d(5) / (3840 * pi4)), d(9) / (5308416 * pi6))
    c4 = P.polyadd(
        P.polyadd(d(0) / (128 * pi2), 19 * d(4) / (24576 * pi4)),
        P.polyadd(11 * d(8) / (5898240 * pi6), d(12) / (2038431744 * pi8)),
    )
    return [c0, c1, c2, c3, c4]


def theta(t):
    """Riemann-Siegel theta ``arg Gamma(1/4 + i t/2) - (t/2) log pi``."""
    t = np.asarray(t, dtype=float)
    big = np.abs(t) >= 50
    out = np.empty(t.shape)
    tb = t[big]
    out[big] = (
        tb / 2 * np.log(tb / (2 * np.pi))
        - tb / 2
        - np.pi / 8
        + 1 / (48 * tb)
        + 7 / (5760 * tb**3)
        + 31 / (80640 * tb**5)
        + 127 / (430080 * tb**7)
    )
    ts = t[~big]
    out[~big] = loggamma(0.25 + 0.5j * ts).imag - ts / 2 * np.log(np.pi)
    return out


@lru_cache(maxsize=1)
def _remainder_parity_polys() -> list[tuple[int, np.ndarray]]:
    """Each ``C_k`` as ``x^parity * Q_k(x^2)`` with negligible terms dropped."""
    out = []
    for k, c in enumerate(_remainder_polys()):
        parity = k % 2  # C_1 and C_3 are odd in x, the others even
        q = c[parity::2].copy()
        mags = np.abs(q) * 0.25 ** np.arange(q.size)
        keep = np.nonzero(mags > 1e-18)[0]
        out.append((parity, q[: keep.max() + 1] if keep.size else q[:1]))
    return out


def _remainder(t: np.ndarray, N: np.ndarray) -> np.ndarray:
    a = np.sqrt(t / (2 * np.pi))
    x = a - N - 0.5
    x2 = x * x
    w = np.sqrt(2 * np.pi / t)
    acc = np.zeros_like(t)
    wp = np.ones_like(t)
    for parity, q in _remainder_parity_polys():
        term = P.polyval(x2, q)
        acc += (term * x if parity else term) * wp
        wp *= w
    sign = np.where(N % 2 == 1, 1.0, -1.0)  # (-1)^(N-1)
    return sign * np.sqrt(w) * acc


def hardy_z_points(t) -> np.ndarray:
    """Hardy's ``Z`` at arbitrary points ``t >= T_MIN``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    N = np.floor(np.sqrt(t / (2 * np.pi))).astype(np.int64)
    out = np.empty(t.shape)
    for n_val in np.unique(N):
        sel = N == n_val
        n = np.arange(1, n_val + 1)
        lg = np.log(n)
        s = poly_points(n**-0.5, lg, t[sel])
        out[sel] = 2 * (np.exp(1j * theta(t[sel])) * s).real
    return out + _remainder(t, N)


def hardy_z_grid(t0: float, dt: float, count: int) -> np.ndarray:
    """Hardy's ``Z`` on ``t0 + k dt`` (requires ``t0 >= T_MIN``).

    The grid is cut into runs of constant ``N``; each run is one blocked
    matrix product.
    """
    t = t0 + dt * np.arange(count)
    N = np.floor(np.sqrt(t / (2 * np.pi))).astype(np.int64)
    out = np.empty(count)
    edges = np.concatenate(([0], np.nonzero(np.diff(N))[0] + 1, [count]))
    for i, j in zip(edges[:-1], edges[1:]):
        n = np.arange(1, N[i] + 1)
        lg = np.log(n)
        s = poly_grid(n**-0.5, lg, t[i], dt, j - i)
        out[i:j] = 2 * (np.exp(1j * theta(t[i:j])) * s).real
    return out + _remainder(t, N)
