"""Logarithms by continuation, argument-principle zero counts, Hardy's Z."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from resonance.errors import ContourError, PoleError, ZeroCrossingError
from resonance.lfunc.evaluate import evaluate_L, evaluate_L_batch, evaluate_L_line
from resonance.lfunc.riemann_siegel import theta
from resonance.lfunc.spec import LFunctionSpec

MAX_PHASE_STEP = np.pi / 4
_MAX_ROUNDS = 60


def _track_phase(func, z0: complex, z1: complex, u_init: np.ndarray, v_init: np.ndarray):
    """Continuous change of ``arg f`` along the segment ``z0 -> z1``.

    Samples are bisected until consecutive phases differ by at most
    ``MAX_PHASE_STEP``.

    Args:
        func: Vectorised ``f`` on complex arrays, returning ``(values, errors)``.
        z0, z1: Segment end points.
        u_init: Increasing parameters in ``[0, 1]`` including both ends.
        v_init: ``f`` at those parameters.

    Returns:
        ``(delta_arg, u, values)``.
    """
    u = np.asarray(u_init, dtype=float)
    v = np.asarray(v_init, dtype=complex)
    length = abs(z1 - z0)
    for _ in range(_MAX_ROUNDS):
        if np.any(v == 0):
            raise ZeroCrossingError(f"zero on the path near {z0 + (z1 - z0) * u[np.argmin(np.abs(v))]}")
        d = np.angle(v[1:] / v[:-1])
        bad = np.nonzero(np.abs(d) > MAX_PHASE_STEP)[0]
        if bad.size == 0:
            return float(np.sum(d)), u, v
        if np.min(u[bad + 1] - u[bad]) * length < 1e-11:
            k = bad[np.argmin(u[bad + 1] - u[bad])]
            raise ZeroCrossingError(f"zero on the path near {z0 + (z1 - z0) * u[k]}")
        mid = (u[bad] + u[bad + 1]) / 2
        vm, em = func(z0 + (z1 - z0) * mid)
        if np.any(np.abs(vm) <= em):
            k = int(np.argmin(np.abs(vm) / np.maximum(em, 1e-300)))
            raise ZeroCrossingError(f"|L| below its error estimate near {z0 + (z1 - z0) * mid[k]}")
        u = np.concatenate((u, mid))
        v = np.concatenate((v, vm))
        order = np.argsort(u)
        u, v = u[order], v[order]
    raise ZeroCrossingError("phase refinement did not settle")


def log_L(spec: LFunctionSpec, s: complex, sigma_start: float = 2.0) -> complex:
    """``log L(s)`` continued along the horizontal path from ``Re s = sigma_start``.

    For ``Re s >= 2`` the principal logarithm is the Dirichlet-series
    logarithm because ``|log L| <= d log zeta(2) < pi`` there.

    Raises:
        ZeroCrossingError: the path meets a zero (numerically).
        PoleError: the path meets the pole at ``s = 1``.
    """
    s = complex(s)
    if spec.kind == "one":
        return 0j
    sigma, t = s.real, s.imag
    if sigma >= sigma_start:
        return complex(np.log(evaluate_L(spec, s).value))
    if spec.pole_order and t == 0 and sigma <= 1 <= sigma_start:
        raise PoleError("horizontal path crosses the pole at s = 1")
    z0 = complex(sigma_start, t)
    n = max(16, int(np.ceil((sigma_start - sigma) / 0.05)) + 1)
    u = np.linspace(0.0, 1.0, n)

    def f(z):
        return evaluate_L_batch(spec, z)

    v, e = f(z0 + (s - z0) * u)
    if np.any(np.abs(v) <= e):
        raise ZeroCrossingError(f"{spec.label} vanishes numerically on the path to {s}")
    darg, _, v = _track_phase(f, z0, s, u, v)
    return complex(np.log(np.abs(v[-1])), np.angle(v[0]) + darg)


@dataclass(frozen=True)
class ZeroCount:
    """Result of an argument-principle count.

    Attributes:
        count: Zeros inside the rectangle (with multiplicity).
        sigma_low, sigma_high, t1, t2: Rectangle actually used.
        nudge: Offset applied to all four edges to avoid zeros on the contour.
        winding: Raw change in argument divided by 2 pi.
        samples: Number of function evaluations.
    """

    count: int
    sigma_low: float
    sigma_high: float
    t1: float
    t2: float
    nudge: float
    winding: float
    samples: int


def _vertical_step(t: float, sigma: float) -> float:
    # phase of a degree-d L-function turns at roughly (d/2) log(t/2pi) per unit height
    rate = 0.5 * np.log(max(abs(t), 10.0) / (2 * np.pi)) + 1.0
    if sigma >= 2:
        rate = 0.25
    return (np.pi / 8) / rate


def _edge(spec, z0: complex, z1: complex):
    def f(z):
        return evaluate_L_batch(spec, z)

    if z0.real == z1.real and spec.kind in ("zeta", "dirichlet"):
        h = _vertical_step(max(abs(z0.imag), abs(z1.imag)), z0.real)
        n = max(8, int(np.ceil(abs(z1.imag - z0.imag) / h)) + 1)
        dt = (z1.imag - z0.imag) / (n - 1)
        v, e = evaluate_L_line(spec, z0.real, z0.imag, dt, n)
        u = np.linspace(0.0, 1.0, n)
    else:
        if z0.real == z1.real:
            h = _vertical_step(max(abs(z0.imag), abs(z1.imag)), z0.real)
        else:
            h = 0.05
        n = max(8, int(np.ceil(abs(z1 - z0) / h)) + 1)
        u = np.linspace(0.0, 1.0, n)
        v, e = f(z0 + (z1 - z0) * u)
    if np.any(np.abs(v) <= e):
        raise ZeroCrossingError(f"{spec.label} vanishes numerically on an edge")
    darg, u, _ = _track_phase(f, z0, z1, u, v)
    return darg, u.size


def count_zeros_rectangle(
    spec: LFunctionSpec,
    sigma_low: float,
    t1: float,
    t2: float,
    sigma_high: float = 3.0,
    max_nudge: float = 1e-3,
) -> ZeroCount:
    """Count zeros of ``L`` in ``[sigma_low, sigma_high] x [t1, t2]``.

    Args:
        spec: The L-function.
        sigma_low: Left edge.
        t1, t2: Bottom and top edges, ``t1 < t2``.
        sigma_high: Right edge; must lie in the zero-free half-plane.
        max_nudge: Largest shift of the contour tried when a zero sits on it.

    Returns:
        :class:`ZeroCount`.
    """
    if t1 == t2 and sigma_low < sigma_high:
        return ZeroCount(0, sigma_low, sigma_high, t1, t2, 0.0, 0.0, 0)
    if not (t1 < t2 and sigma_low < sigma_high):
        raise ContourError("degenerate rectangle")
    if spec.kind == "one":
        return ZeroCount(0, sigma_low, sigma_high, t1, t2, 0.0, 0.0, 0)
    for nudge in (0.0, 1e-4, -1e-4, 3e-4, -3e-4, max_nudge, -max_nudge):
        if abs(nudge) > max_nudge:
            continue
        sl, th, tl = sigma_low + nudge, t2 + nudge, t1 - nudge
        corners = [complex(sl, tl), complex(sigma_high, tl), complex(sigma_high, th), complex(sl, th)]
        pole_inside = spec.pole_order and sl < 1 < sigma_high and tl < 0 < th
        if spec.pole_order and (tl == 0 or th == 0 or sl == 1):
            continue
        try:
            total, samples = 0.0, 0
            for a, b in zip(corners, corners[1:] + corners[:1]):
                darg, n = _edge(spec, a, b)
                total += darg
                samples += n
        except (ZeroCrossingError, PoleError):
            continue
        winding = total / (2 * np.pi)
        count = int(round(winding)) + (spec.pole_order if pole_inside else 0)
        return ZeroCount(count, sl, sigma_high, tl, th, nudge, winding, samples)
    raise ContourError(f"could not route the contour around zeros within {max_nudge}")


def hardy_z(t):
    """Hardy's ``Z(t) = exp(i theta(t)) zeta(1/2 + i t)`` (real)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    vals, _ = evaluate_L_batch(LFunctionSpec("zeta", "zeta", 1, pole_order=1), 0.5 + 1j * t)
    return (np.exp(1j * theta(t)) * vals).real


def first_zeta_zero(lo: float = 14.0, hi: float = 14.3) -> float:
    """Height of the first nontrivial zeta zero by bracketing Hardy's Z."""
    return brentq(lambda x: float(hardy_z(x)[0]), lo, hi, xtol=1e-13, rtol=1e-15)
