"""Uniform evaluation entry points across L-function families."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from resonance.errors import PoleError, UnsupportedRegionError
from resonance.lfunc.cusp import T_SUPPORTED, cusp_afe
from resonance.lfunc.euler_maclaurin import periodic_L, periodic_L_line, zeta_table
from resonance.lfunc.riemann_siegel import T_MIN, hardy_z_grid, hardy_z_points
from resonance.lfunc.spec import LFunctionSpec

# the error estimate must stay below this inside the supported window
MAX_ERROR = 1e-6


@dataclass(frozen=True)
class LValue:
    value: complex
    error: float


def _table(spec: LFunctionSpec) -> np.ndarray:
    if spec.kind == "zeta":
        return zeta_table()
    return np.asarray(spec.character.values, dtype=complex)


def evaluate_L_batch(spec: LFunctionSpec, s):
    """``(values, errors)`` of ``L(s)`` at an array of points."""
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    if spec.kind == "one":
        return np.ones(s_arr.shape, dtype=complex), np.zeros(s_arr.shape)
    if spec.pole_order and np.any(s_arr == 1):
        raise PoleError(f"{spec.label} has a pole at s = 1")
    if spec.kind in ("zeta", "dirichlet"):
        vals, errs = periodic_L(_table(spec), s_arr)
    else:
        out = [cusp_afe(spec.series, spec.weight, z) for z in s_arr.tolist()]
        vals = np.array([v for v, _ in out], dtype=complex)
        errs = np.array([e for _, e in out])
    if np.any(errs > MAX_ERROR):
        worst = s_arr[int(np.argmax(errs))]
        raise UnsupportedRegionError(f"{spec.label}: error estimate above {MAX_ERROR} at s={worst}")
    return vals, errs


def evaluate_L(spec: LFunctionSpec, s: complex) -> LValue:
    """Evaluate ``L(s)`` with an error estimate.

    Args:
        spec: The L-function.
        s: Complex point (the pole at ``s = 1`` raises :class:`PoleError`).

    Returns:
        :class:`LValue`.
    """
    vals, errs = evaluate_L_batch(spec, [s])
    return LValue(complex(vals[0]), float(errs[0]))


def evaluate_zeta(s: complex) -> complex:
    """Riemann zeta (Euler-Maclaurin)."""
    return evaluate_L(LFunctionSpec("zeta", "zeta", 1, pole_order=1), s).value


def evaluate_L_line(spec: LFunctionSpec, sigma: float, t0: float, dt: float, count: int):
    """Complex values on ``sigma + i (t0 + k dt)``; returns ``(values, errors)``."""
    if spec.kind == "one":
        return np.ones(count, dtype=complex), np.zeros(count)
    if spec.kind in ("zeta", "dirichlet"):
        return periodic_L_line(_table(spec), sigma, t0, dt, count)
    t = t0 + dt * np.arange(count)
    return evaluate_L_batch(spec, sigma + 1j * t)


def abs_L_line(spec: LFunctionSpec, sigma: float, t0: float, dt: float, count: int) -> np.ndarray:
    """``|L(sigma + i t)|`` on a uniform grid, using Riemann-Siegel for zeta on the critical line."""
    if spec.kind == "zeta" and sigma == 0.5 and t0 >= T_MIN and dt > 0:
        return np.abs(hardy_z_grid(t0, dt, count))
    if spec.kind == "cusp" and abs(t0) + abs(dt) * count > T_SUPPORTED:
        raise UnsupportedRegionError(f"{spec.label}: grid leaves |t| <= {T_SUPPORTED}")
    vals, _ = evaluate_L_line(spec, sigma, t0, dt, count)
    return np.abs(vals)


def abs_L_points(spec: LFunctionSpec, sigma: float, t) -> np.ndarray:
    """``|L(sigma + i t)|`` at arbitrary heights."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if spec.kind == "zeta" and sigma == 0.5 and np.all(t >= T_MIN):
        return np.abs(hardy_z_points(t))
    vals, _ = evaluate_L_batch(spec, sigma + 1j * t)
    return np.abs(vals)
