"""Resonance-guided searches for extreme values.

Three pipelines:

* ``thm1`` (:func:`search_critical`): large ``min_h |L_h(1/2 + it)|`` on
  ``[T, 2T]`` at the peaks of a critical-line resonator.
* ``thm2`` (:func:`search_offline`): large or small values at ``Re s = sigma``
  on a certified zero-free window, guided by an off-line resonator.
* ``thm3`` (:func:`search_kronecker`): large ``Re(e^{-i phi_h} log L_h)``
  by aligning prime phases in disjoint windows.

Each guided arm is compared with uniformly drawn control points from
seeded generators, so runs are reproducible.
"""

from __future__ import annotations

import csv
import logging
import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from resonance.align import AlignmentProblem, align_search, convol_error_scale, convol_lower_bound, lambda_min, nearest_distance
from resonance.arith.primes import primes_between
from resonance.certify import GoodIntervalCertificate, certify_good_interval, require_certificate
from resonance.errors import CertificateRequiredError, DegenerateWindowError, ParameterError
from resonance.lfunc.evaluate import abs_L_points, evaluate_L_line
from resonance.lfunc.zeros import log_L
from resonance.moments import default_step
from resonance.resonator import build_resonator_critical, build_resonator_offline
from resonance.signed_sums import signed_prime_sums

log = logging.getLogger(__name__)

K_DEFAULT = 64
SEEDS_DEFAULT = (0, 1, 2, 3, 4)
THETA_GL2 = 7 / 64
MAX_GRID = 50_000_000


@dataclass
class SearchReport:
    """Outcome of one pipeline run.

    Attributes:
        pipeline: ``"thm1"``, ``"thm2"`` or ``"thm3"``.
        params: Resolved parameters.
        window: Searched range of ``t``.
        best_t: Winning height (thm1, thm2).
        t_h: Per-function heights (thm3).
        values: Per-label values at the winning height(s).
        threshold: Predicted threshold (``None`` when undefined).
        guided: Guided candidates (``t``, ``abs_R``, per-label values, objective).
        control: One entry per seed with the control arm's best.
        wins: Seeds on which the guided arm beat the control arm.
        diagnostics: Resonator and alignment diagnostics.
    """

    pipeline: str
    params: dict
    window: tuple
    best_t: float | None = None
    t_h: list | None = None
    values: dict = field(default_factory=dict)
    threshold: float | None = None
    guided: list = field(default_factory=list)
    control: list = field(default_factory=list)
    wins: int | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def guided_best(self) -> float | None:
        return self.diagnostics.get("guided_best")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["window"] = list(self.window)
        return d

    def csv_rows(self) -> tuple[list[str], list[list]]:
        """Header and rows ``(arm, seed, t, |R|, per-label value, objective)`` for plotting."""
        labels = list(self.params.get("labels", []))
        if self.pipeline == "thm3":
            keys = ["h", "label", "phi", "t_h", "main_term", "cosine_sum", "cosine_bound", "max_value", "value_at_t_star"]
            return keys, [[p[k] for k in keys] for p in self.diagnostics.get("per_h", [])]
        header = ["arm", "seed", "t", "abs_R"] + [f"value_{x}" for x in labels] + ["objective"]
        rows = []
        for c in self.guided:
            rows.append(["guided", "", c["t"], c.get("abs_R", "")] + [c["values"].get(x, "") for x in labels] + [c["objective"]])
        for arm in self.control:
            for c in arm["points"]:
                rows.append(["control", arm["seed"], c["t"], c.get("abs_R", "")] + [c["values"].get(x, "") for x in labels] + [c["objective"]])
        return header, rows

    def write_csv(self, path) -> None:
        header, rows = self.csv_rows()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows(rows)


# -- shared helpers -------------------------------------------------------------


def local_maxima(values: np.ndarray) -> np.ndarray:
    """Indices of interior points not below either neighbour."""
    v = np.asarray(values)
    if v.size < 3:
        return np.arange(v.size)
    inner = np.nonzero((v[1:-1] >= v[:-2]) & (v[1:-1] >= v[2:]))[0] + 1
    return inner


def top_separated(t: np.ndarray, score: np.ndarray, k: int, separation: float) -> np.ndarray:
    """Greedy choice of up to ``k`` indices by decreasing score, pairwise ``>= separation`` apart."""
    order = np.lexsort((t, -score))
    chosen: list[int] = []
    taken = np.empty(0)
    for i in order:
        if taken.size and np.min(np.abs(taken - t[i])) < separation:
            continue
        chosen.append(int(i))
        taken = np.append(taken, t[i])
        if len(chosen) == k:
            break
    return np.array(chosen, dtype=int)


def _refine_peak(res, t0: float, half_width: float, sigma: float, points: int = 33) -> tuple[float, float]:
    t = t0 + np.linspace(-half_width, half_width, points)
    v = np.abs(res.evaluate(t, sigma))
    j = int(np.argmax(v))
    return float(t[j]), float(v[j])


def critical_threshold(H: int, T: float, D: float) -> float | None:
    """``exp(sqrt(D log T / (H (H-1) log log T)))``; ``None`` for ``H = 1``."""
    if H < 2:
        return None
    return float(math.exp(math.sqrt(D * math.log(T) / (H * (H - 1) * math.log(math.log(T))))))


def default_D_critical(specs) -> float:
    """A fixed fraction of the admissible range for ``D``."""
    if all(s.degree <= 1 for s in specs):
        return 0.45
    return 0.9 * (0.5 - THETA_GL2) / (3 + THETA_GL2)


def offline_threshold(T: float, sigma: float, D: float) -> float:
    """``exp(D (log T)^(1-sigma) / log log T)``, or ``(log log T)^D`` at ``sigma = 1``."""
    llT = math.log(math.log(T))
    if sigma == 1:
        return float(llT**D)
    return float(math.exp(D * math.log(T) ** (1 - sigma) / llT))


def _points_record(ts, absR, vals: dict, objective) -> list[dict]:
    out = []
    for i, t in enumerate(ts):
        out.append(
            {
                "t": float(t),
                "abs_R": None if absR is None else float(absR[i]),
                "values": {k: float(v[i]) for k, v in vals.items()},
                "objective": float(objective[i]),
            }
        )
    return out


# -- thm1: critical line ---------------------------------------------------------


def search_critical(
    specs,
    T: float,
    delta: float = 0.1,
    lam: float = 1.2,
    grid_count: int | None = None,
    *,
    K: int = K_DEFAULT,
    seeds=SEEDS_DEFAULT,
    ell: float | None = None,
    support=None,
    untruncated: bool = False,
    separation: float | None = None,
    D: float | None = None,
) -> SearchReport:
    """Large simultaneous values on the critical line.

    Builds the critical resonator, evaluates ``|R(1/2 + it)|`` on a uniform
    grid over ``[T, 2T]``, keeps the ``K`` largest separated local maxima
    (each refined locally), and evaluates ``min_h |L_h(1/2 + it)|`` there
    and at ``K`` uniform control points for each seed.

    Args:
        specs: L-functions ``L_1..L_H``.
        T: Height.
        delta, lam: Resonator parameters.
        grid_count: Grid size on ``[T, 2T]`` (default resolves the
            ``log(T/2pi)`` scale and the resonator bandwidth).
        K: Candidates per arm.
        seeds: Control-arm seeds.
        ell, support, untruncated: Desk-scale overrides passed to
            :func:`build_resonator_critical`.
        separation: Minimum spacing of guided candidates (default the mean
            zero spacing ``2 pi / log(T / 2 pi)``).
        D: Constant in the reported threshold.

    Returns:
        :class:`SearchReport` with ``pipeline == "thm1"``.
    """
    if grid_count is not None and grid_count <= 0:
        raise ParameterError("grid_count must be positive")
    if K <= 0:
        raise ParameterError("K must be positive")
    labels = [s.label for s in specs]
    res = build_resonator_critical(specs, delta, lam, T, ell=ell, support=support, untruncated=untruncated)
    lo, hi = float(T), float(2 * T)
    if grid_count is None:
        step = default_step(hi, res.max_log_n())
        grid_count = int(math.ceil((hi - lo) / step)) + 1
    if grid_count > MAX_GRID:
        raise ParameterError(f"grid_count {grid_count} above {MAX_GRID}")
    dt = (hi - lo) / max(grid_count - 1, 1)
    sep = separation if separation is not None else 2 * math.pi / math.log(T / (2 * math.pi))

    if res.empty:
        warnings.warn("resonator support is empty: guided arm falls back to uniform sampling", stacklevel=2)
        guided_t = lo + (hi - lo) * (np.arange(K) + 0.5) / K
        guided_R = np.ones(K)
    else:
        absR = res.abs_grid(lo, dt, grid_count, 0.5)
        peaks = local_maxima(absR)
        tg = lo + dt * peaks
        pick = peaks[top_separated(tg, absR[peaks], K, sep)]
        refined = [_refine_peak(res, lo + dt * i, dt, 0.5) for i in pick]
        guided_t = np.array([min(max(r[0], lo), hi) for r in refined])
        guided_R = np.array([r[1] for r in refined])

    def evaluate(ts):
        vals = {s.label: abs_L_points(s, 0.5, ts) for s in specs}
        obj = np.min(np.stack(list(vals.values())), axis=0)
        return vals, obj

    g_vals, g_obj = evaluate(guided_t)
    guided = _points_record(guided_t, guided_R, g_vals, g_obj)
    jbest = int(np.argmax(g_obj))
    guided_best = float(g_obj[jbest])

    control, wins = [], 0
    for seed in seeds:
        rng = np.random.default_rng(seed)
        ct = np.sort(rng.uniform(lo, hi, K))
        c_vals, c_obj = evaluate(ct)
        cR = np.abs(res.evaluate(ct, 0.5))
        best = float(np.max(c_obj))
        won = guided_best > best
        wins += int(won)
        control.append({"seed": int(seed), "best": best, "best_t": float(ct[int(np.argmax(c_obj))]), "guided_wins": bool(won), "points": _points_record(ct, cR, c_vals, c_obj)})

    D_used = default_D_critical(specs) if D is None else D
    return SearchReport(
        "thm1",
        {
            "labels": labels,
            "T": T,
            "delta": delta,
            "lambda": lam,
            "grid_count": int(grid_count),
            "grid_step": dt,
            "K": K,
            "seeds": [int(s) for s in seeds],
            "separation": sep,
            "D": D_used,
            "resonator": res.params,
        },
        (lo, hi),
        best_t=guided[jbest]["t"],
        values=dict(guided[jbest]["values"]),
        threshold=critical_threshold(len(specs), T, D_used),
        guided=guided,
        control=control,
        wins=wins,
        diagnostics={
            "guided_best": guided_best,
            "control_best": [c["best"] for c in control],
            "abs_R_best": guided[jbest]["abs_R"],
            "resonator_support": int(res.primes.size),
            "resonator_mass": res.mass(),
            "resonator_empty": res.empty,
        },
    )


# -- thm2: off the line ----------------------------------------------------------


def search_offline(
    specs_large,
    specs_small,
    sigma: float,
    T: float,
    beta: float = 5.0,
    C: float | None = None,
    certificate: GoodIntervalCertificate | None = None,
    *,
    K: int = K_DEFAULT,
    seeds=SEEDS_DEFAULT,
    x_eps: float = 2.0,
    step: float | None = None,
    separation: float | None = None,
) -> SearchReport:
    """Simultaneous large and small values at ``Re s = sigma``.

    The objective is ``min(min_large |L_h|, (max_small |L_h|)^-1)``.  The
    window is ``[A + T^alpha, A + 2 T^alpha]`` from the certificate.

    Raises:
        CertificateRequiredError: missing certificate or one that does not
            cover every function at ``sigma`` on the window.
    """
    specs = list(specs_large) + list(specs_small)
    if not specs:
        raise ParameterError("need at least one L-function")
    if certificate is None:
        raise CertificateRequiredError("search_offline needs a zero-free certificate")
    lo, hi = certificate.window
    require_certificate(certificate, specs, sigma, lo, hi, CertificateRequiredError)
    C = 2.0 * len(specs) if C is None else float(C)
    res = build_resonator_offline(specs_large, specs_small, beta, T, C, x_eps)
    if step is None:
        step = min(default_step(hi, 0.0), 2 * math.pi / (8 * max(res.max_log_n(), 1.0)))
    count = int(math.ceil((hi - lo) / step)) + 1
    dt = (hi - lo) / (count - 1)
    sep = separation if separation is not None else 2 * math.pi / math.log(hi / (2 * math.pi))

    def evaluate(ts):
        vals = {s.label: abs_L_points(s, sigma, ts) for s in specs}
        parts = []
        if specs_large:
            parts.append(np.min(np.stack([vals[s.label] for s in specs_large]), axis=0))
        if specs_small:
            parts.append(1.0 / np.max(np.stack([vals[s.label] for s in specs_small]), axis=0))
        return vals, np.min(np.stack(parts), axis=0)

    if res.empty:
        warnings.warn("off-line resonator is empty: guided arm falls back to uniform sampling", stacklevel=2)
        guided_t = lo + (hi - lo) * (np.arange(K) + 0.5) / K
        guided_R = np.ones(K)
    else:
        absR = res.abs_grid(lo, dt, count, 0.0)
        peaks = local_maxima(absR)
        tg = lo + dt * peaks
        pick = peaks[top_separated(tg, absR[peaks], K, sep)]
        refined = [_refine_peak(res, lo + dt * i, dt, 0.0) for i in pick]
        guided_t = np.array([min(max(r[0], lo), hi) for r in refined])
        guided_R = np.array([r[1] for r in refined])

    g_vals, g_obj = evaluate(guided_t)
    guided = _points_record(guided_t, guided_R, g_vals, g_obj)
    jbest = int(np.argmax(g_obj))
    guided_best = float(g_obj[jbest])
    control, wins = [], 0
    for seed in seeds:
        rng = np.random.default_rng(seed)
        ct = np.sort(rng.uniform(lo, hi, K))
        c_vals, c_obj = evaluate(ct)
        cR = np.abs(res.evaluate(ct, 0.0))
        best = float(np.max(c_obj))
        won = guided_best > best
        wins += int(won)
        control.append({"seed": int(seed), "best": best, "best_t": float(ct[int(np.argmax(c_obj))]), "guided_wins": bool(won), "points": _points_record(ct, cR, c_vals, c_obj)})

    sums = signed_prime_sums(specs_large, specs_small, res, sigma, T)
    D_meas = sums.D_measured
    return SearchReport(
        "thm2",
        {
            "labels": [s.label for s in specs],
            "large": [s.label for s in specs_large],
            "small": [s.label for s in specs_small],
            "sigma": sigma,
            "T": T,
            "beta": beta,
            "C": C,
            "x_eps": x_eps,
            "K": K,
            "seeds": [int(s) for s in seeds],
            "grid_step": dt,
            "grid_count": count,
            "separation": sep,
            "certificate": certificate.to_dict(),
        },
        (lo, hi),
        best_t=guided[jbest]["t"],
        values=dict(guided[jbest]["values"]),
        threshold=offline_threshold(T, sigma, D_meas) if D_meas is not None else None,
        guided=guided,
        control=control,
        wins=wins,
        diagnostics={
            "guided_best": guided_best,
            "control_best": [c["best"] for c in control],
            "abs_R_best": guided[jbest]["abs_R"],
            "resonator_support": int(res.primes.size),
            "resonator_empty": res.empty,
            "D_measured": D_meas,
            "signed_sums": sums.to_dict(),
        },
    )


# -- thm3: phase alignment -------------------------------------------------------


@dataclass(frozen=True)
class PrimeWindow:
    """Primes ``p`` with ``|log(p / x)| < 1`` used for one function."""

    h: int
    x: float
    primes: tuple

    @property
    def bounds(self) -> tuple[float, float]:
        return (self.x / math.e, self.x * math.e)


def kronecker_windows(H: int, T: float, C: float, M: int) -> list[PrimeWindow]:
    """Windows around ``x_h = e^(2h) log T / (C M)``, ``h = 1..H``.

    Consecutive open windows ``(x_h/e, e x_h)`` touch at one point, so
    they share no prime; both facts are asserted.
    """
    if C <= 0 or M < 1:
        raise ParameterError("need C > 0 and M >= 1")
    out = []
    for h in range(1, H + 1):
        x = math.exp(2 * h) * math.log(T) / (C * M)
        ps = primes_between(x / math.e, x * math.e)
        ps = ps[np.abs(np.log(ps / x)) < 1]
        out.append(PrimeWindow(h, x, tuple(int(p) for p in ps)))
    for a, b in zip(out, out[1:]):
        assert a.bounds[1] <= b.bounds[0] * (1 + 1e-12), "windows overlap"
        assert not set(a.primes) & set(b.primes), "windows share a prime"
    return out


def proximity_radius(T: float, sigma0: float) -> float:
    """``tau = (log T)^((1+sigma0)/2) sqrt(log log T)``."""
    return float(math.log(T) ** ((1 + sigma0) / 2) * math.sqrt(math.log(math.log(T))))


def _log_L_line(spec, sigma0: float, t_center: float, tau: float, step: float):
    """``log L(sigma0 + it)`` on ``[t_center - tau, t_center + tau]`` by phase unwrapping."""
    count = int(math.ceil(2 * tau / step)) + 1
    dt = 2 * tau / (count - 1)
    t0 = t_center - tau
    vals, _ = evaluate_L_line(spec, sigma0, t0, dt, count)
    ph = np.unwrap(np.angle(vals))
    j = count // 2
    anchor = log_L(spec, complex(sigma0, t0 + j * dt))
    ph += anchor.imag - ph[j]
    t = t0 + dt * np.arange(count)
    return t, np.log(np.abs(vals)) + 1j * ph


def search_kronecker(
    specs,
    sigma0: float,
    T: float,
    phis,
    C: float = 1.0,
    M: int = 1,
    certificate: GoodIntervalCertificate | None = None,
    *,
    grid_step: float | None = None,
    line_step: float = 0.02,
) -> SearchReport:
    """Phase alignment in disjoint prime windows (``thm3``).

    Assembles one alignment problem from all windows (frequencies
    ``log p / 2pi``, phases ``(arg a_h(p) - phi_h)/2pi``, weights
    ``|a_h(p)| / p^sigma0``), solves it on ``[A + T^a, A + 2T^a]``, then for
    each ``h`` maximises ``Re(e^{-i phi_h} log L_h(sigma0 + it))`` over
    ``|t - t*| <= tau``.

    Raises:
        CertificateRequiredError: certificate missing or too small.
        DegenerateWindowError: a prime window is empty.
    """
    specs = list(specs)
    phis = [float(p) for p in phis]
    if len(phis) != len(specs):
        raise ParameterError("one phase per L-function is required")
    if certificate is None:
        raise CertificateRequiredError("search_kronecker needs a zero-free certificate")
    lo, hi = certificate.window
    tau = proximity_radius(T, sigma0)
    require_certificate(certificate, specs, sigma0, lo - 2 * tau, hi + 2 * tau, CertificateRequiredError)
    windows = kronecker_windows(len(specs), T, C, M)
    primes, phases, weights, owner = [], [], [], []
    for spec, phi, win in zip(specs, phis, windows):
        ps = np.array(win.primes, dtype=np.int64)
        a = spec.at_primes(ps) if ps.size else np.zeros(0, complex)
        keep = a != 0
        if not np.any(keep):
            raise DegenerateWindowError(f"{spec.label}: no prime with a(p) != 0 in ({win.bounds[0]:.3g}, {win.bounds[1]:.3g})")
        for p, ap in zip(ps[keep], a[keep]):
            arg = float(np.angle(ap)) if ap.imag != 0 or ap.real < 0 else 0.0
            primes.append(int(p))
            phases.append((arg - phi) / (2 * math.pi))
            weights.append(abs(ap) / p**sigma0)
            owner.append(win.h)
    problem = AlignmentProblem.from_primes(primes, phases, weights, lo, hi, M)
    lam = lambda_min(problem.frequencies, M, problem.primes, upper=windows[-1].bounds[1])
    result = align_search(problem, grid_step, lam)
    t_star = result.t_star

    owner = np.array(owner)
    lam_arr = np.array(problem.frequencies)
    eta = np.array(problem.phases)
    xi = np.array(problem.weights)
    dist = nearest_distance(lam_arr * t_star - eta)
    cosines = np.cos(2 * np.pi * (lam_arr * t_star - eta))
    per_h, t_h, values = [], [], {}
    for spec, phi, win in zip(specs, phis, windows):
        sel = owner == win.h
        fej = 1 - np.abs(np.log(np.array(primes)[sel] / win.x))
        main = convol_lower_bound(spec, complex(sigma0, t_star), win.x, phi)
        t_line, logs = _log_L_line(spec, sigma0, t_star, tau, line_step)
        target = (np.exp(-1j * phi) * logs).real
        j = int(np.argmax(target))
        t_h.append(float(t_line[j]))
        values[spec.label] = float(target[j])
        obj_h = float(np.sum(xi[sel] * dist[sel] ** 2))
        per_h.append(
            {
                "h": win.h,
                "label": spec.label,
                "phi": phi,
                "x": win.x,
                "window": list(win.bounds),
                "primes": len(win.primes),
                "main_term": main,
                "main_term_unrotated": convol_lower_bound(spec, complex(sigma0, t_star), win.x, 0.0),
                "plain_cosine_sum": float(np.sum(xi[sel] * np.cos(2 * np.pi * (lam_arr[sel] * t_star - eta[sel]) - phi))),
                "raw_sum": float(0.5 * np.sum(xi[sel] * cosines[sel] * fej)),
                "cosine_sum": float(np.sum(xi[sel] * cosines[sel])),
                "reference": float(np.sum(xi[sel])),
                "cosine_bound": float(np.sum(xi[sel]) - 2 * math.pi**2 * obj_h),
                "objective": obj_h,
                "value_at_t_star": float(target[len(target) // 2]),
                "max_value": float(target[j]),
                "t_h": float(t_line[j]),
                "error_scale": convol_error_scale(win.x, tau, t_star),
            }
        )
    for a in t_h:
        for b in t_h:
            assert abs(a - b) <= 2 * tau + 1e-9, "proximity clause violated"
    scale = math.log(T) ** (1 - sigma0) / math.log(math.log(T))
    return SearchReport(
        "thm3",
        {
            "labels": [s.label for s in specs],
            "sigma0": sigma0,
            "T": T,
            "phis": phis,
            "C": C,
            "M": M,
            "tau": tau,
            "line_step": line_step,
            "certificate": certificate.to_dict(),
        },
        (lo, hi),
        best_t=t_star,
        t_h=t_h,
        values=values,
        threshold=scale,
        diagnostics={
            "alignment": result.to_dict(),
            "problem_size": problem.N,
            "per_h": per_h,
        },
    )


def certify_for_search(specs, sigma0: float, T: float, alpha: float, A: float | None = None) -> GoodIntervalCertificate:
    """Certificate anchored at ``A = 3T/2`` by default."""
    return certify_good_interval(specs, sigma0, T, alpha, 1.5 * T if A is None else A)
