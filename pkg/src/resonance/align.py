"""Simultaneous phase alignment and the Fejer-weighted prime sum.

The alignment objective is ``F(t) = sum_n xi_n ||lambda_n t - eta_n||^2``
where ``||x||`` is the distance to the nearest integer.  Chen's bound
controls ``inf F`` on a window in terms of the smallest nonzero value
``Lambda`` of ``|sum u_n lambda_n|`` over integer vectors with
``|u_n| <= M``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from resonance.errors import DependentFrequenciesError, ParameterError, TooLargeError

MAX_HALF = 200_000
GRID_CHUNK = 1 << 16


def nearest_distance(x):
    """``||x||``: distance to the nearest integer (ties give exactly 1/2)."""
    x = np.asarray(x, dtype=float)
    return np.abs(x - np.rint(x))


@dataclass(frozen=True)
class AlignmentProblem:
    """Frequencies, target phases and weights on a window.

    Attributes:
        frequencies: ``lambda_n > 0`` (revolutions per unit ``t``).
        phases: ``eta_n`` (revolutions).
        weights: ``xi_n > 0``.
        T1, T2: Window, ``T1 < T2``.
        M: Chen's parameter.
        primes: When frequencies are ``log p / (2 pi)``, the primes ``p``;
            enables the analytic lower bound for ``Lambda``.
    """

    frequencies: tuple
    phases: tuple
    weights: tuple
    T1: float
    T2: float
    M: int = 1
    primes: tuple | None = None

    def __post_init__(self):
        lam = np.asarray(self.frequencies, dtype=float)
        if not (lam.size == len(self.phases) == len(self.weights)):
            raise ParameterError("frequencies, phases and weights must have equal length")
        if lam.size == 0:
            raise ParameterError("empty alignment problem")
        if np.any(np.asarray(self.weights, dtype=float) <= 0):
            raise ParameterError("weights must be positive")
        if np.any(lam <= 0):
            raise ParameterError("frequencies must be positive")
        if not self.T2 > self.T1:
            raise ParameterError("need T2 > T1")
        if np.unique(lam).size != lam.size:
            raise DependentFrequenciesError("frequencies must be pairwise distinct")
        if int(self.M) < 1:
            raise ParameterError("M must be a positive integer")

    @property
    def N(self) -> int:
        return len(self.frequencies)

    @property
    def lipschitz(self) -> float:
        """Upper bound ``sum xi_n lambda_n`` for the slope of the objective."""
        return float(np.dot(self.weights, self.frequencies))

    def objective(self, t) -> np.ndarray:
        """``F(t)`` at an array of heights."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        lam = np.asarray(self.frequencies, dtype=float)
        eta = np.asarray(self.phases, dtype=float)
        xi = np.asarray(self.weights, dtype=float)
        out = np.empty(t.size)
        for i in range(0, t.size, GRID_CHUNK):
            d = nearest_distance(np.outer(t[i : i + GRID_CHUNK], lam) - eta)
            out[i : i + GRID_CHUNK] = (d * d) @ xi
        return out

    @classmethod
    def from_primes(cls, primes, phases, weights, T1, T2, M=1) -> "AlignmentProblem":
        primes = tuple(int(p) for p in primes)
        freqs = tuple(math.log(p) / (2 * math.pi) for p in primes)
        return cls(freqs, tuple(phases), tuple(weights), T1, T2, M, primes)

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("frequencies", "phases", "weights"):
            d[k] = [float(v) for v in d[k]]
        d["primes"] = list(self.primes) if self.primes is not None else None
        return d


class LambdaMin(NamedTuple):
    """``Lambda`` or a certified lower bound for it.

    Attributes:
        value: ``Lambda`` (may underflow to 0 in bound mode; use ``log_value``).
        is_bound: True when only the analytic lower bound was computed.
        log_value: ``log Lambda`` (or of its lower bound).
    """

    value: float
    is_bound: bool
    log_value: float


def _half_sums(lam: np.ndarray, M: int) -> tuple[np.ndarray, np.ndarray]:
    """All sums ``sum u_n lambda_n`` with ``|u_n| <= M`` and a nonzero mask."""
    if lam.size == 0:
        return np.zeros(1), np.zeros(1, dtype=bool)
    grids = np.array(list(itertools.product(range(-M, M + 1), repeat=lam.size)), dtype=float)
    return grids @ lam, np.any(grids != 0, axis=1)


def lambda_min_bruteforce(frequencies, M: int) -> float:
    """Direct enumeration of all ``(2M+1)^N - 1`` nonzero vectors (test oracle)."""
    lam = np.asarray(frequencies, dtype=float)
    sums, nz = _half_sums(lam, M)
    return float(np.min(np.abs(sums[nz])))


def _log_prime_bound(primes, M: int, upper: float | None = None) -> float:
    top = float(upper) if upper is not None else float(max(primes))
    # |sum u_p log p| = |log(a/b)| >= 1/max(a, b) >= top^(-MN); frequencies carry 1/(2 pi)
    return -M * len(primes) * math.log(top) - math.log(2 * math.pi)


def lambda_min(frequencies, M: int, primes=None, upper: float | None = None) -> LambdaMin:
    """Smallest nonzero ``|sum u_n lambda_n|`` over ``|u_n| <= M``.

    Enumerated by meet-in-the-middle: sums over the first half are matched
    against the sorted sums over the second half.  When this is infeasible
    and ``primes`` is given (frequencies ``log p / (2 pi)``), the analytic
    bound ``(e x_H)^(-MN) / (2 pi)`` with ``e x_H = upper`` (default the
    largest prime) is returned and flagged.

    Raises:
        TooLargeError: infeasible enumeration without log-prime structure.
    """
    lam = np.asarray(frequencies, dtype=float)
    M = int(M)
    N = lam.size
    k = N // 2
    feasible = (2 * M + 1) ** max(k, N - k) <= MAX_HALF
    if not feasible:
        if primes is None:
            raise TooLargeError(f"enumeration of (2M+1)^N = {(2 * M + 1) ** N} vectors is infeasible")
        lb = _log_prime_bound(primes, M, upper)
        return LambdaMin(math.exp(lb), True, lb)
    sa, nza = _half_sums(lam[:k], M)
    sb, nzb = _half_sums(lam[k:], M)
    order = np.argsort(sb)
    sb_sorted = sb[order]
    best = np.inf
    # pairs with a nonzero first half: nearest second-half sum to -a
    a_nz = sa[nza]
    if a_nz.size:
        pos = np.searchsorted(sb_sorted, -a_nz)
        for shift in (-1, 0):
            idx = np.clip(pos + shift, 0, sb_sorted.size - 1)
            best = min(best, float(np.min(np.abs(a_nz + sb_sorted[idx]))))
    # zero first half: the second half must be nonzero
    if np.any(nzb):
        best = min(best, float(np.min(np.abs(sb[nzb]))))
    scale = float(np.max(np.abs(lam))) * max(M, 1) * N
    if best <= 1e-13 * scale:
        if primes is not None:
            lb = _log_prime_bound(primes, M, upper)
            return LambdaMin(math.exp(lb), True, lb)
        return LambdaMin(0.0, False, -math.inf)
    return LambdaMin(best, False, math.log(best))


def chen_bound(problem: AlignmentProblem, lam: LambdaMin | float | None = None) -> float:
    """``(1/4) sum xi_n (sin^2(pi/(2(M+1))) + M^N / (pi (T2-T1) Lambda))``.

    Raises:
        DependentFrequenciesError: ``Lambda == 0``.
    """
    if lam is None:
        lam = lambda_min(problem.frequencies, problem.M, problem.primes)
    log_lam = lam.log_value if isinstance(lam, LambdaMin) else (math.log(lam) if lam > 0 else -math.inf)
    if log_lam == -math.inf:
        raise DependentFrequenciesError("a nontrivial integer relation among the frequencies has value 0")
    M, N = problem.M, problem.N
    first = math.sin(math.pi / (2 * (M + 1))) ** 2
    log_second = N * math.log(M) - math.log(math.pi * (problem.T2 - problem.T1)) - log_lam
    second = math.exp(log_second) if log_second < 700 else math.inf
    return 0.25 * float(np.sum(problem.weights)) * (first + second)


@dataclass
class AlignmentResult:
    """Grid minimum of the alignment objective.

    Attributes:
        t_star: Minimising grid point (lowest ``t`` on ties).
        objective: ``F(t_star)``.
        chen_bound: Chen's upper bound for ``inf F`` on the window.
        lambda_min: ``Lambda`` (or its flagged lower bound).
        lambda_is_bound: Whether ``lambda_min`` is only a lower bound.
        grid_step: Step used.
        lipschitz: ``sum xi_n lambda_n``.
        samples: Number of grid points.
    """

    t_star: float
    objective: float
    chen_bound: float
    lambda_min: float
    lambda_is_bound: bool
    grid_step: float
    lipschitz: float
    samples: int

    def to_dict(self) -> dict:
        return asdict(self)


def default_grid_step(problem: AlignmentProblem) -> float:
    """``1 / (4 max lambda_n)``."""
    return 1.0 / (4.0 * max(problem.frequencies))


def grid_minimum(problem: AlignmentProblem, step: float) -> tuple[float, float, int]:
    """Lowest-``t`` argmin of the objective on ``T1 + k step <= T2``."""
    n = int(math.floor((problem.T2 - problem.T1) / step + 1e-9)) + 1
    best_t, best_v = problem.T1, math.inf
    chunk = max(1, GRID_CHUNK * 4 // max(problem.N, 1))
    for i in range(0, n, chunk):
        t = problem.T1 + step * np.arange(i, min(n, i + chunk))
        v = problem.objective(t)
        j = int(np.argmin(v))
        if v[j] < best_v:
            best_t, best_v = float(t[j]), float(v[j])
    return best_t, best_v, n


def align_search(problem: AlignmentProblem, grid_step: float | None = None, lam: LambdaMin | None = None) -> AlignmentResult:
    """Minimise the alignment objective over a uniform grid on the window.

    Args:
        problem: The alignment problem.
        grid_step: Grid spacing, at most ``1/(4 max lambda_n)`` (the default).
        lam: Precomputed ``Lambda``.

    Returns:
        :class:`AlignmentResult`.
    """
    limit = default_grid_step(problem)
    step = limit if grid_step is None else float(grid_step)
    if step <= 0 or step > limit * (1 + 1e-12):
        raise ParameterError(f"grid_step must lie in (0, {limit}]")
    if lam is None:
        lam = lambda_min(problem.frequencies, problem.M, problem.primes)
    t_star, value, n = grid_minimum(problem, step)
    return AlignmentResult(t_star, value, chen_bound(problem, lam), lam.value, lam.is_bound, step, problem.lipschitz, n)


# -- Fejer-weighted sum ----------------------------------------------------------


def convol_range(x: float) -> np.ndarray:
    """Integers ``n >= 2`` with ``|log(n/x)| < 1``."""
    if x <= 0:
        raise ParameterError("x must be positive")
    lo = max(2, int(math.floor(x / math.e)) + 1)
    hi = int(math.ceil(x * math.e)) - 1
    n = np.arange(lo, hi + 1, dtype=np.int64)
    return n[np.abs(np.log(n / x)) < 1]


def convol_lower_bound(spec, s0: complex, x: float, phi: float = 0.0) -> float:
    """``(1/2) Re sum_{|log(n/x)|<1} b(n) n^(-s0) e^(-i phi) (1 - |log(n/x)|)``.

    ``b`` are the coefficients of ``log L``.  Only the main term is returned;
    :func:`convol_error_scale` gives the size of the error term.
    """
    n = convol_range(x)
    if n.size == 0:
        return 0.0
    b = spec.log_coefficients(n)
    fej = 1 - np.abs(np.log(n / x))
    terms = b * np.exp(-complex(s0) * np.log(n.astype(float))) * fej
    return float(0.5 * (np.exp(-1j * phi) * np.sum(terms)).real)


def convol_error_scale(x: float, tau: float, t0: float) -> float:
    """``x (tau + log t0) / tau^2``, the unscaled size of the error term."""
    return float(x * (tau + math.log(t0)) / tau**2)
