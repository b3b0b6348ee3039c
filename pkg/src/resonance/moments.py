"""Twisted moments of L-functions against a resonator.

All integrals use the composite trapezoid rule on a uniform grid.  With the
smooth window ``w(t, T)`` the integrands decay like a Gaussian outside
``[6T/5, 9T/5]``, so the rule converges spectrally once the step resolves
the highest frequency present; the error estimate compares the rule at
steps ``h`` and ``2h``.  On the critical line the integrands have corners
at zeros, so the raw difference is reported rather than a Richardson
fraction of it.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import erf, erfc

from resonance.arith.primes import primes_upto
from resonance.certify import require_certificate
from resonance.errors import ParameterError, TooLargeError
from resonance.lfunc.dirpoly import poly_grid
from resonance.lfunc.evaluate import abs_L_line, evaluate_L_line
from resonance.lfunc.fractional import fractional_coefficients

SQRT_PI = math.sqrt(math.pi)
PAD = 8.0
CHUNK = 1 << 19
MAX_SAMPLES = 400_000_000
MAX_POLY_LENGTH = 2_000_000


# -- the window ---------------------------------------------------------------


def weight_w(t, T: float, return_flag: bool = False):
    """``w(t, T) = (sqrt(pi)/2) (erf(9T/5 - t) - erf(6T/5 - t))``.

    The difference is taken between complementary error functions in the
    tails so that it keeps full relative precision there.

    Args:
        t: Height(s).
        T: Window scale, ``T > 0``.
        return_flag: Also return a boolean array marking values that
            underflowed to 0.

    Returns:
        ``w`` (same shape as ``t``), or ``(w, underflow)``.
    """
    if T <= 0:
        raise ParameterError(f"T must be positive, got {T}")
    t = np.asarray(t, dtype=float)
    a = 1.8 * T - t
    b = 1.2 * T - t
    out = np.empty(np.broadcast(a, b).shape)
    right = b > 0  # both arguments positive: erfc(b) - erfc(a)
    left = a < 0  # both negative: erfc(-a) - erfc(-b)
    mid = ~(right | left)
    out[right] = erfc(b[right]) - erfc(a[right])
    out[left] = erfc(-a[left]) - erfc(-b[left])
    out[mid] = erf(a[mid]) - erf(b[mid])
    out *= SQRT_PI / 2
    out = np.maximum(out, 0.0)
    if out.ndim == 0:
        out = float(out)
    if return_flag:
        return out, np.asarray(out) == 0.0
    return out


@dataclass(frozen=True)
class WeightWindow:
    """The smooth window ``w(., T)``."""

    T: float

    def __call__(self, t):
        return weight_w(t, self.T)

    @property
    def integral(self) -> float:
        """``int_R w(t, T) dt = (3/5) T sqrt(pi)``."""
        return 0.6 * self.T * SQRT_PI

    @property
    def support(self) -> tuple[float, float]:
        """Range outside which ``w`` is below ``e^-64``."""
        return (1.2 * self.T - PAD, 1.8 * self.T + PAD)


# -- Montgomery-Vaughan ---------------------------------------------------------


@dataclass(frozen=True)
class MeanValue:
    """``int_0^T |sum a_n n^-it|^2 dt`` with its diagonal part.

    Attributes:
        integral: Exact value from pairwise integration.
        diagonal: ``T sum |a_n|^2``.
        offdiagonal_bound: ``sum_{m != n} 2 |a_m a_n| / |log(m/n)|``.
    """

    integral: float
    diagonal: float
    offdiagonal_bound: float


def _as_coefficients(coeffs):
    if isinstance(coeffs, dict):
        ns = np.array(sorted(coeffs), dtype=float)
        a = np.array([coeffs[int(n)] for n in ns], dtype=complex)
    else:
        a = np.asarray(coeffs, dtype=complex)
        ns = np.arange(1, a.size + 1, dtype=float)
    keep = a != 0
    return ns[keep], a[keep]


def mv_meanvalue(coeffs, T: float) -> MeanValue:
    """Mean square of a Dirichlet polynomial on ``[0, T]`` by exact pair integration.

    Args:
        coeffs: ``a_1, a_2, ...`` as a sequence, or a mapping ``n -> a_n``.
        T: Length of the integration range.

    Returns:
        :class:`MeanValue`.
    """
    ns, a = _as_coefficients(coeffs)
    if ns.size == 0:
        return MeanValue(0.0, 0.0, 0.0)
    ell = np.log(ns)[None, :] - np.log(ns)[:, None]  # log(n/m), rows m
    pair = a[:, None] * np.conj(a)[None, :]
    off = ell != 0
    kernel = np.full(ell.shape, complex(T))
    # int_0^T e^{i t l} dt = (e^{i T l} - 1) / (i l)
    kernel[off] = np.expm1(1j * T * ell[off]) / (1j * ell[off])
    integral = float(np.sum(pair * kernel).real)
    diagonal = float(T * np.sum(np.abs(a) ** 2))
    mag = np.abs(pair)
    bound = float(np.sum(2 * mag[off] / np.abs(ell[off])))
    return MeanValue(integral, diagonal, bound)


# -- quadrature core ---------------------------------------------------------


@dataclass
class MomentEstimate:
    """A numerically integrated moment.

    Attributes:
        value: The estimate.
        error: Total error estimate (quadrature plus, for finite windows,
            the spread of block means).
        kind: Integrand identity, e.g. ``"I"``, ``"S"``, ``"D"``, ``"offline"``.
        labels: L-functions in the product.
        q, sigma, T: Integrand parameters.
        grid: Step, range and sample count.
        extra: Side quantities (companion products, factor moments, ...).
    """

    value: float
    error: float
    kind: str
    labels: tuple
    q: float
    sigma: float
    T: float
    grid: dict
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["labels"] = list(self.labels)
        return d


def _trapezoid(func, a: float, b: float, step: float, normaliser: float, blocks: int = 0):
    """Trapezoid sums at steps ``h`` and ``2h`` over ``[a, b]``.

    ``func(t0, h, count)`` returns integrand samples on ``t0 + k h``.  Chunk
    sums are pairwise (numpy) and combined with ``math.fsum`` so the result
    does not depend on the chunking.
    """
    n = int(math.ceil((b - a) / step))
    n += n % 2
    n = max(n, 2)
    if n + 1 > MAX_SAMPLES:
        raise TooLargeError(f"quadrature needs {n + 1} samples")
    h = (b - a) / n
    fine, coarse = [], []
    block_sums = np.zeros(blocks) if blocks else None
    for start in range(0, n + 1, CHUNK):
        count = min(CHUNK, n + 1 - start)
        f = np.asarray(func(a + start * h, h, count), dtype=float)
        wts = np.ones(count)
        if start == 0:
            wts[0] = 0.5
        if start + count == n + 1:
            wts[-1] = 0.5
        fine.append(float(np.sum(f * wts)))
        idx = np.arange(start, start + count)
        even = idx % 2 == 0
        cw = np.where(even, 1.0, 0.0)
        if start == 0:
            cw[0] = 0.5
        if start + count == n + 1:
            cw[-1] = 0.5
        coarse.append(float(np.sum(f * cw)))
        if blocks:
            which = np.minimum((idx * blocks) // n, blocks - 1)
            np.add.at(block_sums, which, f * wts)
    i_h = h * math.fsum(fine) / normaliser
    i_2h = 2 * h * math.fsum(coarse) / normaliser
    grid = {"a": a, "b": b, "step": h, "samples": n + 1}
    if blocks:
        return i_h, i_2h, grid, block_sums * h * blocks / normaliser
    return i_h, i_2h, grid


def default_step(T: float, bandwidth: float = 0.0) -> float:
    """Grid step resolving ``log(T/2pi)`` oscillations and a resonator of the given bandwidth."""
    base = 8 * max(math.log(max(T, 2 * math.pi * math.e) / (2 * math.pi)), 1.0)
    return 2 * math.pi / (base + 2 * bandwidth)


def _log_abs_product(specs, q: float, sigma: float, t0: float, h: float, count: int) -> np.ndarray:
    if q == 0 or not specs:
        return np.zeros(count)
    acc = np.zeros(count)
    for s in specs:
        with np.errstate(divide="ignore"):
            acc += np.log(abs_L_line(s, sigma, t0, h, count))
    return q * acc


def _select(specs, pi):
    if pi is None:
        return list(specs)
    return [specs[i] for i in pi]


def twisted_moment(specs, res, pi=None, q: float = 1.0, sigma: float = 0.5, T: float = 1e4, grid: float | None = None) -> MomentEstimate:
    """``I_pi(sigma, T) = (1/T) int |L_pi(sigma+it)|^q |R(sigma+it)|^2 w(t,T) dt``.

    Args:
        specs: All L-functions.
        res: Resonator, or ``None`` for ``R = 1``.
        pi: Indices of the sub-product ``L_pi``; ``None`` means all.
        q: Exponent; ``|L_pi|^q = exp(q sum log |L_h|)``.
        sigma: Real part.
        T: Window scale.
        grid: Step override.

    Returns:
        :class:`MomentEstimate` with ``error = |I_h - I_2h|``.  The
        Richardson factor 1/3 is not applied: ``|L|^q`` has corners at the
        zeros unless ``q`` is an even integer, and the trapezoid error then
        does not scale like a fixed multiple of ``h^2``.
    """
    chosen = _select(specs, pi)
    bandwidth = res.max_log_n() if res is not None else 0.0
    step = grid if grid is not None else default_step(1.8 * T, bandwidth)

    def integrand(t0, h, count):
        t = t0 + h * np.arange(count)
        logv = _log_abs_product(chosen, q, sigma, t0, h, count)
        if res is not None and not res.empty:
            logv = logv + 2 * np.log(res.abs_grid(t0, h, count, sigma))
        return np.exp(logv) * weight_w(t, T)

    a, b = 1.2 * T - PAD, 1.8 * T + PAD
    i_h, i_2h, meta = _trapezoid(integrand, a, b, step, T)
    return MomentEstimate(
        i_h,
        abs(i_h - i_2h),
        "I",
        tuple(s.label for s in chosen),
        float(q),
        float(sigma),
        float(T),
        meta,
        {"coarse_value": i_2h},
    )


def moment_ratio(specs, res, pi=None, q: float = 1.0, sigma: float = 0.5, T: float = 1e4, grid: float | None = None) -> float:
    """``I_pi(sigma, T) / prod_p (1 + |r(p)|^2)``."""
    est = twisted_moment(specs, res, pi, q, sigma, T, grid)
    mass = res.mass() if res is not None else 1.0
    return est.value / mass


# -- truncated Euler products (S and D diagnostics) ----------------------------


def truncated_power_coefficients(specs, q: float, X: int, support=()):
    """Coefficients ``c_1(n), c_2(n)`` for ``n <= X`` of ``prod_h L_h^q``.

    ``c_1`` lives on integers built from ``support`` primes, ``c_2`` on the rest.

    Returns:
        ``(c1, c2)`` complex arrays indexed ``0..X`` (index 0 unused).
    """
    X = int(X)
    if X > MAX_POLY_LENGTH:
        raise TooLargeError(f"truncation length {X} above {MAX_POLY_LENGTH}")
    support = set(int(p) for p in support)
    c = [np.zeros(X + 1, dtype=complex), np.zeros(X + 1, dtype=complex)]
    c[0][1] = c[1][1] = 1.0
    for p in primes_upto(X).tolist() if X >= 2 else []:
        target = c[0] if p in support else c[1]
        nu_max = int(math.floor(math.log(X) / math.log(p) + 1e-12))
        local = fractional_coefficients(specs, q, p, nu_max).coeffs
        base = np.nonzero(target[: X // p + 1])[0]
        pk = 1
        for nu in range(1, nu_max + 1):
            pk *= p
            idx = base[base * pk <= X]
            target[idx * pk] = target[idx] * local[nu]
    return c[0], c[1]


def _poly_line(coeffs, sigma, t0, h, count):
    n = np.nonzero(coeffs)[0]
    lg = np.log(n.astype(float))
    return poly_grid(coeffs[n] * np.exp(-sigma * lg), lg, t0, h, count)


def sd_diagnostics(specs, res, pi=None, q: float = 1.0, sigma: float = 0.5, T: float = 1e3, grid: float | None = None, max_den: int = 12):
    """``S_pi`` and ``D_pi`` next to ``I_pi`` at desk scale.

    ``s_pi = P_1 P_2`` with both Dirichlet polynomials truncated at ``X``;
    ``D_pi`` uses ``|L_pi^u - s_pi^v|^(1/v)`` with ``q = u/v``.  The
    weighted mean squares of ``P_1`` and ``P_2`` are reported separately.

    Returns:
        Dict of :class:`MomentEstimate` keyed ``"I"``, ``"S"``, ``"D"``,
        ``"P1"``, ``"P2"``.
    """
    if res is None or res.kind != "critical" or res.log_X is None:
        raise ParameterError("need a truncated critical resonator")
    chosen = _select(specs, pi)
    frac = Fraction(q).limit_denominator(max_den)
    u, v = frac.numerator, frac.denominator
    X = int(math.floor(math.exp(res.log_X)))
    c1, c2 = truncated_power_coefficients(chosen, float(q), X, res.primes.tolist())
    bandwidth = res.max_log_n() + 2 * math.log(max(X, 2))
    step = grid if grid is not None else default_step(1.8 * T, bandwidth)
    a, b = 1.2 * T - PAD, 1.8 * T + PAD

    def parts(t0, h, count):
        t = t0 + h * np.arange(count)
        base = res.abs_grid(t0, h, count, sigma) ** 2 * weight_w(t, T)
        p1 = _poly_line(c1, sigma, t0, h, count)
        p2 = _poly_line(c2, sigma, t0, h, count)
        return base, p1, p2

    def lpow(t0, h, count):
        out = np.ones(count, dtype=complex)
        for s in chosen:
            vals, _ = evaluate_L_line(s, sigma, t0, h, count)
            out *= vals
        return out**u

    def s_int(t0, h, count):
        base, p1, p2 = parts(t0, h, count)
        return np.abs(p1 * p2) * base

    def d_int(t0, h, count):
        base, p1, p2 = parts(t0, h, count)
        return np.abs(lpow(t0, h, count) - (p1 * p2) ** v) ** (1.0 / v) * base

    def p_int(which):
        def f(t0, h, count):
            base, p1, p2 = parts(t0, h, count)
            return np.abs(p1 if which == 1 else p2) ** 2 * base

        return f

    labels = tuple(s.label for s in chosen)
    out = {"I": twisted_moment(specs, res, pi, q, sigma, T, grid)}
    for key, func in (("S", s_int), ("D", d_int), ("P1", p_int(1)), ("P2", p_int(2))):
        i_h, i_2h, meta = _trapezoid(func, a, b, step, T)
        out[key] = MomentEstimate(i_h, abs(i_h - i_2h), key, labels, float(q), float(sigma), float(T), meta, {"u": u, "v": v, "X": X})
    return out


# -- off the critical line -----------------------------------------------------


def _ratio_line(spec_num, spec_den, sigma, t0, h, count):
    num, _ = evaluate_L_line(spec_num, sigma, t0, h, count)
    den, _ = evaluate_L_line(spec_den, sigma, t0, h, count)
    return num / den


def companion_product(spec_num, spec_den, res, sigma: float) -> float:
    """``prod_p (1 + |r(p)|^2 + 2 p^-sigma Re(conj r(p) (a_num(p) - a_den(p))))``."""
    if res is None or res.empty:
        return 1.0
    p = res.primes
    diff = spec_num.at_primes(p) - spec_den.at_primes(p)
    fac = 1 + np.abs(res.r) ** 2 + 2 * p.astype(float) ** (-sigma) * (np.conj(res.r) * diff).real
    return float(np.prod(fac))


def offline_twisted_moment(
    spec_num,
    spec_den,
    res,
    sigma: float,
    A: float,
    T: float,
    alpha: float,
    certificate=None,
    grid: float | None = None,
    blocks: int = 16,
) -> MomentEstimate:
    """``(1/T^a) int_{A+T^a}^{A+2T^a} |L_num/L_den(sigma+it) R(it)|^2 dt``.

    The window is finite, so the trapezoid value is Richardson-extrapolated
    and the error adds the standard error of ``blocks`` block means (the
    spread a mean over a window of this length carries).

    Raises:
        UncertifiedIntervalError: ``certificate`` missing or not covering
            the window at ``sigma``.
    """
    H = T**alpha
    lo, hi = A + H, A + 2 * H
    require_certificate(certificate, [spec_num, spec_den], sigma, lo, hi)
    bandwidth = res.max_log_n() if res is not None else 0.0
    step = grid if grid is not None else default_step(hi, bandwidth)

    def integrand(t0, h, count):
        vals = np.abs(_ratio_line(spec_num, spec_den, sigma, t0, h, count)) ** 2
        if res is not None and not res.empty:
            vals = vals * res.abs_grid(t0, h, count, 0.0) ** 2
        return vals

    i_h, i_2h, meta, bm = _trapezoid(integrand, lo, hi, step, H, blocks)
    value = (4 * i_h - i_2h) / 3
    spread = float(np.std(bm, ddof=1) / math.sqrt(blocks)) if blocks > 1 else 0.0
    quad = abs(i_h - i_2h) / 3
    labels = (spec_num.label, spec_den.label)
    return MomentEstimate(
        value,
        quad + spread,
        "offline",
        labels,
        2.0,
        float(sigma),
        float(T),
        meta,
        {
            "A": A,
            "alpha": alpha,
            "quadrature_error": quad,
            "block_spread": spread,
            "companion_product": companion_product(spec_num, spec_den, res, sigma),
        },
    )
