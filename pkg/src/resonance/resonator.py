"""Resonating Dirichlet polynomials and the prime sums attached to them.

Two shapes are supported:

* ``critical``: ``R(s) = sum_{n <= X} r(n) n^(1/2 - s)`` with ``r`` completely
  determined by its values on a prime set and supported on squarefree
  integers.  When ``X`` exceeds the product of all support primes the sum
  is the full product ``prod_p (1 + r(p) p^(1/2 - s))``.
* ``offline``: ``R(s) = prod_p (1 + r(p) p^-s)`` over a short prime range,
  never truncated.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from resonance.arith.primes import primes_between
from resonance.errors import ParameterError, TooLargeError
from resonance.lfunc.dirpoly import poly_grid, poly_points
from resonance.lfunc.spec import LFunctionSpec, parse_spec

log = logging.getLogger(__name__)

MAX_EXPANSION = 2_000_000
EPS_P = 0.1


@dataclass
class Resonator:
    """A resonator and the data it was built from.

    Attributes:
        kind: ``"critical"`` or ``"offline"``.
        primes: Support primes (increasing).
        r: Complex ``r(p)`` aligned with ``primes``.
        log_X: Log of the truncation length for the critical kind; ``None``
            means the untruncated product.
        params: Construction parameters (recorded in reports).
        spec_labels: Labels of the L-functions the resonator was built for.
    """

    kind: str
    primes: np.ndarray
    r: np.ndarray
    log_X: float | None = None
    params: dict = field(default_factory=dict)
    spec_labels: tuple = ()
    _expansion: tuple | None = field(default=None, repr=False, compare=False)

    @property
    def empty(self) -> bool:
        return self.primes.size == 0

    @property
    def truncated(self) -> bool:
        """True when ``X`` cuts the squarefree expansion short."""
        if self.kind != "critical" or self.log_X is None or self.empty:
            return False
        return self.log_X < float(np.sum(np.log(self.primes.astype(float))))

    def expansion(self, max_terms: int = MAX_EXPANSION):
        """Squarefree expansion ``(n, r(n))`` for ``n <= X`` (sorted by ``n``).

        Generated depth-first over the support primes with pruning at ``X``.
        """
        if self._expansion is not None:
            return self._expansion
        limit = np.inf if (self.log_X is None or not self.truncated) else self.log_X
        logs = np.log(self.primes.astype(float))
        ns_log = [0.0]
        ns = [1]
        vals = [1.0 + 0j]
        # iterative DFS: extend every existing product by the next prime
        for p, lp, rp in zip(self.primes.tolist(), logs.tolist(), self.r.tolist()):
            k = len(ns)
            for i in range(k):
                nl = ns_log[i] + lp
                if nl <= limit + 1e-12:
                    ns_log.append(nl)
                    ns.append(ns[i] * p)
                    vals.append(vals[i] * rp)
            if len(ns) > max_terms:
                raise TooLargeError(f"squarefree expansion exceeds {max_terms} terms")
        ns_log = np.array(ns_log)
        order = np.argsort(ns_log, kind="stable")
        n_arr = np.array([ns[i] for i in order], dtype=object)
        out = (n_arr, ns_log[order], np.array(vals, dtype=complex)[order])
        self._expansion = out
        return out

    def coefficient(self, n: int) -> complex:
        """``r(n)``: multiplicative, 0 off squarefree support or beyond ``X``."""
        n = int(n)
        if n < 1:
            raise ParameterError("n must be positive")
        if self.kind == "critical" and self.log_X is not None and np.log(n) > self.log_X + 1e-12:
            return 0j
        out = 1 + 0j
        table = dict(zip(self.primes.tolist(), self.r.tolist()))
        m = n
        for p in self.primes.tolist():
            if m % p == 0:
                m //= p
                if m % p == 0:
                    return 0j
                out *= table[p]
        return out if m == 1 else 0j

    def mass(self) -> float:
        """``prod_p (1 + |r(p)|^2)``."""
        return float(np.exp(np.sum(np.log1p(np.abs(self.r) ** 2))))

    def truncated_mass(self) -> float:
        """``sum_{n <= X} |r(n)|^2`` (equals :meth:`mass` when untruncated)."""
        if not self.truncated:
            return self.mass()
        _, _, vals = self.expansion()
        return float(np.sum(np.abs(vals) ** 2))

    def max_log_n(self) -> float:
        """Largest ``log n`` in the support (bandwidth of ``R``)."""
        if self.empty:
            return 0.0
        total = float(np.sum(np.log(self.primes.astype(float))))
        if self.truncated:
            return min(total, self.log_X)
        return total

    # -- evaluation -----------------------------------------------------
    def _shift(self, sigma: float) -> np.ndarray:
        """Per-prime factor multiplying ``p^-it``."""
        lp = np.log(self.primes.astype(float))
        if self.kind == "critical":
            return self.r * np.exp((0.5 - sigma) * lp)
        return self.r * np.exp(-sigma * lp)

    def evaluate(self, t, sigma: float | None = None) -> np.ndarray:
        """``R`` at ``sigma + i t`` (default: 1/2 for critical, 0 for off-line)."""
        if sigma is None:
            sigma = 0.5 if self.kind == "critical" else 0.0
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if self.empty:
            return np.ones(t.shape, dtype=complex)
        if self.truncated:
            _, lg, vals = self.expansion()
            return poly_points(vals * np.exp((0.5 - sigma) * lg), lg, t)
        coef = self._shift(sigma)
        lp = np.log(self.primes.astype(float))
        out = np.ones(t.shape, dtype=complex)
        for c, l in zip(coef, lp):
            out *= 1 + c * np.exp(-1j * t * l)
        return out

    def abs_grid(self, t0: float, dt: float, count: int, sigma: float | None = None) -> np.ndarray:
        """``|R|`` on ``t0 + k dt``."""
        if sigma is None:
            sigma = 0.5 if self.kind == "critical" else 0.0
        if self.empty:
            return np.ones(count)
        if self.truncated:
            _, lg, vals = self.expansion()
            return np.abs(poly_grid(vals * np.exp((0.5 - sigma) * lg), lg, t0, dt, count))
        coef = self._shift(sigma)
        lp = np.log(self.primes.astype(float))
        out = np.ones(count)
        chunk = 1 << 20
        for i in range(0, count, chunk):
            t = t0 + dt * np.arange(i, min(count, i + chunk))
            acc = np.ones(t.size)
            for c, l in zip(coef, lp):
                acc *= np.abs(1 + c * np.exp(-1j * t * l))
            out[i : i + t.size] = acc
        return out

    # -- serialisation ----------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "spec_labels": list(self.spec_labels),
            "log_X": self.log_X,
            "truncated": self.truncated,
            "params": self.params,
            "primes": self.primes.tolist(),
            "r_re": self.r.real.tolist(),
            "r_im": self.r.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Resonator":
        return cls(
            kind=d["kind"],
            primes=np.array(d["primes"], dtype=np.int64),
            r=np.array(d["r_re"]) + 1j * np.array(d["r_im"]),
            log_X=d.get("log_X"),
            params=dict(d.get("params", {})),
            spec_labels=tuple(d.get("spec_labels", ())),
        )


def evaluate_resonator(res: Resonator, t):
    """``R(1/2 + it)`` (critical) or ``R(it)`` (off-line); scalar in, scalar out."""
    out = res.evaluate(t)
    return complex(out[0]) if np.ndim(t) == 0 else out


def ell_from_length(log_X: float, kappa: float, lam: float) -> float:
    """``sqrt(log X log log X / (kappa lam))``; 0 when ``log log X <= 0`` (empty support)."""
    if log_X <= 1:
        return 0.0
    return float(np.sqrt(log_X * np.log(log_X) / (kappa * lam)))


def length_from_ell(ell: float, kappa: float, lam: float) -> float:
    """Invert :func:`ell_from_length`: the ``log X`` giving scale ``ell``."""
    target = ell * ell * kappa * lam
    hi = max(np.e + 1, target + 10)
    return float(brentq(lambda y: y * np.log(y) - target, 1.0, hi))


def critical_support(specs, ell: float, eps_P: float = EPS_P, support=None) -> np.ndarray:
    """Primes in the support range whose coefficients obey ``max_h |a_h(p)| <= (log p)^(1-eps_P)``."""
    if support is None:
        if ell <= 1:
            return np.zeros(0, dtype=np.int64)
        lo, hi = ell * ell, float(np.exp(np.log(ell) ** 2))
    else:
        lo, hi = support
    ps = primes_between(lo, hi)
    if ps.size == 0:
        return ps
    bound = np.log(ps.astype(float)) ** (1 - eps_P)
    amax = np.max(np.abs(np.stack([s.at_primes(ps) for s in specs])), axis=0)
    return ps[amax <= bound]


def build_resonator_critical(
    specs,
    delta: float,
    lam: float,
    T: float | None = None,
    eps_P: float = EPS_P,
    *,
    ell: float | None = None,
    support=None,
    log_X: float | None = None,
    untruncated: bool = False,
) -> Resonator:
    """Critical-line resonator ``r(p) = a_L(p) ell / (sqrt(p) log p)``.

    Args:
        specs: L-functions ``L_1, ..., L_H``; ``a_L = sum_h a_{L_h}``.
        delta: Length exponent, ``X = T^delta``.
        lam: Scale parameter ``lambda > 1``.
        T: Height; required unless ``ell`` is given.
        eps_P: Exponent slack in the coefficient-size filter.
        ell: Use this scale directly instead of deriving it from ``T``.
        support: ``(lo, hi)`` prime range replacing ``[ell^2, exp(log^2 ell)]``.
        log_X: Override of ``log X``.
        untruncated: Keep the full squarefree product (no cut at ``X``).

    Returns:
        The :class:`Resonator`.
    """
    if not 0 < delta < 1:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")
    if lam <= 1:
        raise ParameterError(f"lambda must exceed 1, got {lam}")
    kappa = float(sum(s.kappa for s in specs))
    if kappa <= 0:
        raise ParameterError("need at least one L-function with positive kappa")
    if ell is None:
        if T is None or T <= np.exp(np.e):
            raise ParameterError("T must exceed e^e so that log log X is defined")
        if log_X is None:
            log_X = delta * float(np.log(T))
        ell = ell_from_length(log_X, kappa, lam)
    elif log_X is None:
        log_X = delta * float(np.log(T)) if T is not None else length_from_ell(ell, kappa, lam)
    ps = critical_support(specs, ell, eps_P, support)
    a_L = np.sum([s.at_primes(ps) for s in specs], axis=0) if ps.size else np.zeros(0, complex)
    lp = np.log(ps.astype(float))
    r = a_L * ell / (np.sqrt(ps) * lp) if ps.size else np.zeros(0, dtype=complex)
    keep = r != 0
    params = {
        "delta": delta,
        "lambda": lam,
        "T": T,
        "eps_P": eps_P,
        "ell": ell,
        "kappa_L": kappa,
        "support": list(support) if support is not None else None,
        "untruncated": untruncated,
    }
    res = Resonator(
        "critical",
        ps[keep],
        np.asarray(r[keep], dtype=complex),
        None if untruncated else log_X,
        params,
        tuple(s.label for s in specs),
    )
    params["log_X"] = log_X
    if res.empty:
        log.info("critical resonator has empty support (ell=%.3g)", ell)
    return res


def build_resonator_offline(specs_large, specs_small, beta: float, T: float, C: float, x_eps: float = 2.0) -> Resonator:
    """Off-line resonator with ``C r(p) = sum_large a(p) - sum_small a(p)`` on ``[x_eps, beta log T]``."""
    if beta <= 0 or C <= 0 or x_eps < 2:
        raise ParameterError("need beta > 0, C > 0 and x_eps >= 2")
    hi = beta * float(np.log(T))
    ps = primes_between(x_eps, hi)
    params = {"beta": beta, "T": T, "C": C, "x_eps": x_eps, "upper": hi, "empty_support": bool(ps.size == 0)}
    labels = tuple(s.label for s in specs_large) + tuple(s.label for s in specs_small)
    params["large"] = [s.label for s in specs_large]
    params["small"] = [s.label for s in specs_small]
    if ps.size == 0:
        warnings.warn("beta log T below x_eps: off-line resonator is identically 1", stacklevel=2)
        return Resonator("offline", ps, np.zeros(0, dtype=complex), None, params, labels)
    r = np.zeros(ps.size, dtype=complex)
    for s in specs_large:
        r += s.at_primes(ps)
    for s in specs_small:
        r -= s.at_primes(ps)
    r /= C
    keep = r != 0
    return Resonator("offline", ps[keep], r[keep], None, params, labels)


# -- prime products --------------------------------------------------------


@dataclass
class PrimeProductReport:
    """Prime products attached to a resonator.

    Attributes:
        R_sigma: ``prod_p (1 + |r(p)|^2 p^(1-2 sigma))``.
        log_R_sigma: Its logarithm.
        F_sigma: ``sum_p Re(conj r(p) c_1(p)) / (p^(2sigma-1/2) (1 + |r(p)|^2 p^(1-2sigma)))``.
        sigma, q: Evaluation point and exponent.
        entries: Estimate checks (see :func:`verify_appendix`).
        warnings: Messages about parameters outside the nominal range.
    """

    R_sigma: float
    log_R_sigma: float
    F_sigma: float
    sigma: float
    q: float
    entries: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "R_sigma": self.R_sigma,
            "log_R_sigma": self.log_R_sigma,
            "F_sigma": self.F_sigma,
            "sigma": self.sigma,
            "q": self.q,
            "entries": self.entries,
            "warnings": self.warnings,
        }


def _F_sum(res: Resonator, c1: np.ndarray, sigma: float) -> float:
    p = res.primes.astype(float)
    r2 = np.abs(res.r) ** 2
    num = (np.conj(res.r) * c1).real
    return float(np.sum(num / (p ** (2 * sigma - 0.5) * (1 + r2 * p ** (1 - 2 * sigma)))))


def prime_products(res: Resonator, specs, pi=None, q: float = 1.0, sigma: float = 0.5) -> PrimeProductReport:
    """``R(sigma)`` and ``F_pi(sigma)`` for a resonator.

    Args:
        res: The resonator.
        specs: All L-functions ``L_1..L_H``.
        pi: Indices (into ``specs``) of the sub-product; default all.
        q: Exponent; ``c_1(p) = q sum_{h in pi} a_h(p)``.
        sigma: Real part.

    Returns:
        :class:`PrimeProductReport`.
    """
    pi = list(range(len(specs))) if pi is None else list(pi)
    notes = []
    ell = res.params.get("ell")
    if ell is not None and ell > np.e:
        eta = float(np.log(ell)) ** -3
        if abs(sigma - 0.5) > eta:
            msg = f"sigma={sigma} outside [1/2 - eta, 1/2 + eta] with eta={eta:.3g}"
            warnings.warn(msg, stacklevel=2)
            notes.append(msg)
    if res.empty:
        return PrimeProductReport(1.0, 0.0, 0.0, sigma, q, [], notes)
    p = res.primes.astype(float)
    r2 = np.abs(res.r) ** 2
    logR = float(np.sum(np.log1p(r2 * p ** (1 - 2 * sigma))))
    c1 = q * np.sum([specs[h].at_primes(res.primes) for h in pi], axis=0) if pi else np.zeros(p.size)
    F = _F_sum(res, c1, sigma)
    return PrimeProductReport(float(np.exp(logR)), logR, F, sigma, q, [], notes)


def _entry(eid, computed, predicted, h=None, note=None, **extra):
    ratio = None
    if predicted not in (None, 0) and np.isfinite(predicted):
        ratio = float(computed / predicted)
    out = {"id": eid, "computed": float(computed), "predicted": None if predicted is None else float(predicted), "ratio": ratio}
    if h is not None:
        out["h"] = h
    if note:
        out["note"] = note
    out.update(extra)
    return out


def verify_appendix(res: Resonator, specs, sigma: float = 0.5) -> PrimeProductReport:
    """Direct prime sums behind the resonator estimates A1-A6.

    Each entry carries the computed left side, the predicted leading term
    (with the ``o(1)`` dropped) and their ratio.  ``pnt_value`` gives the
    same sum with primes replaced by the density ``kappa / log x``, which
    isolates the slowly decaying ``o(1)`` from summation errors.
    """
    if res.kind != "critical":
        raise ParameterError("the resonator estimates concern the critical-line resonator")
    ell = float(res.params["ell"])
    lam = float(res.params["lambda"])
    kappa_L = float(res.params["kappa_L"])
    log_X = float(res.params["log_X"])
    llX = float(np.log(log_X))
    lllX = float(np.log(llX)) if llX > 1 else float("nan")
    p = res.primes.astype(float)
    lp = np.log(p)
    r = res.r
    r2 = np.abs(r) ** 2
    sp = np.sqrt(p)
    base = prime_products(res, specs, None, 1.0, sigma)
    entries = []
    lo = ell * ell
    hi = float(np.exp(np.log(ell) ** 2)) if ell > 1 else lo

    # A1: r(p) = o(1), together with the weighted variant over all h
    a_abs = np.max(np.abs(np.stack([s.at_primes(res.primes) for s in specs])), axis=0) if p.size else p
    a1 = float(np.max(np.abs(r))) if p.size else 0.0
    a1w = float(np.max(a_abs * np.abs(r) / p ** (2 * sigma - 0.5))) if p.size else 0.0
    entries.append(_entry("A1", a1, None, note="max |r(p)|; predicted o(1)", weighted=a1w))

    # A2: sum |r(p)|^2 ~ (1/(2 lam)) log X / log log X
    a2 = float(np.sum(r2))
    pred2 = log_X / (2 * lam * llX)
    pnt2 = kappa_L * ell**2 * (1 / (2 * np.log(lo) ** 2) - 1 / (2 * np.log(hi) ** 2)) if ell > np.e else 0.0
    entries.append(_entry("A2", a2, pred2, pnt_value=float(pnt2)))

    for h, s in enumerate(specs):
        a_h = s.at_primes(res.primes)
        # A3: sum Re(conj r a_h) / (sqrt p (1 + |r|^2)) ~ kappa_h sqrt(log X / (kappa_L lam log log X))
        a3 = float(np.sum((np.conj(r) * a_h).real / (sp * (1 + r2))))
        pred3 = s.kappa * np.sqrt(log_X / (kappa_L * lam * llX))
        pnt3 = s.kappa * ell * (1 / np.log(lo) - 1 / np.log(hi)) if ell > np.e else 0.0
        entries.append(_entry("A3", a3, pred3, h=h, pnt_value=float(pnt3)))
        # A4: sum |a_h| |r| / sqrt p << sqrt(log X logloglog X / log log X)
        a4 = float(np.sum(np.abs(a_h) * np.abs(r) / sp))
        pred4 = np.sqrt(log_X * lllX / llX) if np.isfinite(lllX) and lllX > 0 else None
        entries.append(_entry("A4", a4, pred4, h=h, note="upper-bound order"))

    # A5: sum |r|^2 (1 - p^(1-2 sigma)) << (2 sigma - 1) log X
    a5 = float(np.sum(r2 * (1 - p ** (1 - 2 * sigma))))
    pred5 = (2 * sigma - 1) * log_X / lam
    entries.append(_entry("A5", a5, pred5, note="exactly 0 at sigma = 1/2"))

    # A6: change of the twisted sum between 1/2 and sigma
    for h, s in enumerate(specs):
        a_h = s.at_primes(res.primes)
        num = (np.conj(r) * a_h).real
        at_half = np.sum(num / (sp * (1 + r2)))
        at_sigma = np.sum(num / (p ** (2 * sigma - 0.5) * (1 + r2 * p ** (1 - 2 * sigma))))
        a6 = float(at_half - at_sigma)
        pred6 = (2 * sigma - 1) * np.sqrt(log_X) * llX**2
        entries.append(_entry("A6", a6, pred6, h=h, note="upper-bound order"))

    base.entries = entries
    return base


def resonator_from_json(d: dict) -> Resonator:
    return Resonator.from_dict(d)


def specs_from_labels(labels, **kw) -> list[LFunctionSpec]:
    return [parse_spec(x, **kw) for x in labels]
