"""A quick invariant suite (seconds, not minutes) behind ``resonance verify``."""

from __future__ import annotations

import math
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


@dataclass
class Check:
    name: str
    passed: bool
    detail: str
    seconds: float

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "seconds": round(self.seconds, 3)}


def _sieve():
    from resonance.arith import sieve_primes

    got = sieve_primes(10_000).primes
    trial = [n for n in range(2, 10_001) if all(n % d for d in range(2, int(n**0.5) + 1))]
    return bool(np.array_equal(got, trial)), f"{got.size} primes below 10^4"


def _characters():
    from resonance.arith import all_characters

    worst = 0.0
    for q in (5, 8, 12, 15):
        chars = all_characters(q)
        phi = sum(1 for a in range(1, q + 1) if math.gcd(a, q) == 1)
        a = np.arange(1, q + 1)
        for c1 in chars:
            for c2 in chars:
                s = np.sum(c1(a) * np.conj(c2(a)))
                worst = max(worst, abs(s - (phi if c1.index == c2.index else 0)))
    return worst < 1e-12, f"max orthogonality defect {worst:.1e}"


def _cusp():
    from resonance.arith import cuspform_coefficients, primes_upto

    s = cuspform_coefficients("delta", 2000)
    ps = primes_upto(2000)
    deligne = float(np.max(np.abs(s.values[ps])))
    defect = max(abs(s.values[m * n] - s.values[m] * s.values[n]) for m in range(1, 45) for n in range(1, 45) if m * n <= 2000 and math.gcd(m, n) == 1)
    return deligne <= 2 and defect < 1e-9, f"max |a(p)| = {deligne:.4f}, multiplicativity defect {defect:.1e}"


def _cache():
    from resonance.arith import cache_read, cache_write, cuspform_coefficients

    s = cuspform_coefficients("delta", 500)
    with tempfile.TemporaryDirectory() as d:
        cache_write(d, s)
        back = cache_read(d, s.label, 500)
    return bool(np.array_equal(back.values, s.values)), "bit-exact round trip"


def _values():
    from resonance.lfunc import dirichlet_spec, evaluate_L, zeta_spec

    z, c4 = zeta_spec(), dirichlet_spec((4, (1,)))
    errs = [
        abs(evaluate_L(z, 2).value - math.pi**2 / 6),
        abs(evaluate_L(z, 0).value + 0.5),
        abs(evaluate_L(c4, 1).value - math.pi / 4),
        abs(evaluate_L(c4, 2).value - 0.915965594177219015),
    ]
    return max(errs) < 1e-9, f"max closed-form error {max(errs):.1e}"


def _zeros():
    from resonance.lfunc import count_zeros_rectangle, first_zeta_zero, zeta_spec

    g = first_zeta_zero()
    n = count_zeros_rectangle(zeta_spec(), 0.4, 10, 30).count
    return abs(g - 14.134725) < 1e-6 and n == 3, f"first zero {g:.9f}, count(0.4, 10, 30) = {n}"


def _meanvalue():
    from resonance.moments import mv_meanvalue

    rng = np.random.default_rng(1)
    worst = 0.0
    T = 200.0
    for _ in range(5):
        a = rng.uniform(-0.7, 0.7, 6) + 1j * rng.uniform(-0.7, 0.7, 6)
        mv = mv_meanvalue(a, T)
        t = np.linspace(0, T, 200_001)
        poly = np.exp(-1j * np.outer(t, np.log(np.arange(1, 7)))) @ a
        quad = np.trapezoid(np.abs(poly) ** 2, t)
        worst = max(worst, abs(quad - mv.integral) / T)
    return worst < 1e-6, f"max |closed form - quadrature| / T = {worst:.1e}"


def _weight():
    from resonance.moments import WeightWindow, weight_w

    T = 100.0
    t = np.linspace(T - 20, 2 * T + 20, 400_001)
    quad = np.trapezoid(weight_w(t, T), t)
    rel = abs(quad / WeightWindow(T).integral - 1)
    return rel < 1e-10, f"relative error of the integral {rel:.1e}"


def _fractional():
    from resonance.lfunc.fractional import local_power_series

    rng = np.random.default_rng(2)
    worst = 0.0
    for q in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3)):
        roots = rng.uniform(-1, 1, 2) * np.exp(2j * np.pi * rng.random(2))
        c = local_power_series(roots, float(q), 6)
        conv = np.array([1.0 + 0j])
        for _ in range(q.denominator):
            conv = np.convolve(conv, c)[:7]
        target = local_power_series(roots, q.numerator, 6)
        worst = max(worst, float(np.max(np.abs(conv - target))))
    return worst < 1e-10, f"max convolution defect {worst:.1e}"


def _resonator():
    from resonance.lfunc import zeta_spec
    from resonance.resonator import build_resonator_critical, prime_products, verify_appendix

    z = zeta_spec()
    res = build_resonator_critical([z], 0.1, 1.2, ell=25.0)
    rep = verify_appendix(res, [z])
    a3 = next(e for e in rep.entries if e["id"] == "A3")["computed"]
    a5 = next(e for e in rep.entries if e["id"] == "A5")["computed"]
    F = prime_products(res, [z]).F_sigma
    R = [prime_products(res, [z], sigma=s).R_sigma for s in (0.5, 0.51, 0.52)]
    ok = a3 == F and a5 == 0.0 and R[0] >= R[1] >= R[2] >= 1
    small = build_resonator_critical([z], 0.1, 1.2, ell=1.0, support=(3, 30), untruncated=True)
    ok &= small.coefficient(9) == 0 and abs(small.coefficient(15) - small.coefficient(3) * small.coefficient(5)) < 1e-15
    return bool(ok), f"F(1/2) = A3 = {F:.6f}, A5 = {a5}"


def _align():
    from resonance.align import AlignmentProblem, align_search, lambda_min, lambda_min_bruteforce

    rng = np.random.default_rng(3)
    primes = np.array([2, 3, 5, 7, 11, 13])
    ok, n = True, 0
    for _ in range(10):
        N, M = int(rng.integers(1, 4)), int(rng.integers(1, 3))
        ps = np.sort(rng.choice(primes, N, replace=False))
        lam = lambda_min(np.log(ps) / (2 * np.pi), M)
        ok &= abs(lam.value - lambda_min_bruteforce(np.log(ps) / (2 * np.pi), M)) < 1e-15
        length = M**N / lam.value
        if length > 2e4:
            continue
        prob = AlignmentProblem.from_primes(ps, rng.random(N), rng.random(N) + 0.1, 0.0, length, M)
        ok &= align_search(prob, lam=lam).objective <= align_search(prob, lam=lam).chen_bound
        n += 1
    return bool(ok), f"{n} problems under the Chen bound"


def _convol():
    from resonance.align import convol_lower_bound
    from resonance.lfunc import zeta_spec

    z = zeta_spec()
    a = convol_lower_bound(z, 0.75, 10.0, 0.0)
    b = convol_lower_bound(z, 0.75, 10.0, math.pi)
    return a > 0 and abs(a + b) < 1e-15 and convol_lower_bound(z, 0.75, 0.3) == 0.0, f"main term {a:.6f}"


def _signed():
    from resonance.lfunc import zeta_spec
    from resonance.resonator import build_resonator_offline
    from resonance.signed_sums import signed_prime_sums

    z = zeta_spec()
    res = build_resonator_offline([z], [], 5.0, 1e5, 2.0)
    rep = signed_prime_sums([z], [], res, 0.75, 1e5)
    return rep.all_negative, f"value {rep.entries[0].value:.4f}"


CHECKS = [
    ("sieve", _sieve),
    ("characters", _characters),
    ("cusp_coefficients", _cusp),
    ("cache", _cache),
    ("closed_forms", _values),
    ("zeros", _zeros),
    ("mean_value", _meanvalue),
    ("weight", _weight),
    ("fractional", _fractional),
    ("resonator", _resonator),
    ("alignment", _align),
    ("convolution", _convol),
    ("signed_sums", _signed),
]


def run_checks(names=None) -> list[Check]:
    """Run the invariant checks (all by default); exceptions count as failures."""
    out = []
    for name, func in CHECKS:
        if names and name not in names:
            continue
        t0 = time.perf_counter()
        try:
            ok, detail = func()
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(Check(name, bool(ok), detail, time.perf_counter() - t0))
    return out
