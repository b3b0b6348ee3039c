"""Certificates that a t-interval is zero-free to the right of a vertical line."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from resonance.errors import (
    CertificateRequiredError,
    ParameterError,
    UncertifiedIntervalError,
    ZeroCrossingError,
)
from resonance.lfunc.evaluate import evaluate_L
from resonance.lfunc.zeros import count_zeros_rectangle

log = logging.getLogger(__name__)

SIGMA_RIGHT = 3.0


@dataclass
class GoodIntervalCertificate:
    """Outcome of a zero count on ``[sigma0, 3] x [A + T^a/2, A + 5 T^a/2]``.

    Attributes:
        spec_labels: L-functions covered.
        sigma0: Left edge of the rectangle.
        T, alpha, A: Defining parameters.
        t1, t2: Vertical extent of the rectangle.
        counts: Zero count per label.
        certified: True when every count is 0.
        contours: Per-label contour metadata (edges actually used).
        rejection: For a failed certificate, the offending label and the
            approximate location of one zero.
    """

    spec_labels: tuple
    sigma0: float
    T: float
    alpha: float
    A: float
    t1: float
    t2: float
    counts: dict
    certified: bool
    contours: dict = field(default_factory=dict)
    rejection: dict | None = None

    @property
    def window(self) -> tuple[float, float]:
        """The inner window ``[A + T^alpha, A + 2 T^alpha]`` used by the pipelines."""
        h = self.T**self.alpha
        return (self.A + h, self.A + 2 * h)

    def covers(self, labels, sigma: float, t_lo: float, t_hi: float) -> bool:
        """Whether this certificate vouches for every label at ``sigma`` on ``[t_lo, t_hi]``."""
        return (
            self.certified
            and sigma > self.sigma0
            and self.t1 <= t_lo
            and t_hi <= self.t2
            and set(labels) <= set(self.spec_labels)
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["spec_labels"] = list(self.spec_labels)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GoodIntervalCertificate":
        d = dict(d)
        d["spec_labels"] = tuple(d["spec_labels"])
        return cls(**d)


def require_certificate(cert, specs, sigma: float, t_lo: float, t_hi: float, error=UncertifiedIntervalError):
    """Raise ``error`` unless ``cert`` covers all non-trivial ``specs`` on the window."""
    labels = [s.label for s in specs if s.kind != "one"]
    if cert is None:
        raise error("no zero-free certificate supplied")
    if not cert.covers(labels, sigma, t_lo, t_hi):
        raise error(
            f"certificate (sigma0={cert.sigma0}, [{cert.t1}, {cert.t2}], certified={cert.certified}) "
            f"does not cover {labels} at sigma={sigma} on [{t_lo}, {t_hi}]"
        )


def _newton(spec, s: complex, steps: int = 40, h: float = 1e-6) -> complex:
    for _ in range(steps):
        f = evaluate_L(spec, s).value
        df = (evaluate_L(spec, s + h).value - evaluate_L(spec, s - h).value) / (2 * h)
        if df == 0:
            break
        step = f / df
        s -= step
        if abs(step) < 1e-12:
            break
    return s


def locate_zero(spec, sigma_low: float, t1: float, t2: float, sigma_high: float = SIGMA_RIGHT, width: float = 0.25) -> complex:
    """Approximate one zero inside a rectangle known to contain zeros.

    Bisects in ``t`` using zero counts, then polishes by Newton's method.
    """
    while t2 - t1 > width:
        mid = 0.5 * (t1 + t2)
        try:
            lower = count_zeros_rectangle(spec, sigma_low, t1, mid, sigma_high).count
        except ZeroCrossingError:
            mid += 1e-3 * (t2 - t1)
            lower = count_zeros_rectangle(spec, sigma_low, t1, mid, sigma_high).count
        if lower > 0:
            t2 = mid
        else:
            t1 = mid
    guess = complex(max(sigma_low, min(0.5, sigma_high)), 0.5 * (t1 + t2))
    z = _newton(spec, guess)
    if not (sigma_low - width <= z.real <= sigma_high and t1 - width <= z.imag <= t2 + width):
        return guess
    return z


def certify_good_interval(specs, sigma0: float, T: float, alpha: float, A: float) -> GoodIntervalCertificate:
    """Check that each ``L`` has no zeros with ``sigma >= sigma0`` and ``t`` in ``[A + T^a/2, A + 5T^a/2]``.

    Args:
        specs: L-functions to certify (the constant 1 is skipped).
        sigma0: Left edge.
        T: Height parameter.
        alpha: Window exponent, ``0 < alpha <= 1``.
        A: Window anchor in ``[5T/4, 7T/4]``.

    Returns:
        A :class:`GoodIntervalCertificate`; ``certified`` is False when a
        zero was found, with its location in ``rejection``.
    """
    if not 1.25 * T <= A <= 1.75 * T:
        raise ParameterError(f"A={A} must lie in [5T/4, 7T/4] for T={T}")
    if not 0 < alpha <= 1:
        raise ParameterError(f"alpha must lie in (0, 1], got {alpha}")
    if sigma0 >= SIGMA_RIGHT:
        raise ParameterError("sigma0 must be below the right edge 3")
    h = T**alpha
    t1, t2 = A + h / 2, A + 5 * h / 2
    counts, contours, rejection = {}, {}, None
    for spec in specs:
        if spec.kind == "one":
            continue
        zc = count_zeros_rectangle(spec, sigma0, t1, t2, SIGMA_RIGHT)
        counts[spec.label] = zc.count
        contours[spec.label] = asdict(zc)
        if zc.count and rejection is None:
            z = locate_zero(spec, zc.sigma_low, zc.t1, zc.t2, SIGMA_RIGHT)
            rejection = {"spec": spec.label, "count": zc.count, "zero_re": z.real, "zero_im": z.imag}
            log.info("rejected: %s has %d zeros, one near %s", spec.label, zc.count, z)
    certified = all(c == 0 for c in counts.values())
    return GoodIntervalCertificate(
        tuple(s.label for s in specs if s.kind != "one"),
        float(sigma0),
        float(T),
        float(alpha),
        float(A),
        float(t1),
        float(t2),
        counts,
        certified,
        contours,
        rejection,
    )


__all__ = [
    "CertificateRequiredError",
    "GoodIntervalCertificate",
    "certify_good_interval",
    "locate_zero",
    "require_certificate",
]
