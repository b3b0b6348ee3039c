"""Resonance-method experiments for large and small values of L-functions.

Subpackages ``arith`` and ``lfunc`` provide coefficients and evaluation;
``resonator``, ``moments``, ``align``, ``signed_sums`` and ``search``
implement the experiments; ``cli`` is the command-line front end.
"""

from resonance.align import AlignmentProblem, align_search, chen_bound, lambda_min
from resonance.certify import GoodIntervalCertificate, certify_good_interval
from resonance.errors import ResonanceError
from resonance.lfunc import LFunctionSpec, evaluate_L, parse_spec
from resonance.moments import moment_ratio, twisted_moment, weight_w
from resonance.resonator import (
    Resonator,
    build_resonator_critical,
    build_resonator_offline,
    prime_products,
    verify_appendix,
)
from resonance.search import SearchReport, search_critical, search_kronecker, search_offline
from resonance.signed_sums import signed_prime_sums

__version__ = "0.1.0"

__all__ = [
    "AlignmentProblem",
    "GoodIntervalCertificate",
    "LFunctionSpec",
    "ResonanceError",
    "Resonator",
    "SearchReport",
    "__version__",
    "align_search",
    "build_resonator_critical",
    "build_resonator_offline",
    "certify_good_interval",
    "chen_bound",
    "evaluate_L",
    "lambda_min",
    "moment_ratio",
    "parse_spec",
    "prime_products",
    "search_critical",
    "search_kronecker",
    "search_offline",
    "signed_prime_sums",
    "twisted_moment",
    "verify_appendix",
    "weight_w",
]
