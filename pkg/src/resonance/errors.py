"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so the CLI can emit a
structured error object without string matching.
"""


class ResonanceError(Exception):
    """Base class for all library errors."""

    code = "error"

    def to_dict(self):
        return {"type": type(self).__name__, "code": self.code, "message": str(self)}


class ParameterError(ResonanceError, ValueError):
    code = "parameter"


class EmptyDomainError(ParameterError):
    code = "empty_domain"


class InvalidIndexError(ParameterError):
    code = "invalid_index"


class UnsupportedFormError(ParameterError):
    code = "unsupported_form"


class IntegrityError(ResonanceError):
    code = "integrity"


class CacheMissError(ResonanceError, KeyError):
    code = "not_found"

    def __str__(self):  # KeyError quotes its argument otherwise
        return Exception.__str__(self)


class PoleError(ResonanceError, ZeroDivisionError):
    code = "pole"


class UnsupportedRegionError(ResonanceError):
    code = "unsupported_region"


class ZeroCrossingError(ResonanceError):
    """The continuation path passes through (or numerically at) a zero."""

    code = "zero_crossing"


class ContourError(ResonanceError):
    code = "contour"


class DependentFrequenciesError(ResonanceError):
    code = "dependent_frequencies"


class TooLargeError(ResonanceError):
    code = "too_large"


class CertificateRequiredError(ResonanceError):
    code = "certificate_required"


class UncertifiedIntervalError(ResonanceError):
    code = "uncertified_interval"


class DegenerateWindowError(ResonanceError):
    code = "degenerate_window"


class CoefficientBoundError(ResonanceError):
    """A computed Hecke eigenvalue violates the Deligne bound."""

    code = "coefficient_bound"


class ConfigError(ParameterError):
    """Configuration validation failed; ``messages`` lists every violation."""

    code = "config"

    def __init__(self, messages):
        self.messages = list(messages)
        super().__init__("; ".join(self.messages))

    def to_dict(self):
        d = super().to_dict()
        d["messages"] = self.messages
        return d
