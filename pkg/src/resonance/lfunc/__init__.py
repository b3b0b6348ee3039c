"""L-function evaluation, logarithms, zero counts and local power series."""

from resonance.lfunc.evaluate import (
    LValue,
    abs_L_line,
    abs_L_points,
    evaluate_L,
    evaluate_L_batch,
    evaluate_L_line,
    evaluate_zeta,
)
from resonance.lfunc.fractional import (
    FractionalCoefficients,
    fractional_coefficients,
    local_power_series,
    tau_q,
)
from resonance.lfunc.spec import (
    LFunctionSpec,
    cusp_spec,
    dirichlet_spec,
    one_spec,
    parse_spec,
    zeta_spec,
)
from resonance.lfunc.zeros import (
    ZeroCount,
    count_zeros_rectangle,
    first_zeta_zero,
    hardy_z,
    log_L,
)

__all__ = [
    "FractionalCoefficients",
    "LFunctionSpec",
    "LValue",
    "ZeroCount",
    "abs_L_line",
    "abs_L_points",
    "count_zeros_rectangle",
    "cusp_spec",
    "dirichlet_spec",
    "evaluate_L",
    "evaluate_L_batch",
    "evaluate_L_line",
    "evaluate_zeta",
    "first_zeta_zero",
    "fractional_coefficients",
    "hardy_z",
    "local_power_series",
    "log_L",
    "one_spec",
    "parse_spec",
    "tau_q",
    "zeta_spec",
]
