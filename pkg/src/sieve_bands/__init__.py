"""Sieve functions in short arithmetic bands: exact kernels and experiments."""

from sieve_bands.core_arith import (
    DomainError,
    NoInverseError,
    TableSizeError,
    ValueTable,
    divisors,
    dirichlet_convolve,
    mobius_table,
    mod_inverse,
    nearest_int_distance,
)
from sieve_bands.sieve_function import (
    SieveSpec,
    builder_const1,
    builder_tau_Q,
    eratosthenes_transform,
    eval_f,
    eval_f_range,
)
from sieve_bands.spectra import (
    RationalPoint,
    ResidualReport,
    exp_sum_rational,
    exp_sum_real,
    lemma31_residual,
    ramanujan_coefficient,
)
from sieve_bands.bands import (
    BandParams,
    BandResult,
    band_sum_decomposition,
    band_sum_direct,
    bound_ratios,
    length_inertia_split,
    remark1_bound,
)
from sieve_bands.extremal import (
    ExtremalInstance,
    build_extremal,
    extremal_identity_check,
    lower_bound_ratio,
)

__version__ = "0.1.0"
