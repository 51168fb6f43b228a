"""sievelab: a computational laboratory for sieve-theoretic prime-gap models.

Exact counters over primes and random models, singular-series arithmetic,
delay-ODE sieve functions, extremal interval sieves, Brun-style truncated
inclusion-exclusion, and Azuma-type concentration checks, wired together
by a reproducible experiment CLI.
"""

from .brun import (
    BonferroniReport,
    bonferroni_check,
    delta_K,
    delta_exact,
    fixed_point_count,
    nu_histogram,
    truncated_count_U,
    truncated_count_Uprime,
)
from .concentration import (
    DriftedWalk,
    FairWalk,
    IncrementProfile,
    SieveTraceGenerator,
    TailCheckReport,
    azuma_bound,
    empirical_tail_check,
    generalized_azuma_bound,
)
from .delay import (
    EULER_GAMMA,
    DelayTable,
    buchstab_omega,
    buchstab_table,
    fplus_upper,
    linear_sieve_fF,
    linear_sieve_tables,
    maier_bound,
    export_tables_csv,
)
from .intervals import (
    SieveExtremum,
    f_hat_estimate,
    interval_count_S,
    s_minus_exact,
    s_minus_search,
)
from .kernels import BACKEND
from .models import (
    MartingaleTrace,
    MonteCarloEstimate,
    ResidueAssignment,
    SievedWindow,
    bft_sample,
    cramer_sample,
    martingale_trace,
    martingale_trace_ensemble,
    monte_carlo_counts,
    monte_carlo_window,
    sample_residues,
    sift_window,
    write_monte_carlo_csv,
)
from .parallel import get_max_workers, set_max_workers
from .params import (
    ExperimentParams,
    LambdaThresholds,
    iterated_logs,
    lambda_double_prime,
    make_params,
    mertens_theta,
    min_n_with_cutoff_at_least,
    prime_array,
    sieve_cutoff_z,
    theta_products,
    theta_range,
    thresholds,
)
from .primes import (
    GapHistogram,
    IntegerSet,
    gap_count_M,
    gap_histogram,
    interval_count_N,
    primes_in,
    tail_ratio,
    window_histogram,
)
from .singular import (
    GallagherEstimate,
    OffsetTuple,
    SingularSeriesValue,
    gallagher_average,
    pair_series_sum,
    read_offset_tuples,
    singular_series,
    twin_prime_constant,
    write_gallagher_csv,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BonferroniReport",
    "DelayTable",
    "DriftedWalk",
    "EULER_GAMMA",
    "ExperimentParams",
    "FairWalk",
    "GallagherEstimate",
    "GapHistogram",
    "IncrementProfile",
    "IntegerSet",
    "LambdaThresholds",
    "MartingaleTrace",
    "MonteCarloEstimate",
    "OffsetTuple",
    "ResidueAssignment",
    "SieveExtremum",
    "SieveTraceGenerator",
    "SievedWindow",
    "SingularSeriesValue",
    "TailCheckReport",
    "azuma_bound",
    "bft_sample",
    "bonferroni_check",
    "buchstab_omega",
    "buchstab_table",
    "cramer_sample",
    "delta_K",
    "delta_exact",
    "empirical_tail_check",
    "export_tables_csv",
    "f_hat_estimate",
    "fixed_point_count",
    "fplus_upper",
    "gallagher_average",
    "gap_count_M",
    "gap_histogram",
    "generalized_azuma_bound",
    "get_max_workers",
    "interval_count_N",
    "interval_count_S",
    "iterated_logs",
    "lambda_double_prime",
    "linear_sieve_fF",
    "linear_sieve_tables",
    "maier_bound",
    "make_params",
    "martingale_trace",
    "martingale_trace_ensemble",
    "mertens_theta",
    "min_n_with_cutoff_at_least",
    "monte_carlo_counts",
    "monte_carlo_window",
    "nu_histogram",
    "pair_series_sum",
    "prime_array",
    "primes_in",
    "read_offset_tuples",
    "s_minus_exact",
    "s_minus_search",
    "sample_residues",
    "set_max_workers",
    "sieve_cutoff_z",
    "sift_window",
    "singular_series",
    "tail_ratio",
    "theta_products",
    "theta_range",
    "thresholds",
    "truncated_count_U",
    "truncated_count_Uprime",
    "twin_prime_constant",
    "window_histogram",
    "write_gallagher_csv",
    "write_monte_carlo_csv",
]
