"""Coupon-collector / Dixie-cup simulation and limit-law verification toolkit."""

from .samplers import SeedSpec, sample_exponential, sample_gamma, sample_negbin_trials, sample_uniform_type
from .discrete import CollectorTrace, collection_time, partial_collection_time, run_discrete, trace_from_sequence
from .poissonized import CoupledTrace, count_mismatch, mismatch_probability, run_coupled
from .pointprocess import (
    Normalization,
    PointPattern,
    RarePath,
    map_h,
    map_h_inverse,
    normalize,
    rare_path,
    sample_limit_process,
)
from .limitlaws import (
    EULER_GAMMA,
    ChiSqLog,
    GumbelType,
    LogGamma,
    PoissonIntensity,
    PoissonizedMarginal,
    chisq_log_cdf,
    er_expectation,
    exact_poissonized_marginal_cdf,
    gumbel_type_cdf,
    intensity_mass,
    log_gamma_cdf,
)
from .gof import GofResult, increment_test, ks_statistic, ks_test, poisson_count_test
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    emit_report,
    read_report_csv,
    read_report_json,
    run_experiment,
)

__version__ = "0.1.0"
