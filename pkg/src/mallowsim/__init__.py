"""Simulation laboratory for inversion-weighted random permutations.

The package samples permutations whose probability is proportional to
``q**inversions`` for a fixed ``q != 1``, decomposes them into independent
blocks (additive excursion blocks for ``q < 1``, symmetric pair/central
blocks for ``q > 1``), estimates the renewal constants driving cycle-count
laws of large numbers and CLTs, and cross-checks everything against exact
small-``n`` enumeration and closed q-series values.
"""

from .errors import (
    BadParameter,
    BadStatistic,
    CapExceeded,
    Diverges,
    DuplicateValue,
    ExcursionTooLong,
    MallowsimError,
    NotABijection,
    ReturnTooLong,
    TooLarge,
)
from .rng import RngStream
from .perms import (
    CycleCounts,
    ExactDistribution,
    Permutation,
    cycle_counts,
    exact_distribution,
    exact_expectation,
    identity,
    insertion_ranks,
    inversions,
    log_mallows_normalizer,
    make_permutation,
    mallows_normalizer,
    relative_order,
    reverse,
)
from .sampler import (
    ProcessPrefix,
    driving_draws,
    geometric,
    sample_finite,
    sample_finite_batch,
    sample_process_prefix,
    values_from_draws,
)
from .regen import (
    Decomposition,
    Excursion,
    SymmetricBlock,
    additive_cuts,
    antiadditive_cuts,
    chain_renewal_times,
    chain_step,
    covering_block_length,
    decompose_additive,
    decompose_antiadditive,
    excursion_lengths,
    occupation_distribution,
    pair_chain_return_times,
    sample_excursions,
    sample_symmetric_blocks,
)
from .constants import (
    ConstantsReport,
    QSeriesValue,
    alpha1,
    estimate_renewal_constants,
    estimate_symmetric_constants,
    q_pochhammer,
    stationary_mu,
)
from .harness import (
    CltReport,
    NormalityReport,
    ParityReport,
    ScalingReport,
    SizeBiasReport,
    chi_square_vs_exact,
    clt_check,
    cycle_stat_samples,
    mean_variance_scaling,
    parity_limit_check,
    parse_statistic,
    shape_report,
    size_bias_convergence,
)
from .report import EstimateReport, batch_se, mean_report, tv_distance
from .battery import BatteryReport, CriterionResult, PROFILES, Profile, run_battery

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "MallowsimError", "NotABijection", "DuplicateValue", "TooLarge",
    "BadParameter", "BadStatistic", "Diverges", "CapExceeded",
    "ExcursionTooLong", "ReturnTooLong",
    # rng
    "RngStream",
    # permutations
    "Permutation", "CycleCounts", "ExactDistribution", "identity",
    "make_permutation", "inversions", "cycle_counts", "reverse",
    "relative_order", "insertion_ranks", "mallows_normalizer",
    "log_mallows_normalizer", "exact_distribution", "exact_expectation",
    # sampling
    "geometric", "sample_finite", "sample_finite_batch", "ProcessPrefix",
    "sample_process_prefix", "driving_draws", "values_from_draws",
    # regenerative structure
    "chain_step", "chain_renewal_times", "additive_cuts", "antiadditive_cuts",
    "Excursion", "SymmetricBlock", "Decomposition", "decompose_additive",
    "decompose_antiadditive", "sample_excursions", "sample_symmetric_blocks",
    "excursion_lengths", "occupation_distribution", "pair_chain_return_times",
    "covering_block_length",
    # constants
    "QSeriesValue", "q_pochhammer", "stationary_mu", "alpha1",
    "ConstantsReport", "estimate_renewal_constants",
    "estimate_symmetric_constants",
    # harness
    "parse_statistic", "cycle_stat_samples", "shape_report",
    "NormalityReport", "CltReport", "clt_check", "ScalingReport",
    "mean_variance_scaling", "ParityReport", "parity_limit_check",
    "SizeBiasReport", "size_bias_convergence", "chi_square_vs_exact",
    # reporting
    "EstimateReport", "mean_report", "batch_se", "tv_distance",
    # battery
    "Profile", "PROFILES", "CriterionResult", "BatteryReport", "run_battery",
]
