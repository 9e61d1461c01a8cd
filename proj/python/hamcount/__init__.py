"""Random digraph processes, exact Hamilton-cycle and 1-factor counts, and the
1-factor route to a Hamilton cycle at the hitting time."""

from ._core import (
    Digraph,
    DomainError,
    FormatError,
    PreconditionError,
    ResourceError,
    aggregate_trials,
    binomial_upper_tail,
    chernoff_two_sided,
    chernoff_upper,
    complete_digraph,
    compute_constants,
    count_hamilton_cycles,
    count_one_factors,
    derangements,
    enumerate_one_factors,
    expected_hamilton_binomial,
    expected_hamilton_uniform,
    experiment_names,
    falikman_bound,
    find_hamilton,
    find_one_factor,
    gen_binomial,
    gen_process,
    good_permutation_fraction,
    hitting_time,
    process_prefix,
    read_edge_list,
    rencontres,
    run_experiment,
    subsample_ratio,
    write_edge_list,
)

__all__ = [name for name in dir() if not name.startswith("_")]
