"""Learning near-optimal item sequences from sampled utilities.

The package wraps a C++ core: generate an instance, sample (sequence, utility)
pairs under an observation model, estimate per-slot marginal contributions,
solve the position-assignment problem, and run the full case-split algorithm
with its theoretical approximation bound. An exact brute-force oracle backs
every quantity at desk scale.
"""

from ._core import (
    Dataset,
    DeltaMatrix,
    EnumerationGuardError,
    Instance,
    InsufficientSamplesError,
    ObservationModel,
    Outcome,
    __version__,
    average_full,
    brute_force_optimal,
    build_dataset,
    check_function,
    check_lemma4,
    check_lemma5,
    compute_alpha,
    concentration,
    delta_bound,
    estimate,
    exact_delta,
    exact_delta_marginal_form,
    exact_expected_f,
    instance_from_record_json,
    load_dataset,
    load_instance,
    make_coverage_instance,
    make_facility_instance,
    make_modular_instance,
    make_patience_scaled_instance,
    measure_instance_curvature,
    random_sequence,
    run,
    run_experiment_json,
    save_dataset,
    save_instance,
    sequence_value,
    solve_p1,
    virtual_union_value,
)

__all__ = [
    "Dataset",
    "DeltaMatrix",
    "EnumerationGuardError",
    "Instance",
    "InsufficientSamplesError",
    "ObservationModel",
    "Outcome",
    "__version__",
    "average_full",
    "brute_force_optimal",
    "build_dataset",
    "check_function",
    "check_lemma4",
    "check_lemma5",
    "compute_alpha",
    "concentration",
    "delta_bound",
    "estimate",
    "exact_delta",
    "exact_delta_marginal_form",
    "exact_expected_f",
    "instance_from_record_json",
    "load_dataset",
    "load_instance",
    "make_coverage_instance",
    "make_facility_instance",
    "make_modular_instance",
    "make_patience_scaled_instance",
    "measure_instance_curvature",
    "random_sequence",
    "run",
    "run_experiment_json",
    "save_dataset",
    "save_instance",
    "sequence_value",
    "solve_p1",
    "virtual_union_value",
]
