"""Finite truncations of minimal isometric Nica-covariant dilations.

The heavy lifting lives in the compiled extension; this package re-exports
the public surface.
"""

from ._core import (  # noqa: F401
    Dilation,
    CovariantPair,
    DynSystem,
    GroupElement,
    GramNotPSDError,
    IndeterminateSignError,
    LatticeSpec,
    NicaRep,
    NicadilError,
    NonCommutingEntriesError,
    NormExceededError,
    NotHermitianError,
    NotInMonoidError,
    __version__,
    build_dilation,
    character_value,
    check_positive,
    compare_minimal_dilations,
    compressed_shift,
    cone_leq,
    decompose,
    dilate_covariant_pair,
    direct_rep,
    element,
    estimate_norms,
    eval_polynomial,
    gauge_transform,
    grid,
    induced_representation,
    join,
    kernel,
    kernel_positivity,
    lift_compress_check,
    make_lattice,
    make_pair,
    make_system,
    meet,
    report_schema,
    run_scenario,
    run_scenario_file,
    scenario_schema,
    schur_product,
    selection_isometry,
    tensor_rep,
    validate_covariance,
    validate_system,
    verify_isometry,
    verify_nica_dilation,
    verify_regularity,
    zero,
)
