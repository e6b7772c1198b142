"""Z-eigenpairs of symmetric tensors built from frames.

The package builds symmetric tensors as sums of outer powers of frame
vectors (the regular simplex frame in particular), computes their real
Z-eigenpairs by power iteration, Newton refinement and exhaustive 2-d
enumeration, classifies each pair's stationarity on the sphere and its
robustness under the power map, and drives sweep / conjecture experiments
comparing the numerics against exact closed forms.
"""

from .eigensolve import (
    SOURCE_CLOSED,
    SOURCE_NEWTON,
    SOURCE_POWER,
    SOURCE_SCAN,
    STATUS_CONVERGED,
    STATUS_CYCLING,
    STATUS_MAX_ITER,
    DegeneratePointError,
    Eigenpair,
    Enumeration2D,
    PowerResult,
    RefinementError,
    SolveSummary,
    angle_between,
    canonical_sign,
    dedup,
    enumerate_2d,
    make_eigenpair,
    multi_start,
    newton_refine,
    power_method,
    power_step,
    sphere_grid,
)
from .frames import (
    CertificationReport,
    Frame,
    certify,
    frame_tensor,
    load_frame,
    orthonormal_frame,
    regular_simplex_frame,
    save_frame,
    simplex_tensor,
)
from .harness import (
    ConjectureReport,
    SweepRow,
    VERDICT_CONSISTENT,
    VERDICT_VIOLATION,
    conjecture_check,
    emit_report,
    frame_alignment_angle,
    sweep,
    validate_sweep_row,
)
from .stability import (
    ROB_BOUNDARY,
    ROB_NOT_ROBUST,
    ROB_ROBUST,
    ROB_UNDEFINED,
    STAT_DEGENERATE,
    STAT_LOCAL_MAX,
    STAT_LOCAL_MIN,
    STAT_SADDLE,
    ClosedFormReport,
    StabilityReport,
    classify_pair,
    classify_robustness,
    classify_stationarity,
    closed_form_verdict,
    frame_vector_prediction,
    hessian,
    jacobian,
    lemma_bridge_residual,
    projected_hessian,
    sym_eigen,
)
from .tensors import (
    CapacityError,
    SymmetricTensor,
    apply_m,
    apply_m1,
    apply_m2,
    dense_capacity,
    densify,
    from_dense,
    from_rank_one_sum,
    load_tensor,
    outer_power,
    save_tensor,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "CertificationReport",
    "ClosedFormReport",
    "ConjectureReport",
    "DegeneratePointError",
    "Eigenpair",
    "Enumeration2D",
    "Frame",
    "PowerResult",
    "ROB_BOUNDARY",
    "ROB_NOT_ROBUST",
    "ROB_ROBUST",
    "ROB_UNDEFINED",
    "RefinementError",
    "SOURCE_CLOSED",
    "SOURCE_NEWTON",
    "SOURCE_POWER",
    "SOURCE_SCAN",
    "STATUS_CONVERGED",
    "STATUS_CYCLING",
    "STATUS_MAX_ITER",
    "STAT_DEGENERATE",
    "STAT_LOCAL_MAX",
    "STAT_LOCAL_MIN",
    "STAT_SADDLE",
    "SolveSummary",
    "StabilityReport",
    "SweepRow",
    "SymmetricTensor",
    "VERDICT_CONSISTENT",
    "VERDICT_VIOLATION",
    "angle_between",
    "apply_m",
    "apply_m1",
    "apply_m2",
    "canonical_sign",
    "certify",
    "classify_pair",
    "classify_robustness",
    "classify_stationarity",
    "closed_form_verdict",
    "conjecture_check",
    "dedup",
    "dense_capacity",
    "densify",
    "emit_report",
    "enumerate_2d",
    "frame_alignment_angle",
    "frame_tensor",
    "frame_vector_prediction",
    "from_dense",
    "from_rank_one_sum",
    "hessian",
    "jacobian",
    "lemma_bridge_residual",
    "load_frame",
    "load_tensor",
    "make_eigenpair",
    "multi_start",
    "newton_refine",
    "orthonormal_frame",
    "outer_power",
    "power_method",
    "power_step",
    "projected_hessian",
    "regular_simplex_frame",
    "save_frame",
    "save_tensor",
    "simplex_tensor",
    "sphere_grid",
    "sweep",
    "sym_eigen",
    "validate_sweep_row",
]
