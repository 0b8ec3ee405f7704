"""mathieu-kit: closed forms, Floquet analysis, and simulation for modulated oscillators.

The package centers on the damped modulated oscillator
m y'' + eta y' + (k0 + k cos(omega t)) y = (B J0 / c) cos(Omega t) and the
general Mathieu equation y'' + (h - 2 theta cos 2t) y = 0 it reduces to:
cylinder-function closed forms with an explicit variant adjudication, Hill
determinant / continued-fraction Floquet machinery cross-checked against an
independent integration oracle, the catalogued variable-map reductions, and
the flux-lattice field-modulation pipeline.
"""

from .bessel import BesselValue, bessel_j, bessel_y
from .closed_form import (
    ADMISSIBILITY_TOL,
    AdjudicationReport,
    ClosedFormSpec,
    DampedParams,
    Variant,
    adjudicate,
    argument_scale,
    bessel_argument,
    evaluate,
    fundamental_pair,
    general_solution,
    homogeneous_ode,
    index,
    is_admissible,
    mirror,
    split_ode,
    undamped_general_solution,
)
from .errors import (
    AdmissibilityError,
    ConvergenceError,
    DegeneracyError,
    DegenerateParametersError,
    InvalidParameterError,
    MapDomainError,
    MappingError,
    MathieuKitError,
    RangeLimitError,
    ResonanceError,
    SingularityError,
    SpanError,
    StiffnessError,
)
from .exponent_class import class_distance, normalize_exponent
from .floquet import (
    FloquetSolution,
    GeneralParams,
    characteristic_exponent,
    classify_stability,
    coefficients,
    eval_floquet,
    exponent_details,
    general_mathieu_ode,
    hill_determinant,
    second_solution,
    solve,
)
from .flux import (
    FluxParams,
    InducedFieldModel,
    ModulationResult,
    SinusoidalResponse,
    field_from_motion,
    full_ode,
    identify_frequencies,
    induced_field,
    induced_field_model,
    linearized_delta,
    modulation_analysis,
    particular_k0,
    simulate_full,
    stiffness,
    symmetric_case_solution,
)
from .oracle import (
    LinearODE,
    MonodromyResult,
    ResidualReport,
    integrate,
    monodromy_exponent,
    residual,
    validate_tolerance,
    wronskian_abel,
)
from .reductions import (
    ReductionInput,
    ReductionResult,
    damped_to_general,
    interior_grid,
    pullback,
    reduce,
    source_ode,
)
from .samples import SolutionSample, TimeSeries

__version__ = "0.1.0"

__all__ = [
    "ADMISSIBILITY_TOL",
    "AdjudicationReport",
    "AdmissibilityError",
    "BesselValue",
    "ClosedFormSpec",
    "ConvergenceError",
    "DampedParams",
    "DegeneracyError",
    "DegenerateParametersError",
    "FloquetSolution",
    "FluxParams",
    "GeneralParams",
    "InducedFieldModel",
    "InvalidParameterError",
    "LinearODE",
    "MapDomainError",
    "MappingError",
    "MathieuKitError",
    "ModulationResult",
    "MonodromyResult",
    "RangeLimitError",
    "ReductionInput",
    "ReductionResult",
    "ResidualReport",
    "ResonanceError",
    "SingularityError",
    "SinusoidalResponse",
    "SolutionSample",
    "SpanError",
    "StiffnessError",
    "TimeSeries",
    "Variant",
    "adjudicate",
    "argument_scale",
    "bessel_argument",
    "bessel_j",
    "bessel_y",
    "characteristic_exponent",
    "class_distance",
    "classify_stability",
    "coefficients",
    "damped_to_general",
    "eval_floquet",
    "evaluate",
    "exponent_details",
    "field_from_motion",
    "full_ode",
    "fundamental_pair",
    "general_mathieu_ode",
    "general_solution",
    "hill_determinant",
    "homogeneous_ode",
    "identify_frequencies",
    "index",
    "induced_field",
    "induced_field_model",
    "integrate",
    "interior_grid",
    "is_admissible",
    "linearized_delta",
    "mirror",
    "modulation_analysis",
    "monodromy_exponent",
    "normalize_exponent",
    "particular_k0",
    "pullback",
    "reduce",
    "residual",
    "second_solution",
    "simulate_full",
    "solve",
    "source_ode",
    "split_ode",
    "stiffness",
    "symmetric_case_solution",
    "undamped_general_solution",
    "validate_tolerance",
    "wronskian_abel",
]
