"""Desk-scale demand-side thermoeconomics.

The package treats an aggregate demand system the way classical
thermodynamics treats a gas: demand quantity is the extensive coordinate,
price the intensive one, and average personal wealth plays temperature.
On top of that sit effect-structure diagrams (which causal wirings admit a
workable equation of state), a small zoo of state surfaces, quasi-static
process accounting with work/heat/entropy ledgers, and least-squares
recovery of surface elasticities from observations.
"""

__version__ = "0.1.0"

from .core import (
    StatePoint,
    SystemState,
    ValidationOutcome,
    total_wealth,
    validate_state,
)
from .effectgraph import (
    DiagramClass,
    Edge,
    EffectDiagram,
    Node,
    ValidationReport,
    classify,
    enumerate_valid,
    parse_diagram,
    to_dot,
    to_text,
    validate,
)
from .eos import (
    CurieEos,
    Elasticities,
    EosModel,
    IdealAnalogEos,
    IdealGasEos,
    LinearElasticityEos,
    MODEL_REGISTRY,
    Partials,
    finite_difference_partials,
    model_from_params,
)
from .errors import EngineError, InputParseError
from .estimation import (
    FitResult,
    Observation,
    RegressionFrame,
    build_frame,
    fit,
    generate_synthetic,
    predict,
    read_observations,
    write_observations,
)
from .thermo import (
    ContactResult,
    PathDependentEntropyWarning,
    PathResult,
    ProcessKind,
    ProcessPath,
    SecondLawCheck,
    SurplusReport,
    adiabatic_path,
    cycle_entropy_defect,
    entropy_change,
    evaluate_path,
    heat_along,
    isobaric_path,
    isochoric_path,
    isothermal_path,
    sample_path,
    second_law_check,
    surplus,
    thermal_contact,
    wealth_change,
    work_along,
    work_quadrature,
)

__all__ = [
    "__version__",
    # core
    "StatePoint",
    "SystemState",
    "ValidationOutcome",
    "total_wealth",
    "validate_state",
    # effect diagrams
    "DiagramClass",
    "Edge",
    "EffectDiagram",
    "Node",
    "ValidationReport",
    "classify",
    "enumerate_valid",
    "parse_diagram",
    "to_dot",
    "to_text",
    "validate",
    # equations of state
    "CurieEos",
    "Elasticities",
    "EosModel",
    "IdealAnalogEos",
    "IdealGasEos",
    "LinearElasticityEos",
    "MODEL_REGISTRY",
    "Partials",
    "finite_difference_partials",
    "model_from_params",
    # errors
    "EngineError",
    "InputParseError",
    # estimation
    "FitResult",
    "Observation",
    "RegressionFrame",
    "build_frame",
    "fit",
    "generate_synthetic",
    "predict",
    "read_observations",
    "write_observations",
    # processes
    "ContactResult",
    "PathDependentEntropyWarning",
    "PathResult",
    "ProcessKind",
    "ProcessPath",
    "SecondLawCheck",
    "SurplusReport",
    "adiabatic_path",
    "cycle_entropy_defect",
    "entropy_change",
    "evaluate_path",
    "heat_along",
    "isobaric_path",
    "isochoric_path",
    "isothermal_path",
    "sample_path",
    "second_law_check",
    "surplus",
    "thermal_contact",
    "wealth_change",
    "work_along",
    "work_quadrature",
]
