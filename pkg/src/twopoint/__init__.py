"""Graph-based noncontextuality bounds, two-point compilation, and simulation."""

from .graphs import (
    EventGraph,
    EventLabel,
    Graph,
    PairEvent,
    SingleEvent,
    are_exclusive,
    build_graph,
    build_two_point_graph,
    complement,
    complete_graph,
    cycle_graph,
    expand_weighted,
)
from .independence import (
    IndependenceResult,
    SizeLimitError,
    brute_force_alpha,
    independence_number,
    is_independent,
    max_assignment_value,
    noncontextual_assignment_value,
)
from .theta import (
    FeasibilityReport,
    SdpResiduals,
    SdpSolution,
    SdpStatus,
    odd_cycle_theta,
    theta,
    theta_sandwich,
    verify_feasibility,
)
from .orthorep import (
    ExtractionError,
    OrthoRep,
    OrthoRepReport,
    builtin_kcbs_rep,
    extract_ortho_rep,
    kcbs_graph,
    verify_ortho_rep,
)
from .simulate import (
    ExperimentRecord,
    NoiseModel,
    QState,
    SignalingEntry,
    TwoPointContext,
    born_single,
    context,
    epsilon_prime,
    epsilon_signaling,
    evaluate_s,
    evaluate_s_prime,
    joint_probs_demolition,
    joint_probs_projective,
    luders_update,
    maximally_mixed,
    ordered_contexts,
    pure_state,
    run_experiment,
)
from .catalog import catalog, catalog_names
from .certify import CertifyOptions, CertifyReport, StageError, certify, emit_report
from .serialize import ParseError, dumps_canonical, emit_graph, parse_graph

__version__ = "0.1.0"

__all__ = [
    "EventGraph",
    "EventLabel",
    "Graph",
    "PairEvent",
    "SingleEvent",
    "are_exclusive",
    "build_graph",
    "build_two_point_graph",
    "complement",
    "complete_graph",
    "cycle_graph",
    "expand_weighted",
    "IndependenceResult",
    "SizeLimitError",
    "brute_force_alpha",
    "independence_number",
    "is_independent",
    "max_assignment_value",
    "noncontextual_assignment_value",
    "FeasibilityReport",
    "SdpResiduals",
    "SdpSolution",
    "SdpStatus",
    "odd_cycle_theta",
    "theta",
    "theta_sandwich",
    "verify_feasibility",
    "ExtractionError",
    "OrthoRep",
    "OrthoRepReport",
    "builtin_kcbs_rep",
    "extract_ortho_rep",
    "kcbs_graph",
    "verify_ortho_rep",
    "ExperimentRecord",
    "NoiseModel",
    "QState",
    "SignalingEntry",
    "TwoPointContext",
    "born_single",
    "context",
    "epsilon_prime",
    "epsilon_signaling",
    "evaluate_s",
    "evaluate_s_prime",
    "joint_probs_demolition",
    "joint_probs_projective",
    "luders_update",
    "maximally_mixed",
    "ordered_contexts",
    "pure_state",
    "run_experiment",
    "catalog",
    "catalog_names",
    "CertifyOptions",
    "CertifyReport",
    "StageError",
    "certify",
    "emit_report",
    "ParseError",
    "dumps_canonical",
    "emit_graph",
    "parse_graph",
]
