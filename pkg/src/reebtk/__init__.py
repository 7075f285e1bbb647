"""Computational workbench for Lutz-type contact forms on torus pieces:
curve algebra and winding/torsion counts, Reeb orbit integration,
the hyperbolic torus-bundle twist family, exact integer homology via
Smith normal form, and graph-link representability decisions."""

from .backend import BACKEND
from .cattorus import (
    CatConstants,
    MONODROMY,
    alpha_n,
    cat_h1_presentation,
    cat_homology,
    check_equivariance,
    torsion_of_family,
)
from .curves import (
    BottProfile,
    CriticalPoint,
    CriticalSetReport,
    LutzCurve,
    PerturbationBump,
    alpha_curve,
    contact_defect,
    full_lutz_twist,
    is_contact,
    klein_curve,
    perturb_critical_surface,
    perturbation_energy,
    perturbation_gradient,
    reeb_velocity,
    segment_curve,
    torsion_count_relative,
    transverse_Y,
    winding_angle,
    zero_torsion_witness,
)
from .errors import (
    ComputationError,
    ConstructionError,
    ContactViolationError,
    DimensionError,
    DomainError,
    InconsistencyError,
    NumericError,
    ReebtkError,
    ResolutionError,
    ShapeError,
    SingularityError,
    ValidationError,
)
from .flow import FlowState, Trajectory, exact_linear_flow, integrate_reeb, rk4_generic
from .graphlink import (
    CriticalLinkDesc,
    D2Report,
    GraphManifoldDesc,
    H1Class,
    PlaneField,
    bott_integrable_overtwisted,
    check_d2_algebra,
    euler_from_critical_link,
    fixture_path,
    graph_link_representable,
    jsj_complex,
    lutz_twist_bookkeeping,
    rho_push,
)
from .zlinalg import (
    HomologyGroup,
    IntMatrix,
    Multigraph,
    content,
    divisible_by,
    graph_first_betti,
    homology_from_presentation,
    invariant_factors,
    smith_normal_form,
    unimodular_inverse,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BottProfile",
    "CatConstants",
    "ComputationError",
    "ConstructionError",
    "ContactViolationError",
    "CriticalLinkDesc",
    "CriticalPoint",
    "CriticalSetReport",
    "D2Report",
    "DimensionError",
    "DomainError",
    "FlowState",
    "GraphManifoldDesc",
    "H1Class",
    "HomologyGroup",
    "InconsistencyError",
    "IntMatrix",
    "LutzCurve",
    "MONODROMY",
    "Multigraph",
    "NumericError",
    "PerturbationBump",
    "PlaneField",
    "ReebtkError",
    "ResolutionError",
    "ShapeError",
    "SingularityError",
    "Trajectory",
    "ValidationError",
    "alpha_curve",
    "alpha_n",
    "bott_integrable_overtwisted",
    "cat_h1_presentation",
    "cat_homology",
    "check_d2_algebra",
    "check_equivariance",
    "contact_defect",
    "content",
    "divisible_by",
    "euler_from_critical_link",
    "exact_linear_flow",
    "fixture_path",
    "full_lutz_twist",
    "graph_first_betti",
    "graph_link_representable",
    "homology_from_presentation",
    "integrate_reeb",
    "invariant_factors",
    "is_contact",
    "jsj_complex",
    "klein_curve",
    "lutz_twist_bookkeeping",
    "perturb_critical_surface",
    "perturbation_energy",
    "perturbation_gradient",
    "reeb_velocity",
    "rho_push",
    "rk4_generic",
    "segment_curve",
    "smith_normal_form",
    "torsion_count_relative",
    "torsion_of_family",
    "transverse_Y",
    "unimodular_inverse",
    "winding_angle",
    "zero_torsion_witness",
]
