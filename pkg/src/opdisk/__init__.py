"""Numerical geometry of the operator Poincare disk over finite-dimensional C*-algebras."""
from .algebra import Algebra, AlgebraElement, Valuation, fun_calc, is_positive, op_norm, sample, valuate
from .doubled import (
    DoubledMatrix,
    DoubledVector,
    GroupElement,
    LieElement,
    exp_to_group,
    is_group_member,
    lie_split,
    sharp,
    theta,
)
from .disk_space import (
    ProjectionPoint,
    SpherePoint,
    TangentVector,
    act,
    act_sphere,
    basis_completion,
    disk_coords,
    disk_point,
    fiber_unitary,
    horizontal_generator,
    lambda_of_q,
    lift_form,
    proj_from_sphere,
    q_from_b,
    section_sr,
    tangent_from_lift,
)
from .bundles import (
    CurveData,
    FiberEndomorphism,
    canonical_form,
    coeff_derivative,
    curvature,
    curvature_fd_oracle,
    endo_apply,
    endo_norm,
    taut_derivative,
)
from .kahler import (
    HermitianForm,
    complex_structure,
    finsler_norm,
    hilbertian_product,
    manifold_connection,
    symplectic_form,
)
from .moment import (
    MomentValue,
    RestrictedImagePoint,
    convexity_witness,
    inf_action,
    moment_gradient_check,
    moment_map,
    poisson_defect,
    restricted_image,
    valuated_moment,
)
from .halfspace import (
    HalfSpacePoint,
    HalfTangent,
    d_liouville_fd,
    halfspace_lift,
    halfspace_section,
    liouville,
    mobius_to_disk,
    mobius_to_halfspace,
    spd_bracket,
    theta_h,
    trace_product,
    x_perp,
)
from .harness import CheckReport, SuiteConfig, run_suite, sample_moment_image

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "AlgebraElement",
    "Valuation",
    "fun_calc",
    "is_positive",
    "op_norm",
    "sample",
    "valuate",
    "DoubledMatrix",
    "DoubledVector",
    "GroupElement",
    "LieElement",
    "exp_to_group",
    "is_group_member",
    "lie_split",
    "sharp",
    "theta",
    "ProjectionPoint",
    "SpherePoint",
    "TangentVector",
    "act",
    "act_sphere",
    "basis_completion",
    "disk_coords",
    "disk_point",
    "fiber_unitary",
    "horizontal_generator",
    "lambda_of_q",
    "lift_form",
    "proj_from_sphere",
    "q_from_b",
    "section_sr",
    "tangent_from_lift",
    "CurveData",
    "FiberEndomorphism",
    "canonical_form",
    "coeff_derivative",
    "curvature",
    "curvature_fd_oracle",
    "endo_apply",
    "endo_norm",
    "taut_derivative",
    "HermitianForm",
    "complex_structure",
    "finsler_norm",
    "hilbertian_product",
    "manifold_connection",
    "symplectic_form",
    "MomentValue",
    "RestrictedImagePoint",
    "convexity_witness",
    "inf_action",
    "moment_gradient_check",
    "moment_map",
    "poisson_defect",
    "restricted_image",
    "valuated_moment",
    "HalfSpacePoint",
    "HalfTangent",
    "d_liouville_fd",
    "halfspace_lift",
    "halfspace_section",
    "liouville",
    "mobius_to_disk",
    "mobius_to_halfspace",
    "spd_bracket",
    "theta_h",
    "trace_product",
    "x_perp",
    "CheckReport",
    "SuiteConfig",
    "run_suite",
    "sample_moment_image",
]
