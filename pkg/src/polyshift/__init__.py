"""Exact distribution and moments of lattice-point counts of randomly
shifted integer polytopes, plus a mechanical verifier for the identities,
scaling laws and counterexamples that govern them."""

from .counting import (
    CountResult,
    Shift,
    ShiftStream,
    ZonotopeSpec,
    count_at,
    generic_count,
    is_generic,
    parallelepiped_index,
    zonotope_constant,
    zonotope_polytope,
)
from .distributions import (
    ComparisonReport,
    CountDistribution,
    MomentReport,
    compare_distributions,
    exact_covariance,
    exact_distribution,
    exact_mean,
    exact_variance,
    mc_distribution,
)
from .errors import (
    CellBudgetExceeded,
    DegenerateInput,
    GeometryError,
    Infeasible,
    InsufficientSamples,
    NotConstant,
    SingularMatrix,
    Unbounded,
    UnknownIdentity,
)
from .geometry import (
    HalfSpace,
    Polytope,
    PolytopeUnion,
    affine_image,
    bounding_box,
    clip,
    determinant,
    facets_from_vertices,
    halfspace,
    intersect,
    minkowski_sum,
    polytope_from_json,
    polytope_to_json,
    unit_cube,
    vertices_from_facets,
    volume,
)

__version__ = "0.1.0"
