"""torustab: knot and link diagram tabulation on the thickened torus.

Projections (4-regular cellular embedded graphs) are encoded by permutation
pairs on darts, enumerated up to unsensed equivalence via canonical
representatives, filtered by primeness witnesses, promoted to diagrams by
crossing bits, and classified by a generalized bracket state sum evaluated
entirely in the permutation model.
"""

from .bracket import (
    BracketPoly,
    F2FaceBasis,
    GeometryTable,
    LaurentPoly,
    Skeleton,
    canonical_key,
    circle_geometry,
    evaluate_bracket,
    face_basis,
    precompute_geometry,
    skeleton,
    smoothing_involution,
    x_polynomial,
)
from .canonical import (
    CanonicalEncoding,
    compare_encodings,
    rooted_normalize,
    sensed_canonical,
    unsensed_canonical,
)
from .diagrams import (
    BigonFace,
    Diagram,
    assignments,
    bigon_faces,
    bigon_reducible,
    canonical_bits,
    diagram_symmetries,
    participation_ok,
    passes_bigon_rule,
    writhe,
)
from .enumeration import (
    EnumConfig,
    enumerate_matchings,
    enumerate_projection_classes,
    is_candidate,
)
from .errors import (
    DomainError,
    OrderingError,
    ResourceError,
    StructureError,
    TorustabError,
)
from .maps import (
    LabelledMap,
    Multigraph,
    Perm,
    component_count,
    compose,
    conjugate,
    cycles,
    euler_genus,
    face_permutation,
    has_loop,
    has_monogon,
    inverse,
    is_connected,
    mixed_vertices,
    multigraph,
    standard_sigma,
    straight_ahead_components,
)
from .pipeline import (
    DiagramRecord,
    DiagramStats,
    KeyLibrary,
    PipelineConfig,
    ProjectionRecord,
    ProjectionStats,
    stage_diagrams,
    stage_projections,
    verify,
)
from .primeness import PrimenessReport, find_two_edge_cut, is_prime, split_witnessed
from .reference import REFERENCE, ReferenceTables

__version__ = "0.1.0"
