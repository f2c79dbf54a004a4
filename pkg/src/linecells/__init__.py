"""linecells: exact-arithmetic cells, cups, and caps in line arrangements."""

from .arrangement import (
    CellCensus,
    Edge,
    Face,
    FaceSet,
    crossing_lines,
    defines_cell,
    empty_cell_census,
    empty_triangle_witnesses,
    face_region,
    faces,
)
from .constructions import (
    ClusterSpec,
    UnsupportedN,
    build_cup_cap_free,
    build_no_empty_cells,
    build_no_ncell_basic,
    build_no_ncell_doubled,
    build_regular_polygon_lines,
    cup_cap_free_size,
    make_cluster,
    no_ncell_basic_size,
    no_ncell_doubled_size,
    random_family,
    search_no_empty_4cell,
)
from .core import (
    ConcurrentViolation,
    DegenerateOutput,
    GeometryError,
    Line,
    LineFamily,
    MapsToInfinity,
    ParallelLines,
    ParallelViolation,
    PointR,
    ProducesVertical,
    Rational,
    UcpTransform,
    Violation,
    apply_ucp,
    check_general_position,
    intersect,
    projective_map,
    rat,
    reflect,
    side_of,
)
from .cupcap import (
    CupCapWitness,
    classify_cupcap,
    cup_cap_threshold,
    dualize,
    longest_cup_cap,
    orient_points,
)
from .familyio import (
    Certificate,
    FamilyFile,
    dump_family,
    family_hash,
    load_family,
)
from .pseudolines import (
    WiringDiagram,
    enumerate_wiring_diagrams,
    wd_spans_n_cell,
    wiring_from_family,
)
from .render import render_svg, viewport
from .search import (
    BudgetExceeded,
    ConvexPositionResult,
    FoundNCell,
    NotVertical,
    VerticalConfigAnalysis,
    certify_lower_bound,
    cup_cap_roles,
    default_budget,
    is_vertical_configuration,
    make_vertical_configuration,
    max_convex_position,
)
from .variants import (
    CrossingOrder,
    HalfPlane,
    Infeasible,
    MixedPolygon,
    check_transversals,
    crossing_order,
    exact_crossing_cell,
    halfplane_select,
    mixed_polygon,
)

__all__ = [
    "BudgetExceeded",
    "CellCensus",
    "Certificate",
    "ClusterSpec",
    "ConcurrentViolation",
    "ConvexPositionResult",
    "CrossingOrder",
    "CupCapWitness",
    "DegenerateOutput",
    "Edge",
    "Face",
    "FaceSet",
    "FamilyFile",
    "FoundNCell",
    "GeometryError",
    "HalfPlane",
    "Infeasible",
    "Line",
    "LineFamily",
    "MapsToInfinity",
    "MixedPolygon",
    "NotVertical",
    "ParallelLines",
    "ParallelViolation",
    "PointR",
    "ProducesVertical",
    "Rational",
    "UcpTransform",
    "UnsupportedN",
    "VerticalConfigAnalysis",
    "Violation",
    "WiringDiagram",
    "apply_ucp",
    "build_cup_cap_free",
    "build_no_empty_cells",
    "build_no_ncell_basic",
    "build_no_ncell_doubled",
    "build_regular_polygon_lines",
    "certify_lower_bound",
    "check_general_position",
    "check_transversals",
    "classify_cupcap",
    "crossing_lines",
    "crossing_order",
    "cup_cap_free_size",
    "cup_cap_roles",
    "cup_cap_threshold",
    "default_budget",
    "defines_cell",
    "dualize",
    "dump_family",
    "empty_cell_census",
    "empty_triangle_witnesses",
    "enumerate_wiring_diagrams",
    "exact_crossing_cell",
    "face_region",
    "faces",
    "family_hash",
    "halfplane_select",
    "intersect",
    "is_vertical_configuration",
    "load_family",
    "longest_cup_cap",
    "make_cluster",
    "make_vertical_configuration",
    "max_convex_position",
    "mixed_polygon",
    "no_ncell_basic_size",
    "no_ncell_doubled_size",
    "orient_points",
    "projective_map",
    "random_family",
    "rat",
    "reflect",
    "render_svg",
    "search_no_empty_4cell",
    "side_of",
    "viewport",
    "wd_spans_n_cell",
    "wiring_from_family",
]

__version__ = "0.1.0"
