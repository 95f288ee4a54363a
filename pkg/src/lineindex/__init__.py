"""Line index of non-degenerate surface singularities via the canonical toric resolution."""
from .errors import LineIndexError, ParseError, SharpConditionError, UnsupportedInput, ValidationError
from .lattice import (
    E1,
    E2,
    E3,
    CanonicalChain,
    Covector,
    canonical_subdivision,
    continued_fraction,
    det2,
    primitive,
    refine_chain,
)
from .newton import (
    Cone2,
    Face,
    LatticePolynomial,
    adjacent_covector,
    axis_membership,
    compact_facets,
    dual_diagram2,
    face_of,
    load_polynomial,
    parse_polynomial,
)
from .linedex import (
    LineIndexReport,
    NsSolution,
    line_index,
    line_leading_data,
    obvious_lines,
    rho_from_extremes,
    rho_pq,
    vns_congruence,
    vns_closed_form,
    vns_scan,
)

__version__ = "0.1.0"

__all__ = [
    "E1", "E2", "E3", "CanonicalChain", "Cone2", "Covector", "Face", "LatticePolynomial",
    "LineIndexError", "LineIndexReport", "NsSolution", "ParseError", "SharpConditionError",
    "UnsupportedInput", "ValidationError", "adjacent_covector", "axis_membership",
    "canonical_subdivision", "compact_facets", "continued_fraction", "det2", "dual_diagram2",
    "face_of", "line_index", "line_leading_data", "load_polynomial", "obvious_lines",
    "parse_polynomial", "primitive", "refine_chain", "rho_from_extremes", "rho_pq",
    "vns_congruence", "vns_closed_form", "vns_scan",
]
