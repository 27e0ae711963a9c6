"""Exact-arithmetic analysis toolkit for the planar family
F(x, y) = (|x| - y + a, x - |y| + b).

Subpackages cover exact geometry, orbit classification, the invariant-graph
atlas for a < 0, Markov/rome entropy machinery, circle-map rotation theory on
the circle-shaped graphs, and the trapezoidal interval reductions used near
the chaos-onset parameters.
"""

from .exact import (
    Direction,
    ExactError,
    ParamPoint,
    ParamScalar,
    Point,
    Rational,
    Segment,
    format_rational,
    point,
    rational,
    segment,
)
from .dynamics import (
    MapParams,
    OrbitReport,
    apply_map,
    classify_orbit,
    direction_image,
    normalize_params,
    piece_at,
    segment_image,
    split_at_axes,
)

__all__ = [
    "Direction",
    "ExactError",
    "MapParams",
    "OrbitReport",
    "ParamPoint",
    "ParamScalar",
    "Point",
    "Rational",
    "Segment",
    "apply_map",
    "classify_orbit",
    "direction_image",
    "format_rational",
    "normalize_params",
    "piece_at",
    "point",
    "rational",
    "segment",
    "segment_image",
    "split_at_axes",
]

__version__ = "0.1.0"
