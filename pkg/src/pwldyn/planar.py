"""Planar graphs made of atlas-direction segments plus isolated points.

A ``PlanarGraph`` wraps a canonicalized bounded ``PolySet``.  Vertices are the
points where the graph fails to be a regular segment interior: endpoints,
axis points, and meeting points of segments with different directions.  Edges
are the closures of the components in between; a plateau is an edge of
direction v3 inside Q1 or v4 inside Q3 (its image under F is a single point).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .dynamics import MapParams, apply_map, piece_at, segment_image, split_at_axes
from .exact import Direction, ExactError, Point, Segment, segment
from .polysets import PolySet, line_key_of, line_param, point_on_line


_ORDER = {Direction.V1: 1, Direction.V2: 2, Direction.V3: 3, Direction.V4: 4}


def _line_intersection(k1, k2) -> Optional[Point]:
    """Intersection point of two supporting lines of different directions."""
    if _ORDER[k1[0]] > _ORDER[k2[0]]:
        k1, k2 = k2, k1
    (d1, o1), (d2, o2) = k1, k2
    if d1 == d2:
        return None
    if d1 is Direction.V1:
        if d2 is Direction.V2:
            return Point(o2, o1)
        if d2 is Direction.V3:
            return Point(o1 - o2, o1)
        return Point(o2 - o1, o1)
    if d1 is Direction.V2:
        if d2 is Direction.V3:
            return Point(o1, o1 + o2)
        return Point(o1, o2 - o1)
    return Point((o2 - o1) / 2, (o2 + o1) / 2)


@dataclass
class PlanarGraph:
    """Invariant-graph candidate: segments as a PolySet plus isolated points."""

    polyset: PolySet
    isolated: tuple[Point, ...] = ()

    def __post_init__(self):
        self.polyset.canonicalize()
        # points stored inside the polyset (single-point graphs) count as
        # isolated carriers of dynamics too
        extra = tuple(self.polyset.isolated_points())
        merged = set(self.isolated) | set(extra)
        self.isolated = tuple(sorted(merged))

    # -- structure ---------------------------------------------------------

    def maximal_segments(self) -> list[Segment]:
        return self.polyset.segments()

    def vertices(self) -> list[Point]:
        """Endpoints, axis points and direction-change points of the graph."""
        segs = self.maximal_segments()
        verts: set[Point] = set()
        for s in segs:
            verts.add(s.p)
            verts.add(s.q)
            for sub, _tag in split_at_axes(s):
                verts.add(sub.p)
                verts.add(sub.q)
        for i, s in enumerate(segs):
            k1 = line_key_of(s.p, s.direction)
            for t in segs[i + 1:]:
                k2 = line_key_of(t.p, t.direction)
                pt = _line_intersection(k1, k2)
                if pt is not None and s.contains_point(pt) and t.contains_point(pt):
                    verts.add(pt)
        return sorted(verts)

    def edges(self, extra_cuts: Iterable[Point] = ()) -> list[Segment]:
        """Subdivision of the maximal segments at vertices and given cuts."""
        cuts = set(self.vertices())
        for p in extra_cuts:
            cuts.add(p)
        out = []
        for s in self.maximal_segments():
            d = s.direction
            t0 = line_param(s.p, d)
            t1 = line_param(s.q, d)
            params = {t0, t1}
            for c in cuts:
                if s.contains_point(c):
                    params.add(line_param(c, d))
            ordered = sorted(params)
            key = line_key_of(s.p, d)
            for a, b in zip(ordered, ordered[1:]):
                out.append(Segment(point_on_line(key, a), point_on_line(key, b)))
        return out

    def plateau_edges(self) -> list[Segment]:
        """Maximal v3-in-Q1 / v4-in-Q3 runs; each collapses to a point."""
        out = []
        for s in self.maximal_segments():
            for sub, tag in split_at_axes(s):
                d = sub.direction
                if (tag == 1 and d is Direction.V3) or (tag == 3 and d is Direction.V4):
                    out.append(sub)
        return out

    # -- membership ----------------------------------------------------------

    def contains_point(self, p: Point) -> bool:
        return self.polyset.contains_point(p) or p in self.isolated

    def contains_segment(self, s: Segment) -> bool:
        return self.polyset.contains_segment(s)

    def contains_image_of(self, obj: Union[Segment, Point], params: MapParams) -> bool:
        if isinstance(obj, Point):
            return self.contains_point(apply_map(params, obj))
        for sub, _tag in split_at_axes(obj):
            img = segment_image(params, sub)
            ok = (
                self.contains_point(img)
                if isinstance(img, Point)
                else self.contains_segment(img)
            )
            if not ok:
                return False
        return True


@dataclass
class InvarianceReport:
    checked_edges: int
    violations: list[dict]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_invariance(params: MapParams, g: PlanarGraph) -> InvarianceReport:
    """Check F(edge) stays inside the graph for every axis-split edge.

    Violations are data (they flag an atlas transcription error), not
    exceptions.
    """
    violations = []
    count = 0
    for s in g.maximal_segments():
        for sub, _tag in split_at_axes(s):
            count += 1
            img = segment_image(params, sub)
            if isinstance(img, Point):
                ok = g.contains_point(img)
            else:
                ok = g.contains_segment(img)
            if not ok:
                violations.append(
                    {"edge": [sub.p.to_strings(), sub.q.to_strings()],
                     "image": img.to_strings() if isinstance(img, Point)
                     else [img.p.to_strings(), img.q.to_strings()]}
                )
    for p in g.isolated:
        count += 1
        if not g.contains_point(apply_map(params, p)):
            violations.append({"isolated": p.to_strings()})
    return InvarianceReport(count, violations)
