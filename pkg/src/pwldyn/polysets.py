"""Exact polygonal subsets of the plane built from atlas-direction pieces.

A ``PolySet`` is a finite union of points, segments and rays whose directions
all lie in {v1, v2, v3, v4}.  The forward image under F of such a set is again
such a set (rays die when they enter a collapsing direction), which is what
makes the invariance checks and the quadrant-image diagnostics exact.

Lines are keyed by (direction, offset): horizontal lines by y, vertical by x,
slope +1 by y - x, slope -1 by y + x.  Along each line the set is a merged
list of closed intervals in the line parameter (x for all but vertical lines,
y for vertical ones); None stands for an unbounded end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

from .dynamics import (
    MapParams,
    apply_map,
    apply_piece,
    piece_at,
    split_at_axes,
    segment_image,
    LINEAR_PARTS,
)
from .exact import Direction, ExactError, Point, Segment, classify_direction, segment

LineKey = tuple[Direction, Fraction]
End = Optional[Fraction]
Interval = tuple[End, End]

_UNIT_VECTORS = {
    (1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1), (1, -1), (-1, 1),
}


def line_key_of(p: Point, d: Direction) -> LineKey:
    if d is Direction.V1:
        return (d, p.y)
    if d is Direction.V2:
        return (d, p.x)
    if d is Direction.V3:
        return (d, p.y - p.x)
    if d is Direction.V4:
        return (d, p.y + p.x)
    raise ExactError("zero direction has no supporting line")


def line_param(p: Point, d: Direction) -> Fraction:
    return p.y if d is Direction.V2 else p.x


def point_on_line(key: LineKey, t: Fraction) -> Point:
    d, off = key
    if d is Direction.V1:
        return Point(t, off)
    if d is Direction.V2:
        return Point(off, t)
    if d is Direction.V3:
        return Point(t, off + t)
    return Point(t, off - t)


def _lt(a: End, b: End) -> bool:
    """a < b with None-as-minus-infinity on the left, plus-infinity right."""
    if a is None:
        return True
    if b is None:
        return True
    return a < b


def merge_intervals(intervals: list[Interval]) -> list[Interval]:
    """Merge overlapping or touching closed intervals; endpoints exact."""

    def key(iv: Interval):
        lo = iv[0]
        return (0, Fraction(0)) if lo is None else (1, lo)

    merged: list[Interval] = []
    for lo, hi in sorted(intervals, key=key):
        if merged:
            plo, phi = merged[-1]
            touches = phi is None or lo is None or lo <= phi
            if touches:
                if phi is not None and (hi is None or hi > phi):
                    merged[-1] = (plo, hi)
                continue
        merged.append((lo, hi))
    return merged


def _covers(intervals: list[Interval], lo: End, hi: End) -> bool:
    for ilo, ihi in intervals:
        lo_ok = ilo is None or (lo is not None and ilo <= lo)
        hi_ok = ihi is None or (hi is not None and hi <= ihi)
        if lo_ok and hi_ok:
            return True
    return False


def _contains_param(intervals: list[Interval], t: Fraction) -> bool:
    return _covers(intervals, t, t)


@dataclass
class PolySet:
    lines: dict[LineKey, list[Interval]] = field(default_factory=dict)
    points: set[Point] = field(default_factory=set)

    # -- construction -----------------------------------------------------

    def add_interval(self, key: LineKey, lo: End, hi: End) -> None:
        if lo is not None and hi is not None and lo == hi:
            self.points.add(point_on_line(key, lo))
            return
        if lo is not None and hi is not None and hi < lo:
            lo, hi = hi, lo
        self.lines.setdefault(key, []).append((lo, hi))

    def add_segment(self, seg: Segment) -> None:
        d = seg.direction
        key = line_key_of(seg.p, d)
        t0, t1 = line_param(seg.p, d), line_param(seg.q, d)
        self.add_interval(key, min(t0, t1), max(t0, t1))

    def add_ray(self, base: Point, dvec: tuple[int, int]) -> None:
        if dvec not in _UNIT_VECTORS:
            raise ExactError(f"not a unit atlas direction: {dvec}")
        d = classify_direction(Fraction(dvec[0]), Fraction(dvec[1]))
        key = line_key_of(base, d)
        t = line_param(base, d)
        forward = dvec[1] > 0 if d is Direction.V2 else dvec[0] > 0
        if forward:
            self.add_interval(key, t, None)
        else:
            self.add_interval(key, None, t)

    def add_point(self, p: Point) -> None:
        self.points.add(p)

    def add_full_line(self, key: LineKey) -> None:
        self.lines.setdefault(key, []).append((None, None))

    def update(self, other: "PolySet") -> None:
        for key, ivs in other.lines.items():
            self.lines.setdefault(key, []).extend(ivs)
        self.points.update(other.points)

    # -- canonical form ----------------------------------------------------

    def canonicalize(self) -> "PolySet":
        lines = {}
        for key, ivs in self.lines.items():
            merged = merge_intervals(ivs)
            if merged:
                lines[key] = merged
        points = {p for p in self.points if not self._point_on_lines(p, lines)}
        self.lines = lines
        self.points = points
        return self

    @staticmethod
    def _point_on_lines(p: Point, lines: dict[LineKey, list[Interval]]) -> bool:
        for d in (Direction.V1, Direction.V2, Direction.V3, Direction.V4):
            key = line_key_of(p, d)
            if key in lines and _contains_param(lines[key], line_param(p, d)):
                return True
        return False

    def frozen(self) -> tuple:
        self.canonicalize()
        lines = tuple(
            sorted(
                ((d.name, off), tuple(ivs))
                for (d, off), ivs in self.lines.items()
            )
        )
        return lines, tuple(sorted(self.points))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolySet):
            return NotImplemented
        return self.frozen() == other.frozen()

    # -- queries -----------------------------------------------------------

    def is_bounded(self) -> bool:
        return all(
            lo is not None and hi is not None
            for ivs in self.lines.values()
            for lo, hi in ivs
        )

    def contains_point(self, p: Point) -> bool:
        if p in self.points:
            return True
        return self._point_on_lines(p, self.lines)

    def contains_segment(self, seg: Segment) -> bool:
        d = seg.direction
        key = line_key_of(seg.p, d)
        if key not in self.lines:
            return False
        t0, t1 = sorted((line_param(seg.p, d), line_param(seg.q, d)))
        return _covers(self.lines[key], t0, t1)

    def contains(self, other: "PolySet") -> bool:
        other.canonicalize()
        for key, ivs in other.lines.items():
            mine = self.lines.get(key)
            for lo, hi in ivs:
                if lo is None or hi is None:
                    if mine is None or not _covers(mine, lo, hi):
                        return False
                elif mine is None or not _covers(mine, lo, hi):
                    return False
        return all(self.contains_point(p) for p in other.points)

    def segments(self) -> list[Segment]:
        """Maximal segments; raises if the set is unbounded."""
        self.canonicalize()
        out = []
        for key, ivs in sorted(
            self.lines.items(), key=lambda kv: (kv[0][0].name, kv[0][1])
        ):
            for lo, hi in ivs:
                if lo is None or hi is None:
                    raise ExactError("unbounded component has no segment form")
                out.append(Segment(point_on_line(key, lo), point_on_line(key, hi)))
        return out

    def isolated_points(self) -> list[Point]:
        self.canonicalize()
        return sorted(self.points)

    # -- dynamics ----------------------------------------------------------

    def image(self, params: MapParams) -> "PolySet":
        """Exact forward image under F."""
        out = PolySet()
        for p in self.points:
            out.add_point(apply_map(params, p))
        for key, ivs in self.lines.items():
            d, _ = key
            for lo, hi in ivs:
                _image_piece(params, key, lo, hi, out)
        return out.canonicalize()


def _ray_tail_quadrant(base: Point, dvec: tuple[int, int]) -> int:
    """Quadrant containing the far part of the ray (lowest index on ties)."""
    sx = dvec[0] if dvec[0] != 0 else (1 if base.x > 0 else (-1 if base.x < 0 else 0))
    sy = dvec[1] if dvec[1] != 0 else (1 if base.y > 0 else (-1 if base.y < 0 else 0))
    if sx >= 0 and sy >= 0:
        return 1
    if sx <= 0 and sy >= 0:
        return 2
    if sx <= 0 and sy <= 0:
        return 3
    return 4


def _map_ray(params: MapParams, base: Point, dvec: tuple[int, int], out: PolySet) -> None:
    """Image of a ray contained in one closed quadrant."""
    tag = _ray_tail_quadrant(base, dvec)
    m = LINEAR_PARTS[tag]
    ex = m[0] * dvec[0] + m[1] * dvec[1]
    ey = m[2] * dvec[0] + m[3] * dvec[1]
    base2 = apply_piece(params, tag, base)
    if ex == 0 and ey == 0:
        out.add_point(base2)
        return
    g = max(abs(ex), abs(ey))
    if ex % g or ey % g:
        raise ExactError("ray image direction is not an atlas direction")
    out.add_ray(base2, (ex // g, ey // g))


def _split_ray_at_axes(base: Point, dvec: tuple[int, int]):
    """Bounded prefixes in single quadrants plus the unbounded tail."""
    cuts = []
    if dvec[0] != 0:
        t = -base.x / dvec[0]
        if t > 0:
            cuts.append(t)
    if dvec[1] != 0:
        t = -base.y / dvec[1]
        if t > 0:
            cuts.append(t)
    cuts = sorted(set(cuts))
    pieces = []
    prev = Fraction(0)
    pt_prev = base
    for t in cuts:
        pt = Point(base.x + t * dvec[0], base.y + t * dvec[1])
        if pt != pt_prev:
            pieces.append(Segment(pt_prev, pt))
        pt_prev, prev = pt, t
    return pieces, pt_prev


def _image_piece(params: MapParams, key: LineKey, lo: End, hi: End, out: PolySet) -> None:
    d, _ = key
    if lo is not None and hi is not None:
        seg = Segment(point_on_line(key, lo), point_on_line(key, hi))
        for sub, tag in split_at_axes(seg):
            img = segment_image(params, sub)
            if isinstance(img, Point):
                out.add_point(img)
            else:
                out.add_segment(img)
        return
    vx, vy = d.vector
    rays = []
    if hi is not None:     # (-inf, hi]
        rays.append((point_on_line(key, hi), (-vx, -vy)))
    elif lo is not None:   # [lo, +inf)
        rays.append((point_on_line(key, lo), (vx, vy)))
    else:                  # full line: two rays from an on-line anchor
        anchor = point_on_line(key, Fraction(0))
        rays.append((anchor, (vx, vy)))
        rays.append((anchor, (-vx, -vy)))
    for base, dvec in rays:
        prefixes, tail_base = _split_ray_at_axes(base, dvec)
        for seg in prefixes:
            for sub, tag in split_at_axes(seg):
                img = segment_image(params, sub)
                if isinstance(img, Point):
                    out.add_point(img)
                else:
                    out.add_segment(img)
        _map_ray(params, tail_base, dvec, out)


def initial_quadrant_images(params: MapParams) -> tuple[PolySet, PolySet]:
    """F(Q1) and F(Q3): the generating line and half-line of the graphs.

    F(Q1) is the full line of slope 1 through (0, a+b abuse: (0, b - a... )
    -- computed from the map, not hard-coded, so it stays correct for any a.
    """
    img_q1 = PolySet()
    # F(Q1) = {(t, t + (b - a)) : t real} for the normalized family ... derive
    # exactly: F1(x, y) = (x - y + a, x - y + b), so the image is the line
    # y = x + (b - a).
    key = (Direction.V3, params.b - params.a)
    img_q1.add_full_line(key)
    img_q1.canonicalize()

    # F(Q3) = {(-s + a, s + b) : s <= 0} = half-line of slope -1 with
    # x >= a, i.e. base (a, b) going in direction (1, -1).
    img_q3 = PolySet()
    img_q3.add_ray(Point(params.a, params.b), (1, -1))
    img_q3.canonicalize()
    return img_q1, img_q3
