"""The map F(x, y) = (|x| - y + a, x - |y| + b) and exact orbit analysis.

The plane splits into the four closed quadrants Q1..Q4 on which F is affine;
the linear parts act on the direction set {v1, v2, v3, v4} with integer
scalars, which is what makes slope products and segment images exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .exact import (
    Direction,
    ExactError,
    Point,
    Segment,
    classify_direction,
    format_rational,
    rational,
    segment,
)

Q1, Q2, Q3, Q4 = 1, 2, 3, 4

# Linear part of F on each closed quadrant, row-major 2x2 integer matrices.
LINEAR_PARTS: dict[int, tuple[int, int, int, int]] = {
    Q1: (1, -1, 1, -1),
    Q2: (-1, -1, 1, -1),
    Q3: (-1, -1, 1, 1),
    Q4: (1, -1, 1, 1),
}


@dataclass(frozen=True)
class MapParams:
    a: Fraction
    b: Fraction

    @classmethod
    def make(cls, a, b) -> "MapParams":
        return cls(rational(a), rational(b))


def apply_map(params: MapParams, p: Point) -> Point:
    """One exact step of F."""
    return Point(abs(p.x) - p.y + params.a, p.x - abs(p.y) + params.b)


def piece_at(p: Point) -> list[int]:
    """All quadrant pieces whose closed quadrant contains p.

    Two tags on an axis, four at the origin; the pieces agree wherever they
    overlap, so any returned tag evaluates F identically at p.
    """
    tags = []
    if p.x >= 0 and p.y >= 0:
        tags.append(Q1)
    if p.x <= 0 and p.y >= 0:
        tags.append(Q2)
    if p.x <= 0 and p.y <= 0:
        tags.append(Q3)
    if p.x >= 0 and p.y <= 0:
        tags.append(Q4)
    return tags


def apply_piece(params: MapParams, tag: int, p: Point) -> Point:
    m = LINEAR_PARTS[tag]
    return Point(
        m[0] * p.x + m[1] * p.y + params.a,
        m[2] * p.x + m[3] * p.y + params.b,
    )


def normalize_params(params: MapParams) -> tuple[MapParams, Fraction]:
    """Rescale to a in {-1, 0, 1} via the conjugacy lam*F_{a,b}(x/lam, y/lam).

    Returns the normalized parameters and the scale lam > 0 with
    F_{lam a, lam b} = lam . F_{a,b}( . /lam).
    """
    if params.a != 0:
        lam = 1 / abs(params.a)
    elif params.b != 0:
        lam = 1 / abs(params.b)
    else:
        lam = Fraction(1)
    return MapParams(params.a * lam, params.b * lam), lam


def direction_image(tag: int, d: Direction) -> tuple[int, Direction]:
    """Action of the quadrant's linear part on a direction: A(d) = k * d'.

    The scalar k is one of 0, +-1, +-2; k = 0 exactly for the two collapsing
    combinations (v3 in Q1, v4 in Q3).
    """
    if d is Direction.ZERO:
        return 0, Direction.ZERO
    m = LINEAR_PARTS[tag]
    dx, dy = d.vector
    ex = m[0] * dx + m[1] * dy
    ey = m[2] * dx + m[3] * dy
    if ex == 0 and ey == 0:
        return 0, Direction.ZERO
    out = classify_direction(Fraction(ex), Fraction(ey))
    ox, oy = out.vector
    k = ex // ox if ox else ey // oy
    return k, out


def _axis_cuts(seg: Segment) -> list[Fraction]:
    """Parameters in (0,1) where the segment crosses x=0 or y=0."""
    cuts = set()
    dx = seg.q.x - seg.p.x
    dy = seg.q.y - seg.p.y
    if dx != 0:
        t = -seg.p.x / dx
        if 0 < t < 1:
            cuts.add(t)
    if dy != 0:
        t = -seg.p.y / dy
        if 0 < t < 1:
            cuts.add(t)
    return sorted(cuts)


def split_at_axes(seg: Segment) -> list[tuple[Segment, int]]:
    """Split into subsegments each inside a single closed quadrant.

    Subsegments lying on an axis get the lowest-index admissible quadrant.
    """
    params = [Fraction(0)] + _axis_cuts(seg) + [Fraction(1)]
    parts = []
    for t0, t1 in zip(params, params[1:]):
        sub = segment(seg.point_at(t0), seg.point_at(t1))
        if isinstance(sub, Point):
            continue
        tags = set(piece_at(sub.p)) & set(piece_at(sub.q)) & set(piece_at(sub.midpoint()))
        if not tags:
            raise ExactError(f"segment {sub} not inside one quadrant after split")
        parts.append((sub, min(tags)))
    return parts


def quadrant_of_segment(seg: Segment) -> Optional[int]:
    """Lowest-index closed quadrant containing the whole segment, if any."""
    tags = set(piece_at(seg.p)) & set(piece_at(seg.q)) & set(piece_at(seg.midpoint()))
    return min(tags) if tags else None


def segment_image(params: MapParams, seg: Segment) -> Union[Segment, Point]:
    """Exact image of a segment lying in one closed quadrant.

    Plateaus (v3 in Q1, v4 in Q3) collapse to a point; every other direction
    maps to a segment whose squared length is 2x or 4x the original.
    Segments straddling two open quadrants must be split first.
    """
    tag = quadrant_of_segment(seg)
    if tag is None:
        raise ExactError(f"split required: {seg} straddles two open quadrants")
    a = apply_piece(params, tag, seg.p)
    b = apply_piece(params, tag, seg.q)
    return segment(a, b)


@dataclass
class OrbitReport:
    """Result of exact cycle detection along one orbit."""

    start: Point
    preperiod: int
    period: Optional[int]
    cycle: list[Point]
    itinerary: list[int]
    boundary_flags: list[bool]
    slope_product: Union[int, str, None]
    last_state: Optional[Point] = None

    @property
    def decided(self) -> bool:
        return self.period is not None

    def to_json(self) -> dict:
        return {
            "start": self.start.to_strings(),
            "preperiod": self.preperiod,
            "period": self.period if self.decided else "undecided",
            "cycle": [p.to_strings() for p in self.cycle],
            "itinerary": self.itinerary,
            "boundary": self.boundary_flags,
            "slope_product": self.slope_product,
            "last_state": self.last_state.to_strings() if self.last_state else None,
        }


def _brent_cycle(params: MapParams, x0: Point, max_iters: int):
    """Brent's cycle detection with exact point equality.

    Returns (preperiod, period) or None when the budget is exhausted before
    the cycle closes.
    """
    power = 1
    lam = 1
    tortoise = x0
    hare = apply_map(params, x0)
    steps = 1
    while tortoise != hare:
        if steps >= max_iters:
            return None
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = apply_map(params, hare)
        steps += 1
        lam += 1
    # lam is the cycle length; locate the first repetition.
    tortoise = hare = x0
    for _ in range(lam):
        hare = apply_map(params, hare)
    mu = 0
    while tortoise != hare:
        tortoise = apply_map(params, tortoise)
        hare = apply_map(params, hare)
        mu += 1
        if mu > max_iters:
            return None
    return mu, lam


def cycle_slope_product(params: MapParams, cycle: list[Point]) -> Union[int, str]:
    """Product 2^m of direction-algebra scalars along the cycle.

    Chases every direction in V through the cycle's quadrant chain; a
    direction that returns to itself certifies the return-map slope along it.
    If all four directions die in a collapse, the cycle meets a plateau line
    and the orbit is reported as plateau-absorbed instead.
    """
    chain = [min(piece_at(p)) for p in cycle]
    best = None
    for d0 in (Direction.V1, Direction.V2, Direction.V3, Direction.V4):
        d = d0
        factor = 1
        for tag in chain:
            k, d = direction_image(tag, d)
            factor *= k
            if k == 0:
                break
        if d is d0 and factor != 0:
            m = abs(factor)
            if best is None or m > best:
                best = m
    if best is None:
        return "plateau-absorbed"
    return best


def classify_orbit(params: MapParams, start: Point, max_iters: int = 100_000) -> OrbitReport:
    """Iterate exactly until the orbit is known to be eventually periodic.

    The itinerary records the lowest-index admissible quadrant per step,
    flagging axis points, so itinerary-based counts can exclude boundary
    orbits.  Budget exhaustion yields period=None, never a wrong answer.
    """
    if max_iters < 1:
        raise ExactError("max_iters must be >= 1")
    found = _brent_cycle(params, start, max_iters)
    if found is None:
        p = start
        itinerary = []
        flags = []
        for _ in range(min(max_iters, 64)):
            tags = piece_at(p)
            itinerary.append(min(tags))
            flags.append(len(tags) > 1)
            p = apply_map(params, p)
        return OrbitReport(start, 0, None, [], itinerary, flags, None, last_state=p)
    mu, lam = found
    p = start
    itinerary = []
    flags = []
    for _ in range(mu):
        tags = piece_at(p)
        itinerary.append(min(tags))
        flags.append(len(tags) > 1)
        p = apply_map(params, p)
    cycle = []
    for _ in range(lam):
        tags = piece_at(p)
        itinerary.append(min(tags))
        flags.append(len(tags) > 1)
        cycle.append(p)
        p = apply_map(params, p)
    return OrbitReport(
        start,
        mu,
        lam,
        cycle,
        itinerary,
        flags,
        cycle_slope_product(params, cycle),
    )


def orbit_csv_rows(params: MapParams, start: Point, steps: int):
    """Rows (iter, x, y, quadrant) with rational strings for CSV export."""
    p = start
    for i in range(steps + 1):
        yield i, format_rational(p.x), format_rational(p.y), min(piece_at(p))
        p = apply_map(params, p)
