"""Rotation theory on the circle-shaped invariant graphs.

When the graph is a topological circle the restricted map is a degree-one
monotone circle map: its rotation number is exact p/q whenever a periodic
orbit is found (periodic orbits of such maps are rotation-ordered, so the
winding p is the index shift of the circularly sorted orbit), and the period
set over a rotation interval comes from the divisor-function criterion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Optional, Union

from .dynamics import MapParams, apply_map, classify_orbit
from .exact import ExactError, Point, Segment
from .planar import PlanarGraph
from .polysets import line_param


@dataclass
class CircleOrder:
    """Cyclic vertex order of a circle graph with exact point comparison."""

    vertices: list[Point]
    edges: list[Segment]  # edges[i] joins vertices[i] -> vertices[i+1]

    def position(self, p: Point) -> Fraction:
        """Circular coordinate: edge index plus exact fraction along it."""
        for i, e in enumerate(self.edges):
            if e.contains_point(p):
                d = e.direction
                t = line_param(p, d) - line_param(e.p, d)
                span = line_param(e.q, d) - line_param(e.p, d)
                frac = t / span
                v0 = self.vertices[i]
                if e.p != v0:
                    frac = 1 - frac
                return Fraction(i) + frac
        raise ExactError(f"point {p} not on the circle graph")


def circle_order(g: PlanarGraph) -> CircleOrder:
    """Walk the edges of a degree-2 graph into a cyclic order.

    Isolated exceptional points (the Q2/Q4 fixed points of the atlas cases)
    are 0-dimensional components and do not affect the circle structure.
    """
    edges = g.edges()
    if not edges:
        raise ExactError("graph is not a topological circle")
    incident: dict[Point, list[int]] = {}
    for idx, e in enumerate(edges):
        incident.setdefault(e.p, []).append(idx)
        incident.setdefault(e.q, []).append(idx)
    if any(len(v) != 2 for v in incident.values()):
        raise ExactError("graph is not a topological circle (vertex degree != 2)")
    start = edges[0].p
    order_vertices = [start]
    order_edges = []
    used = set()
    cur = start
    while True:
        nxt_idx = None
        for idx in incident[cur]:
            if idx not in used:
                nxt_idx = idx
                break
        if nxt_idx is None:
            break
        used.add(nxt_idx)
        e = edges[nxt_idx]
        other = e.q if e.p == cur else e.p
        order_edges.append(e)
        if other == start:
            break
        order_vertices.append(other)
        cur = other
    if len(order_edges) != len(edges):
        raise ExactError("graph is not connected as a single circle")
    return CircleOrder(order_vertices, order_edges)


@dataclass
class RotationResult:
    value: Optional[Fraction]            # exact p/q when decided
    interval: Optional[tuple[Fraction, Fraction]]
    method: str                          # "cycle-detected" | "bounded-estimate"
    period: Optional[int] = None
    witness: Optional[list[Point]] = None

    @property
    def decided(self) -> bool:
        return self.value is not None


def rotation_number(params: MapParams, g: PlanarGraph, budget: int = 100_000,
                    start: Optional[Point] = None) -> RotationResult:
    """Rotation number of F restricted to a circle graph.

    Finds a periodic orbit by exact iteration and reads the winding off the
    circular ordering: a monotone degree-one map shifts the sorted orbit by a
    constant index p, and the rotation number is p/q in lowest terms already
    (gcd(p, q) = 1 is asserted).
    """
    order = circle_order(g)
    if start is None:
        start = order.vertices[0]
    rep = classify_orbit(params, start, budget)
    if rep.decided:
        cycle = rep.cycle
        q = rep.period
        positions = sorted(range(q), key=lambda i: order.position(cycle[i]))
        rank = {idx: r for r, idx in enumerate(positions)}
        shifts = {(rank[(i + 1) % q] - rank[i]) % q for i in range(q)}
        if len(shifts) != 1:
            raise ExactError("periodic orbit is not rotation-ordered; not a circle map?")
        p = shifts.pop() % q
        if q > 1 and gcd(p, q) != 1:
            raise ExactError(f"degenerate winding p/q = {p}/{q}")
        return RotationResult(Fraction(p, q), None, "cycle-detected", q, cycle)
    # bounded estimate via winding counts of a finite orbit segment
    n_steps = min(budget, 4096)
    L = len(order.edges)
    pt = start
    pos = order.position(pt)
    total = Fraction(0)
    for _ in range(n_steps):
        nxt = apply_map(params, pt)
        npos = order.position(nxt)
        delta = (npos - pos) % L
        total += delta
        pt, pos = nxt, npos
    est_lo = (total / L - 1) / n_steps
    est_hi = (total / L + 1) / n_steps
    return RotationResult(None, (est_lo, est_hi), "bounded-estimate")


def divisor_count(n: int) -> int:
    if n < 1:
        raise ExactError("n must be >= 1")
    count = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            count += 2 if d * d != n else 1
        d += 1
    return count


def period_threshold(lo: Union[Fraction, str], hi: Union[Fraction, str]) -> int:
    """Least n0 with 4n < (floor(n*(hi-lo)) - 1)^2 for every n >= n0.

    Exact integer scan; the tail is certified by the quadratic growth of the
    right-hand side (no failures once floor(n*delta) clears the crossover).
    """
    lo = Fraction(lo)
    hi = Fraction(hi)
    if not (0 <= lo < hi):
        raise ExactError("need 0 <= lo < hi")
    delta = hi - lo
    # beyond n_star, even the pessimistic floor bound passes
    # 4n < (n*delta - 2)^2  <=  (floor - 1)^2 for floor >= n*delta - 1
    # solve delta^2 n^2 - (4 delta + 4) n + 4 > 0 exactly
    a = delta * delta
    bq = -(4 * delta + 4)
    cq = Fraction(4)
    disc = bq * bq - 4 * a * cq
    root_hi = (-bq + _fraction_sqrt_upper(disc)) / (2 * a)
    n_star = int(root_hi) + 2
    last_fail = 0
    for n in range(1, n_star + 1):
        f = (n * delta).__floor__() - 1
        if f <= 0 or 4 * n >= f * f:
            last_fail = n
    return last_fail + 1


def _fraction_sqrt_upper(x: Fraction) -> Fraction:
    """Rational upper bound for sqrt(x)."""
    num = isqrt(x.numerator) + 1
    den = isqrt(x.denominator)
    return Fraction(num, max(den, 1))


def has_irreducible_fraction(n: int, lo: Fraction, hi: Fraction) -> bool:
    """Exhaustive scan: is there an irreducible l/n in [lo, hi]?"""
    l0 = (lo * n).__ceil__()
    l1 = (hi * n).__floor__()
    for ell in range(max(l0, 0), l1 + 1):
        if gcd(ell, n) == 1:
            return True
    return False


def period_set(lo: Union[Fraction, str], hi: Union[Fraction, str],
               n_min: int = 2) -> dict:
    """Excluded periods below the divisor-criterion threshold.

    n = 1 is reported separately: whether the ambient map has a fixed point
    is not governed by the rotation interval, so the printed exclusion lists
    conventionally start at 2.
    """
    lo = Fraction(lo)
    hi = Fraction(hi)
    n0 = period_threshold(lo, hi)
    excluded = [n for n in range(max(n_min, 1), n0)
                if not has_irreducible_fraction(n, lo, hi)]
    return {
        "threshold": n0,
        "excluded": excluded,
        "one_excluded": not has_irreducible_fraction(1, lo, hi),
        "lo": lo,
        "hi": hi,
    }


def period_form_check(q: int, d_hi: int = 6, d_lo: int = 7) -> Optional[tuple[int, int]]:
    """Nonnegative (m, n) with d_hi*m + d_lo*n = q, if any.

    The two block lengths are the denominators of the rotation-interval
    endpoints (6 and 7 for [1/7, 1/6])."""
    if q < 1:
        raise ExactError("q must be >= 1")
    for n in range(q // d_lo + 1):
        rest = q - d_lo * n
        if rest >= 0 and rest % d_hi == 0:
            return (rest // d_hi, n)
    return None
