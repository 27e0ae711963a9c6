"""The machine-readable atlas of invariant graphs for a = -1.

The atlas ships as JSON data: one case per parameter window, vertices as
coordinates affine in b, edges as vertex-name pairs, plus the isolated
exceptional points (fixed points and the 3-cycle living in Q2 u Q4).  The
validity windows tile the whole b-line, so lookup is total.  Graphs for
general a < 0 are obtained by the scaling conjugacy from the a = -1 atlas,
never stored separately.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Optional, Union

from .dynamics import MapParams, apply_map, classify_orbit, normalize_params
from .exact import ExactError, ParamPoint, ParamScalar, Point, Segment, rational, segment
from .planar import InvarianceReport, PlanarGraph, verify_invariance
from .polysets import PolySet, initial_quadrant_images


@dataclass(frozen=True)
class Validity:
    lo: Optional[Fraction]
    lo_open: bool
    hi: Optional[Fraction]
    hi_open: bool

    def contains(self, b: Fraction) -> bool:
        if self.lo is not None and (b < self.lo or (self.lo_open and b == self.lo)):
            return False
        if self.hi is not None and (b > self.hi or (self.hi_open and b == self.hi)):
            return False
        return True

    def interior_sample(self) -> Fraction:
        if self.lo is None:
            return self.hi - 1
        if self.hi is None:
            return self.lo + 1
        return (self.lo + self.hi) / 2


@dataclass
class AtlasCase:
    id: str
    validity: Validity
    vertices: dict[str, ParamPoint]
    edges: list[tuple[str, str]]
    isolated: list[tuple[str, ParamPoint]]
    meta: dict

    def vertex_points(self, b: Fraction) -> dict[str, Point]:
        return {name: pp(b) for name, pp in self.vertices.items()}


_CACHE: Optional[list[AtlasCase]] = None


def load_atlas() -> list[AtlasCase]:
    global _CACHE
    if _CACHE is None:
        raw = json.loads(
            resources.files("pwldyn").joinpath("data/atlas.json").read_text()
        )
        cases = []
        for item in raw["cases"]:
            v = item["validity"]
            validity = Validity(
                rational(v["lo"]) if v["lo"] is not None else None,
                bool(v["lo_open"]),
                rational(v["hi"]) if v["hi"] is not None else None,
                bool(v["hi_open"]),
            )
            vertices = {
                name: ParamPoint.from_json(data)
                for name, data in item["vertices"].items()
            }
            isolated = [
                (iso["label"], ParamPoint.from_json(iso))
                for iso in item["isolated"]
            ]
            cases.append(
                AtlasCase(
                    item["id"],
                    validity,
                    vertices,
                    [tuple(e) for e in item["edges"]],
                    isolated,
                    item.get("meta", {}),
                )
            )
        _CACHE = cases
    return _CACHE


def atlas_lookup(b: Union[Fraction, str]) -> AtlasCase:
    """The unique atlas case whose validity window contains b (total)."""
    b = rational(b)
    for case in load_atlas():
        if case.validity.contains(b):
            return case
    raise ExactError(f"no atlas case covers b={b}")  # unreachable: windows tile R


def instantiate(case: AtlasCase, b: Union[Fraction, str]) -> PlanarGraph:
    """Evaluate the case at rational b: axis-split, merged, plateau-tagged.

    Vertex collisions at window endpoints are legal; edges that degenerate
    collapse to points and are merged away.
    """
    b = rational(b)
    if not case.validity.contains(b):
        raise ExactError(f"b={b} outside validity of case {case.id}")
    pos = case.vertex_points(b)
    ps = PolySet()
    lonely = set(pos.values())
    for n1, n2 in case.edges:
        obj = segment(pos[n1], pos[n2])
        if isinstance(obj, Point):
            continue
        ps.add_segment(obj)
    ps.canonicalize()
    for p in lonely:
        if not ps.contains_point(p):
            ps.add_point(p)
    iso = tuple(pp(b) for _label, pp in case.isolated)
    return PlanarGraph(ps, iso)


def graph_for(params: MapParams) -> tuple[AtlasCase, PlanarGraph, Fraction]:
    """Atlas case and instantiated graph for arbitrary a < 0.

    Returns (case, graph at the normalized parameters, scale lam); the graph
    for the original parameters is the normalized one shrunk by 1/lam.
    """
    if params.a >= 0:
        raise ExactError("invariant-graph atlas applies to a < 0 only")
    norm, lam = normalize_params(params)
    case = atlas_lookup(norm.b)
    return case, instantiate(case, norm.b), lam


def exceptional_points(params: MapParams) -> list[Point]:
    """Points of Q2 u Q4 whose orbit never meets Q1 u Q3 (a = -1).

    The Q2 fixed point exists iff b > 1/2, the Q4 fixed point iff b < 0, and
    the 3-cycle iff 3/4 < b < 2.
    """
    if params.a != -1:
        raise ExactError("exceptional_points expects the normalized map (a = -1)")
    b = params.b
    out: list[Point] = []
    if b > Fraction(1, 2):
        out.append(Point(-(2 + b) / 5, (2 * b - 1) / 5))
    if b < 0:
        out.append(Point(-b, Fraction(-1)))
    if Fraction(3, 4) < b < 2:
        out.extend(
            [
                Point((2 - b) / 5, -(2 * b + 1) / 5),
                Point((b - 2) / 5, (2 * b + 1) / 5),
                Point((-3 * b - 4) / 5, (4 * b - 3) / 5),
            ]
        )
    return out


# ---------------------------------------------------------------------------
# arrival times

# Arrival columns as printed in the source table: (lo, lo_open, hi, hi_open,
# N1, N3).  Exact polygonal analysis reproduces every column except b <= -2,
# where the true values are (7, 6); see the acceptance suite for the
# discrepancy note.
ARRIVAL_TABLE = [
    (None, True, Fraction(-2), False, 8, 5),
    (Fraction(-2), True, Fraction(-1, 4), False, 6, 5),
    (Fraction(-1, 4), True, Fraction(0), True, 5, 4),
    (Fraction(0), False, Fraction(3, 16), False, 6, 4),
    (Fraction(3, 16), True, Fraction(4, 15), True, 11, 9),
    (Fraction(4, 15), False, Fraction(2, 3), False, 6, 4),
    (Fraction(2, 3), True, Fraction(7, 4), False, 5, 4),
    (Fraction(7, 4), True, None, True, 5, 5),
]


def arrival_table_lookup(b: Fraction) -> tuple[int, int]:
    for lo, lo_open, hi, hi_open, n1, n3 in ARRIVAL_TABLE:
        v = Validity(lo, lo_open, hi, hi_open)
        if v.contains(b):
            return n1, n3
    raise ExactError("unreachable: arrival columns tile R")


def region_witnesses(region: int, grid: int = 9, far: int = 1000) -> list[Point]:
    """Witness sample of a quadrant: grid points, far points, boundary rays."""
    if region not in (1, 3):
        raise ExactError("region must be quadrant 1 or 3")
    sign = 1 if region == 1 else -1
    pts = []
    for i in range(grid):
        for j in range(grid):
            pts.append(Point(sign * Fraction(i + 1, 2), sign * Fraction(j + 1, 2)))
    for k in range(8):
        pts.append(Point(sign * Fraction(far), sign * Fraction(far * (k + 1), 8)))
        pts.append(Point(sign * Fraction(far * (k + 1), 8), sign * Fraction(far)))
        pts.append(Point(sign * Fraction(far + k), Fraction(0)))
        pts.append(Point(Fraction(0), sign * Fraction(far + k)))
    pts.append(Point(Fraction(0), Fraction(0)))
    return pts


def arrival_time(params: MapParams, region: int, g: PlanarGraph,
                 budget: int = 30, grid: int = 9, far: int = 1000) -> int:
    """Smallest N with F^N(witness sample of the region) inside the graph.

    A sampling check, not a proof: the witness set is a finite grid plus far
    points, so thin families with longer transients can be missed.
    """
    worst = 0
    for p0 in region_witnesses(region, grid, far):
        pt = p0
        n = 0
        while not g.contains_point(pt):
            pt = apply_map(params, pt)
            n += 1
            if n > budget:
                raise ExactError(
                    f"arrival budget {budget} exceeded from {p0}; atlas defect?"
                )
        worst = max(worst, n)
    return worst


def arrival_time_exact(params: MapParams, region: int, g: PlanarGraph,
                       budget: int = 30) -> int:
    """Exact arrival of the whole quadrant via polygonal forward images."""
    q1, q3 = initial_quadrant_images(params)
    cur = q1 if region == 1 else q3
    target = g.polyset
    for n in range(1, budget + 1):
        if target.contains(cur):
            return n
        cur = cur.image(params)
    raise ExactError(f"exact arrival budget {budget} exceeded")


def plateau_omega_limits(params: MapParams, g: PlanarGraph,
                         max_iters: int = 200_000):
    """Omega-limit cycles of the plateau images, deduplicated.

    For rational b every plateau image is eventually periodic (the lattice
    argument), and at most three distinct limit cycles can occur.
    """
    from .dynamics import segment_image

    reports = []
    seen: set[frozenset[Point]] = set()
    for plat in g.plateau_edges():
        img = segment_image(params, plat)
        if not isinstance(img, Point):
            raise ExactError("plateau image was not a point")
        rep = classify_orbit(params, img, max_iters)
        if not rep.decided:
            raise ExactError("plateau orbit undecided within budget")
        key = frozenset(rep.cycle)
        if key not in seen:
            seen.add(key)
            reports.append(rep)
    if len(reports) > 3:
        raise ExactError(f"{len(reports)} distinct plateau omega-limits; expected <= 3")
    return reports
