"""Per-window entropy dispatch for the a < 0 family.

For each parameter window the §-machinery gives one of: an exact value (the
partition closes into a Markov one), a certified zero (upper-bound matrix
with spectral radius 1, or circle rotation theory), a certified lower bound
(an inclusion submatrix forced at the queried parameter), or a trapezoid
bracket near the two onset parameters.  Every number reported here is
recomputed at the queried b; window-level claims are provenance, not values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import log
from typing import Optional

from . import intpoly
from .catalog import graph_for
from .circle import rotation_number
from .dynamics import MapParams, normalize_params, segment_image
from .exact import ExactError, Point, Segment, segment
from .markov import CoverMatrix, build_cover, char_poly, spectral_radius_interval
from .trapezoid import (
    WINDOW_A,
    WINDOW_B,
    lap_entropy,
    make_trapezoid,
    reduce_return_map,
)

F = Fraction

H1_POLY = [-2, -1, 0, 0, 0, 0, 1]       # x^6 - x - 2
H2_POLY = [-1, -1, 0, 0, 0, 0, 1]       # x^6 - x - 1
H3_POLY = [-1, 0, 0, -1, 0, 0, 0, 1]    # x^7 - x^3 - 1
H4_POLY = [-1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 0, 1]  # x^11 - x^7 - 1
H5_POLY = [-1, 0, 0, -1, -1, 0, 0, 1]   # x^7 - x^4 - x^3 - 1
LN2_6 = log(2) / 6


def named_root(poly) -> float:
    lo, hi = intpoly.largest_real_root(poly, F(1, 10**13))
    return log(float((lo + hi) / 2))


@dataclass
class EntropyReport:
    b: Fraction
    kind: str                   # "exact" | "zero" | "bound" | "bracket"
    low: float                  # certified lower bound for h(F|Gamma)
    high: Optional[float]       # certified upper bound (None = none computed)
    provenance: str
    poly: Optional[list[int]] = None   # defining integer polynomial, if any
    detail: dict = field(default_factory=dict)

    @property
    def value(self) -> Optional[float]:
        if self.kind in ("exact", "zero"):
            return self.low
        return None

    @property
    def positive(self) -> Optional[bool]:
        if self.low > 0:
            return True
        if self.kind in ("exact", "zero") or (self.high is not None and self.high <= 1e-12):
            return False
        return None

    def to_json(self) -> dict:
        return {
            "b": str(self.b),
            "kind": self.kind,
            "low": self.low,
            "high": self.high,
            "value": self.value,
            "positive": self.positive,
            "provenance": self.provenance,
            "poly": self.poly,
            "detail": self.detail,
        }


def _strip_zero_roots(poly: list[int]) -> list[int]:
    p = list(poly)
    while p and p[0] == 0:
        p.pop(0)
    return p


def _engine(params: MapParams, closure_budget: int = 600):
    """Markov engine numbers at the exact parameter: (rho_low, rho_up, markov,
    dominant block polynomial)."""
    case, g, lam = graph_for(params)
    part, M, Mb = build_cover(params, g, closure_budget=closure_budget)
    lo = spectral_radius_interval(M, F(1, 10**12))
    up = spectral_radius_interval(Mb, F(1, 10**12))
    poly = _strip_zero_roots(char_poly(M)) if M.size else [1]
    markov = M.mode == "markov"
    return case, M, Mb, lo, up, markov, poly


# ---------------------------------------------------------------------------
# forced subdiagrams: verified at the queried b, they certify lower bounds


@dataclass(frozen=True)
class ForcedDiagram:
    name: str
    window: tuple[Fraction, Fraction]          # closed window in b
    nodes: dict[str, tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction],
                           tuple[Fraction, Fraction], tuple[Fraction, Fraction]]]
    # node -> ((x0,x1),(y0,y1)) endpoint pair, coordinates affine in b
    arrows: tuple[tuple[str, str], ...]
    poly: tuple[int, ...]

    def verify(self, params: MapParams) -> bool:
        """Every arrow I -> J must satisfy J inside F(I), exactly."""
        b = params.b
        pts = {}
        for node, (p0, p1, q0, q1) in self.nodes.items():
            pts[node] = (
                Point(p0[0] + p0[1] * b, p1[0] + p1[1] * b),
                Point(q0[0] + q0[1] * b, q1[0] + q1[1] * b),
            )
        for src, dst in self.arrows:
            s = segment(*pts[src])
            t = segment(*pts[dst])
            if isinstance(s, Point) or isinstance(t, Point):
                return False
            try:
                img = segment_image(params, s)
            except ExactError:
                return False
            if isinstance(img, Point):
                return False
            if not (img.contains_point(t.p) and img.contains_point(t.q)):
                return False
        return True


def _affine(x0, x1, y0, y1):
    return ((F(x0), F(x1)), (F(y0), F(y1)))


def _node(xa, xb, ya, yb, xc, xd, yc, yd):
    return (
        (F(xa), F(xb)), (F(ya), F(yb)),
        (F(xc), F(xd)), (F(yc), F(yd)),
    )


DIAGRAMS = [
    # h2 window: 7 intervals, loops of length 5 and 6 through C
    ForcedDiagram(
        "loops-5-6",
        (F(-1, 5), F(-1, 9)),
        {
            "A": _node(-1, -1, 0, 0, -2, -1, -1, 0),       # (-b-1,0)-(-b-2,-1)
            "B": _node(0, 9, -1, 0, 0, 1, -1, 0),          # (9b,-1)-(b,-1)
            "C": _node(0, -1, -1, 2, 0, -9, -1, 10),       # (-b,2b-1)-(-9b,10b-1)
            "D": _node(0, -3, -1, 2, 0, -19, -1, 2),       # (-3b,2b-1)-(-19b,2b-1)
            "E": _node(0, -5, -1, 0, 1, -5, 0, 0),         # (-5b,-1)-(-5b+1,0)
            "G": _node(0, -5, 0, 0, 0, -5, 1, -4),         # (-5b,0)-(-5b,-4b+1)
            "H": _node(-1, -5, 0, -4, -1, -1, 0, 0),       # (-5b-1,-4b)-(-b-1,0)
        },
        (("A", "C"), ("C", "D"), ("D", "E"), ("E", "G"), ("G", "A"),
         ("G", "H"), ("H", "B"), ("B", "C")),
        tuple(H2_POLY),
    ),
    # ln2/6 window: two 6-loops through C
    ForcedDiagram(
        "loops-6-6",
        (F(-1, 16), F(-1, 32)),
        {
            "E1": _node(0, -5, -1, 0, 0, -21, -1, -16),    # (-5b,-1)-(-21b,-16b-1)
            "G": _node(0, -5, -1, -4, 0, -5, 0, 0),        # (-5b,-4b-1)-(-5b,0)
            "I": _node(-1, -9, 0, 0, -1, -5, 0, -4),       # (-9b-1,0)-(-5b-1,-4b)
            "J": _node(0, 9, -1, -8, 0, 9, -1, 0),         # (9b,-8b-1)-(9b,-1)
            "C": _node(0, -1, -1, 2, 0, -9, -1, 10),       # (-b,2b-1)-(-9b,10b-1)
            "D": _node(0, -3, -1, 2, 0, -19, -1, 2),       # (-3b,2b-1)-(-19b,2b-1)
            "H1": _node(0, -5, 0, 0, 0, -5, -1, -36),      # (-5b,0)-(-5b,-36b-1)
            "B": _node(-1, -5, 0, -4, -1, -1, 0, 0),       # (-5b-1,-4b)-(-b-1,0)
            "K": _node(0, 1, -1, 0, 0, 9, -1, 0),          # (b,-1)-(9b,-1)
        },
        (("E1", "G"), ("E1", "H1"), ("G", "I"), ("I", "J"), ("J", "C"),
         ("C", "D"), ("D", "E1"), ("H1", "B"), ("B", "K"), ("K", "C")),
        tuple([-2, 0, 0, 0, 0, 0, 1]),                     # x^6 - 2
    ),
    # h3, 5/7 < b <= 3/4: loops of length 4 and 7 through A
    ForcedDiagram(
        "loops-4-7-low",
        (F(5, 7), F(3, 4)),
        {
            "A": _node(-6, 7, -5, 8, 0, -2, 1, -1),        # (7b-6,8b-5)-(-2b,1-b)
            "B": _node(10, -15, -1, 0, 0, 0, -1, 0),       # (-15b+10,-1)-(0,-1)
            "C": _node(0, 0, -1, 0, -2, 3, -1, 0),         # (0,-1)-(3b-2,-1)
            "D": _node(-2, 3, 1, -2, -10, 15, 9, -14),     # (3b-2,1-2b)-(15b-10,-14b+9)
            "E": _node(0, 0, -1, 2, -20, 29, -1, 2),       # (0,2b-1)-(29b-20,2b-1)
            "I": _node(0, 0, -1, 1, -2, 3, -3, 4),         # (0,b-1)-(3b-2,4b-3)
            "G": _node(0, -1, -1, 2, 0, -1, -5, 8),        # (-b,2b-1)-(-b,8b-5)
            "H": _node(0, -1, 1, -2, 4, -7, 5, -8),        # (-b,1-2b)-(-7b+4,-8b+5)
        },
        (("A", "B"), ("A", "C"), ("B", "D"), ("D", "E"), ("E", "A"),
         ("C", "I"), ("I", "G"), ("G", "H"), ("H", "D")),
        tuple(H3_POLY),
    ),
    # h3, 3/4 < b <= 4/5: same diagram with the A/B endpoints of那 window
    ForcedDiagram(
        "loops-4-7-mid",
        (F(3, 4), F(4, 5)),
        {
            "A": _node(0, -1, 1, 0, 0, -2, 1, -1),         # (-b,1)-(-2b,-b+1)
            "B": _node(-2, 1, -1, 0, 0, 0, -1, 0),         # (b-2,-1)-(0,-1)
            "C": _node(0, 0, -1, 0, -2, 3, -1, 0),
            "D": _node(-2, 3, 1, -2, -10, 15, 9, -14),
            "E": _node(0, 0, -1, 2, -20, 29, -1, 2),
            "I": _node(0, 0, -1, 1, -2, 3, -3, 4),
            "G": _node(0, -1, -1, 2, 0, -1, -5, 8),
            "H": _node(0, -1, 1, -2, 4, -7, 5, -8),
        },
        (("A", "B"), ("A", "C"), ("B", "D"), ("D", "E"), ("E", "A"),
         ("C", "I"), ("I", "G"), ("G", "H"), ("H", "D")),
        tuple(H3_POLY),
    ),
    # h3, 4/5 < b <= 6/7: loops of length 7 and 4 through B
    ForcedDiagram(
        "loops-4-7-high",
        (F(4, 5), F(6, 7)),
        {
            "A0": _node(0, -1, 1, 0, -4, 3, -3, 4),        # (-b,1)-(3b-4,4b-3)
            "B": _node(-2, 1, -1, 0, 0, 0, -1, 0),         # (b-2,-1)-(0,-1)
            "D": _node(0, 0, -1, 1, -2, 3, 1, -2),         # (0,b-1)-(3b-2,-2b+1)
            "V": _node(-2, 3, 1, -2, 2, -1, -3, 2),        # (3b-2,-2b+1)-(2-b,2b-3)
            "H": _node(-2, 3, -1, 0, -2, 3, 1, -2),        # (3b-2,-1)-(3b-2,-2b+1)
            "U": _node(-2, 3, -3, 4, -4, 5, -1, 2),        # (3b-2,4b-3)-(5b-4,2b-1)
            "L": _node(0, -1, -1, 2, 0, 0, -1, 2),         # (-b,2b-1)-(0,2b-1)
            "G": _node(0, -2, 1, -1, 1, -3, 0, 0),         # (-2b,-b+1)-(-3b+1,0)
            "E": _node(-4, 5, -1, 2, 4, -3, -1, 2),        # (5b-4,2b-1)-(4-3b,2b-1)
        },
        (("A0", "B"), ("B", "D"), ("B", "V"), ("D", "L"), ("L", "G"),
         ("G", "H"), ("H", "U"), ("U", "A0"), ("V", "E"), ("E", "A0")),
        tuple(H3_POLY),
    ),
    # h4, 6/7 < b <= 12/13: loops of length 11 and 4 through B0
    ForcedDiagram(
        "loops-4-11",
        (F(6, 7), F(12, 13)),
        {
            "A0": _node(0, -1, 1, 0, -4, 3, -3, 4),        # (-b,1)-(3b-4,4b-3)
            "B0": _node(-2, 1, -1, 0, 6, -7, -1, 0),       # (b-2,-1)-(-7b+6,-1)
            "D0": _node(-2, 3, 1, -2, -6, 7, 5, -6),       # (3b-2,-2b+1)-(7b-6,-6b+5)
            "J": _node(0, 0, -1, 2, -4, 5, -1, 2),         # (0,2b-1)-(5b-4,2b-1)
            "A": _node(0, -2, 1, -1, -4, 3, -3, 4),        # (-2b,-b+1)-(3b-4,4b-3)
            "C": _node(0, 0, -1, 0, -2, 3, -1, 0),         # (0,-1)-(3b-2,-1)
            "O": _node(0, 0, -1, 1, 1, -1, 0, 0),          # (0,b-1)-(-b+1,0)
            "N": _node(0, -1, 1, 0, 0, -1, -1, 2),         # (-b,1)-(-b,2b-1)
            "I": _node(0, -1, 1, -2, -2, 1, -1, 0),        # (-b,-2b+1)-(b-2,-1)
            "V": _node(-2, 3, 1, -2, 2, -1, -3, 2),        # (3b-2,-2b+1)-(2-b,2b-3)
            "E": _node(-4, 5, -1, 2, 4, -3, -1, 2),        # (5b-4,2b-1)-(4-3b,2b-1)
        },
        (("A0", "B0"), ("B0", "D0"), ("B0", "V"), ("D0", "J"), ("J", "A"),
         ("A", "C"), ("C", "O"), ("O", "N"), ("N", "I"), ("I", "V"),
         ("V", "E"), ("E", "A0")),
        tuple(H4_POLY),
    ),
]


def forced_bound(params: MapParams) -> Optional[tuple[float, list[int], str]]:
    """Best verified forced-diagram bound at this parameter, if any."""
    best = None
    for diag in DIAGRAMS:
        lo, hi = diag.window
        if lo <= params.b <= hi and diag.verify(params):
            val = named_root(list(diag.poly))
            if best is None or val > best[0]:
                best = (val, list(diag.poly), diag.name)
    return best


# ---------------------------------------------------------------------------
# windows


def entropy_of_case(params: MapParams, closure_budget: int = 600) -> EntropyReport:
    """Labeled entropy result for F restricted to its invariant graph.

    Total over rational b for a < 0 (inputs with a != -1 are normalized by
    the scaling conjugacy, which preserves entropy).
    """
    if params.a >= 0:
        raise ExactError("entropy dispatch applies to a < 0 (use the a >= 0 "
                         "classification: every orbit is eventually periodic)")
    params, _lam = normalize_params(params)
    b = params.b

    if b <= -1:
        case, g, _ = graph_for(params)
        rot = rotation_number(params, g)
        rho = str(rot.value) if rot.decided else "undecided"
        return EntropyReport(
            b, "zero", 0.0, 0.0,
            f"circle case {case.id}: monotone degree-one circle map, "
            f"rotation number {rho}",
            detail={"rotation": rho},
        )

    if F(3, 16) < b < F(4, 15):
        return EntropyReport(
            b, "zero", 0.0, 0.0,
            "graph is a single fixed point; every orbit reaches it",
        )

    if WINDOW_A[0] <= b <= WINDOW_A[1] or WINDOW_B[0] <= b <= WINDOW_B[1]:
        return _trapezoid_window(params)

    case, M, Mb, lo, up, markov, poly = _engine(params, closure_budget)
    h_low = log(float(lo[0])) if lo[0] > 1 else 0.0
    h_up = log(float(up[1])) if up[1] > 1 else 0.0

    window = _window_label(b)
    if markov and window["claim"] == "exact":
        return EntropyReport(
            b, "exact", h_low, h_up,
            f"Markov partition on case {case.id} ({window['name']})",
            poly=poly, detail={"n_intervals": M.size},
        )
    if window["claim"] == "zero":
        if up[1] <= 1:
            return EntropyReport(
                b, "zero", 0.0, 0.0,
                f"upper-bound matrix has spectral radius 1 on case {case.id} "
                f"({window['name']})",
                detail={"n_intervals": M.size},
            )
        return EntropyReport(
            b, "bracket", 0.0, h_up,
            f"zero-entropy window {window['name']}; certification budget "
            f"exhausted (upper bound shown)",
            detail={"n_intervals": M.size},
        )
    # bound windows: engine lower bound, improved by a verified diagram
    forced = forced_bound(params)
    best_low = h_low
    best_poly = poly if markov else None
    note = f"inclusion matrix on case {case.id}"
    if forced and forced[0] > best_low:
        best_low, best_poly, dname = forced
        note = f"forced subdiagram {dname}"
    if markov and window["claim"] == "bound-strict":
        # window where exactness must not be claimed: report the bracket
        return EntropyReport(
            b, "bound", best_low, h_up,
            f"{window['name']}: bound window (exactness not claimed); {note}",
            poly=best_poly,
        )
    if markov:
        return EntropyReport(
            b, "exact", h_low, h_up,
            f"Markov partition on case {case.id} ({window['name']})",
            poly=poly, detail={"n_intervals": M.size},
        )
    return EntropyReport(
        b, "bound", best_low, h_up,
        f"{window['name']}: {note}; upper bound from intersection matrix",
        poly=best_poly,
    )


def _trapezoid_window(params: MapParams) -> EntropyReport:
    gmap, tp, period = reduce_return_map(params)
    res = lap_entropy(make_trapezoid(tp), orbit_budget=50_000)
    h_t = res.entropy_value()
    name = "alpha onset window" if period == 6 else "beta onset window"
    if h_t is not None:
        return EntropyReport(
            params.b, "exact", h_t / period, h_t / period,
            f"{name}: trapezoidal return map of period {period}, turning "
            f"orbit closed (h = h(T)/{period})",
            detail={"Z": str(tp.z), "h_T": h_t},
        )
    return EntropyReport(
        params.b, "bracket", 0.0, res.lap_upper / period,
        f"{name}: turning orbit undecided within budget; lap bound shown",
        detail={"Z": str(tp.z), "lap_upper_T": res.lap_upper},
    )


# windows ordered by precedence: at shared endpoints both claims hold and
# the stronger (earlier) one is reported
_WINDOWS = [
    (F(-3, 4), F(-1, 5), "first exact-value window", "exact"),
    (F(-1, 9), F(-1, 16), "second exact-value window", "exact"),
    (F(2), F(4), "third exact-value window", "exact"),
    (F(-1), F(-112, 137), "post-circle zero window", "zero"),
    (F(-1, 36), F(0), "zero window left of the origin", "zero"),
    (F(0), F(1, 2), "attracting-cycles zero window", "zero"),
    (F(1, 2), F(2, 3), "two-cycle zero window", "zero"),
    (F(2, 3), F(603, 874), "pre-onset zero window", "zero"),
    (F(8), None, "terminal zero window", "zero"),
    (F(-13, 16), F(-3, 4), "onset-to-plateau positive window", "bound"),
    (F(-1, 5), F(-1, 9), "bound window on the lower arc", "bound-strict"),
    (F(-1, 16), F(-1, 36), "two-loop bound window", "bound"),
    (F(563, 816), F(5, 7), "post-onset positive window", "bound"),
    (F(5, 7), F(1), "positive window below 1", "bound"),
    (F(1), F(2), "positive window (1, 2)", "bound"),
    (F(4), F(8), "positive window (4, 8)", "bound"),
]


def _window_label(b: Fraction) -> dict:
    if b == 1:
        return {"name": "exceptional zero parameter", "claim": "zero"}
    for lo, hi, name, claim in _WINDOWS:
        if hi is None:
            if b >= lo:
                return {"name": name, "claim": claim}
        elif lo <= b <= hi:
            return {"name": name, "claim": claim}
    raise ExactError(f"no entropy window for b={b}")
