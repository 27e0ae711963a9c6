"""Exact piecewise-affine interval self-maps and the trapezoidal reductions.

Covers the two chaos-onset windows: the 6th-return map on the invariant
segment for b in [-112/137, -13/16] (semiconjugate to the trapezoid family
with left slope 16 and right slope -8) and the 7th-return map for b in
[603/874, 563/816] (slopes 16 / -16).  All data is rational, so the turning
orbit either closes (giving an exact Markov entropy for the interval map) or
exhausts its budget (reported undecided, never guessed).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, log
from typing import Optional, Union

from . import intpoly
from .exact import ExactError, format_rational, rational
from .markov import spectral_radius_interval, strongly_connected_components

F = Fraction


@dataclass
class PLIntervalMap:
    """Continuous piecewise-affine map given by breakpoints and values."""

    xs: list[Fraction]
    ys: list[Fraction]

    def __post_init__(self):
        if len(self.xs) != len(self.ys) or len(self.xs) < 2:
            raise ExactError("need matching breakpoint/value lists")
        if any(a >= b for a, b in zip(self.xs, self.xs[1:])):
            raise ExactError("breakpoints must be strictly increasing")

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self.xs[0], self.xs[-1]

    def slopes(self) -> list[Fraction]:
        return [
            (y1 - y0) / (x1 - x0)
            for (x0, x1, y0, y1) in zip(self.xs, self.xs[1:], self.ys, self.ys[1:])
        ]

    def __call__(self, x: Fraction) -> Fraction:
        if not (self.xs[0] <= x <= self.xs[-1]):
            raise ExactError(f"{x} outside domain {self.domain}")
        # binary search for the piece
        lo, hi = 0, len(self.xs) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.xs[mid] <= x:
                lo = mid
            else:
                hi = mid
        x0, x1 = self.xs[lo], self.xs[lo + 1]
        y0, y1 = self.ys[lo], self.ys[lo + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def is_self_map(self) -> bool:
        lo, hi = self.domain
        return all(lo <= y <= hi for y in self.ys)

    def lap_count(self) -> int:
        """Number of maximal runs of constant slope sign."""
        runs = 0
        prev = None
        for s in self.slopes():
            sign = (s > 0) - (s < 0)
            if sign != prev:
                runs += 1
                prev = sign
        return runs

    def simplify(self) -> "PLIntervalMap":
        """Drop breakpoints interior to a straight run."""
        xs = [self.xs[0]]
        ys = [self.ys[0]]
        slopes = self.slopes()
        for i in range(1, len(self.xs) - 1):
            if slopes[i - 1] != slopes[i]:
                xs.append(self.xs[i])
                ys.append(self.ys[i])
        xs.append(self.xs[-1])
        ys.append(self.ys[-1])
        return PLIntervalMap(xs, ys)

    def compose_with(self, outer: "PLIntervalMap") -> "PLIntervalMap":
        """outer o self, exact; breakpoints are preimages of outer's."""
        xs = set(self.xs)
        targets = set(outer.xs)
        for (x0, x1, y0, y1) in zip(self.xs, self.xs[1:], self.ys, self.ys[1:]):
            if y0 == y1:
                continue
            for t in targets:
                lo, hi = min(y0, y1), max(y0, y1)
                if lo <= t <= hi:
                    x = x0 + (t - y0) * (x1 - x0) / (y1 - y0)
                    xs.add(x)
        xs = sorted(xs)
        ys = [outer(self(x)) for x in xs]
        return PLIntervalMap(xs, ys).simplify()

    def to_json(self) -> dict:
        return {
            "domain": [format_rational(self.xs[0]), format_rational(self.xs[-1])],
            "breaks": [format_rational(x) for x in self.xs],
            "values": [format_rational(y) for y in self.ys],
        }


@dataclass(frozen=True)
class TrapezoidParams:
    x: Fraction  # inverse of the left slope
    y: Fraction  # minus the inverse of the right slope
    z: Fraction  # plateau length

    def __post_init__(self):
        for v in (self.x, self.y, self.z):
            if not (0 < v < 1):
                raise ExactError("trapezoid parameters must lie in (0, 1)")


def make_trapezoid(p: TrapezoidParams) -> PLIntervalMap:
    """The unimodal-with-plateau self-map of [0, 1].

    Plateau height H solves H*Y = 1 - X*H - Z (both endpoints to zero), so
    H = (1 - Z)/(X + Y); inconsistent parameters (H outside (0, 1]) are a
    domain error.
    """
    h = (1 - p.z) / (p.x + p.y)
    if not (0 < h <= 1):
        raise ExactError(f"trapezoid has plateau height {h} outside (0, 1]")
    left = p.x * h
    right = left + p.z
    if not (0 < left < right < 1):
        raise ExactError("trapezoid pieces do not fit in [0, 1]")
    return PLIntervalMap([F(0), left, right, F(1)], [F(0), h, h, F(0)])


# ---------------------------------------------------------------------------
# the two return-map windows

WINDOW_A = (F(-112, 137), F(-13, 16))   # 6th return on the slope-1 segment
WINDOW_B = (F(603, 874), F(563, 816))   # 7th return on the horizontal segment


def _pl(xs: list[Fraction], ys: list[Fraction]) -> PLIntervalMap:
    """Build a PL map, merging coincident breakpoints (window endpoints)."""
    out_x: list[Fraction] = []
    out_y: list[Fraction] = []
    for x, y in zip(xs, ys):
        if out_x and x == out_x[-1]:
            if y != out_y[-1]:
                raise ExactError("inconsistent values at a collapsed breakpoint")
            continue
        out_x.append(x)
        out_y.append(y)
    return PLIntervalMap(out_x, out_y)


def reduce_return_map(params) -> tuple[PLIntervalMap, TrapezoidParams, int]:
    """The exact return map, its trapezoid parameters and the return period.

    Window A (b in [-112/137, -13/16]): the 6th-return map on the invariant
    segment {(x, x+b+1)} has pieces of slope 16, 0, -8, 0; the collapsed and
    rescaled family is the trapezoid with X=1/16, Y=1/8 and plateau length
    Z = 55b/(16(3b-1)).  Window B (b in [603/874, 563/816]): the 7th-return
    map on {(x, 2b-1)} has slopes 16, 0, -16 and Z = (45-60b)/(48b-29).
    """
    if params.a != -1:
        raise ExactError("reduce_return_map expects the normalized map (a = -1)")
    b = params.b
    if WINDOW_A[0] <= b <= WINDOW_A[1]:
        gmap = _pl(
            [-9 * b - 8, -b / 2 - 1, -b - 1, F(0), -b],
            [-137 * b - 112, -b, -b, -9 * b - 8, -9 * b - 8],
        )
        z = 55 * b / (16 * (3 * b - 1))
        return gmap, TrapezoidParams(F(1, 16), F(1, 8), z), 6
    if WINDOW_B[0] <= b <= WINDOW_B[1]:
        gmap = _pl(
            [300 - 435 * b, 2 * b - F(3, 2), F(0), 29 * b - 20],
            [4 - 3 * b + 16 * (300 - 435 * b), 29 * b - 20, 29 * b - 20,
             -20 + 29 * b - 16 * (29 * b - 20)],
        )
        z = (45 - 60 * b) / (48 * b - 29)
        return gmap, TrapezoidParams(F(1, 16), F(1, 16), z), 7
    raise ExactError(f"b={b} outside both trapezoidal-reduction windows")


def reduction_chain(params) -> dict[str, PLIntervalMap]:
    """The intermediate maps of the window-A reduction, implemented literally
    so each can be unit-tested against its displayed formula."""
    b = params.b
    if not (WINDOW_A[0] <= b <= WINDOW_A[1]):
        raise ExactError("reduction chain is the window-A construction")
    gbar = reduce_return_map(params)[0]
    # conjugated to [0,1]
    den = b + 1
    gtilde = PLIntervalMap(
        [F(0), (17 * b + 14) / (16 * den), (8 * b + 7) / (8 * den), (9 * b + 8) / (8 * den), F(1)],
        [-(16 * b + 13) / den, F(1), F(1), F(0), F(0)],
    )
    # collapse the final constant piece
    top = (9 * b + 8) / (8 * den)
    u = (137 * b + 112) / (128 * den)
    v = 7 * (9 * b + 8) / (64 * den)
    gstar = PLIntervalMap(
        [F(0), u, v, top],
        [-(16 * b + 13) / den, top, top, F(0)],
    )
    # extension to the trapezoid over [x1, x2]
    x1 = (16 * b + 13) / (15 * den)
    x2 = (119 * b + 107) / (120 * den)
    ghat = PLIntervalMap(
        [x1, u, v, x2],
        [16 * x1 - (16 * b + 13) / den, top, top, -8 * x2 + (9 * b + 8) / den],
    )
    return {"gbar": gbar, "gtilde": gtilde, "gstar": gstar, "ghat": ghat}


# ---------------------------------------------------------------------------
# entropy of interval maps


@dataclass
class LapEntropyResult:
    lap_upper: float                 # min over m of log lap(f^m)/m  (certified)
    lap_counts: list[int]
    exact: Optional[tuple[Fraction, Fraction]]  # rho enclosure when the
                                                # turning orbit closes
    truncated: bool

    @property
    def positive(self) -> Optional[bool]:
        if self.exact is not None:
            return self.exact[0] > 1
        if self.lap_upper < 1e-12:
            return False
        return None  # undecided

    def entropy_value(self) -> Optional[float]:
        if self.exact is None:
            return None
        lo, hi = self.exact
        mid = (lo + hi) / 2
        return log(float(mid)) if mid > 1 else 0.0


def _orbit_closure_partition(f: PLIntervalMap, budget: int) -> Optional[list[Fraction]]:
    """Breakpoints plus forward orbits of their values; None if not closed."""
    pts = set(f.xs)
    frontier = sorted(set(f.ys))
    added = 0
    lo, hi = f.domain
    while frontier:
        v = frontier.pop()
        if v in pts:
            continue
        if not (lo <= v <= hi):
            return None
        pts.add(v)
        added += 1
        if added > budget:
            return None
        frontier.append(f(v))
    return sorted(pts)


def _markov_entropy(f: PLIntervalMap, partition: list[Fraction]):
    """Transition matrix of the Markov partition: J -> K iff K inside f(J)."""
    n = len(partition) - 1
    rows = []
    for i in range(n):
        a, bb = partition[i], partition[i + 1]
        fa, fb = f(a), f(bb)
        lo, hi = min(fa, fb), max(fa, fb)
        row = [1 if lo <= partition[j] and partition[j + 1] <= hi else 0 for j in range(n)]
        rows.append(row)
    return spectral_radius_interval(rows, F(1, 10**12))


def _sign_runs(f: PLIntervalMap, u: Fraction, v: Fraction):
    """Maximal slope-sign runs of f restricted to [u, v]: (lo, hi, sign)."""
    cuts = [u] + [x for x in f.xs if u < x < v] + [v]
    runs = []
    for a, b in zip(cuts, cuts[1:]):
        fa, fb = f(a), f(b)
        sign = (fb > fa) - (fb < fa)
        if runs and runs[-1][2] == sign:
            runs[-1] = (runs[-1][0], b, sign)
        else:
            runs.append((a, b, sign))
    return runs


def lap_counts(f: PLIntervalMap, depth: int) -> list[int]:
    """lap(f^m) for m = 1..depth, by propagating merged image intervals.

    Each monotone lap of f^m is represented by its image interval; laps with
    identical images are merged with multiplicity, so the state stays small
    even when lap counts grow exponentially.  Constant laps are points and
    stay single laps forever.
    """
    f = f.simplify()
    intervals: dict[tuple[Fraction, Fraction], int] = {}
    points: dict[Fraction, int] = {}
    counts = []
    for a, b, sign in _sign_runs(f, *f.domain):
        if sign == 0:
            points[f(a)] = points.get(f(a), 0) + 1
        else:
            key = tuple(sorted((f(a), f(b))))
            intervals[key] = intervals.get(key, 0) + 1
    counts.append(sum(intervals.values()) + sum(points.values()))
    for _ in range(depth - 1):
        new_iv: dict[tuple[Fraction, Fraction], int] = {}
        new_pt: dict[Fraction, int] = {}
        for (u, v), mult in intervals.items():
            for a, b, sign in _sign_runs(f, u, v):
                if sign == 0:
                    val = f(a)
                    new_pt[val] = new_pt.get(val, 0) + mult
                else:
                    key = tuple(sorted((f(a), f(b))))
                    new_iv[key] = new_iv.get(key, 0) + mult
        for p, mult in points.items():
            fp = f(p)
            new_pt[fp] = new_pt.get(fp, 0) + mult
        intervals, points = new_iv, new_pt
        counts.append(sum(intervals.values()) + sum(points.values()))
    return counts


def lap_entropy(f: PLIntervalMap, depth: int = 20,
                orbit_budget: int = 10_000) -> LapEntropyResult:
    """Entropy data for a piecewise-monotone rational map.

    lap(f^m) is submultiplicative, so every log lap(f^m)/m is a certified
    upper bound for the entropy.  With rational data the turning orbit is
    eventually periodic whenever it closes within budget, in which case the
    orbit-closure partition is Markov and the entropy is exact.
    """
    laps = lap_counts(f, depth)
    upper = min(log(c) / (i + 1) for i, c in enumerate(laps))
    partition = _orbit_closure_partition(f, orbit_budget)
    exact = _markov_entropy(f, partition) if partition else None
    return LapEntropyResult(upper, laps, exact, truncated=False)


def bracket_onset(which: str, tol: Union[Fraction, str] = F(1, 1000),
                  orbit_budget: int = 10_000) -> tuple[Fraction, Fraction]:
    """Bisection bracket for the chaos-onset parameter alpha or beta.

    The trapezoid entropy is monotone in Z and Z is monotone in b on both
    windows, so bisection on the positivity predicate of the reduced map is
    sound.  Probes too close to the onset may not decide within the orbit
    budget; such probes are retried at nearby offsets with escalating
    budgets, and if nothing decides the current (wider) bracket is returned
    rather than a guessed one.
    """
    from .dynamics import MapParams

    tol = rational(tol)
    if which == "alpha":
        lo, hi = WINDOW_A
    elif which == "beta":
        lo, hi = WINDOW_B
    else:
        raise ExactError("which must be 'alpha' or 'beta'")

    def positive_at(b: Fraction) -> Optional[bool]:
        gmap, tp, period = reduce_return_map(MapParams.make(-1, b))
        for budget in (orbit_budget, orbit_budget * 10, orbit_budget * 40):
            res = lap_entropy(make_trapezoid(tp), depth=10, orbit_budget=budget)
            if res.positive is not None:
                return res.positive
        return None

    def decided_probe(a: Fraction, b: Fraction) -> Optional[tuple[Fraction, bool]]:
        """First decidable probe strictly inside (a, b), midpoint first."""
        w = b - a
        for frac in (F(1, 2), F(2, 5), F(3, 5), F(1, 3), F(2, 3), F(1, 4), F(3, 4)):
            x = a + w * frac
            verdict = positive_at(x)
            if verdict is not None:
                return x, verdict
        return None

    # Entropy is zero on the low-b side of each window, positive on the
    # high-b side; maintain (zlo: verified zero or window end, zhi: verified
    # positive or window end).
    zlo, zhi = lo, hi
    while zhi - zlo > tol:
        hit = decided_probe(zlo, zhi)
        if hit is None:
            break
        x, verdict = hit
        if verdict:
            zhi = x
        else:
            zlo = x
    # pull window-end endpoints strictly inside with small verified probes
    width = zhi - zlo
    if zlo == lo:
        for frac in (F(1, 16), F(1, 8), F(1, 32), F(1, 4)):
            x = zlo + width * frac
            if x < zhi and positive_at(x) is False:
                zlo = x
                break
    if zhi == hi:
        for frac in (F(1, 16), F(1, 8), F(1, 32), F(1, 4)):
            x = zhi - width * frac
            if x > zlo and positive_at(x) is True:
                zhi = x
                break
    return zlo, zhi
