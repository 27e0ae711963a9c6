"""Interval partitions of an invariant graph, covering matrices, romes and
exact entropy machinery.

The pipeline: partition the graph at its vertices plus the forward closure of
those vertices (budgeted), drop intervals that collapse to points after
finitely many steps, then read off two 0/1 matrices -- the inclusion matrix M
(I_j inside F(I_i), a certified lower bound for the growth number) and the
intersection matrix Mbar (F(I_i) meets the interior of I_j, an upper bound).
When the two agree the partition is Markov and ln(spectral radius) is the
topological entropy of the graph map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from . import intpoly
from .dynamics import MapParams, apply_map, segment_image, split_at_axes
from .exact import Direction, ExactError, Point, Segment
from .planar import PlanarGraph
from .polysets import line_key_of, line_param, point_on_line


@dataclass
class IntervalPartition:
    intervals: list[Segment]
    names: list[str]
    collapsed: list[int]
    point_set: set[Point]

    def surviving(self) -> list[int]:
        dead = set(self.collapsed)
        return [i for i in range(len(self.intervals)) if i not in dead]


@dataclass
class CoverMatrix:
    """0/1 covering matrix over the surviving intervals."""

    entries: list[list[int]]
    names: list[str]
    mode: str  # "markov" when M == Mbar, else "lower" or "upper"

    @property
    def size(self) -> int:
        return len(self.entries)

    def row(self, i: int) -> list[int]:
        return self.entries[i]

    def successors(self, i: int) -> list[int]:
        return [j for j, v in enumerate(self.entries[i]) if v]

    def to_dot(self) -> str:
        lines = ["digraph cover {"]
        for name in self.names:
            lines.append(f'  "{name}";')
        for i, row in enumerate(self.entries):
            for j, v in enumerate(row):
                if v:
                    lines.append(f'  "{self.names[i]}" -> "{self.names[j]}";')
        lines.append("}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# partition construction


def _forward_closure(params: MapParams, graph: PlanarGraph, seeds: Iterable[Point],
                     budget: int) -> set[Point]:
    """Forward orbits of the seeds while they stay on the graph, budgeted."""
    pts = set(seeds)
    frontier = sorted(pts)
    added = 0
    while frontier and added < budget:
        p = frontier.pop(0)
        q = apply_map(params, p)
        if q in pts or not graph.contains_point(q):
            continue
        pts.add(q)
        frontier.append(q)
        added += 1
    return pts


def build_partition(params: MapParams, graph: PlanarGraph,
                    cuts: Iterable[Point] = (), closure_budget: int = 400,
                    collapse_budget: int = 64) -> IntervalPartition:
    """Partition by vertices, extra cuts and their forward closure, then run
    the collapse-elimination pass (intervals whose image chain dies in a
    point are dropped from the covering analysis)."""
    seeds = set(graph.vertices()) | {c for c in cuts}
    for c in cuts:
        if not graph.contains_point(c):
            raise ExactError(f"cut point {c} is not on the graph")
    pts = _forward_closure(params, graph, seeds, closure_budget)
    intervals = graph.edges(extra_cuts=pts)
    point_set = set(pts)
    for seg in intervals:
        point_set.add(seg.p)
        point_set.add(seg.q)

    images: list[Union[Segment, Point]] = [segment_image(params, s) for s in intervals]
    index_of: dict[tuple, int] = {}
    for idx, s in enumerate(intervals):
        index_of[(s.p, s.q)] = idx

    dead: set[int] = set()
    for _ in range(collapse_budget):
        changed = False
        for i, img in enumerate(images):
            if i in dead:
                continue
            if isinstance(img, Point):
                dead.add(i)
                changed = True
                continue
            touched = _overlapping(intervals, img)
            if touched and all(j in dead for j in touched):
                dead.add(i)
                changed = True
        if not changed:
            break
    names = [f"I{k}" for k in range(len(intervals))]
    return IntervalPartition(intervals, names, sorted(dead), point_set)


def _overlapping(intervals: Sequence[Segment], img: Segment) -> list[int]:
    """Indices of partition intervals whose interior meets img."""
    d = img.direction
    key = line_key_of(img.p, d)
    lo = line_param(img.p, d)
    hi = line_param(img.q, d)
    lo, hi = min(lo, hi), max(lo, hi)
    out = []
    for j, seg in enumerate(intervals):
        if seg.direction is not d or line_key_of(seg.p, d) != key:
            continue
        a, b = sorted((line_param(seg.p, d), line_param(seg.q, d)))
        if max(a, lo) < min(b, hi):
            out.append(j)
    return out


def build_cover(params: MapParams, graph: PlanarGraph,
                cuts: Iterable[Point] = (), closure_budget: int = 400,
                collapse_budget: int = 64) -> tuple[IntervalPartition, CoverMatrix, CoverMatrix]:
    """Partition plus the (lower, upper) covering matrices over survivors.

    When every surviving image is an exact union of partition intervals the
    two matrices coincide and the mode is "markov".
    """
    part = build_partition(params, graph, cuts, closure_budget, collapse_budget)
    surv = part.surviving()
    images = [segment_image(params, part.intervals[i]) for i in surv]
    exact = True
    lower = [[0] * len(surv) for _ in surv]
    upper = [[0] * len(surv) for _ in surv]
    for a, (i, img) in enumerate(zip(surv, images)):
        if isinstance(img, Point):
            continue
        if not (graph.contains_segment(img) or graph.contains_point(img.p)):
            raise ExactError(f"image of interval {part.intervals[i]} leaves the graph")
        d = img.direction
        if img.p not in part.point_set or img.q not in part.point_set:
            exact = False
        lo = min(line_param(img.p, d), line_param(img.q, d))
        hi = max(line_param(img.p, d), line_param(img.q, d))
        key = line_key_of(img.p, d)
        for bidx, j in enumerate(surv):
            seg = part.intervals[j]
            if seg.direction is not d or line_key_of(seg.p, d) != key:
                continue
            a0, b0 = sorted((line_param(seg.p, d), line_param(seg.q, d)))
            if max(a0, lo) < min(b0, hi):
                upper[a][bidx] = 1
                if lo <= a0 and b0 <= hi:
                    lower[a][bidx] = 1
    names = [part.names[i] for i in surv]
    mode = "markov" if exact and lower == upper else "bound"
    return (
        part,
        CoverMatrix([row[:] for row in lower], names, "markov" if mode == "markov" else "lower"),
        CoverMatrix([row[:] for row in upper], names, "markov" if mode == "markov" else "upper"),
    )


# ---------------------------------------------------------------------------
# spectral machinery


def strongly_connected_components(adj: Sequence[Sequence[int]]) -> list[list[int]]:
    """Tarjan, iterative."""
    n = len(adj)
    index = [None] * n
    low = [0] * n
    onstack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, iter(adj[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        onstack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] is None:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    onstack[w] = True
                    work.append((w, iter(adj[w])))
                    advanced = True
                    break
                elif onstack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    onstack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def _berkowitz_charpoly(m: list[list[int]]) -> intpoly.Poly:
    """det(xI - M) by the Berkowitz algorithm, exact integers, ascending."""
    n = len(m)
    if n == 0:
        return [1]
    # vectors represent polynomials in descending degree here
    c = [1, -m[0][0]]
    for i in range(1, n):
        r = [m[i][j] for j in range(i)]
        col = [m[j][i] for j in range(i)]
        a = m[i][i]
        # toeplitz coefficients t_0..t_{i+1}
        t = [1, -a]
        vec = col
        sub = [row[:i] for row in m[:i]]
        for _ in range(i - 1):
            t.append(-sum(r[k] * vec[k] for k in range(i)))
            vec = [sum(sub[x][y] * vec[y] for y in range(i)) for x in range(i)]
        t.append(-sum(r[k] * vec[k] for k in range(i)))
        new = [0] * (len(c) + 1)
        for x, cx in enumerate(t):
            for y, cy in enumerate(c):
                if x + y <= len(new) - 1:
                    new[x + y] += cx * cy
        # truncate to degree i+1 polynomial (length i+2)
        c = new[: i + 2]
    return list(reversed(c))


def char_poly(matrix: Union[CoverMatrix, Sequence[Sequence[int]]]) -> intpoly.Poly:
    """Characteristic polynomial det(xI - M), exact, via SCC block product."""
    m = matrix.entries if isinstance(matrix, CoverMatrix) else [list(r) for r in matrix]
    n = len(m)
    comps = strongly_connected_components([[j for j, v in enumerate(row) if v] for row in m])
    poly = [1]
    for comp in comps:
        block = [[m[a][b] for b in comp] for a in comp]
        poly = intpoly.mul(poly, _berkowitz_charpoly(block))
    assert intpoly.degree(poly) == n
    return poly


def spectral_radius_interval(matrix, tol: Fraction = Fraction(1, 10**12)) -> tuple[Fraction, Fraction]:
    """Enclosure of the spectral radius of a nonnegative integer matrix.

    Perron-Frobenius puts the radius at a nonnegative real eigenvalue, so the
    largest real root >= 0 over the SCC blocks is the radius; each block's
    Perron root is simple, which keeps the bisection sound.
    """
    m = matrix.entries if isinstance(matrix, CoverMatrix) else [list(r) for r in matrix]
    if not m:
        return (Fraction(0), Fraction(0))
    comps = strongly_connected_components([[j for j, v in enumerate(row) if v] for row in m])
    best = (Fraction(0), Fraction(0))
    for comp in comps:
        block = [[m[a][b] for b in comp] for a in comp]
        if len(comp) == 1 and block[0][0] == 0:
            continue
        enclosure = intpoly.largest_real_root(_berkowitz_charpoly(block), tol)
        if enclosure is not None and enclosure[1] > best[1]:
            best = enclosure
    return best


def perron_root(obj, tol: Fraction = Fraction(1, 10**12)) -> tuple[Fraction, Fraction]:
    """Largest nonnegative real eigenvalue/root, as an enclosing interval."""
    if isinstance(obj, CoverMatrix) or (obj and isinstance(obj[0], (list, tuple))):
        return spectral_radius_interval(obj, tol)
    enclosure = intpoly.largest_real_root(list(obj), tol)
    return enclosure if enclosure is not None else (Fraction(0), Fraction(0))


# ---------------------------------------------------------------------------
# romes


@dataclass
class Rome:
    vertices: list[int]
    names: list[str]
    # per ordered pair (i, j) of rome-vertex indices: {path length: count}
    simple_paths: dict[tuple[int, int], dict[int, int]]

    def loops_at(self, i: int) -> int:
        return sum(self.simple_paths.get((i, i), {}).values())


def find_rome(m: CoverMatrix) -> Rome:
    """Greedy small rome: repeatedly take a highest-degree vertex on a cycle."""
    n = m.size
    adj = [set(m.successors(i)) for i in range(n)]
    rome: list[int] = []

    def cyclic_vertices(blocked: set[int]) -> set[int]:
        comps = strongly_connected_components(
            [[j for j in adj[i] if j not in blocked] if i not in blocked else []
             for i in range(n)]
        )
        cyc = set()
        for comp in comps:
            if len(comp) > 1:
                cyc.update(comp)
            elif comp and comp[0] in adj[comp[0]] and comp[0] not in blocked:
                cyc.add(comp[0])
        return cyc

    while True:
        cyc = cyclic_vertices(set(rome))
        if not cyc:
            break
        pick = max(cyc, key=lambda v: (len([j for j in adj[v] if j in cyc])
                                       + len([u for u in cyc if v in adj[u]]), -v))
        rome.append(pick)
    rome.sort()
    paths = _simple_paths(m, rome)
    return Rome(rome, [m.names[i] for i in rome], paths)


def _simple_paths(m: CoverMatrix, rome: list[int]) -> dict[tuple[int, int], dict[int, int]]:
    """Counts of rome-to-rome paths whose interior avoids the rome.

    The complement of a rome is acyclic, so path counts per length come from
    a finite DP (lengths are bounded by the vertex count).
    """
    n = m.size
    rset = set(rome)
    outside = [v for v in range(n) if v not in rset]
    # dp[u][L] = number of length-L paths from u to each rome target? do per target
    result: dict[tuple[int, int], dict[int, int]] = {}
    max_len = n + 1
    for a_pos, a in enumerate(rome):
        # counts[v][L]: paths of length L from a to v with interior outside rome
        counts: dict[int, dict[int, int]] = {a: {0: 1}}
        frontier = {a: {0: 1}}
        for _ in range(max_len):
            new: dict[int, dict[int, int]] = {}
            for u, by_len in frontier.items():
                for v in m.successors(u):
                    for L, c in by_len.items():
                        if L + 1 > max_len:
                            continue
                        if v in rset:
                            b_pos = rome.index(v)
                            result.setdefault((a_pos, b_pos), {})
                            result[(a_pos, b_pos)][L + 1] = (
                                result[(a_pos, b_pos)].get(L + 1, 0) + c
                            )
                        else:
                            new.setdefault(v, {})
                            new[v][L + 1] = new[v].get(L + 1, 0) + c
            frontier = new
            if not frontier:
                break
    return result


def verify_rome(m: CoverMatrix, rome_vertices: Iterable[int]) -> bool:
    rset = set(rome_vertices)
    n = m.size
    adj = [[j for j in m.successors(i) if j not in rset] if i not in rset else []
           for i in range(n)]
    for comp in strongly_connected_components(adj):
        if len(comp) > 1:
            return False
        v = comp[0]
        if v not in rset and v in adj[v]:
            return False
    return True


def rome_char_poly(m: CoverMatrix, rome: Rome) -> intpoly.Poly:
    """Characteristic polynomial via the rome determinant identity.

    With A(x) the rome matrix of path generating functions in 1/x, the rome
    identity gives the characteristic polynomial as (-1)^(n-k) x^n
    det(A(x) - E); the result is normalized to the det(xI - M) convention
    (multiply by (-1)^n), i.e. the sign used below is (-1)^k.  The Laurent
    determinant is expanded symbolically and must clear all negative powers.
    """
    if not verify_rome(m, rome.vertices):
        raise ExactError("given vertex set is not a rome")
    k = len(rome.vertices)
    n = m.size
    if k == 0:
        poly = [0] * n + [1]
        return poly
    # Laurent polynomials as {exponent: coeff}, representing sums of x^-L
    mat: list[list[dict[int, int]]] = []
    for i in range(k):
        row = []
        for j in range(k):
            entry = {-L: c for L, c in rome.simple_paths.get((i, j), {}).items()}
            if i == j:
                entry[0] = entry.get(0, 0) - 1
            row.append(entry)
        mat.append(row)
    det = _laurent_det(mat)
    sign = -1 if k % 2 else 1
    poly: dict[int, int] = {}
    for e, c in det.items():
        poly[e + n] = poly.get(e + n, 0) + sign * c
    if any(e < 0 and c for e, c in poly.items()):
        raise ExactError("rome determinant left negative powers; not a rome")
    out = [0] * (max(poly) + 1 if poly else 1)
    for e, c in poly.items():
        if c:
            out[e] = c
    return intpoly.trim(out)


def _laurent_mul(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _laurent_det(mat: list[list[dict[int, int]]]) -> dict[int, int]:
    k = len(mat)
    if k == 1:
        return dict(mat[0][0])
    det: dict[int, int] = {}
    for col in range(k):
        entry = mat[0][col]
        if not entry:
            continue
        minor = [[mat[r][c] for c in range(k) if c != col] for r in range(1, k)]
        sub = _laurent_det(minor)
        term = _laurent_mul(entry, sub)
        sign = -1 if col % 2 else 1
        for e, c in term.items():
            det[e] = det.get(e, 0) + sign * c
    return {e: c for e, c in det.items() if c}


def loop_structure(m: CoverMatrix, rome: Optional[Rome] = None) -> str:
    """Positive/zero-entropy verdict from the rome's loop pattern."""
    if rome is None:
        rome = find_rome(m)
    if not verify_rome(m, rome.vertices):
        raise ExactError("not a rome")
    if not rome.vertices:
        return "zero"
    comps = strongly_connected_components(
        [[j for j in m.successors(i)] for i in range(m.size)]
    )
    comp_of = {}
    for cid, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = cid
    rome_comps = [comp_of[v] for v in rome.vertices]
    if len(set(rome_comps)) < len(rome_comps):
        return "positive"
    for i in range(len(rome.vertices)):
        if rome.loops_at(i) >= 2:
            return "positive"
    if all(rome.loops_at(i) <= 1 for i in range(len(rome.vertices))):
        return "zero"
    return "inconclusive"


# ---------------------------------------------------------------------------
# itinerary growth (independent entropy oracle)


def growth_number(params: MapParams, part: IntervalPartition, m_max: int,
                  state_budget: int = 200_000):
    """Counts N(m) of distinct length-m itineraries, m = 1..m_max.

    Exact forward propagation: every realized itinerary carries the exact
    sub-segments of points following it; counts are therefore not estimates.
    Returns (counts, truncated_flag).
    """
    intervals = part.intervals
    states: dict[tuple[int, ...], list[Segment]] = {
        (i,): [seg] for i, seg in enumerate(intervals)
    }
    counts = [len(states)]
    truncated = False
    for _ in range(m_max - 1):
        new_states: dict[tuple[int, ...], list[Segment]] = {}
        total = 0
        for itin, pieces in states.items():
            for piece in pieces:
                img = segment_image(params, piece)
                if isinstance(img, Point):
                    continue
                d = img.direction
                key = line_key_of(img.p, d)
                lo = min(line_param(img.p, d), line_param(img.q, d))
                hi = max(line_param(img.p, d), line_param(img.q, d))
                for j, seg in enumerate(intervals):
                    if seg.direction is not d or line_key_of(seg.p, d) != key:
                        continue
                    a0, b0 = sorted((line_param(seg.p, d), line_param(seg.q, d)))
                    a1, b1 = max(a0, lo), min(b0, hi)
                    if a1 < b1:
                        sub = Segment(point_on_line(key, a1), point_on_line(key, b1))
                        new_states.setdefault(itin + (j,), []).append(sub)
                        total += 1
            if total > state_budget:
                truncated = True
                break
        if truncated or not new_states:
            break
        states = new_states
        counts.append(len(states))
    return counts, truncated


def power_entropy_check(m: CoverMatrix, n: int, tol: Fraction = Fraction(1, 10**9)) -> bool:
    """rho(M^n) == rho(M)^n within the bisection tolerance."""
    if n < 1:
        raise ExactError("n must be >= 1")
    base = spectral_radius_interval(m, tol)
    powm = _mat_power(m.entries, n)
    powr = spectral_radius_interval(powm, tol)
    lo = base[0] ** n
    hi = base[1] ** n
    return not (powr[1] < lo - tol or powr[0] > hi + tol)


def _mat_power(m: list[list[int]], n: int) -> list[list[int]]:
    size = len(m)
    result = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
    base = [row[:] for row in m]
    while n:
        if n & 1:
            result = _mat_mul(result, base)
        n >>= 1
        if n:
            base = _mat_mul(base, base)
    return result


def _mat_mul(a, b):
    size = len(a)
    return [
        [sum(a[i][k] * b[k][j] for k in range(size)) for j in range(size)]
        for i in range(size)
    ]
