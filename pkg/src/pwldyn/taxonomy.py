"""Closed-form periodic data for a >= 0, where every orbit is eventually
periodic and the periodic set is a fixed point plus at most two 3-cycles."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .dynamics import MapParams, normalize_params
from .exact import ExactError, Point

F = Fraction


@dataclass
class PeriodicData:
    fixed: Point
    cycles: list[list[Point]]
    collapse_iters: Optional[int]   # n with F^n == fixed everywhere, if finite

    def periodic_points(self) -> set[Point]:
        pts = {self.fixed}
        for cyc in self.cycles:
            pts.update(cyc)
        return pts


def nonneg_case_data(params: MapParams) -> PeriodicData:
    """Periodic structure of the normalized map with a in {0, 1}."""
    norm, _lam = normalize_params(params)
    a, b = norm.a, norm.b
    if a < 0:
        raise ExactError("taxonomy covers a >= 0 only")
    if a == 1:
        if b <= 2:
            fixed = Point(2 - b, F(1))
            iters = 5 if b >= F(-1, 2) else 6
            return PeriodicData(fixed, [], iters)
        fixed = Point((2 - b) / 5, (1 + 2 * b) / 5)
        cyc_p = [Point(b - 2, F(1)), Point(b - 2, 2 * b - 3), Point(2 - b, F(1))]
        cyc_q = [
            Point((b - 2) / 3, (2 * b - 1) / 3),
            Point((2 - b) / 3, (2 * b - 1) / 3),
            Point((2 - b) / 3, F(1)),
        ]
        return PeriodicData(fixed, [cyc_p, cyc_q], None)
    # a == 0, so b normalizes to -1, 0 or 1
    if b == 1:
        fixed = Point(F(-1, 5), F(2, 5))
        cyc_p = [Point(F(1), F(0)), Point(F(1), F(2)), Point(F(-1), F(0))]
        cyc_q = [
            Point(F(-1, 3), F(0)),
            Point(F(-1, 3), F(2, 3)),
            Point(F(1, 3), F(2, 3)),
        ]
        return PeriodicData(fixed, [cyc_p, cyc_q], None)
    if b == -1:
        return PeriodicData(Point(F(1), F(0)), [], 6)
    if b == 0:
        return PeriodicData(Point(F(0), F(0)), [], 5)
    raise ExactError(f"unexpected normalized parameters a={a}, b={b}")
