"""Exact rational scalars, points, segments and the four lattice directions.

Everything downstream (orbit iteration, graph instantiation, covering
matrices) is built on these types.  All arithmetic is over ``fractions.
Fraction``; floats appear nowhere except in final reporting of logarithms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Union

Rational = Fraction

_DECIMAL_RE = re.compile(r"^[+-]?(\d+)?\.(\d+)$")


class ExactError(ValueError):
    """Domain error raised by the exact-geometry layer."""


def rational(value: Union[int, str, Fraction]) -> Fraction:
    """Parse a rational from an int, a Fraction or a string "p/q".

    Decimal strings are accepted and converted to the exact fraction they
    spell (e.g. "0.2" -> 1/5); binary floats are rejected so no rounding
    noise can leak in.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ExactError("float input rejected; pass a string or Fraction")
    text = value.strip()
    if _DECIMAL_RE.match(text):
        return Fraction(text)
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ExactError(f"not a rational: {value!r}") from exc


def format_rational(value: Fraction) -> str:
    """Serialize as "p/q", omitting the denominator when it is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Direction(Enum):
    """The four admissible edge directions plus the degenerate one."""

    V1 = (1, 0)
    V2 = (0, 1)
    V3 = (1, 1)
    V4 = (1, -1)
    ZERO = (0, 0)

    @property
    def vector(self) -> tuple[int, int]:
        return self.value


def classify_direction(dx: Fraction, dy: Fraction) -> Direction:
    """Direction tag of a displacement, or raise if it is not one of the four.

    A displacement outside {v1, v2, v3, v4} signals a transcription or
    construction bug, so it is an error rather than a fifth tag.
    """
    if dx == 0 and dy == 0:
        return Direction.ZERO
    if dy == 0:
        return Direction.V1
    if dx == 0:
        return Direction.V2
    if dx == dy:
        return Direction.V3
    if dx == -dy:
        return Direction.V4
    raise ExactError(f"non-atlas direction ({dx}, {dy})")


@dataclass(frozen=True, order=True)
class Point:
    x: Fraction
    y: Fraction

    def __iter__(self):
        yield self.x
        yield self.y

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def scale(self, k: Fraction) -> "Point":
        return Point(self.x * k, self.y * k)

    def to_strings(self) -> list[str]:
        return [format_rational(self.x), format_rational(self.y)]

    def __str__(self) -> str:  # pragma: no cover - debugging aid
        return f"({format_rational(self.x)}, {format_rational(self.y)})"


def point(x, y) -> Point:
    return Point(rational(x), rational(y))


@dataclass(frozen=True)
class Segment:
    """Closed non-degenerate segment, endpoints stored in lexicographic order.

    Only displacements parallel to one of the four atlas directions are
    representable; the constructor enforces this.
    """

    p: Point
    q: Point

    def __post_init__(self):
        if self.p == self.q:
            raise ExactError("degenerate segment; use Point instead")
        classify_direction(self.q.x - self.p.x, self.q.y - self.p.y)
        if self.q < self.p:
            lo, hi = self.q, self.p
            object.__setattr__(self, "p", lo)
            object.__setattr__(self, "q", hi)

    @property
    def direction(self) -> Direction:
        return classify_direction(self.q.x - self.p.x, self.q.y - self.p.y)

    def length_squared(self) -> Fraction:
        dx = self.q.x - self.p.x
        dy = self.q.y - self.p.y
        return dx * dx + dy * dy

    def midpoint(self) -> Point:
        return Point((self.p.x + self.q.x) / 2, (self.p.y + self.q.y) / 2)

    def contains_point(self, pt: Point) -> bool:
        dx, dy = self.q.x - self.p.x, self.q.y - self.p.y
        ex, ey = pt.x - self.p.x, pt.y - self.p.y
        if dx * ey - dy * ex != 0:
            return False
        t = _project(self, pt)
        return 0 <= t <= 1

    def point_at(self, t: Fraction) -> Point:
        return Point(
            self.p.x + t * (self.q.x - self.p.x),
            self.p.y + t * (self.q.y - self.p.y),
        )

    def __str__(self) -> str:  # pragma: no cover - debugging aid
        return f"[{self.p} -- {self.q}]"


def _project(seg: Segment, pt: Point) -> Fraction:
    dx, dy = seg.q.x - seg.p.x, seg.q.y - seg.p.y
    if dx != 0:
        return (pt.x - seg.p.x) / dx
    return (pt.y - seg.p.y) / dy


def segment(p: Point, q: Point) -> Union[Segment, Point]:
    """Segment through two points, collapsing to the point when they agree."""
    if p == q:
        return p
    return Segment(p, q)


@dataclass(frozen=True)
class ParamScalar:
    """Value affine in the parameter b: ``c0 + c1*b``.

    This is the currency of the graph atlas: every catalogued coordinate is
    of this form, and instantiation at rational b is exact.
    """

    c0: Fraction
    c1: Fraction

    def __call__(self, b: Fraction) -> Fraction:
        return self.c0 + self.c1 * b

    def __add__(self, other: "ParamScalar") -> "ParamScalar":
        return ParamScalar(self.c0 + other.c0, self.c1 + other.c1)

    def __sub__(self, other: "ParamScalar") -> "ParamScalar":
        return ParamScalar(self.c0 - other.c0, self.c1 - other.c1)

    def scale(self, k: Fraction) -> "ParamScalar":
        return ParamScalar(self.c0 * k, self.c1 * k)

    def to_json(self) -> dict:
        return {"c0": format_rational(self.c0), "c1": format_rational(self.c1)}

    @classmethod
    def from_json(cls, data: dict) -> "ParamScalar":
        return cls(rational(data["c0"]), rational(data["c1"]))

    @classmethod
    def constant(cls, value) -> "ParamScalar":
        return cls(rational(value), Fraction(0))

    def __str__(self) -> str:  # pragma: no cover - debugging aid
        return f"{format_rational(self.c0)}+{format_rational(self.c1)}b"


@dataclass(frozen=True)
class ParamPoint:
    """Point whose coordinates are affine in b."""

    x: ParamScalar
    y: ParamScalar

    def __call__(self, b: Fraction) -> Point:
        return Point(self.x(b), self.y(b))

    def to_json(self) -> dict:
        return {"x": self.x.to_json(), "y": self.y.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "ParamPoint":
        return cls(ParamScalar.from_json(data["x"]), ParamScalar.from_json(data["y"]))


def lex_sorted(points: Iterable[Point]) -> list[Point]:
    return sorted(points)
