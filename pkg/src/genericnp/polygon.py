"""Exact Newton and Hodge polygons.

Ordinates are :class:`fractions.Fraction`; a missing point (a vanishing
coefficient) is given ordinate ``math.inf`` and never becomes a vertex.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .strata import StratumParams, y_n

Ordinate = Fraction | float  # float only for math.inf


class DegenerateHullError(ValueError):
    """Raised when the terminal point of a hull has infinite ordinate."""


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex polygon given by its vertices, starting at (0, 0)."""

    vertices: tuple[tuple[int, Fraction], ...]

    def __post_init__(self) -> None:
        if not self.vertices or self.vertices[0] != (0, 0):
            raise ValueError("a Newton polygon starts at (0, 0)")
        slopes = [s for s, _ in self.slopes]
        if any(a >= b for a, b in zip(slopes, slopes[1:])):
            raise ValueError(f"vertices are not strictly convex: {self.vertices}")

    @property
    def slopes(self) -> list[tuple[Fraction, int]]:
        """(slope, horizontal length) per segment, left to right."""
        out = []
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            out.append((Fraction(y1 - y0) / (x1 - x0), x1 - x0))
        return out

    @property
    def width(self) -> int:
        return self.vertices[-1][0]

    @property
    def endpoint(self) -> tuple[int, Fraction]:
        return self.vertices[-1]

    def ordinate(self, x: int | Fraction) -> Fraction:
        if not 0 <= x <= self.width:
            raise ValueError(f"x={x} outside 0..{self.width}")
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            if x0 <= x <= x1:
                return y0 + (y1 - y0) * Fraction(x - x0, x1 - x0)
        return self.vertices[0][1]

    def slope_sequence(self) -> list[Fraction]:
        """Slopes repeated by multiplicity, i.e. the valuations of the roots."""
        return [s for s, length in self.slopes for _ in range(length)]

    def to_tsv(self) -> str:
        return "".join(f"{x}\t{y.numerator}/{y.denominator}\n" for x, y in self.vertices)

    def to_json(self) -> list[list]:
        return [[x, f"{y.numerator}/{y.denominator}"] for x, y in self.vertices]

    @classmethod
    def from_json(cls, data: Sequence[Sequence]) -> NewtonPolygon:
        return cls(tuple((int(x), Fraction(y)) for x, y in data))

    def __str__(self) -> str:
        return ",".join(f"({x},{y})" for x, y in self.vertices)


def lower_convex_hull(points: Iterable[tuple[int, Ordinate]]) -> NewtonPolygon:
    """Lower convex hull of points with distinct integer abscissae.

    Points with infinite ordinate are skipped. The hull must start at (0, 0);
    an infinite ordinate at the largest abscissa raises
    :class:`DegenerateHullError`.
    """
    pts = sorted(points)
    xs = [x for x, _ in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("abscissae must be distinct")
    if not pts or pts[0] != (0, 0):
        raise ValueError("points must include (0, 0) as leftmost point")
    if pts[-1][1] == math.inf:
        raise DegenerateHullError(f"terminal point x={pts[-1][0]} has infinite ordinate")
    finite = [(x, Fraction(y)) for x, y in pts if y != math.inf]
    hull: list[tuple[int, Fraction]] = []
    for pt in finite:
        while len(hull) >= 2 and _not_left_turn(hull[-2], hull[-1], pt):
            hull.pop()
        hull.append(pt)
    return NewtonPolygon(tuple(hull))


def _not_left_turn(a, b, c) -> bool:
    # drop b when it lies on or above segment a-c
    return (b[1] - a[1]) * (c[0] - a[0]) >= (c[1] - a[1]) * (b[0] - a[0])


def hodge_polygon(d: int) -> NewtonPolygon:
    """Vertices (n, n(n+1)/(2d)) for 0 <= n <= d-1."""
    if d < 2:
        raise ValueError("d must be >= 2")
    return lower_convex_hull((n, Fraction(n * (n + 1), 2 * d)) for n in range(d))


def generic_polygon(params: StratumParams) -> NewtonPolygon:
    """Hull of the points (n, Y_n/(p-1)), n = 0..d-1."""
    params.require_generic_tier()
    return lower_convex_hull(
        (n, Fraction(y_n(params, n), params.p - 1)) for n in range(params.d)
    )


def lies_above(a: NewtonPolygon, b: NewtonPolygon) -> bool:
    """True when ``a`` is nowhere below ``b`` on their common range."""
    if a.width != b.width:
        raise ValueError(f"polygons have different widths {a.width} and {b.width}")
    return all(a.ordinate(x) >= b.ordinate(x) for x in range(a.width + 1))


def is_symmetric(a: NewtonPolygon) -> bool:
    """Slope s with length l always pairs with slope 1 - s of the same length."""
    lengths = {s: l for s, l in a.slopes}
    return all(lengths.get(1 - s) == l for s, l in lengths.items())
