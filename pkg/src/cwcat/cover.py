"""Lazy model of the cover on which a closed form becomes exact.

A point of the cover is a base vertex plus a rational *shift*. The lifted
potential is ``h(v) + shift`` where ``h`` integrates the form along the
spanning tree, so stepping along a tree edge never changes the shift and
stepping along a non-tree edge moves it by a multiple of that edge's
period. Deck transformations add elements of the period group to the shift.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, NamedTuple

from .cellcx import Complex, Path, SignedEdge, SpanningForest, path_end, spanning_forest
from .cocycle import OneForm, require_closed, tree_potential
from .errors import InvalidPathError
from .rational import as_fraction, format_rational


class CoverPoint(NamedTuple):
    vertex: str
    shift: Fraction = Fraction(0)

    def shifted(self, by) -> "CoverPoint":
        return CoverPoint(self.vertex, self.shift + as_fraction(by))

    def __str__(self) -> str:
        return f"({self.vertex}, {format_rational(self.shift)})"


@dataclass(frozen=True, eq=False)
class LiftedPotential:
    complex: Complex
    form: OneForm
    forest: SpanningForest
    base: dict = field(repr=False)  # vertex -> h(v)

    def value(self, pt: CoverPoint) -> Fraction:
        return self.base[pt.vertex] + pt.shift


def potential(cx: Complex, w: OneForm) -> LiftedPotential:
    require_closed(cx, w)
    forest = spanning_forest(cx)
    return LiftedPotential(cx, w, forest, tree_potential(cx, w, forest))


def lift_step(pot: LiftedPotential, pt: CoverPoint, se: SignedEdge) -> CoverPoint:
    cx = pot.complex
    if not cx.has_edge(se.edge):
        raise InvalidPathError(f"unknown edge {se.edge!r}")
    tail, head = cx.tail(se), cx.head(se)
    if tail != pt.vertex:
        raise InvalidPathError(f"{se} does not start at {pt.vertex!r}")
    shift = pt.shift + pot.form.signed(se) - (pot.base[head] - pot.base[tail])
    return CoverPoint(head, shift)


class LiftedPath(NamedTuple):
    end: CoverPoint
    points: tuple[CoverPoint, ...]  # start first
    values: tuple[Fraction, ...]  # lifted potential at each point

    @property
    def drop(self) -> Fraction:
        return self.values[-1] - self.values[0]


def lift_path(pot: LiftedPotential, start: CoverPoint, path: Path) -> LiftedPath:
    if path.start != start.vertex:
        raise InvalidPathError(f"path starts at {path.start!r}, point lies over {start.vertex!r}")
    path_end(pot.complex, path)
    points = [start]
    for se in path.steps:
        points.append(lift_step(pot, points[-1], se))
    values = tuple(pot.value(p) for p in points)
    return LiftedPath(points[-1], tuple(points), values)


def deck_generator(periods: Iterable) -> Fraction:
    """Nonnegative generator of the subgroup of Q spanned by ``periods``.

    Finitely many rationals always span a cyclic group: clear denominators,
    take the integer gcd, divide back.
    """
    values = [as_fraction(p) for p in periods]
    nonzero = [p for p in values if p]
    if not nonzero:
        return Fraction(0)
    den = lcm(*(p.denominator for p in nonzero))
    g = 0
    for p in nonzero:
        g = gcd(g, abs(p.numerator * (den // p.denominator)))
    return Fraction(g, den)


def in_deck_group(x, periods: Iterable) -> bool:
    x = as_fraction(x)
    g = deck_generator(periods)
    if g == 0:
        return x == 0
    return (x / g).denominator == 1
