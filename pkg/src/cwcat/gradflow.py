"""Discrete gradient-like flows of a closed form.

A flow fixes a set of vertices and sends every other vertex one step along a
chosen edge on which the form is strictly negative, so the lifted potential
strictly drops at every step. Orbits are followed on the cover; on a finite
complex each one is either absorbed by a fixed vertex or runs into a base
cycle of negative period and descends forever.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

from .cellcx import Complex, SignedEdge
from .cocycle import OneForm
from .cover import CoverPoint, LiftedPotential, lift_step, potential
from .errors import FlowError, FormatError, Violation
from .textio import parse_document

POLICIES = ("steepest", "first")


@dataclass(frozen=True)
class Flow:
    fixed: frozenset[str]
    succ: Mapping[str, SignedEdge] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "fixed", frozenset(self.fixed))
        object.__setattr__(self, "succ", {v: (se if isinstance(se, SignedEdge) else SignedEdge.parse(se))
                                          for v, se in dict(self.succ).items()})


class Absorbed(NamedTuple):
    vertex: str
    arrival: CoverPoint
    drop: Fraction


class DescendsForever(NamedTuple):
    entry: int  # index of the first visit to the repeated base vertex
    cycle: tuple[SignedEdge, ...]
    cycle_drop: Fraction


@dataclass(frozen=True)
class Orbit:
    start: CoverPoint
    steps: tuple[SignedEdge, ...]
    points: tuple[CoverPoint, ...]
    values: tuple[Fraction, ...]
    outcome: Absorbed | DescendsForever

    @property
    def absorbed(self) -> bool:
        return isinstance(self.outcome, Absorbed)

    @property
    def drop(self) -> Fraction:
        """Drop over the recorded steps (total drop when absorbed)."""
        return self.values[-1] - self.values[0]

    def unrolled(self, pot: LiftedPotential, pumps: int) -> list[CoverPoint]:
        """Recorded points followed by ``pumps`` further passes around the cycle."""
        pts = list(self.points)
        if isinstance(self.outcome, DescendsForever):
            for _ in range(pumps):
                for se in self.outcome.cycle:
                    pts.append(lift_step(pot, pts[-1], se))
        return pts


def descending(cx: Complex, w: OneForm, v: str) -> list[SignedEdge]:
    return [se for se in cx.leaving(v) if w.signed(se) < 0]


def forced_fixed(cx: Complex, w: OneForm) -> frozenset[str]:
    """Vertices with no strictly descending direction; no flow can move them."""
    return frozenset(v for v in cx.vertices if not descending(cx, w, v))


def validate_flow(cx: Complex, w: OneForm, fl: Flow) -> list[Violation]:
    report = []
    verts = cx.vertex_set
    for v in sorted(fl.fixed - verts):
        report.append(Violation("unknown vertex", v, "declared fixed"))
    for v in sorted(set(fl.succ) - verts):
        report.append(Violation("unknown vertex", v, "has a successor"))
    for v in sorted(fl.fixed & set(fl.succ)):
        report.append(Violation("fixed vertex moved", v, "both fixed and given a successor"))
    for v in sorted(verts - fl.fixed - set(fl.succ)):
        report.append(Violation("vertex neither fixed nor moved", v))
    forced = forced_fixed(cx, w)
    for v in sorted(set(fl.succ) & verts):
        se = fl.succ[v]
        if not cx.has_edge(se.edge):
            report.append(Violation("unknown edge", v, f"successor {se}"))
            continue
        if cx.tail(se) != v:
            report.append(Violation("successor does not leave vertex", v, f"successor {se}"))
            continue
        if v in forced:
            report.append(Violation("forced vertex moved", v, f"successor {se}"))
        elif w.signed(se) >= 0:
            report.append(Violation("non-strict descent", v,
                                    f"successor {se} has weight {w.signed(se)}"))
    return report


def require_valid_flow(cx: Complex, w: OneForm, fl: Flow) -> None:
    report = validate_flow(cx, w, fl)
    if report:
        raise FlowError("; ".join(map(str, report)))


def build_flow(cx: Complex, w: OneForm, declared_fixed: Iterable[str] | None = None,
               policy: str = "steepest") -> Flow:
    """Move every non-declared vertex along a strictly descending edge.

    ``steepest`` takes the most negative weight (ties: ascending edge id,
    then ``+`` before ``-``); ``first`` takes the least edge id among the
    descending ones. With ``declared_fixed`` left as None only the forced
    vertices are fixed, which is the smallest fixed set any flow can have.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")
    forced = forced_fixed(cx, w)
    declared = forced if declared_fixed is None else frozenset(declared_fixed)
    unknown = declared - cx.vertex_set
    if unknown:
        raise FlowError(f"declared fixed vertices not in complex: {sorted(unknown)}")
    missing = forced - declared
    if missing:
        raise FlowError(f"declared fixed set misses forced vertices {sorted(missing)}")
    succ = {}
    for v in cx.vertices:
        if v in declared:
            continue
        options = descending(cx, w, v)  # already in (edge id, + first) order
        assert options, f"vertex {v} has no descending direction"
        if policy == "steepest":
            succ[v] = min(options, key=w.signed)  # min is stable: first of equal weights wins
        else:
            succ[v] = options[0]
    fl = Flow(declared, succ)
    assert not validate_flow(cx, w, fl)
    return fl


def orbit(cx: Complex, w: OneForm, fl: Flow, start: CoverPoint,
          pot: LiftedPotential | None = None) -> Orbit:
    """Follow the flow from ``start`` until absorption or the first repeated base vertex."""
    pot = pot or potential(cx, w)
    start = CoverPoint(start.vertex, Fraction(start.shift))
    points = [start]
    values = [pot.value(start)]
    steps: list[SignedEdge] = []
    seen = {start.vertex: 0}
    while True:
        here = points[-1]
        if here.vertex in fl.fixed:
            outcome = Absorbed(here.vertex, here, values[-1] - values[0])
            break
        se = fl.succ[here.vertex]
        nxt = lift_step(pot, here, se)
        steps.append(se)
        points.append(nxt)
        values.append(pot.value(nxt))
        assert values[-1] < values[-2], "flow step does not descend"
        if nxt.vertex in seen:
            entry = seen[nxt.vertex]
            outcome = DescendsForever(entry, tuple(steps[entry:]), values[-1] - values[entry])
            break
        seen[nxt.vertex] = len(points) - 1
    return Orbit(start, tuple(steps), tuple(points), tuple(values), outcome)


def omega_limit(cx: Complex, w: OneForm, fl: Flow, v: str,
                pot: LiftedPotential | None = None) -> Absorbed | DescendsForever:
    return orbit(cx, w, fl, CoverPoint(v), pot).outcome


# -- text format --------------------------------------------------------------


def flow_from_document(doc) -> Flow | None:
    """The flow declared by ``fixed``/``succ`` lines, or None when there are none."""
    if not doc.fixed and not doc.succ:
        return None
    fixed, succ = set(), {}
    for line, v in doc.fixed:
        if v in fixed:
            raise FormatError(f"vertex {v!r} declared fixed twice", line)
        fixed.add(v)
    for line, v, (sign, e) in doc.succ:
        if v in succ:
            raise FormatError(f"vertex {v!r} has two successors", line)
        succ[v] = SignedEdge(e, sign)
    return Flow(frozenset(fixed), succ)


def load_flow(text: str) -> Flow | None:
    return flow_from_document(parse_document(text))


def dump_flow(fl: Flow) -> str:
    lines = [f"fixed {v}" for v in sorted(fl.fixed)]
    lines += [f"succ {v} {se}" for v, se in sorted(fl.succ.items())]
    return "".join(line + "\n" for line in lines)
