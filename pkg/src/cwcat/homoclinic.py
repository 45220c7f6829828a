"""Connections between fixed points, homoclinic cycles, and star neighborhoods.

A fixed vertex ``p`` is left along each of its strictly descending
directions (one exit step), after which the flow takes over. When the orbit
is absorbed at a fixed vertex ``q`` this gives a connection ``p -> q``
whose drop is the change of the lifted potential from ``p`` to the arrival
point. Directed cycles of connections are homoclinic cycles.

Around each fixed vertex the closed star plays the role of the small
neighborhood in which the flow must behave convexly: no orbit may visit a
lift of it in two separate stretches, and no chain of connections may leave
``p`` and come back to a lift of ``p`` arbitrarily far below.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import NamedTuple

from .cellcx import Complex, SignedEdge
from .cocycle import OneForm
from .cover import CoverPoint, LiftedPotential, lift_step, potential
from .errors import BudgetError
from .gradflow import Absorbed, DescendsForever, Flow, Orbit, descending, orbit
from .rational import as_fraction, format_rational

MAX_CYCLE_NODES = 20


def exit_directions(cx: Complex, w: OneForm, p: str, fl: Flow | None = None) -> list[SignedEdge]:
    """Strictly descending signed edges out of ``p``, ascending by edge id."""
    if fl is not None:
        assert p in fl.fixed, f"{p} is not a fixed vertex of the flow"
    return descending(cx, w, p)


@dataclass(frozen=True)
class Connection:
    source: str
    target: str
    drop: Fraction
    exit: SignedEdge
    orbit: Orbit  # launched from the far end of the exit step, from source at shift 0

    def __str__(self) -> str:
        return f"conn {self.source} {self.target} {format_rational(self.drop)} via {self.exit}"


@dataclass(frozen=True)
class ConnectionDigraph:
    nodes: tuple[str, ...]
    edges: tuple[Connection, ...]
    # exits whose orbit never reaches a fixed vertex: (source, exit, orbit)
    escapes: tuple[tuple[str, SignedEdge, Orbit], ...] = ()

    def out_edges(self, p: str) -> list[Connection]:
        return [c for c in self.edges if c.source == p]


def launch(cx: Complex, w: OneForm, fl: Flow, pot: LiftedPotential,
           start: CoverPoint, exit: SignedEdge) -> Orbit:
    """Take the exit step from ``start`` and hand over to the flow."""
    return orbit(cx, w, fl, lift_step(pot, start, exit), pot)


def connections(cx: Complex, w: OneForm, fl: Flow,
                pot: LiftedPotential | None = None) -> ConnectionDigraph:
    pot = pot or potential(cx, w)
    edges, escapes = [], []
    for p in sorted(fl.fixed):
        for e in exit_directions(cx, w, p, fl):
            orb = launch(cx, w, fl, pot, CoverPoint(p), e)
            if isinstance(orb.outcome, Absorbed):
                drop = w.signed(e) + orb.outcome.drop
                assert drop < 0
                edges.append(Connection(p, orb.outcome.vertex, drop, e, orb))
            else:
                escapes.append((p, e, orb))
    return ConnectionDigraph(tuple(sorted(fl.fixed)), tuple(edges), tuple(escapes))


def replay_connection(cx: Complex, w: OneForm, fl: Flow, pot: LiftedPotential,
                      conn: Connection, start: CoverPoint | None = None) -> tuple[CoverPoint, Fraction]:
    """Re-run a connection from a lift of its source; return arrival point and drop."""
    start = start or CoverPoint(conn.source)
    assert start.vertex == conn.source
    orb = launch(cx, w, fl, pot, start, conn.exit)
    if not isinstance(orb.outcome, Absorbed) or orb.outcome.vertex != conn.target:
        raise AssertionError(f"connection {conn} does not reproduce")
    return orb.outcome.arrival, pot.value(orb.outcome.arrival) - pot.value(start)


class HomoclinicCycle(NamedTuple):
    connections: tuple[Connection, ...]
    total_drop: Fraction

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(c.source for c in self.connections)

    def __str__(self) -> str:
        return " ".join(["cycle", *self.nodes, "total", format_rational(self.total_drop)])


def homoclinic_cycles(d: ConnectionDigraph, max_nodes: int = MAX_CYCLE_NODES) -> list[HomoclinicCycle]:
    """All simple directed cycles of the connection digraph, smallest |drop| first.

    Parallel connections give distinct cycles; a self-connection is a cycle
    of length one. Each cycle is found once, rooted at its least node.
    """
    if len(d.nodes) > max_nodes:
        raise BudgetError(f"{len(d.nodes)} fixed points exceed the cycle budget of {max_nodes}")
    index = {p: i for i, p in enumerate(d.nodes)}
    out: dict[str, list[Connection]] = {p: [] for p in d.nodes}
    for c in d.edges:
        out[c.source].append(c)
    found: list[tuple[Connection, ...]] = []

    def extend(root: str, path: list[Connection], on_path: set[str]):
        here = path[-1].target if path else root
        for c in out[here]:
            if c.target == root:
                found.append(tuple(path + [c]))
            elif index[c.target] > index[root] and c.target not in on_path:
                on_path.add(c.target)
                path.append(c)
                extend(root, path, on_path)
                path.pop()
                on_path.discard(c.target)

    for root in d.nodes:
        extend(root, [], {root})
    cycles = [HomoclinicCycle(cyc, sum((c.drop for c in cyc), Fraction(0))) for cyc in found]
    cycles.sort(key=lambda h: (abs(h.total_drop), h.nodes, tuple(str(c.exit) for c in h.connections)))
    return cycles


# -- star neighborhoods -------------------------------------------------------


class IntervalWitness(NamedTuple):
    start: str  # orbit launched from (start, 0)
    lift: Fraction  # shift of the lift of the center whose star is revisited
    times: tuple[int, ...]  # orbit indices inside that lifted star


class ReturnWitness(NamedTuple):
    walk: tuple[Connection, ...]  # chain of connections from (center, 0)
    arrivals: tuple[CoverPoint, ...]
    drop: Fraction  # potential change from (center, 0) to the last arrival


@dataclass(frozen=True)
class StarReport:
    center: str
    threshold: Fraction
    strict: bool
    star: tuple[str, ...]
    interval_ok: bool
    interval_witness: IntervalWitness | None
    return_ok: bool
    return_witness: ReturnWitness | None

    @property
    def passed(self) -> bool:
        return self.interval_ok and self.return_ok

    def scaled(self, factor) -> "StarReport":
        factor = as_fraction(factor)
        iw = self.interval_witness
        if iw is not None:
            iw = iw._replace(lift=iw.lift * factor)
        rw = self.return_witness
        if rw is not None:
            rw = ReturnWitness(rw.walk, tuple(CoverPoint(a.vertex, a.shift * factor) for a in rw.arrivals),
                               rw.drop * factor)
        return StarReport(self.center, self.threshold * factor, self.strict, self.star,
                          self.interval_ok, iw, self.return_ok, rw)

    def __str__(self) -> str:
        lines = [f"star {self.center} N={format_rational(self.threshold)}"
                 f"{' strict' if self.strict else ''}: {' '.join(self.star)}"]
        if self.interval_ok:
            lines.append("interval: pass")
        else:
            iw = self.interval_witness
            lines.append(f"interval: fail orbit from {iw.start} visits lift "
                         f"{format_rational(iw.lift)} at times {' '.join(map(str, iw.times))}")
        if self.return_ok:
            lines.append("return: pass")
        else:
            rw = self.return_witness
            lines.append(f"return: fail drop {format_rational(rw.drop)} via "
                         + " ".join(f"{c.source}->{c.target}[{c.exit}]" for c in rw.walk))
        return "\n".join(lines)


def closed_star(cx: Complex, p: str) -> tuple[str, ...]:
    return tuple(sorted({p, *(cx.head(se) for se in cx.leaving(p))}))


def _star_lifts(cx: Complex, w: OneForm, pot: LiftedPotential, p: str, pt: CoverPoint) -> set[Fraction]:
    """Shifts ``s`` such that ``pt`` lies in the closed star of the lift ``(p, s)``."""
    lifts = set()
    if pt.vertex == p:
        lifts.add(pt.shift)
    base = pot.base
    for se in cx.leaving(p):
        if cx.head(se) == pt.vertex:
            lifts.add(pt.shift - w.signed(se) + (base[pt.vertex] - base[p]))
    return lifts


def _interval_violation(cx, w, pot, p, orb: Orbit) -> IntervalWitness | None:
    def visits(points):
        table: dict[Fraction, list[int]] = {}
        for t, pt in enumerate(points):
            for s in _star_lifts(cx, w, pot, p, pt):
                table.setdefault(s, []).append(t)
        return table

    points = list(orb.points)
    if isinstance(orb.outcome, DescendsForever):
        # pumping moves every lift index by the cycle drop; unroll far enough
        # that any lift is seen in all the passes that can reach it
        table = visits(points)
        if table:
            span = max(table) - min(table)
            pumps = ceil(span / -orb.outcome.cycle_drop) + 2
            points = orb.unrolled(pot, pumps)
    for s, times in sorted(visits(points).items()):
        if times[-1] - times[0] + 1 != len(times):
            return IntervalWitness(orb.start.vertex, s, tuple(times))
    return None


def _closed_walk(d: ConnectionDigraph, p: str) -> tuple[Connection, ...] | None:
    """Shortest chain of connections leaving ``p`` and returning to it."""
    parent: dict[str, Connection] = {}
    queue = deque([p])
    seen = {p}
    while queue:
        u = queue.popleft()
        for c in d.out_edges(u):
            if c.target == p:
                walk = [c]
                v = u
                while v != p:
                    walk.append(parent[v])
                    v = parent[v].source
                return tuple(reversed(walk))
            if c.target not in seen:
                seen.add(c.target)
                parent[c.target] = c
                queue.append(c.target)
    return None


def _return_violation(cx, w, fl, pot, d: ConnectionDigraph, p: str, threshold: Fraction,
                      strict: bool) -> ReturnWitness | None:
    cycle = _closed_walk(d, p)
    if cycle is None:
        return None
    cycle_drop = sum((c.drop for c in cycle), Fraction(0))
    # a chain that comes back once can keep following the same connections
    laps = 1 if strict else max(1, ceil(threshold / -cycle_drop))
    walk = cycle * laps
    here = CoverPoint(p)
    arrivals = []
    for c in walk:
        here, _ = replay_connection(cx, w, fl, pot, c, here)
        arrivals.append(here)
    drop = pot.value(here) - pot.value(CoverPoint(p))
    assert strict or drop <= -threshold
    return ReturnWitness(walk, tuple(arrivals), drop)


def validate_star(cx: Complex, w: OneForm, fl: Flow, p: str, N, strict: bool = False,
                  pot: LiftedPotential | None = None,
                  digraph: ConnectionDigraph | None = None) -> StarReport:
    """Check the closed star of the fixed vertex ``p`` as a convex neighborhood.

    Interval condition: for every orbit launched from a vertex at shift 0,
    the times it spends in any single lift of the star form one block.
    Return condition: no chain of connections leaves ``p`` and reaches a
    lift of ``p`` with drop ``<= -N``; with ``strict`` every return counts.
    """
    N = as_fraction(N)
    if N <= 0:
        raise ValueError("threshold must be positive")
    assert p in fl.fixed, f"{p} is not a fixed vertex of the flow"
    pot = pot or potential(cx, w)
    digraph = digraph or connections(cx, w, fl, pot)
    interval = None
    for v in sorted(cx.vertices):
        interval = _interval_violation(cx, w, pot, p, orbit(cx, w, fl, CoverPoint(v), pot))
        if interval is not None:
            break
    ret = _return_violation(cx, w, fl, pot, digraph, p, N, strict)
    return StarReport(p, N, strict, closed_star(cx, p), interval is None, interval,
                      ret is None, ret)


def dump_connections(d: ConnectionDigraph) -> str:
    return "".join(f"{c}\n" for c in d.edges)


def dump_cycles(cycles) -> str:
    return "".join(f"{h}\n" for h in cycles)
