"""Closed 1-forms as rational edge cochains.

A :class:`OneForm` gives every edge a rational weight, read as the change of
a local potential along the edge's positive orientation. The form is closed
when every face boundary word sums to zero; then integrals only depend on
the homotopy class of the path and the class of the form is pinned down by
its periods on the fundamental cycles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple

from .cellcx import (Complex, Path, SignedEdge, SpanningForest, face_rows,
                     fundamental_cycles, path_end, spanning_forest)
from .errors import FormError, FormatError, InfeasibleClassError, InvalidPathError, MapError, NotClosedError
from .linalg import EchelonSystem, nullspace
from .rational import as_fraction, format_rational
from .textio import parse_document


@dataclass(frozen=True)
class OneForm:
    weights: Mapping[str, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "weights", {k: as_fraction(v) for k, v in self.weights.items()})

    def __hash__(self):
        return hash(frozenset(self.weights.items()))

    def __getitem__(self, edge: str) -> Fraction:
        return self.weights[edge]

    def signed(self, se: SignedEdge) -> Fraction:
        """Weight of ``se`` traversed in its own direction."""
        return se.sign * self.weights[se.edge]

    def scaled(self, factor) -> "OneForm":
        factor = as_fraction(factor)
        return OneForm({k: factor * v for k, v in self.weights.items()})


@dataclass(frozen=True)
class VertexFunction:
    values: Mapping[str, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "values", {k: as_fraction(v) for k, v in self.values.items()})

    def __hash__(self):
        return hash(frozenset(self.values.items()))

    def __getitem__(self, v: str) -> Fraction:
        return self.values[v]


def zero_form(cx: Complex) -> OneForm:
    return OneForm({e.id: Fraction(0) for e in cx.edges})


def check_total(cx: Complex, w: OneForm) -> None:
    missing = [e.id for e in cx.edges if e.id not in w.weights]
    if missing:
        raise FormError(f"missing edge weight for {', '.join(missing)}")
    extra = sorted(set(w.weights) - {e.id for e in cx.edges})
    if extra:
        raise FormError(f"weights given for unknown edges {', '.join(extra)}")


class Closedness(NamedTuple):
    closed: bool
    residuals: dict  # face id -> nonzero boundary sum

    def __bool__(self) -> bool:
        return self.closed


def is_closed(cx: Complex, w: OneForm) -> Closedness:
    check_total(cx, w)
    residuals = {}
    for f in cx.faces:
        s = sum((w.signed(se) for se in f.word), Fraction(0))
        if s:
            residuals[f.id] = s
    return Closedness(not residuals, residuals)


def require_closed(cx: Complex, w: OneForm) -> None:
    report = is_closed(cx, w)
    if not report:
        raise NotClosedError(report.residuals)


def differential(cx: Complex, f: VertexFunction) -> OneForm:
    missing = [v for v in cx.vertices if v not in f.values]
    if missing:
        raise FormError(f"missing vertex value for {', '.join(missing)}")
    return OneForm({e.id: f[e.head] - f[e.tail] for e in cx.edges})


def integrate(cx: Complex, w: OneForm, path: Path) -> Fraction:
    path_end(cx, path)
    try:
        return sum((w.signed(se) for se in path.steps), Fraction(0))
    except KeyError as exc:
        raise FormError(f"missing edge weight for {exc.args[0]}") from None


@dataclass(frozen=True)
class PeriodData:
    """Periods of a closed form on the fundamental cycles, in canonical order."""

    entries: tuple[tuple[str, Fraction], ...]

    @classmethod
    def of(cls, entries) -> "PeriodData":
        if isinstance(entries, Mapping):
            entries = entries.items()
        return cls(tuple((e, as_fraction(p)) for e, p in entries))

    @property
    def edges(self) -> tuple[str, ...]:
        return tuple(e for e, _ in self.entries)

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(p for _, p in self.entries)

    @property
    def generators(self) -> tuple[Fraction, ...]:
        """Nonzero periods; they generate the deck group of the associated cover."""
        return tuple(p for p in self.values if p)

    def scaled(self, factor) -> "PeriodData":
        factor = as_fraction(factor)
        return PeriodData(tuple((e, factor * p) for e, p in self.entries))

    def __str__(self) -> str:
        return "\n".join(f"period {e} = {format_rational(p)}" for e, p in self.entries)


def periods(cx: Complex, w: OneForm, forest: SpanningForest | None = None) -> PeriodData:
    require_closed(cx, w)
    return PeriodData(tuple(
        (eid, integrate(cx, w, loop)) for eid, loop in fundamental_cycles(cx, forest)
    ))


def tree_potential(cx: Complex, w: OneForm, forest: SpanningForest) -> dict[str, Fraction]:
    """Integral of ``w`` from the component root to each vertex along tree edges."""
    values = {r: Fraction(0) for r in forest.roots}
    # parents are settled before children in the order the tree grew, but
    # parent maps carry no order, so resolve lazily
    def value(v: str) -> Fraction:
        chain = []
        while v not in values:
            chain.append(v)
            v = cx.tail(forest.parent[v])
        acc = values[v]
        for u in reversed(chain):
            acc = acc + w.signed(forest.parent[u])
            values[u] = acc
        return acc

    for v in cx.vertices:
        value(v)
    return {v: values[v] for v in cx.vertices}


class Exactness(NamedTuple):
    primitive: VertexFunction | None
    witness: tuple[str, Fraction] | None  # first nonzero period

    def __bool__(self) -> bool:
        return self.primitive is not None


def is_exact(cx: Complex, w: OneForm, forest: SpanningForest | None = None) -> Exactness:
    """Decide whether ``w = df``; if so return the root-normalized primitive ``f``."""
    forest = forest or spanning_forest(cx)
    for eid, p in periods(cx, w, forest).entries:
        if p:
            return Exactness(None, (eid, p))
    f = VertexFunction(tree_potential(cx, w, forest))
    assert differential(cx, f) == w
    return Exactness(f, None)


def combine(a, w1: OneForm, b, w2: OneForm) -> OneForm:
    """Edgewise ``a*w1 + b*w2``."""
    if set(w1.weights) != set(w2.weights):
        raise FormError("forms live on different carriers")
    a, b = as_fraction(a), as_fraction(b)
    return OneForm({k: a * w1[k] + b * w2[k] for k in w1.weights})


class ClassComparison(NamedTuple):
    same: bool
    primitive: VertexFunction | None  # of w1 - w2, when same

    def __bool__(self) -> bool:
        return self.same


def same_class(cx: Complex, w1: OneForm, w2: OneForm) -> ClassComparison:
    require_closed(cx, w1)
    require_closed(cx, w2)
    result = is_exact(cx, combine(1, w1, -1, w2))
    return ClassComparison(bool(result), result.primitive)


def realize_class(cx: Complex, target: PeriodData) -> OneForm:
    """A closed form with the prescribed periods, tree edges pinned to zero.

    Unknowns are the non-tree edge weights. The fundamental-cycle constraints
    are added first, then one homogeneous constraint per face; the first
    constraint that contradicts the earlier ones is reported.
    """
    forest = spanning_forest(cx)
    cycles = fundamental_cycles(cx, forest)
    if tuple(e for e, _ in cycles) != target.edges:
        raise FormError(f"target is indexed by {list(target.edges)}, "
                        f"complex has fundamental cycles {[e for e, _ in cycles]}")
    cols = [e for e, _ in cycles]
    system = EchelonSystem(cols)
    for (eid, loop), value in zip(cycles, target.values):
        row: dict[str, int] = {}
        for se in loop.steps:
            if se.edge not in forest.tree_edges:
                row[se.edge] = row.get(se.edge, 0) + se.sign
        if not system.add(row, value):
            raise InfeasibleClassError(f"period constraint on cycle {eid} is inconsistent",
                                       f"cycle {eid}")
    for f, row in zip(cx.faces, face_rows(cx, cols)):
        if not system.add(row, 0):
            raise InfeasibleClassError(
                f"target is not realizable: face {f.id} forces a different period", f"face {f.id}")
    solution = system.solution()
    weights = {e.id: Fraction(0) for e in cx.edges}
    weights.update(solution)
    w = OneForm(weights)
    require_closed(cx, w)
    return w


def cohomology_basis(cx: Complex) -> list[OneForm]:
    """Closed forms, zero on tree edges, whose classes form a basis of H^1."""
    forest = spanning_forest(cx)
    cols = sorted(e.id for e in cx.edges if e.id not in forest.tree_edges)
    basis = []
    for vec in nullspace(face_rows(cx, cols), cols):
        weights = {e.id: Fraction(0) for e in cx.edges}
        weights.update(vec)
        basis.append(OneForm(weights))
    return basis


@dataclass(frozen=True)
class CellularMap:
    """Vertices to vertices and edges to edge paths of the target complex."""

    domain: Complex
    codomain: Complex
    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, Path]

    def check(self) -> None:
        for v in self.domain.vertices:
            if self.vertex_map.get(v) not in self.codomain.vertex_set:
                raise MapError(f"vertex {v!r} has no image in the target")
        for e in self.domain.edges:
            image = self.edge_map.get(e.id)
            if image is None:
                raise MapError(f"edge {e.id!r} has no image path")
            try:
                end = path_end(self.codomain, image)
            except InvalidPathError as exc:
                raise MapError(f"image of edge {e.id!r}: {exc}") from None
            if image.start != self.vertex_map[e.tail] or end != self.vertex_map[e.head]:
                raise MapError(f"image of edge {e.id!r} runs {image.start}->{end}, "
                               f"expected {self.vertex_map[e.tail]}->{self.vertex_map[e.head]}")


def pullback(m: CellularMap, w: OneForm) -> OneForm:
    """Pull ``w`` back along ``m``.

    If ``w`` is closed the result must be closed too; a face whose image
    loop has nonzero integral means ``m`` does not extend over that 2-cell,
    and is rejected as a malformed map.
    """
    m.check()
    check_total(m.codomain, w)
    pulled = OneForm({e.id: integrate(m.codomain, w, m.edge_map[e.id]) for e in m.domain.edges})
    if is_closed(m.codomain, w):
        report = is_closed(m.domain, pulled)
        if not report:
            raise MapError(f"faces {sorted(report.residuals)} map to loops with nonzero period")
    return pulled


# -- text format --------------------------------------------------------------


def form_from_document(cx: Complex, doc) -> OneForm:
    weights = {}
    for line, eid, value in doc.forms:
        if eid in weights:
            raise FormatError(f"duplicate form entry for {eid!r}", line)
        if not cx.has_edge(eid):
            raise FormatError(f"form entry for undeclared edge {eid!r}", line)
        weights[eid] = value
    w = OneForm(weights)
    check_total(cx, w)
    return w


def values_from_document(cx: Complex, doc) -> VertexFunction:
    values = {}
    for line, v, value in doc.vals:
        if v in values or v not in cx.vertex_set:
            raise FormatError(f"duplicate or undeclared vertex {v!r}", line)
        values[v] = value
    missing = [v for v in cx.vertices if v not in values]
    if missing:
        raise FormError(f"missing vertex value for {', '.join(missing)}")
    return VertexFunction(values)


def load_form(cx: Complex, text: str) -> OneForm:
    return form_from_document(cx, parse_document(text))


def dump_form(w: OneForm) -> str:
    return "".join(f"form {e} {format_rational(v)}\n" for e, v in sorted(w.weights.items()))


def dump_values(f: VertexFunction) -> str:
    return "".join(f"val {v} {format_rational(x)}\n" for v, x in sorted(f.values.items()))
