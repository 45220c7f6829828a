"""Finite 2-dimensional CW complexes given by vertices, oriented edges and face words.

Loops and parallel edges are allowed. A 2-cell is attached along a closed
edge path, its *boundary word*, a sequence of signed edges. Everything that
needs an order (spanning forests, fundamental cycles, serialization) uses
ascending id order so results never depend on declaration order.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import ComplexError, FormatError, InvalidPathError, Violation
from .linalg import rank
from .textio import parse_document, parse_signed


class SignedEdge(NamedTuple):
    edge: str
    sign: int = 1

    @classmethod
    def parse(cls, token: str) -> "SignedEdge":
        sign, edge = parse_signed(token)
        return cls(edge, sign)

    def __neg__(self) -> "SignedEdge":
        return SignedEdge(self.edge, -self.sign)

    def __str__(self) -> str:
        return ("+" if self.sign > 0 else "-") + self.edge


class Edge(NamedTuple):
    id: str
    tail: str
    head: str


class Face(NamedTuple):
    id: str
    word: tuple[SignedEdge, ...]


def _word(word) -> tuple[SignedEdge, ...]:
    if isinstance(word, str):
        word = word.split()
    return tuple(w if isinstance(w, SignedEdge) else SignedEdge.parse(w) for w in word)


@dataclass(frozen=True, eq=False)
class Complex:
    """Immutable CW complex.

    ``vertices``, ``edges`` and ``faces`` keep declaration order; equality
    ignores that order and compares the cells themselves.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    faces: tuple[Face, ...] = ()

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[Sequence[str]] = (),
              faces: Iterable = ()) -> "Complex":
        """Convenience constructor; face words may be strings like ``"+a +b -a -b"``."""
        return cls(
            tuple(vertices),
            tuple(Edge(*e) for e in edges),
            tuple(Face(f[0], _word(f[1])) for f in faces),
        )

    @cached_property
    def _edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _leaving(self) -> dict[str, tuple[SignedEdge, ...]]:
        out: dict[str, list[SignedEdge]] = {v: [] for v in self.vertices}
        for e in sorted(self.edges):
            out.setdefault(e.tail, []).append(SignedEdge(e.id, 1))
            out.setdefault(e.head, []).append(SignedEdge(e.id, -1))
        return {v: tuple(sorted(s, key=lambda x: (x.edge, -x.sign))) for v, s in out.items()}

    @cached_property
    def vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    def edge(self, eid: str) -> Edge:
        return self._edge_map[eid]

    def has_edge(self, eid: str) -> bool:
        return eid in self._edge_map

    def tail(self, se: SignedEdge) -> str:
        e = self._edge_map[se.edge]
        return e.tail if se.sign > 0 else e.head

    def head(self, se: SignedEdge) -> str:
        e = self._edge_map[se.edge]
        return e.head if se.sign > 0 else e.tail

    def leaving(self, v: str) -> tuple[SignedEdge, ...]:
        """Signed edges whose tail is ``v``, by edge id then ``+`` before ``-``.

        A loop at ``v`` contributes both of its orientations.
        """
        return self._leaving.get(v, ())

    def _key(self):
        return (
            frozenset(self.vertices),
            frozenset(self.edges),
            frozenset(self.faces),
            len(self.vertices), len(self.edges), len(self.faces),
        )

    def __eq__(self, other):
        if not isinstance(other, Complex):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (f"Complex({len(self.vertices)} vertices, {len(self.edges)} edges, "
                f"{len(self.faces)} faces)")


class Path(NamedTuple):
    start: str
    steps: tuple[SignedEdge, ...] = ()

    @classmethod
    def of(cls, start: str, steps="") -> "Path":
        return cls(start, _word(steps))

    def __str__(self) -> str:
        return " ".join([self.start, *map(str, self.steps)])


def path_end(cx: Complex, path: Path) -> str:
    """Walk ``path`` in ``cx`` and return its end vertex, checking every junction."""
    if path.start not in cx.vertex_set:
        raise InvalidPathError(f"path starts at unknown vertex {path.start!r}")
    at = path.start
    for i, se in enumerate(path.steps):
        if not cx.has_edge(se.edge):
            raise InvalidPathError(f"step {i + 1}: unknown edge {se.edge!r}")
        if cx.tail(se) != at:
            raise InvalidPathError(f"step {i + 1}: {se} does not start at {at!r}")
        at = cx.head(se)
    return at


def is_closed_path(cx: Complex, path: Path) -> bool:
    return path_end(cx, path) == path.start


def reverse_path(cx: Complex, path: Path) -> Path:
    end = path_end(cx, path)
    return Path(end, tuple(-se for se in reversed(path.steps)))


def concat_paths(cx: Complex, first: Path, second: Path) -> Path:
    if path_end(cx, first) != second.start:
        raise InvalidPathError("paths do not chain")
    return Path(first.start, first.steps + second.steps)


# -- validation ---------------------------------------------------------------


def _duplicates(ids: Iterable[str]) -> list[str]:
    seen, dup = set(), []
    for i in ids:
        if i in seen and i not in dup:
            dup.append(i)
        seen.add(i)
    return dup


def validate(cx: Complex) -> list[Violation]:
    """Return every invariant violation of ``cx``; an empty list means valid."""
    report = []
    for kind, ids in (("vertex", cx.vertices), ("edge", [e.id for e in cx.edges]),
                      ("face", [f.id for f in cx.faces])):
        for d in _duplicates(ids):
            report.append(Violation("duplicate id", f"{kind} {d}"))
    verts = cx.vertex_set
    for e in cx.edges:
        for end in (e.tail, e.head):
            if end not in verts:
                report.append(Violation("dangling endpoint", f"edge {e.id}", f"vertex {end!r} undeclared"))
    for f in cx.faces:
        if not f.word:
            report.append(Violation("empty boundary word", f"face {f.id}"))
            continue
        missing = [se.edge for se in f.word if not cx.has_edge(se.edge)]
        if missing:
            for m in missing:
                report.append(Violation("dangling edge", f"face {f.id}", f"edge {m!r} undeclared"))
            continue
        at = cx.head(f.word[0])
        chained = True
        for pos, se in enumerate(f.word[1:], start=2):
            if cx.tail(se) != at:
                report.append(Violation("boundary word not chained", f"face {f.id}",
                                        f"position {pos}: {se} does not start at {at!r}"))
                chained = False
                break
            at = cx.head(se)
        if chained and at != cx.tail(f.word[0]):
            report.append(Violation("boundary word not closed", f"face {f.id}",
                                    f"ends at {at!r}, starts at {cx.tail(f.word[0])!r}"))
    return report


def require_valid(cx: Complex) -> Complex:
    report = validate(cx)
    if report:
        raise ComplexError("; ".join(map(str, report)), report)
    return cx


# -- text format --------------------------------------------------------------


def complex_from_document(doc, check: bool = True) -> Complex:
    """Build the complex declared in ``doc``; with ``check`` off nothing is rejected."""
    if not check:
        return Complex(
            tuple(v for _, v in doc.vertices),
            tuple(Edge(eid, t, h) for _, eid, t, h in doc.edges),
            tuple(Face(fid, tuple(SignedEdge(e, s) for s, e in word)) for _, fid, word in doc.faces),
        )
    vertex_ids: set[str] = set()
    for line, v in doc.vertices:
        if v in vertex_ids:
            raise FormatError(f"duplicate id: vertex {v!r}", line)
        vertex_ids.add(v)
    edge_ids: set[str] = set()
    for line, eid, tail, head in doc.edges:
        if eid in edge_ids:
            raise FormatError(f"duplicate id: edge {eid!r}", line)
        edge_ids.add(eid)
        for end in (tail, head):
            if end not in vertex_ids:
                raise FormatError(f"dangling endpoint: edge {eid!r} references undeclared vertex {end!r}", line)
    face_ids: set[str] = set()
    for line, fid, word in doc.faces:
        if fid in face_ids:
            raise FormatError(f"duplicate id: face {fid!r}", line)
        face_ids.add(fid)
        for _, eid in word:
            if eid not in edge_ids:
                raise FormatError(f"dangling edge: face {fid!r} references undeclared edge {eid!r}", line)
    cx = complex_from_document(doc, check=False)
    face_lines = {fid: line for line, fid, _ in doc.faces}
    for violation in validate(cx):
        fid = violation.where.split()[-1]
        raise FormatError(str(violation), face_lines.get(fid))
    return cx


def load_complex(text: str) -> Complex:
    """Parse the complex declarations of ``text``.

    Form, value, flow and meta lines may be present and are ignored here.
    Raises :class:`FormatError` (with the line number) on syntax errors,
    duplicate ids, dangling references and non-closed boundary words.
    """
    return complex_from_document(parse_document(text))


def dump_complex(cx: Complex) -> str:
    lines = [f"vertex {v}" for v in sorted(cx.vertices)]
    lines += [f"edge {e.id} {e.tail} {e.head}" for e in sorted(cx.edges)]
    lines += [" ".join(["face", f.id, *map(str, f.word)]) for f in sorted(cx.faces)]
    return "\n".join(lines) + "\n"


# -- trees, cycles, invariants ------------------------------------------------


@dataclass(frozen=True)
class SpanningForest:
    roots: tuple[str, ...]
    tree_edges: frozenset[str]
    # vertex -> signed edge from its parent to it; roots are absent
    parent: dict = field(hash=False)
    root_of: dict = field(hash=False)

    def path_from_root(self, cx: Complex, v: str) -> Path:
        steps = []
        while v in self.parent:
            se = self.parent[v]
            steps.append(se)
            v = cx.tail(se)
        return Path(v, tuple(reversed(steps)))

    def components(self) -> dict[str, list[str]]:
        comps: dict[str, list[str]] = {r: [] for r in self.roots}
        for v, r in self.root_of.items():
            comps[r].append(v)
        return {r: sorted(vs) for r, vs in comps.items()}


def spanning_forest(cx: Complex) -> SpanningForest:
    """Grow one tree per component from its least vertex id.

    The tree repeatedly absorbs the least-id edge joining it to a new vertex,
    so the 3-cycle ``e0: v0->v1, e1: v1->v2, e2: v2->v0`` gets tree ``{e0, e1}``.
    """
    root_of: dict[str, str] = {}
    parent: dict[str, SignedEdge] = {}
    roots = []
    tree = set()
    for r in sorted(cx.vertex_set):
        if r in root_of:
            continue
        roots.append(r)
        root_of[r] = r
        heap = [se for se in cx.leaving(r)]
        heapq.heapify(heap)
        while heap:
            se = heapq.heappop(heap)
            v = cx.head(se)
            if v in root_of:
                continue
            root_of[v] = r
            parent[v] = se
            tree.add(se.edge)
            for nxt in cx.leaving(v):
                if cx.head(nxt) not in root_of:
                    heapq.heappush(heap, nxt)
    return SpanningForest(tuple(roots), frozenset(tree), parent, root_of)


def fundamental_cycles(cx: Complex, forest: SpanningForest | None = None) -> list[tuple[str, Path]]:
    """One based loop per non-tree edge, in ascending edge id order.

    The loop runs root -> tail along the tree, crosses the edge, and returns
    head -> root along the tree.
    """
    forest = forest or spanning_forest(cx)
    out = []
    for e in sorted(cx.edges):
        if e.id in forest.tree_edges:
            continue
        to_tail = forest.path_from_root(cx, e.tail)
        back = reverse_path(cx, forest.path_from_root(cx, e.head))
        out.append((e.id, Path(to_tail.start, to_tail.steps + (SignedEdge(e.id, 1),) + back.steps)))
    return out


def euler_characteristic(cx: Complex) -> int:
    return len(cx.vertices) - len(cx.edges) + len(cx.faces)


def face_rows(cx: Complex, columns: Iterable[str]) -> list[dict[str, int]]:
    """Signed occurrence counts of ``columns`` in each face word."""
    cols = set(columns)
    rows = []
    for f in cx.faces:
        row: dict[str, int] = {}
        for se in f.word:
            if se.edge in cols:
                row[se.edge] = row.get(se.edge, 0) + se.sign
        rows.append(row)
    return rows


def betti1(cx: Complex, forest: SpanningForest | None = None) -> int:
    """First Betti number over the rationals.

    In the basis of fundamental cycles a face boundary is the signed count of
    non-tree edges in its word; b1 is the number of cycles minus the rank of
    those rows.
    """
    forest = forest or spanning_forest(cx)
    cols = sorted(e.id for e in cx.edges if e.id not in forest.tree_edges)
    return len(cols) - rank(face_rows(cx, cols), cols)
