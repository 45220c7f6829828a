"""Seeded random inputs shared by the property and acceptance tests."""

from __future__ import annotations

import random
from fractions import Fraction

from cwcat.cellcx import Complex, Path, SignedEdge, spanning_forest
from cwcat.cocycle import OneForm, VertexFunction, cohomology_basis, differential

C3 = Complex.build(["v0", "v1", "v2"], [("e0", "v0", "v1"), ("e1", "v1", "v2"), ("e2", "v2", "v0")])
TORUS = Complex.build(["v"], [("a", "v", "v"), ("b", "v", "v")], [("T", "+a +b -a -b")])
DIGON = Complex.build(["v"], [("a", "v", "v")], [("F", "+a"), ("G", "-a")])
C6 = Complex.build([f"v{i}" for i in range(6)],
                   [(f"e{i}", f"v{i}", f"v{(i + 1) % 6}") for i in range(6)])
C6_FORM = OneForm({**{f"e{i}": -1 for i in range(5)}, "e5": 6})
WEDGE = Complex.build(
    ["v"], [("a1", "v", "v"), ("a2", "v", "v"), ("b1", "v", "v"), ("b2", "v", "v")],
    [("T1", "+a1 +b1 -a1 -b1"), ("T2", "+a2 +b2 -a2 -b2")])
WEDGE_FORM = OneForm({"a1": 1, "a2": 1, "b1": 0, "b2": 0})


def rational(rng: random.Random, num: int = 9, den: int = 6) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_walk(rng: random.Random, cx: Complex, start: str, length: int) -> Path:
    steps, at = [], start
    for _ in range(length):
        options = cx.leaving(at)
        if not options:
            break
        se = rng.choice(options)
        steps.append(se)
        at = cx.head(se)
    return Path(start, tuple(steps))


def random_complex(rng: random.Random, max_vertices: int = 40, max_edges: int = 80,
                   max_faces: int = 10) -> Complex:
    """Random CW complex; every face is a closed walk in the 1-skeleton."""
    n = rng.randint(1, max_vertices)
    verts = [f"v{i}" for i in range(n)]
    m = rng.randint(0, max_edges)
    edges = []
    for j in range(m):
        if rng.random() < 0.6 and j < n - 1:
            # keep a good share of edges on a path so components are large
            tail, head = verts[j], verts[j + 1]
            if rng.random() < 0.5:
                tail, head = head, tail
        else:
            tail, head = rng.choice(verts), rng.choice(verts)
        edges.append((f"e{j}", tail, head))
    skeleton = Complex.build(verts, edges)
    faces = []
    if edges:
        forest = spanning_forest(skeleton)
        for k in range(rng.randint(0, max_faces)):
            start = rng.choice([e[1] for e in edges])
            walk = random_walk(rng, skeleton, start, rng.randint(1, 6))
            end = skeleton.head(walk.steps[-1]) if walk.steps else start
            # close the walk through the root of the component
            to_end = forest.path_from_root(skeleton, end)
            to_start = forest.path_from_root(skeleton, start)
            back = tuple(-se for se in reversed(to_end.steps)) + to_start.steps
            word = walk.steps + back
            if word:
                faces.append((f"f{k}", " ".join(map(str, word))))
    return Complex.build(verts, edges, faces)


def random_function(rng: random.Random, cx: Complex) -> VertexFunction:
    return VertexFunction({v: rational(rng) for v in cx.vertices})


def random_closed_form(rng: random.Random, cx: Complex, basis=None) -> OneForm:
    """Random combination of a cohomology basis plus a random exact part."""
    basis = cohomology_basis(cx) if basis is None else basis
    weights = dict(differential(cx, random_function(rng, cx)).weights)
    for b in basis:
        c = rational(rng)
        for e, x in b.weights.items():
            if x:
                weights[e] += c * x
    return OneForm(weights)


def random_path(rng: random.Random, cx: Complex, max_len: int = 8) -> Path:
    return random_walk(rng, cx, rng.choice(cx.vertices), rng.randint(0, max_len))


def signed(token: str) -> SignedEdge:
    return SignedEdge.parse(token)
