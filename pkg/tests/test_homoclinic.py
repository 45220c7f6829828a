import itertools
import random
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cwcat.cellcx import Complex, SignedEdge
from cwcat.cocycle import OneForm
from cwcat.cover import CoverPoint, potential
from cwcat.errors import BudgetError
from cwcat.gradflow import Flow, build_flow, forced_fixed
from cwcat.homoclinic import (Connection, ConnectionDigraph, closed_star, connections,
                              exit_directions, homoclinic_cycles, replay_connection, validate_star)

from helpers import C6, C6_FORM, WEDGE, WEDGE_FORM, random_closed_form, random_complex


def c6_flow(fixed=("v2", "v5")):
    return build_flow(C6, C6_FORM, set(fixed), "first")


def wedge_flow():
    return build_flow(WEDGE, WEDGE_FORM, {"v"})


def test_exit_directions():
    assert exit_directions(WEDGE, WEDGE_FORM, "v") == [SignedEdge("a1", -1), SignedEdge("a2", -1)]
    assert exit_directions(C6, C6_FORM, "v2") == [SignedEdge("e2")]
    assert exit_directions(C6, C6_FORM, "v5") == []


def test_connections_wedge():
    d = connections(WEDGE, WEDGE_FORM, wedge_flow())
    assert [(c.source, c.target, c.drop, str(c.exit)) for c in d.edges] == [
        ("v", "v", -1, "-a1"), ("v", "v", -1, "-a2")]


def test_connections_c6():
    d = connections(C6, C6_FORM, c6_flow())
    assert [(c.source, c.target, c.drop) for c in d.edges] == [("v2", "v5", -3)]
    assert str(d.edges[0]) == "conn v2 v5 -3/1 via +e2"
    assert connections(C6, C6_FORM, c6_flow(["v5"])).edges == ()


def test_connections_record_escapes():
    # on the free circle nothing is fixed; fix one vertex of a circle with
    # negative period elsewhere so an exit never comes back
    cx = Complex.build(["p", "a", "b"], [("e0", "p", "a"), ("e1", "a", "b"), ("e2", "b", "a")])
    w = OneForm({"e0": -1, "e1": -1, "e2": Fraction(-1, 2)})
    fl = build_flow(cx, w, {"p"})
    d = connections(cx, w, fl)
    assert d.edges == () and [(p, str(e)) for p, e, _ in d.escapes] == [("p", "+e0")]


def test_witness_integrity():
    for cx, w, fl in [(C6, C6_FORM, c6_flow()), (WEDGE, WEDGE_FORM, wedge_flow())]:
        pot = potential(cx, w)
        for c in connections(cx, w, fl, pot).edges:
            arrival, drop = replay_connection(cx, w, fl, pot, c)
            assert arrival.vertex == c.target and drop == c.drop
            assert c.drop == w.signed(c.exit) + c.orbit.drop


def conn(s, t, d, tag="x"):
    return Connection(s, t, Fraction(d), SignedEdge(tag), None)


def test_cycles_examples():
    wedge = homoclinic_cycles(connections(WEDGE, WEDGE_FORM, wedge_flow()))
    assert [(h.nodes, h.total_drop) for h in wedge] == [(("v",), -1), (("v",), -1)]
    assert homoclinic_cycles(connections(C6, C6_FORM, c6_flow())) == []
    tri = ConnectionDigraph(("p", "q", "r"), (conn("p", "q", -1), conn("q", "r", -1), conn("r", "p", -2)))
    cycles = homoclinic_cycles(tri)
    assert len(cycles) == 1 and cycles[0].total_drop == -4 and cycles[0].nodes == ("p", "q", "r")
    assert str(cycles[0]) == "cycle p q r total -4/1"


def test_cycles_sorted_by_abs_drop():
    d = ConnectionDigraph(("a", "b"), (conn("a", "b", -5), conn("b", "a", -1), conn("a", "a", -3),
                                       conn("b", "b", -1, "y")))
    assert [abs(h.total_drop) for h in homoclinic_cycles(d)] == [1, 3, 6]


def test_cycle_budget():
    nodes = tuple(f"p{i:02d}" for i in range(21))
    with pytest.raises(BudgetError):
        homoclinic_cycles(ConnectionDigraph(nodes, ()))
    assert homoclinic_cycles(ConnectionDigraph(nodes[:20], ())) == []


def brute_force_cycles(nodes, edges):
    """Every simple cycle as (canonical node sequence, total drop), found by
    trying every ordered node subset and every choice of parallel edges."""
    by_pair = {}
    for s, t, d in edges:
        by_pair.setdefault((s, t), []).append(d)
    found = Counter()
    for size in range(1, len(nodes) + 1):
        for seq in itertools.permutations(nodes, size):
            if seq[0] != min(seq):
                continue  # count each rotation once
            hops = [(seq[i], seq[(i + 1) % size]) for i in range(size)]
            if not all(h in by_pair for h in hops):
                continue
            for choice in itertools.product(*(by_pair[h] for h in hops)):
                found[(seq, sum(choice, Fraction(0)))] += 1
    return found


def random_digraph(rng):
    n = rng.randint(1, 8)
    nodes = [f"p{i}" for i in range(n)]
    edges = []
    density = rng.random() * 0.5
    for s in nodes:
        for t in nodes:
            k = 0
            while rng.random() < density and k < 2:
                edges.append((s, t, -Fraction(rng.randint(1, 9), rng.randint(1, 3))))
                k += 1
    return nodes, edges


def cycle_counter(nodes, edges):
    d = ConnectionDigraph(tuple(nodes), tuple(conn(s, t, x, f"e{i}") for i, (s, t, x) in enumerate(edges)))
    cycles = homoclinic_cycles(d)
    for a, b in zip(cycles, cycles[1:]):
        assert abs(a.total_drop) <= abs(b.total_drop)
    return Counter((h.nodes, h.total_drop) for h in cycles)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_cycles_match_brute_force(seed):
    nodes, edges = random_digraph(random.Random(seed))
    assert cycle_counter(nodes, edges) == brute_force_cycles(nodes, edges)


def test_star_c6_passes():
    fl = c6_flow()
    for N in (Fraction(1, 2), 1, 3, 100):
        report = validate_star(C6, C6_FORM, fl, "v5", N)
        assert report.passed
    assert closed_star(C6, "v5") == ("v0", "v4", "v5")


def test_star_wedge_fails_return():
    report = validate_star(WEDGE, WEDGE_FORM, wedge_flow(), "v", Fraction(1, 2))
    assert report.interval_ok and not report.return_ok
    rw = report.return_witness
    assert rw.drop == -1 and rw.drop <= -Fraction(1, 2)
    assert str(rw.walk[0].exit) == "-a1"
    assert rw.arrivals[-1] == CoverPoint("v", -1)


def test_star_return_pumps_to_threshold():
    report = validate_star(WEDGE, WEDGE_FORM, wedge_flow(), "v", Fraction(5, 2))
    assert not report.return_ok and report.return_witness.drop == -3
    strict = validate_star(WEDGE, WEDGE_FORM, wedge_flow(), "v", Fraction(5, 2), strict=True)
    assert not strict.return_ok and strict.return_witness.drop == -1


def test_star_isolated_vertex_passes():
    cx = Complex.build(["a", "b", "z"], [("e", "a", "b")])
    w = OneForm({"e": 1})
    fl = build_flow(cx, w)
    assert "z" in fl.fixed
    assert validate_star(cx, w, fl, "z", 1).passed


def interval_example():
    # exact form f = (p 10, a 3, x 2, b 1); the orbit a -> x -> b leaves the
    # star of p and comes back to the same lift
    cx = Complex.build(["p", "a", "x", "b"],
                       [("pa", "p", "a"), ("pb", "p", "b"), ("ax", "a", "x"), ("xb", "x", "b")])
    w = OneForm({"pa": -7, "pb": -9, "ax": -1, "xb": -1})
    return cx, w, build_flow(cx, w, {"p", "b"})


def test_star_interval_violation():
    cx, w, fl = interval_example()
    report = validate_star(cx, w, fl, "p", 1)
    assert not report.interval_ok
    iw = report.interval_witness
    assert iw.start == "a" and iw.lift == 0 and iw.times == (0, 2)
    assert "interval: fail" in str(report)


def test_star_threshold_must_be_positive():
    with pytest.raises(ValueError):
        validate_star(C6, C6_FORM, c6_flow(), "v5", 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_connections_scale(seed):
    rng = random.Random(seed)
    cx = random_complex(rng, 12, 22, 3)
    w = random_closed_form(rng, cx)
    fixed = forced_fixed(cx, w) | {v for v in cx.vertices if rng.random() < 0.3}
    fl = build_flow(cx, w, fixed, rng.choice(["steepest", "first"]))
    lam = Fraction(rng.randint(1, 9), rng.randint(1, 9))
    d1 = connections(cx, w, fl)
    d2 = connections(cx, w.scaled(lam), fl)
    assert [(c.source, c.target, c.exit, c.drop * lam) for c in d1.edges] == \
        [(c.source, c.target, c.exit, c.drop) for c in d2.edges]
    pot = potential(cx, w)
    for c in d1.edges:
        assert c.drop < 0
        assert replay_connection(cx, w, fl, pot, c)[1] == c.drop
    if len(d1.nodes) <= 20:
        c1 = homoclinic_cycles(d1)
        c2 = homoclinic_cycles(d2)
        assert [(h.nodes, h.total_drop * lam) for h in c1] == [(h.nodes, h.total_drop) for h in c2]
        # a node on a cycle always fails the return condition
        for h in c1:
            for p in h.nodes:
                assert not validate_star(cx, w, fl, p, abs(h.total_drop), pot=pot, digraph=d1).return_ok
