import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cwcat.cellcx import Complex
from cwcat.cocycle import OneForm
from cwcat.gradflow import Flow, build_flow, forced_fixed
from cwcat.homoclinic import connections, homoclinic_cycles
from cwcat.lscat import (CatCertificate, FailureWitness, MemberWitness, build_certificate,
                         cat_upper, dump_certificate, scaling_transport, stabilization_bound,
                         verify_certificate)

from helpers import C3, C6, C6_FORM, WEDGE, WEDGE_FORM, random_closed_form, random_complex

UNIFORM3 = OneForm({"e0": Fraction(1, 3), "e1": Fraction(1, 3), "e2": Fraction(1, 3)})


def c6():
    return C6, C6_FORM, build_flow(C6, C6_FORM, {"v2", "v5"}, "first")


def c3():
    return C3, UNIFORM3, build_flow(C3, UNIFORM3)


def test_stabilization_bound_examples():
    assert stabilization_bound(*c6()) == 3
    assert stabilization_bound(*c3()) == 1
    all_fixed = Flow(frozenset(C6.vertices), {})
    assert stabilization_bound(C6, C6_FORM, all_fixed) == 1


def test_c6_certificate():
    cx, w, fl = c6()
    cert = build_certificate(cx, w, fl, 3)
    assert isinstance(cert, CatCertificate)
    sliding, collapsing = cert.sets()
    assert sliding == frozenset()
    assert collapsing == (("v2", {"v0", "v1", "v2"}), ("v5", {"v3", "v4", "v5"}))
    assert cert.k == 2
    assert verify_certificate(cx, w, fl, cert)
    assert dump_certificate(cert, True) == (
        "cat-certificate k=2 N=3/1\nF:\nFj v2: v0 v1 v2\nFj v5: v3 v4 v5\nverified: true\n")


def test_c6_deep_threshold_moves_vertices_to_sliding():
    cx, w, fl = c6()
    # v0 drops by 2 on its way to v2, so at N = 2 it slides
    cert = build_certificate(cx, w, fl, 2)
    assert set(cert.sliding) == {"v0", "v3"}
    assert cert.sliding["v0"].drop <= -2
    assert verify_certificate(cx, w, fl, cert)


def test_c3_k0():
    cx, w, fl = c3()
    cert = build_certificate(cx, w, fl, 10)
    assert cert.k == 0 and set(cert.sliding) == {"v0", "v1", "v2"}
    assert len(cert.sliding["v0"].steps) == 30
    assert verify_certificate(cx, w, fl, cert)


def test_wedge_failure():
    fl = build_flow(WEDGE, WEDGE_FORM, {"v"})
    result = build_certificate(WEDGE, WEDGE_FORM, fl, 1)
    assert isinstance(result, FailureWitness)
    assert result.reason == "star-c-violation" and result.subject == "v"
    assert str(result.evidence.return_witness.walk[0].exit) == "-a1"
    assert str(result).startswith("failure star-c-violation at v")


def test_star_b_failure():
    cx = Complex.build(["p", "a", "x", "b"],
                       [("pa", "p", "a"), ("pb", "p", "b"), ("ax", "a", "x"), ("xb", "x", "b")])
    w = OneForm({"pa": -7, "pb": -9, "ax": -1, "xb": -1})
    fl = build_flow(cx, w, {"p", "b"})
    result = build_certificate(cx, w, fl, 1)
    assert isinstance(result, FailureWitness) and result.reason == "star-b-violation"


def test_tamper_detection():
    cx, w, fl = c3()
    cert = build_certificate(cx, w, fl, 10)
    wit = cert.sliding["v1"]
    weakened = CatCertificate(cert.threshold, {**cert.sliding, "v1": MemberWitness(wit.steps[:-3], Fraction(-9))},
                              cert.collapsing, cert.star_reports)
    check = verify_certificate(cx, w, fl, weakened)
    assert not check and any(v.where == "v1" for v in check.violations)
    lied = CatCertificate(cert.threshold, {**cert.sliding, "v1": MemberWitness(wit.steps, wit.drop + 1)},
                          cert.collapsing, cert.star_reports)
    assert not verify_certificate(cx, w, fl, lied)
    dropped = CatCertificate(cert.threshold, {k: v for k, v in cert.sliding.items() if k != "v2"},
                             cert.collapsing, cert.star_reports)
    check = verify_certificate(cx, w, fl, dropped)
    assert [v.kind for v in check.violations] == ["uncovered-vertex"]


def test_tamper_collapsing():
    cx, w, fl = c6()
    cert = build_certificate(cx, w, fl, 3)
    (p2, m2), (p5, m5) = cert.collapsing
    moved = {**m5, "v0": m2["v0"]}
    bad = CatCertificate(cert.threshold, cert.sliding, ((p2, {k: v for k, v in m2.items() if k != "v0"}), (p5, moved)),
                         cert.star_reports)
    assert not verify_certificate(cx, w, fl, bad)
    # F_{v2} without v0's successor breaks flow closure
    leaky = CatCertificate(cert.threshold, {"v0": m2["v0"]}, ((p2, {"v0": m2["v0"], "v2": m2["v2"]}), (p5, m5)),
                           cert.star_reports)
    kinds = {v.kind for v in verify_certificate(cx, w, fl, leaky).violations}
    assert "flow leaves collapsing set" in kinds
    no_reports = CatCertificate(cert.threshold, cert.sliding, cert.collapsing, ())
    assert not verify_certificate(cx, w, fl, no_reports)


def test_cat_upper():
    assert cat_upper(*c3()).k == 0
    assert cat_upper(*c6()).k == 2
    bound = cat_upper(WEDGE, WEDGE_FORM, build_flow(WEDGE, WEDGE_FORM, {"v"}))
    assert not bound and bound.failure.reason == "star-c-violation"


def test_scaling_transport():
    cx, w, fl = c6()
    cert = build_certificate(cx, w, fl, 3)
    assert scaling_transport(cert, 1).sets() == cert.sets()
    tripled = scaling_transport(cert, 3)
    assert tripled.threshold == 9
    assert verify_certificate(cx, w.scaled(3), fl, tripled)
    cx3, w3, fl3 = c3()
    half = scaling_transport(build_certificate(cx3, w3, fl3, 10), Fraction(1, 2))
    assert half.threshold == 5
    assert verify_certificate(cx3, w3.scaled(Fraction(1, 2)), fl3, half)
    with pytest.raises(ValueError):
        scaling_transport(cert, 0)


def random_instance(rng):
    cx = random_complex(rng, 12, 20, 3)
    w = random_closed_form(rng, cx)
    fixed = forced_fixed(cx, w) | {v for v in cx.vertices if rng.random() < 0.15}
    return cx, w, build_flow(cx, w, fixed, rng.choice(["steepest", "first"]))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_certificates_verify_and_stabilize(seed):
    rng = random.Random(seed)
    cx, w, fl = random_instance(rng)
    N = stabilization_bound(cx, w, fl)
    result = build_certificate(cx, w, fl, N)
    d = connections(cx, w, fl)
    if isinstance(result, FailureWitness):
        assert result.reason in ("star-b-violation", "star-c-violation")
        return
    assert verify_certificate(cx, w, fl, result)
    assert result.k == len(fl.fixed)
    for p, members in result.collapsing:
        assert p in members
    assert not homoclinic_cycles(d) if len(d.nodes) <= 20 else True
    later = build_certificate(cx, w, fl, N * rng.randint(2, 5))
    assert later.sets() == result.sets()
    lam = Fraction(rng.randint(1, 6), rng.randint(1, 6))
    assert verify_certificate(cx, w.scaled(lam), fl, scaling_transport(result, lam))
