"""Category certificates built from a gradient-like flow.

For a threshold ``N`` every vertex is sorted by where its orbit goes:

* into ``F`` when the lifted potential eventually drops by at least ``N``
  (a long descent, or a negative base cycle pumped often enough);
* into ``F_j`` when it is absorbed by the fixed vertex ``p_j`` having
  dropped by less than ``N``; the flow itself collapses ``F_j`` onto the
  closed star of ``p_j``.

This only goes through when every star passes :func:`validate_star`; any
failure is returned as a :class:`FailureWitness` instead. The certificate
records a path witness per vertex so :func:`verify_certificate` can check
it without redoing the construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Mapping, NamedTuple

from .cellcx import Complex, Path, SignedEdge
from .cocycle import OneForm, integrate
from .cover import CoverPoint, potential
from .errors import Violation
from .gradflow import Absorbed, Flow, orbit, require_valid_flow, validate_flow
from .homoclinic import StarReport, connections, validate_star
from .rational import as_fraction, format_rational


class MemberWitness(NamedTuple):
    steps: tuple[SignedEdge, ...]  # flow steps taken from the member vertex
    drop: Fraction  # claimed integral along them


@dataclass(frozen=True)
class CatCertificate:
    threshold: Fraction
    sliding: Mapping[str, MemberWitness]  # F
    collapsing: tuple[tuple[str, Mapping[str, MemberWitness]], ...]  # (p_j, F_j)
    star_reports: tuple[StarReport, ...]

    @property
    def k(self) -> int:
        return sum(1 for _, members in self.collapsing if members)

    def sets(self) -> tuple[frozenset[str], tuple[tuple[str, frozenset[str]], ...]]:
        return (frozenset(self.sliding),
                tuple((p, frozenset(m)) for p, m in self.collapsing if m))


class FailureWitness(NamedTuple):
    reason: str  # star-b-violation | star-c-violation | uncovered-vertex
    subject: str  # offending star center or vertex
    evidence: object = None

    def __str__(self) -> str:
        text = f"failure {self.reason} at {self.subject}"
        if isinstance(self.evidence, StarReport):
            text += "\n" + str(self.evidence)
        return text


def stabilization_bound(cx: Complex, w: OneForm, fl: Flow) -> Fraction:
    """``1 + max |drop|`` over orbits absorbed by a fixed vertex.

    Past this threshold no absorbed orbit reaches ``F`` any more, so the
    certificate sets stop changing.
    """
    pot = potential(cx, w)
    deepest = Fraction(0)
    for v in cx.vertices:
        out = orbit(cx, w, fl, CoverPoint(v), pot).outcome
        if isinstance(out, Absorbed):
            deepest = max(deepest, -out.drop)
    return 1 + deepest


def _sliding_witness(cx, w, fl, pot, v: str, threshold: Fraction) -> MemberWitness | None:
    """Shortest flow path from ``v`` dropping by at least ``threshold``, if any."""
    orb = orbit(cx, w, fl, CoverPoint(v), pot)
    steps = list(orb.steps)
    if not isinstance(orb.outcome, Absorbed):
        laps = ceil((threshold + orb.drop) / -orb.outcome.cycle_drop)
        steps += list(orb.outcome.cycle) * max(laps, 0)
    acc = Fraction(0)
    for i, se in enumerate(steps):
        acc += w.signed(se)
        if acc <= -threshold:
            return MemberWitness(tuple(steps[: i + 1]), acc)
    return None


def build_certificate(cx: Complex, w: OneForm, fl: Flow, N,
                      strict: bool = False) -> CatCertificate | FailureWitness:
    N = as_fraction(N)
    if N <= 0:
        raise ValueError("threshold must be positive")
    require_valid_flow(cx, w, fl)
    pot = potential(cx, w)
    digraph = connections(cx, w, fl, pot)
    reports = []
    for p in sorted(fl.fixed):
        report = validate_star(cx, w, fl, p, N, strict, pot, digraph)
        if not report.interval_ok:
            return FailureWitness("star-b-violation", p, report)
        if not report.return_ok:
            return FailureWitness("star-c-violation", p, report)
        reports.append(report)

    sliding: dict[str, MemberWitness] = {}
    collapsing: dict[str, dict[str, MemberWitness]] = {p: {} for p in sorted(fl.fixed)}
    for v in sorted(cx.vertices):
        orb = orbit(cx, w, fl, CoverPoint(v), pot)
        if isinstance(orb.outcome, Absorbed) and orb.drop > -N:
            collapsing[orb.outcome.vertex][v] = MemberWitness(orb.steps, orb.drop)
        else:
            witness = _sliding_witness(cx, w, fl, pot, v, N)
            assert witness is not None
            sliding[v] = witness
    covered = set(sliding).union(*collapsing.values())
    for v in sorted(cx.vertices):
        if v not in covered:
            return FailureWitness("uncovered-vertex", v)
    return CatCertificate(N, sliding, tuple(collapsing.items()), tuple(reports))


class Verification(NamedTuple):
    ok: bool
    violations: tuple[Violation, ...]

    def __bool__(self) -> bool:
        return self.ok


def _replay(cx, fl: Flow, v: str, steps) -> str | None:
    """Follow ``steps`` from ``v`` checking each is the flow's move; return the end."""
    at = v
    for se in steps:
        if at in fl.fixed or fl.succ.get(at) != se:
            return None
        at = cx.head(se)
    return at


def verify_certificate(cx: Complex, w: OneForm, fl: Flow, cert: CatCertificate) -> Verification:
    """Re-check a certificate from its witnesses alone."""
    bad: list[Violation] = []
    N = cert.threshold
    if N <= 0:
        bad.append(Violation("non-positive threshold", format_rational(N)))
    bad += validate_flow(cx, w, fl)
    if bad:
        return Verification(False, tuple(bad))

    for v, wit in sorted(cert.sliding.items()):
        end = _replay(cx, fl, v, wit.steps)
        actual = integrate(cx, w, Path(v, wit.steps)) if end is not None else None
        if end is None:
            bad.append(Violation("witness is not a flow path", v, "F"))
        elif actual != wit.drop:
            bad.append(Violation("witness drop mismatch", v,
                                 f"claimed {wit.drop}, path integral {actual}"))
        elif actual > -N:
            bad.append(Violation("drop above threshold", v, f"F witness drop {actual} > -{N}"))

    for p, members in cert.collapsing:
        if p not in fl.fixed:
            bad.append(Violation("collapse center not fixed", p))
            continue
        for v, wit in sorted(members.items()):
            end = _replay(cx, fl, v, wit.steps)
            if end != p:
                bad.append(Violation("witness is not a flow path", v, f"F_{p}: does not end at {p}"))
                continue
            acc, lowest = Fraction(0), Fraction(0)
            for se in wit.steps:
                acc += w.signed(se)
                lowest = min(lowest, acc)
            if acc != wit.drop:
                bad.append(Violation("witness drop mismatch", v, f"claimed {wit.drop}, path integral {acc}"))
            if lowest <= -N:
                bad.append(Violation("drop below threshold", v, f"F_{p} witness reaches {lowest} <= -{N}"))
            succ = fl.succ.get(v)
            if succ is not None and cx.head(succ) not in members:
                bad.append(Violation("flow leaves collapsing set", v, f"F_{p}: successor {cx.head(succ)}"))

    covered = set(cert.sliding).union(*(m for _, m in cert.collapsing))
    for v in sorted(cx.vertices):
        if v not in covered:
            bad.append(Violation("uncovered-vertex", v))

    pot = potential(cx, w)
    digraph = connections(cx, w, fl, pot)
    claimed = {r.center: r for r in cert.star_reports}
    for p in sorted(fl.fixed):
        if p not in claimed:
            bad.append(Violation("missing star report", p))
            continue
        if not claimed[p].passed:
            bad.append(Violation("star report fails", p))
        fresh = validate_star(cx, w, fl, p, N, claimed[p].strict, pot, digraph)
        if not fresh.interval_ok:
            bad.append(Violation("star-b-violation", p))
        if not fresh.return_ok:
            bad.append(Violation("star-c-violation", p))
    return Verification(not bad, tuple(bad))


class CatBound(NamedTuple):
    k: int | None
    certificate: CatCertificate | None
    failure: FailureWitness | None

    def __bool__(self) -> bool:
        return self.failure is None


def cat_upper(cx: Complex, w: OneForm, fl: Flow) -> CatBound:
    """Discrete category bound from certificates at ``N*`` and ``2 N*``."""
    bound = stabilization_bound(cx, w, fl)
    first = build_certificate(cx, w, fl, bound)
    if isinstance(first, FailureWitness):
        return CatBound(None, None, first)
    second = build_certificate(cx, w, fl, 2 * bound)
    if isinstance(second, FailureWitness):
        return CatBound(None, None, second)
    if first.sets() != second.sets():
        raise AssertionError("certificate sets changed past the stabilization bound")
    return CatBound(first.k, first, None)


def scaling_transport(cert: CatCertificate, factor) -> CatCertificate:
    """Relabel ``cert`` for the form scaled by ``factor > 0``; every drop scales along."""
    factor = as_fraction(factor)
    if factor <= 0:
        raise ValueError("scale factor must be positive")

    def scale(members):
        return {v: MemberWitness(wit.steps, wit.drop * factor) for v, wit in members.items()}

    return CatCertificate(
        cert.threshold * factor,
        scale(cert.sliding),
        tuple((p, scale(m)) for p, m in cert.collapsing),
        tuple(r.scaled(factor) for r in cert.star_reports),
    )


def dump_certificate(cert: CatCertificate, verified: bool) -> str:
    lines = [f"cat-certificate k={cert.k} N={format_rational(cert.threshold)}",
             " ".join(["F:", *sorted(cert.sliding)])]
    for p, members in cert.collapsing:
        if members:
            lines.append(" ".join([f"Fj {p}:", *sorted(members)]))
    lines.append(f"verified: {'true' if verified else 'false'}")
    return "\n".join(lines) + "\n"
