"""Command-line front end.

Every analysis subcommand reads one or more files, concatenates them, and
parses the result as one document, so a complex file can be combined with
separate form and flow files or a single bundle from ``cwcat example``.
Exit codes: 0 success, 1 negative result (violations, failures, not exact),
2 bad input.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import sys
from pathlib import Path as FsPath
from typing import NamedTuple

from . import bundles
from .cellcx import Path, betti1, complex_from_document, validate
from .cocycle import (dump_values, form_from_document, integrate, is_closed, is_exact,
                      periods, same_class)
from .cover import CoverPoint, deck_generator
from .errors import CwcatError
from .gradflow import (Absorbed, POLICIES, build_flow, dump_flow, flow_from_document, orbit,
                       validate_flow)
from .homoclinic import connections, dump_connections, dump_cycles, homoclinic_cycles, validate_star
from .lscat import (FailureWitness, build_certificate, dump_certificate, stabilization_bound,
                    verify_certificate)
from .rational import format_rational, parse_rational
from .textio import parse_document


class CliResult(NamedTuple):
    code: int
    out: str
    err: str = ""


class _InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _InputError(f"{self.prog}: {message}")


def _read(paths) -> str:
    chunks = []
    for p in paths:
        try:
            chunks.append(FsPath(p).read_text(encoding="utf-8"))
        except OSError as exc:
            raise _InputError(f"cannot read {p}: {exc.strerror}") from None
    return "\n".join(chunks)


class _Inputs:
    def __init__(self, args, need_form=True):
        self.doc = parse_document(_read(args.files))
        self.cx = complex_from_document(self.doc)
        self.form = form_from_document(self.cx, self.doc) if (need_form or self.doc.forms) else None
        self.args = args

    def flow(self):
        fix = getattr(self.args, "fix", None)
        declared = flow_from_document(self.doc)
        if fix is None and declared is not None:
            return declared
        fixed = None if fix is None else [v for v in fix.split(",") if v]
        return build_flow(self.cx, self.form, fixed, getattr(self.args, "policy", "steepest"))


def _rational_arg(text):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _cmd_validate(args, out):
    doc = parse_document(_read(args.files))
    cx = complex_from_document(doc, check=False)
    problems = [str(v) for v in validate(cx)]
    if not problems and doc.forms:
        w = form_from_document(cx, doc)
        report = is_closed(cx, w)
        problems += [f"face not closed: {f} (sum {format_rational(r)})"
                     for f, r in report.residuals.items()]
        fl = flow_from_document(doc)
        if not problems and fl is not None:
            problems += [str(v) for v in validate_flow(cx, w, fl)]
    if problems:
        out.extend(problems)
        return 1
    out.append("ok")
    return 0


def _cmd_periods(args, out):
    inp = _Inputs(args)
    out.append(str(periods(inp.cx, inp.form)) or "no fundamental cycles")
    return 0


def _cmd_class(args, out):
    inp = _Inputs(args)
    data = periods(inp.cx, inp.form)
    out.append(f"betti1 = {betti1(inp.cx)}")
    if data.entries:
        out.append(str(data))
    out.append(f"deck generator = {format_rational(deck_generator(data.values))}")
    out.append(f"exact = {'true' if is_exact(inp.cx, inp.form) else 'false'}")
    if args.against:
        other_doc = parse_document(_read(args.against))
        other = form_from_document(inp.cx, other_doc)
        cmp = same_class(inp.cx, inp.form, other)
        out.append(f"same class = {'true' if cmp else 'false'}")
        if cmp:
            out.append(dump_values(cmp.primitive).rstrip("\n"))
        return 0 if cmp else 1
    return 0


def _cmd_exact(args, out):
    inp = _Inputs(args)
    result = is_exact(inp.cx, inp.form)
    if result:
        out.append("exact")
        out.append(dump_values(result.primitive).rstrip("\n"))
        return 0
    edge, value = result.witness
    out.append(f"not exact: period {edge} = {format_rational(value)}")
    return 1


def _cmd_integrate(args, out):
    inp = _Inputs(args)
    tokens = args.path.split()
    if not tokens:
        raise _InputError("empty --path")
    path = Path.of(tokens[0], tokens[1:])
    out.append(f"integral = {format_rational(integrate(inp.cx, inp.form, path))}")
    return 0


def _cmd_flow_build(args, out):
    inp = _Inputs(args)
    fixed = None if args.fix is None else [v for v in args.fix.split(",") if v]
    out.append(dump_flow(build_flow(inp.cx, inp.form, fixed, args.policy)).rstrip("\n"))
    return 0


def _cmd_orbit(args, out):
    inp = _Inputs(args)
    fl = inp.flow()
    if args.start not in inp.cx.vertex_set:
        raise _InputError(f"unknown vertex {args.start!r}")
    orb = orbit(inp.cx, inp.form, fl, CoverPoint(args.start, args.shift))
    for i, (pt, val) in enumerate(zip(orb.points, orb.values)):
        step = f" via {orb.steps[i - 1]}" if i else ""
        out.append(f"{i} {pt} f={format_rational(val)}{step}")
    if isinstance(orb.outcome, Absorbed):
        out.append(f"absorbed at {orb.outcome.vertex} arrival {orb.outcome.arrival} "
                   f"drop {format_rational(orb.outcome.drop)}")
    else:
        o = orb.outcome
        out.append(f"descends forever from index {o.entry} cycle {' '.join(map(str, o.cycle))} "
                   f"cycle drop {format_rational(o.cycle_drop)}")
    return 0


def _cmd_connections(args, out):
    inp = _Inputs(args)
    d = connections(inp.cx, inp.form, inp.flow())
    text = dump_connections(d).rstrip("\n")
    if text:
        out.append(text)
    for p, e, _ in d.escapes:
        out.append(f"escape {p} via {e}")
    return 0


def _cmd_homoclinic(args, out):
    inp = _Inputs(args)
    cycles = homoclinic_cycles(connections(inp.cx, inp.form, inp.flow()))
    out.append(dump_cycles(cycles).rstrip("\n") if cycles else "no homoclinic cycles")
    return 0


def _threshold(inp, fl, value):
    return value if value is not None else stabilization_bound(inp.cx, inp.form, fl)


def _cmd_star_check(args, out):
    inp = _Inputs(args)
    fl = inp.flow()
    if args.center not in fl.fixed:
        raise _InputError(f"{args.center} is not a fixed vertex of the flow")
    report = validate_star(inp.cx, inp.form, fl, args.center, _threshold(inp, fl, args.N),
                           strict=args.strict_star)
    out.append(str(report))
    return 0 if report.passed else 1


def _cmd_cat_cert(args, out):
    inp = _Inputs(args)
    fl = inp.flow()
    result = build_certificate(inp.cx, inp.form, fl, _threshold(inp, fl, args.N),
                               strict=args.strict_star)
    if isinstance(result, FailureWitness):
        out.append(str(result))
        return 1
    check = verify_certificate(inp.cx, inp.form, fl, result)
    out.append(dump_certificate(result, bool(check)).rstrip("\n"))
    return 0 if check else 1


def _cmd_example(args, out):
    try:
        bundle = bundles.generate(args.name, args.size)
    except ValueError as exc:
        raise _InputError(str(exc)) from None
    if args.out is None:
        out.append(bundle.text().rstrip("\n"))
        return 0
    target = FsPath(args.out)
    target.mkdir(parents=True, exist_ok=True)
    for suffix, text in (("cx", bundle.complex_text()), ("form", bundle.form_text()),
                         ("flow", bundle.flow_text()), ("meta", bundle.meta_text())):
        (target / f"{args.name}.{suffix}").write_text(text, encoding="utf-8")
    out.append(f"wrote {args.name}.cx {args.name}.form {args.name}.flow {args.name}.meta to {target}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cwcat", description="Closed 1-forms, flows and category "
                                               "certificates on finite CW complexes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, help, flow=False, threshold=False):
        p = sub.add_parser(name, help=help)
        p.add_argument("files", nargs="+", help="complex/form/flow files, read as one document")
        if flow:
            p.add_argument("--fix", help="comma-separated fixed vertices; rebuilds the flow")
            p.add_argument("--policy", choices=POLICIES, default="steepest")
        if threshold:
            p.add_argument("--N", type=_rational_arg, default=None,
                           help="threshold p/q (default: stabilization bound)")
            p.add_argument("--strict-star", action="store_true",
                           help="flag every return to a star center")
        p.set_defaults(func=func)
        return p

    command("validate", _cmd_validate, "check complex, form closedness and flow")
    command("periods", _cmd_periods, "periods on the fundamental cycles")
    command("class", _cmd_class, "cohomology class summary").add_argument(
        "--against", nargs="+", help="form file(s) to compare classes with")
    command("exact", _cmd_exact, "primitive of an exact form")
    command("integrate", _cmd_integrate, "integrate along a path").add_argument(
        "--path", required=True, help='start vertex then signed edges, e.g. "v0 +e0 -e2"')
    command("flow-build", _cmd_flow_build, "build a gradient-like flow", flow=True)
    p = command("orbit", _cmd_orbit, "trace an orbit on the cover", flow=True)
    p.add_argument("--start", required=True)
    p.add_argument("--shift", type=_rational_arg, default=parse_rational("0"))
    command("connections", _cmd_connections, "connection digraph of fixed points", flow=True)
    command("homoclinic", _cmd_homoclinic, "homoclinic cycles", flow=True)
    command("star-check", _cmd_star_check, "star neighborhood conditions", flow=True,
            threshold=True).add_argument("--center", required=True)
    command("cat-cert", _cmd_cat_cert, "build and verify a category certificate",
            flow=True, threshold=True)
    ex = sub.add_parser("example", help="generate a canonical example bundle")
    ex.add_argument("name", choices=bundles.NAMES)
    ex.add_argument("--size", type=int, default=None)
    ex.add_argument("--out", default=None, help="directory for separate .cx/.form/.flow/.meta files")
    ex.set_defaults(func=_cmd_example)
    return parser


def run(argv) -> CliResult:
    out: list[str] = []
    parser = build_parser()
    captured = io.StringIO()
    try:
        with contextlib.redirect_stdout(captured):
            args = parser.parse_args(list(argv))
    except _InputError as exc:
        return CliResult(2, "", f"{exc}\n{parser.format_usage()}")
    except SystemExit as exc:  # --help
        return CliResult(int(exc.code or 0), captured.getvalue())
    try:
        code = args.func(args, out)
    except (_InputError, CwcatError, ValueError) as exc:
        return CliResult(2, "", f"error: {exc}\n")
    return CliResult(code, "".join(line + "\n" for line in out))


def main(argv=None) -> int:
    result = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(result.out)
    sys.stderr.write(result.err)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
