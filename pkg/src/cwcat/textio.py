"""Line-oriented document reader shared by the complex, form and flow formats.

One declaration per line, ``#`` starts a comment. A single document may mix
every record kind, so a complex file with form and flow lines appended is
read in one pass::

    vertex v
    edge a v v
    face F +a -a
    form a 1/2
    fixed v
    meta zeros 1
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import FormatError
from .rational import parse_rational

ID = re.compile(r"[A-Za-z0-9_]+")
SIGNED_ID = re.compile(r"([+-])([A-Za-z0-9_]+)")
META_KEY = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.-]*")

# keyword -> (min fields, max fields or None for unbounded)
_ARITY = {
    "vertex": (1, 1),
    "edge": (3, 3),
    "face": (2, None),
    "form": (2, 2),
    "val": (2, 2),
    "fixed": (1, 1),
    "succ": (2, 2),
    "meta": (2, None),
}


@dataclass
class Document:
    vertices: list = field(default_factory=list)  # (line, id)
    edges: list = field(default_factory=list)  # (line, id, tail, head)
    faces: list = field(default_factory=list)  # (line, id, [(sign, edge)])
    forms: list = field(default_factory=list)  # (line, edge, Fraction)
    vals: list = field(default_factory=list)  # (line, vertex, Fraction)
    fixed: list = field(default_factory=list)  # (line, vertex)
    succ: list = field(default_factory=list)  # (line, vertex, (sign, edge))
    meta: list = field(default_factory=list)  # (line, key, value)


def check_id(token: str, line: int | None = None) -> str:
    if not ID.fullmatch(token):
        raise FormatError(f"invalid id {token!r}", line)
    return token


def parse_signed(token: str, line: int | None = None) -> tuple[int, str]:
    m = SIGNED_ID.fullmatch(token)
    if not m:
        raise FormatError(f"expected a signed edge like +e or -e, got {token!r}", line)
    return (1 if m.group(1) == "+" else -1), m.group(2)


def _rational(token: str, line: int) -> Fraction:
    try:
        return parse_rational(token)
    except ValueError as exc:
        raise FormatError(str(exc), line) from None


def parse_document(text: str) -> Document:
    doc = Document()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if not body:
            continue
        key, args = body[0], body[1:]
        if key not in _ARITY:
            raise FormatError(f"unknown declaration {key!r}", lineno)
        lo, hi = _ARITY[key]
        if len(args) < lo or (hi is not None and len(args) > hi):
            raise FormatError(f"wrong number of fields for {key!r}", lineno)
        if key == "vertex":
            doc.vertices.append((lineno, check_id(args[0], lineno)))
        elif key == "edge":
            doc.edges.append((lineno, *(check_id(a, lineno) for a in args)))
        elif key == "face":
            word = [parse_signed(t, lineno) for t in args[1:]]
            doc.faces.append((lineno, check_id(args[0], lineno), word))
        elif key == "form":
            doc.forms.append((lineno, check_id(args[0], lineno), _rational(args[1], lineno)))
        elif key == "val":
            doc.vals.append((lineno, check_id(args[0], lineno), _rational(args[1], lineno)))
        elif key == "fixed":
            doc.fixed.append((lineno, check_id(args[0], lineno)))
        elif key == "succ":
            doc.succ.append((lineno, check_id(args[0], lineno), parse_signed(args[1], lineno)))
        else:
            if not META_KEY.fullmatch(args[0]):
                raise FormatError(f"invalid meta key {args[0]!r}", lineno)
            doc.meta.append((lineno, args[0], " ".join(args[1:])))
    return doc
