"""Canonical example bundles: a complex, a closed form, a suggested flow, metadata.

Angle forms are normalized to total period 1 instead of 2*pi so everything
stays rational. The surface models are choices of CW structure:

``genus2``
    one-vertex genus-2 surface ``[a1,b1][a2,b2]`` with ``a1`` subdivided at
    a vertex ``m``; the angle form puts 1/2 on each half of ``a1``.
``pinched-genus2``
    two one-vertex tori wedged at ``v`` (the genus-2 surface with one handle
    pinched to a point); weight 1 on ``a1`` and ``a2``.

For the two surfaces the zero counts and category values recorded in the
metadata are the expected values for the smooth and pinched surfaces; the
suggested fixed sets impose those zeros, they are not derived here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cellcx import Complex, dump_complex, require_valid
from .cocycle import OneForm, VertexFunction, differential, dump_form, require_closed
from .gradflow import Flow, build_flow, dump_flow, require_valid_flow

SIZE_LIMITS = {"circle": (1, 1000), "line-x3": (2, 1001)}
DEFAULT_SIZES = {"circle": 3, "line-x3": 5}
NAMES = ("circle", "line-x3", "torus", "genus2", "pinched-genus2", "c6-two-zeros")


@dataclass(frozen=True)
class Bundle:
    name: str
    complex: Complex
    form: OneForm
    flow: Flow
    metadata: dict = field(default_factory=dict)

    def complex_text(self) -> str:
        return dump_complex(self.complex)

    def form_text(self) -> str:
        return dump_form(self.form)

    def flow_text(self) -> str:
        return dump_flow(self.flow)

    def meta_text(self) -> str:
        return "".join(f"meta {k} {v}\n" for k, v in self.metadata.items())

    def text(self) -> str:
        return self.complex_text() + self.form_text() + self.flow_text() + self.meta_text()


def _circle(n: int):
    cx = Complex.build([f"v{i}" for i in range(n)],
                       [(f"e{i}", f"v{i}", f"v{(i + 1) % n}") for i in range(n)])
    w = OneForm({f"e{i}": Fraction(1, n) for i in range(n)})
    return cx, w, None, "steepest", {"period-normalization": "1"}


def _line_x3(n: int):
    xs = [i - n // 2 for i in range(n)]
    names = [f"v{i}" for i in range(n)]
    cx = Complex.build(names, [(f"e{i}", names[i], names[i + 1]) for i in range(n - 1)])
    w = differential(cx, VertexFunction({v: x ** 3 for v, x in zip(names, xs)}))
    origin = names[xs.index(0)]
    return cx, w, None, "steepest", {"origin": origin, "samples": " ".join(map(str, xs))}


def _torus(_):
    cx = Complex.build(["v"], [("a", "v", "v"), ("b", "v", "v")], [("T", "+a +b -a -b")])
    w = OneForm({"a": 1, "b": 0})
    return cx, w, None, "steepest", {"period-normalization": "1"}


def _genus2(_):
    cx = Complex.build(
        ["m", "v"],
        [("a1_0", "v", "m"), ("a1_1", "m", "v"), ("a2", "v", "v"), ("b1", "v", "v"), ("b2", "v", "v")],
        [("S", "+a1_0 +a1_1 +b1 -a1_1 -a1_0 -b1 +a2 +b2 -a2 -b2")],
    )
    w = OneForm({"a1_0": Fraction(1, 2), "a1_1": Fraction(1, 2), "a2": 0, "b1": 0, "b2": 0})
    meta = {"zeros": "2", "cat-target": "1", "period-normalization": "1"}
    return cx, w, {"v", "m"}, "steepest", meta


def _pinched_genus2(_):
    cx = Complex.build(
        ["v"],
        [("a1", "v", "v"), ("a2", "v", "v"), ("b1", "v", "v"), ("b2", "v", "v")],
        [("T1", "+a1 +b1 -a1 -b1"), ("T2", "+a2 +b2 -a2 -b2")],
    )
    w = OneForm({"a1": 1, "a2": 1, "b1": 0, "b2": 0})
    meta = {"zeros": "1", "cat-target": "1", "period-normalization": "1"}
    return cx, w, {"v"}, "steepest", meta


def _c6(_):
    cx = Complex.build([f"v{i}" for i in range(6)],
                       [(f"e{i}", f"v{i}", f"v{(i + 1) % 6}") for i in range(6)])
    w = OneForm({**{f"e{i}": -1 for i in range(5)}, "e5": 6})
    return cx, w, {"v2", "v5"}, "first", {}


_BUILDERS = {
    "circle": _circle,
    "line-x3": _line_x3,
    "torus": _torus,
    "genus2": _genus2,
    "pinched-genus2": _pinched_genus2,
    "c6-two-zeros": _c6,
}


def generate(name: str, size: int | None = None) -> Bundle:
    """Build the named example; ``size`` applies to ``circle`` and ``line-x3`` only."""
    if name not in _BUILDERS:
        raise ValueError(f"unknown example {name!r}; choose from {', '.join(NAMES)}")
    if name in SIZE_LIMITS:
        lo, hi = SIZE_LIMITS[name]
        size = DEFAULT_SIZES[name] if size is None else size
        if not lo <= size <= hi:
            raise ValueError(f"size for {name} must be in [{lo}, {hi}], got {size}")
    elif size is not None:
        raise ValueError(f"example {name} takes no size")
    cx, w, fixed, policy, meta = _BUILDERS[name](size)
    require_valid(cx)
    require_closed(cx, w)
    fl = build_flow(cx, w, fixed, policy)
    require_valid_flow(cx, w, fl)
    metadata = {"name": name if size is None else f"{name}({size})",
                "policy": policy, **meta}
    return Bundle(name, cx, w, fl, metadata)
