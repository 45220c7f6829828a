"""Exact Gaussian elimination over the rationals.

Rows are sparse dicts ``column -> Fraction``; columns are any hashable keys
and are pivoted in the order given by ``columns``. Only what the cochain
computations need is here: rank, a nullspace basis, and an incremental
solver that names the first constraint making a system inconsistent.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

Row = dict


def _clean(row: Mapping) -> Row:
    return {k: Fraction(v) for k, v in row.items() if v != 0}


class EchelonSystem:
    """Row-reduced system ``sum(row[c] * x[c]) = rhs`` built one equation at a time."""

    def __init__(self, columns: Sequence[Hashable]):
        self.columns = list(columns)
        self._order = {c: i for i, c in enumerate(self.columns)}
        # pivot column -> (row with coefficient 1 at pivot, rhs)
        self.pivots: dict[Hashable, tuple[Row, Fraction]] = {}

    def _reduce(self, row: Row, rhs: Fraction) -> tuple[Row, Fraction]:
        # pivot rows carry no other pivot column, so one pass suffices
        row = dict(row)
        for col in [c for c in row if c in self.pivots]:
            prow, prhs = self.pivots[col]
            factor = row[col]
            for k, v in prow.items():
                nv = row.get(k, 0) - factor * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            rhs -= factor * prhs
        return row, rhs

    def add(self, row: Mapping, rhs=0) -> bool:
        """Add an equation; return False iff it contradicts the ones already added.

        Redundant equations are accepted and leave the system unchanged.
        """
        for col in row:
            if col not in self._order:
                raise KeyError(f"unknown column {col!r}")
        reduced, rhs = self._reduce(_clean(row), Fraction(rhs))
        if not reduced:
            return rhs == 0
        pivot = min(reduced, key=self._order.__getitem__)
        scale = reduced[pivot]
        reduced = {k: v / scale for k, v in reduced.items()}
        rhs = rhs / scale
        # keep the system fully reduced so back substitution is trivial
        for col, (prow, prhs) in list(self.pivots.items()):
            if pivot in prow:
                factor = prow[pivot]
                new = dict(prow)
                for k, v in reduced.items():
                    nv = new.get(k, 0) - factor * v
                    if nv:
                        new[k] = nv
                    else:
                        new.pop(k, None)
                self.pivots[col] = (new, prhs - factor * rhs)
        self.pivots[pivot] = (reduced, rhs)
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solution(self, free_value=0) -> dict:
        """One solution with every free column set to ``free_value``."""
        free_value = Fraction(free_value)
        x = {c: free_value for c in self.columns if c not in self.pivots}
        for col, (row, rhs) in self.pivots.items():
            x[col] = rhs - sum(v * x[k] for k, v in row.items() if k != col)
        return {c: x[c] for c in self.columns}

    def nullspace(self) -> list[dict]:
        basis = []
        free = [c for c in self.columns if c not in self.pivots]
        for f in free:
            vec = {c: Fraction(0) for c in self.columns}
            vec[f] = Fraction(1)
            for col, (row, _) in self.pivots.items():
                vec[col] = -row.get(f, Fraction(0))
            basis.append(vec)
        return basis


def rank(rows: Iterable[Mapping], columns: Sequence[Hashable]) -> int:
    system = EchelonSystem(columns)
    for row in rows:
        system.add(row, 0)
    return system.rank


def nullspace(rows: Iterable[Mapping], columns: Sequence[Hashable]) -> list[dict]:
    system = EchelonSystem(columns)
    for row in rows:
        system.add(row, 0)
    return system.nullspace()
