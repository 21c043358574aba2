"""Exact sparse row echelon forms over the rationals.

Vectors are dicts from sortable column keys to Fractions.  The pivot of a
row is its least column, so reducing a vector against an echelon yields
the unique representative of its coset with zeros in all pivot columns.
"""
from __future__ import annotations

from fractions import Fraction


def _axpy(target: dict, row: dict, factor: Fraction, skip=None) -> None:
    for col, v in row.items():
        if col == skip:
            continue
        x = target.get(col, 0) - factor * v
        if x:
            target[col] = x
        else:
            target.pop(col, None)


class Echelon:
    """Incrementally built echelon basis of a subspace.

    With ``track=True`` every stored row remembers the combination of
    inserted vectors it came from, which turns ``solve`` into an exact
    linear solver.
    """

    def __init__(self, track: bool = False):
        self.pivots: dict = {}
        self.history: dict = {}
        self.track = track
        self._count = 0

    def __len__(self) -> int:
        return len(self.pivots)

    def insert(self, vec: dict, label=None) -> bool:
        """Add a vector; returns True if it enlarged the span."""
        v = {k: Fraction(x) for k, x in vec.items() if x}
        hist = {}
        if self.track:
            hist = {self._count if label is None else label: Fraction(1)}
        self._count += 1
        while v:
            col = min(v)
            row = self.pivots.get(col)
            if row is None:
                lead = v[col]
                self.pivots[col] = {k: x / lead for k, x in v.items()}
                if self.track:
                    self.history[col] = {k: x / lead for k, x in hist.items()}
                return True
            f = v.pop(col)
            _axpy(v, row, f, skip=col)
            if self.track:
                _axpy(hist, self.history[col], f)
        return False

    def reduce(self, vec: dict) -> dict:
        """Remainder of ``vec`` with every pivot column cleared."""
        v = {k: Fraction(x) for k, x in vec.items() if x}
        out = {}
        while v:
            col = min(v)
            f = v.pop(col)
            row = self.pivots.get(col)
            if row is None:
                out[col] = f
            else:
                _axpy(v, row, f, skip=col)
        return out

    def solve(self, vec: dict):
        """Coefficients ``x`` over inserted labels with ``sum x_l v_l = vec``, or None."""
        if not self.track:
            raise RuntimeError("solve needs an echelon built with track=True")
        v = {k: Fraction(x) for k, x in vec.items() if x}
        combo: dict = {}
        while v:
            col = min(v)
            row = self.pivots.get(col)
            if row is None:
                return None
            f = v.pop(col)
            _axpy(v, row, f, skip=col)
            for k, x in self.history[col].items():
                y = combo.get(k, 0) + f * x
                if y:
                    combo[k] = y
                else:
                    combo.pop(k, None)
        return combo
