"""Two-sided reduction of an M2MA to an equivalent automaton of minimal dimension.

A forward pass keeps only the reachable part of the row space (the span of
``v_I^T mu(w)``), a backward pass does the same for the co-reachable column
space (the span of ``mu(w) v_F``).  After both passes the dimension equals the
rank of the Hankel matrix of the language.  The word labels found along the way
form a complete observation table for the result.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

from .gf2 import Gf2Matrix, Gf2Vector, is_invertible, parity
from .m2ma import M2MA, Word, format_word, reachable_basis


class ProgressEvent(NamedTuple):
    stage: str      # "input", "forward", "backward" or "table"
    detail: dict


ProgressSink = Callable[[ProgressEvent], None]


@dataclass
class LabeledBasis:
    """Basis vectors together with the words that generate them."""

    words: list[Word]
    vectors: list[Gf2Vector]
    dim: int

    def __len__(self) -> int:
        return len(self.words)


@dataclass
class ObservationTable:
    """Finite block of the Hankel matrix: ``block[i][j] == f(prefixes[i] + suffixes[j])``."""

    prefixes: list[Word]
    suffixes: list[Word]
    block: Gf2Matrix = field(repr=False)

    @property
    def size(self) -> tuple[int, int]:
        return len(self.prefixes), len(self.suffixes)

    def is_complete(self) -> bool:
        return len(self.prefixes) == len(self.suffixes) and is_invertible(self.block)

    def render(self) -> str:
        """Text grid: prefixes label rows, suffixes label columns, ``_`` is the empty word."""
        rows = [format_word(x).replace(" ", "") for x in self.prefixes]
        cols = [format_word(y).replace(" ", "") for y in self.suffixes]
        width = max([len(r) for r in rows] + [1])
        header = " " * width + " | " + " ".join(cols)
        lines = [header, "-" * len(header)]
        for i, label in enumerate(rows):
            cells = " ".join(
                str(self.block[i, j]).rjust(len(cols[j])) for j in range(len(cols))
            )
            lines.append(label.ljust(width) + " | " + cells)
        return "\n".join(lines)


def _emit(progress: ProgressSink | None, stage: str, **detail) -> None:
    if progress is not None:
        progress(ProgressEvent(stage, detail))


def forward_reduce(a: M2MA) -> tuple[M2MA, LabeledBasis]:
    """Restrict ``a`` to its reachable row space.

    Row ``i`` of the new ``mu_s`` holds the coordinates of ``basis_i mu_s``;
    the new initial vector is ``e_1`` because ``v_I`` is the first basis vector.
    """
    words, dots, basis, images = reachable_basis(a)
    if not words:
        return M2MA.empty(a.alphabet), LabeledBasis([], [], a.dim)
    r = len(words)
    rows = {s: tuple(img[s] for img in images) for s in a.alphabet}
    final = sum(1 << i for i, d in enumerate(dots) if d)
    reduced = M2MA.from_packed(a.alphabet, r, 1, rows, final)
    return reduced, LabeledBasis(words, basis.basis_vectors, a.dim)


def backward_reduce(a: M2MA) -> tuple[M2MA, LabeledBasis]:
    """Restrict ``a`` to its co-reachable column space (forward pass on the reversal)."""
    if a.final.is_zero():
        return M2MA.empty(a.alphabet), LabeledBasis([], [], a.dim)
    reduced, labels = forward_reduce(a.reverse())
    suffixes = [tuple(reversed(w)) for w in labels.words]
    return reduced.reverse(), LabeledBasis(suffixes, labels.vectors, a.dim)


def minimize(a: M2MA, progress: ProgressSink | None = None) -> tuple[M2MA, ObservationTable]:
    """Minimal equivalent M2MA and its observation table.

    The passes run forward, backward, then forward again; the last pass puts
    the result in a basis with ``v_I = e_1`` and yields the table's prefixes.
    The empty language gives the dimension-1 automaton with ``v_F = 0`` and an
    empty table.
    """
    _emit(progress, "input", automaton=a, dimension=a.dim)
    fwd, reach = forward_reduce(a)
    _emit(progress, "forward", size=len(reach), dimension=fwd.dim)
    bwd, coreach = backward_reduce(fwd)
    _emit(progress, "backward", size=len(coreach), dimension=bwd.dim)
    if not coreach.words:
        table = ObservationTable([], [], Gf2Matrix.zeros(0, 0))
        _emit(progress, "table", table=table, dimension=1)
        return M2MA.empty(a.alphabet), table
    result, access = forward_reduce(bwd)
    prefixes, suffixes = access.words, coreach.words
    states = [a.state_bits(x) for x in prefixes]
    costates = [a.costate_bits(y) for y in suffixes]
    block = Gf2Matrix(
        len(prefixes),
        len(suffixes),
        [sum(parity(s & c) << j for j, c in enumerate(costates)) for s in states],
    )
    table = ObservationTable(prefixes, suffixes, block)
    _emit(progress, "table", table=table, dimension=result.dim)
    return result, table
