"""Modulo-2 multiplicity automata.

An M2MA over alphabet ``S`` of dimension ``d`` is a row vector ``v_I``, one
``d x d`` matrix per symbol, and a column vector ``v_F``; it accepts ``w``
when ``v_I^T mu(w) v_F == 1`` with all arithmetic mod 2.

Words are tuples of symbols.  Plain strings are accepted wherever a word is
expected and are split into characters.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from .gf2 import (
    AnyMatrix,
    Gf2Basis,
    Gf2Matrix,
    Gf2Vector,
    inverse_rows,
    parity,
    transpose_rows,
    xor_rows,
)

Word = tuple
DEFAULT_STATE_CAP = 1_000_000


class AlphabetError(ValueError):
    """A word uses a symbol outside the automaton's alphabet."""


class StateCapExceeded(RuntimeError):
    def __init__(self, found: int, cap: int):
        super().__init__(f"reachable state space exceeds cap: found {found} states (cap {cap})")
        self.found = found
        self.cap = cap


def as_word(w) -> Word:
    if isinstance(w, str):
        return tuple(w)
    return tuple(w)


def format_word(w: Sequence[Hashable]) -> str:
    return " ".join(map(str, w)) if len(w) else "_"


class M2MA:
    """Immutable M2MA.

    ``transitions`` maps every alphabet symbol to a ``dim x dim`` matrix in
    either GF(2) representation.  Hot paths use the packed dense rows.
    """

    def __init__(
        self,
        alphabet: Iterable[Hashable],
        initial: Gf2Vector,
        transitions: Mapping[Hashable, AnyMatrix],
        final: Gf2Vector,
    ):
        alphabet = tuple(alphabet)
        if len(set(alphabet)) != len(alphabet):
            raise ValueError(f"duplicate symbols in alphabet {alphabet}")
        d = initial.length
        if final.length != d:
            raise ValueError(f"initial vector has length {d} but final vector {final.length}")
        if set(transitions) != set(alphabet):
            missing = set(alphabet) - set(transitions)
            extra = set(transitions) - set(alphabet)
            raise ValueError(f"transition matrices do not match alphabet (missing {missing}, extra {extra})")
        for s, m in transitions.items():
            if m.shape != (d, d):
                raise ValueError(f"matrix for {s!r} is {m.nrows}x{m.ncols}, expected {d}x{d}")
        self.alphabet = alphabet
        self.dim = d
        self.initial = initial
        self.final = final
        self.transitions = dict(transitions)
        self._rows = {s: m.to_dense().rows for s, m in self.transitions.items()}
        self._cols = None

    @classmethod
    def from_lists(cls, alphabet, initial, transitions, final) -> "M2MA":
        """Convenience constructor from nested 0/1 lists."""
        return cls(
            alphabet,
            Gf2Vector.from_list(initial),
            {s: Gf2Matrix.from_lists(transitions[s]) for s in alphabet},
            Gf2Vector.from_list(final),
        )

    @classmethod
    def from_packed(cls, alphabet, dim: int, initial: int, rows: Mapping, final: int) -> "M2MA":
        return cls(
            alphabet,
            Gf2Vector(dim, initial),
            {s: Gf2Matrix(dim, dim, rows[s]) for s in alphabet},
            Gf2Vector(dim, final),
        )

    @classmethod
    def empty(cls, alphabet) -> "M2MA":
        """Canonical empty-language automaton: dimension 1, zero final vector."""
        return cls.from_packed(alphabet, 1, 1, {s: (0,) for s in alphabet}, 0)

    def packed_rows(self, symbol) -> tuple[int, ...]:
        return self._rows[symbol]

    def packed_cols(self, symbol) -> list[int]:
        if self._cols is None:
            self._cols = {s: transpose_rows(r, self.dim) for s, r in self._rows.items()}
        return self._cols[symbol]

    def _check(self, w: Word) -> None:
        for pos, s in enumerate(w, start=1):
            if s not in self._rows:
                raise AlphabetError(f"symbol {s!r} at position {pos} is not in alphabet {list(self.alphabet)}")

    def state_bits(self, w, start: int | None = None) -> int:
        """Packed row vector ``v_I^T mu(w)`` (or ``start`` in place of ``v_I``)."""
        w = as_word(w)
        self._check(w)
        state = self.initial.bits if start is None else start
        rows = self._rows
        for s in w:
            state = xor_rows(state, rows[s])
        return state

    def costate_bits(self, w, start: int | None = None) -> int:
        """Packed column vector ``mu(w) v_F``."""
        w = as_word(w)
        self._check(w)
        vec = self.final.bits if start is None else start
        for s in reversed(w):
            vec = xor_rows(vec, self.packed_cols(s))
        return vec

    def state(self, w) -> Gf2Vector:
        return Gf2Vector(self.dim, self.state_bits(w))

    def membership(self, w) -> int:
        """``f(w)``: 1 if ``w`` is accepted, else 0.  The empty word is allowed."""
        return parity(self.state_bits(w) & self.final.bits)

    __call__ = membership

    def accepts(self, w) -> bool:
        return self.membership(w) == 1

    def reverse(self) -> "M2MA":
        """Automaton for the reversed language: swap end vectors, transpose matrices."""
        return M2MA(
            self.alphabet,
            self.final,
            {s: Gf2Matrix(self.dim, self.dim, self.packed_cols(s)) for s in self.alphabet},
            self.initial,
        )

    def is_empty_language(self) -> bool:
        return not any(d for d in reachable_basis(self)[1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, M2MA):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.initial == other.initial
            and self.final == other.final
            and self._rows == other._rows
        )

    def __hash__(self) -> int:
        return hash((self.alphabet, self.initial, self.final, tuple(self._rows[s] for s in self.alphabet)))

    def __repr__(self) -> str:
        return f"M2MA(dim={self.dim}, alphabet={list(self.alphabet)})"


def reachable_basis(a: M2MA, start: int | None = None):
    """Word-labelled basis of the reachable row space.

    Breadth-first worklist over basis vectors in discovery order and symbols
    in alphabet order.  Returns ``(words, dots, basis, images)`` where
    ``dots[i]`` is ``basis_i . v_F`` and ``images[i][s]`` is the packed
    coordinate vector of ``basis_i mu_s``.
    """
    start = a.initial.bits if start is None else start
    basis = Gf2Basis(a.dim)
    words: list[Word] = []
    images: list[dict] = []
    if start == 0:
        return words, [], basis, images
    basis.try_extend_bits(start)
    words.append(())
    i = 0
    while i < len(basis.vectors):
        vec = basis.vectors[i]
        img = {}
        for s in a.alphabet:
            _, coords = basis.try_extend_bits(xor_rows(vec, a.packed_rows(s)))
            if len(basis.vectors) > len(words):
                words.append(words[i] + (s,))
            img[s] = coords
        images.append(img)
        i += 1
    dots = [parity(v & a.final.bits) for v in basis.vectors]
    return words, dots, basis, images


def direct_sum(a: M2MA, b: M2MA) -> M2MA:
    """Automaton computing ``f_a XOR f_b``."""
    if set(a.alphabet) != set(b.alphabet):
        raise AlphabetError(f"alphabets differ: {list(a.alphabet)} vs {list(b.alphabet)}")
    shift = a.dim
    rows = {
        s: tuple(a.packed_rows(s)) + tuple(r << shift for r in b.packed_rows(s))
        for s in a.alphabet
    }
    return M2MA.from_packed(
        a.alphabet,
        a.dim + b.dim,
        a.initial.bits | (b.initial.bits << shift),
        rows,
        a.final.bits | (b.final.bits << shift),
    )


def equivalent(a: M2MA, b: M2MA) -> Word | None:
    """``None`` if ``a`` and ``b`` accept the same words, else a word where they differ.

    The counterexample is the first basis label (breadth-first order) of the
    direct sum whose state is not orthogonal to the final vector.
    """
    c = direct_sum(a, b)
    words, dots, _, _ = reachable_basis(c)
    for w, d in zip(words, dots):
        if d:
            return w
    return None


def with_unit_initial(a: M2MA) -> M2MA:
    """Equivalent automaton of the same dimension whose initial vector is ``e_1``.

    Changes basis with a matrix whose first row is ``v_I``.  An automaton with
    ``v_I == 0`` becomes the canonical empty automaton.
    """
    g = a.initial.bits
    if g == 1:
        return a
    if g == 0:
        return M2MA.empty(a.alphabet)
    d = a.dim
    # P has rows: v_I, then unit vectors completing it to a basis.
    low = (g & -g).bit_length() - 1
    p_rows = [g] + [1 << j for j in range(d) if j != low]
    p_inv = inverse_rows(p_rows, d)
    # new state s' = s P^{-1}; mu' = P mu P^{-1}; v_F' = P v_F
    rows = {}
    for s in a.alphabet:
        pm = [xor_rows(r, a.packed_rows(s)) for r in p_rows]
        rows[s] = tuple(xor_rows(r, p_inv) for r in pm)
    final = 0
    for i, r in enumerate(p_rows):
        if parity(r & a.final.bits):
            final |= 1 << i
    return M2MA.from_packed(a.alphabet, d, 1, rows, final)


@dataclass
class ReachableDfa:
    alphabet: tuple
    states: list[int]              # packed row vectors
    dim: int
    delta: list[tuple[int, ...]]   # delta[q][k] for the k-th alphabet symbol
    accepting: set[int]
    initial_index: int = 0

    def __len__(self) -> int:
        return len(self.states)

    def state_vectors(self) -> list[Gf2Vector]:
        return [Gf2Vector(self.dim, s) for s in self.states]

    def run(self, w) -> int:
        q = self.initial_index
        index = {s: k for k, s in enumerate(self.alphabet)}
        for s in as_word(w):
            q = self.delta[q][index[s]]
        return q

    def accepts(self, w) -> bool:
        return self.run(w) in self.accepting


def to_reachable_dfa(a: M2MA, state_cap: int = DEFAULT_STATE_CAP) -> ReachableDfa:
    """Breadth-first closure of ``v_I^T`` under every ``mu_s``."""
    index = {a.initial.bits: 0}
    states = [a.initial.bits]
    delta: list[tuple[int, ...]] = []
    rows = [a.packed_rows(s) for s in a.alphabet]
    queue = deque([0])
    while queue:
        q = queue.popleft()
        succ = []
        for r in rows:
            nxt = xor_rows(states[q], r)
            k = index.get(nxt)
            if k is None:
                if len(states) >= state_cap:
                    raise StateCapExceeded(len(states) + 1, state_cap)
                k = index[nxt] = len(states)
                states.append(nxt)
                queue.append(k)
            succ.append(k)
        delta.append(tuple(succ))
    accepting = {k for k, v in enumerate(states) if parity(v & a.final.bits)}
    return ReachableDfa(a.alphabet, states, a.dim, delta, accepting)


def hopcroft_classes(n: int, nsym: int, delta: Sequence[Sequence[int]], accepting: set[int]) -> list[int]:
    """Myhill-Nerode class id for every state of a complete DFA."""
    if n == 0:
        return []
    inverse = [[[] for _ in range(n)] for _ in range(nsym)]
    for q in range(n):
        for k in range(nsym):
            inverse[k][delta[q][k]].append(q)
    block_of = [0 if q in accepting else 1 for q in range(n)]
    blocks: list[set[int]] = [set(q for q in range(n) if block_of[q] == 0),
                              set(q for q in range(n) if block_of[q] == 1)]
    if not blocks[0]:
        blocks.pop(0)
        block_of = [0] * n
    elif not blocks[1]:
        blocks.pop()
    work = deque()
    if len(blocks) == 2:
        smaller = 0 if len(blocks[0]) <= len(blocks[1]) else 1
        for k in range(nsym):
            work.append((smaller, k))
    while work:
        b, k = work.popleft()
        pre = set()
        for q in blocks[b]:
            pre.update(inverse[k][q])
        touched: dict[int, set[int]] = {}
        for q in pre:
            touched.setdefault(block_of[q], set()).add(q)
        for c, hit in touched.items():
            if len(hit) == len(blocks[c]):
                continue
            rest = blocks[c] - hit
            new = len(blocks)
            if len(hit) <= len(rest):
                blocks[c], moved = rest, hit
            else:
                blocks[c], moved = hit, rest
            blocks.append(moved)
            for q in moved:
                block_of[q] = new
            # whether or not (c, kk) is pending, queueing the smaller half suffices
            for kk in range(nsym):
                work.append((new, kk))
    return block_of


def minimal_dfa_state_count(a: M2MA, state_cap: int = DEFAULT_STATE_CAP) -> int:
    """Number of states of the minimal complete DFA for ``a``'s language."""
    dfa = to_reachable_dfa(a, state_cap)
    classes = hopcroft_classes(len(dfa), len(a.alphabet), dfa.delta, dfa.accepting)
    return len(set(classes))
