"""Exact learning of M2MAs from membership and equivalence queries.

The learner keeps an observation table with an invertible block ``F`` and
reads a hypothesis off it: states are coordinates over the table's rows.  A
counterexample is scanned for the first prefix where the hypothesis'
predicted row stops matching the real one; that prefix (minus its last
letter) becomes a new row and the last letter prepended to the failing
suffix becomes a new column, growing ``F`` by one while keeping it
invertible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Protocol

from .gf2 import Gf2Matrix, inverse_rows, parity, xor_rows
from .m2ma import M2MA, Word, as_word
from .minimize import ObservationTable


class InvariantViolation(RuntimeError):
    """Internal inconsistency; indicates a bug or a nondeterministic oracle."""


class MembershipOracle(Protocol):
    alphabet: tuple

    def __call__(self, w: Word) -> int: ...


EquivalenceStrategy = Callable[[M2MA], "Word | None"]


class FunctionOracle:
    """Wrap a plain ``word -> 0/1`` function."""

    def __init__(self, alphabet: Iterable[Hashable], fn: Callable[[Word], int], lasso: bool = False):
        self.alphabet = tuple(alphabet)
        self.fn = fn
        self.lasso = lasso

    def __call__(self, w: Word) -> int:
        return int(self.fn(tuple(w)))


class M2maOracle:
    """Membership in a known M2MA, caching prefix states."""

    lasso = False

    def __init__(self, target: M2MA):
        self.target = target
        self.alphabet = target.alphabet
        self._states: dict[Word, int] = {(): target.initial.bits}

    def _state(self, w: Word) -> int:
        hit = self._states.get(w)
        if hit is not None:
            return hit
        k = len(w)
        while w[:k] not in self._states:
            k -= 1
        state = self._states[w[:k]]
        for j in range(k, len(w)):
            state = xor_rows(state, self.target.packed_rows(w[j]))
            if len(self._states) < 1_000_000:
                self._states[w[: j + 1]] = state
        return state

    def __call__(self, w: Word) -> int:
        w = tuple(w)
        self.target._check(w)
        return parity(self._state(w) & self.target.final.bits)


@dataclass
class LearnerState:
    prefixes: list[Word] = field(default_factory=list)
    suffixes: list[Word] = field(default_factory=list)
    rows: list[int] = field(default_factory=list)     # packed rows of F
    hypothesis: M2MA | None = None
    eq_count: int = 0
    mq_count: int = 0
    counterexamples: list[Word] = field(default_factory=list)
    converged: bool = False

    @property
    def size(self) -> int:
        return len(self.prefixes)

    @property
    def table(self) -> ObservationTable:
        t = len(self.prefixes)
        return ObservationTable(list(self.prefixes), list(self.suffixes), Gf2Matrix(t, t, self.rows))


class _Memo:
    """Per-run membership cache; counts distinct queries only."""

    def __init__(self, mq: MembershipOracle, state: LearnerState):
        self.mq = mq
        self.state = state
        self.cache: dict[Word, int] = {}

    def __call__(self, w: Word) -> int:
        hit = self.cache.get(w)
        if hit is None:
            hit = int(self.mq(w))
            if hit not in (0, 1):
                raise InvariantViolation(f"membership oracle answered {hit!r}")
            self.cache[w] = hit
            self.state.mq_count += 1
        return hit

    def row(self, x: Word, suffixes: list[Word]) -> int:
        return sum(self(x + y) << j for j, y in enumerate(suffixes))


def build_hypothesis(state: LearnerState, mq: Callable[[Word], int], alphabet: tuple) -> M2MA:
    """Hypothesis of dimension ``t`` read off an invertible table.

    An empty table gives the dimension-1 automaton accepting nothing.
    """
    t = state.size
    if t == 0:
        return M2MA.empty(alphabet)
    inv = inverse_rows(state.rows, t)
    if inv is None:
        raise InvariantViolation("observation table block is singular")
    memo = mq if isinstance(mq, _Memo) else None
    row = memo.row if memo else (lambda x, ys: sum(int(mq(x + y)) << j for j, y in enumerate(ys)))
    ys = state.suffixes
    initial = xor_rows(row((), ys), inv)
    eps = ys.index(())
    final = sum(((r >> eps) & 1) << i for i, r in enumerate(state.rows))
    trans = {
        s: tuple(xor_rows(row(x + (s,), ys), inv) for x in state.prefixes)
        for s in alphabet
    }
    return M2MA.from_packed(alphabet, t, initial, trans, final)


def process_counterexample(state: LearnerState, z: Word, mq: Callable[[Word], int], alphabet: tuple) -> None:
    """Grow the table by one row and one column using counterexample ``z``."""
    z = tuple(z)
    memo = mq if isinstance(mq, _Memo) else _Memo(mq, state)
    h = state.hypothesis
    if h is None or h.membership(z) == memo(z):
        raise InvariantViolation(f"{z!r} is not a counterexample")
    if state.size == 0:
        # f(z) = 1 here because the empty hypothesis rejects everything
        state.prefixes, state.suffixes, state.rows = [z], [()], [1]
        return
    ys = state.suffixes
    rows = state.rows
    current = h.initial.bits
    for k in range(len(z)):
        w, sym = z[:k], z[k]
        current = xor_rows(current, h.packed_rows(sym))
        predicted = xor_rows(current, rows)
        actual = memo.row(z[: k + 1], ys)
        diff = predicted ^ actual
        if diff:
            j = (diff & -diff).bit_length() - 1
            _add(state, w, (sym,) + ys[j], memo)
            return
    raise InvariantViolation(f"no breakpoint found in counterexample {z!r}")


def _add(state: LearnerState, x: Word, y: Word, memo: _Memo) -> None:
    t = state.size
    new_rows = [r | (memo(xi + y) << t) for r, xi in zip(state.rows, state.prefixes)]
    state.prefixes.append(x)
    state.suffixes.append(y)
    new_rows.append(memo.row(x, state.suffixes))
    state.rows = new_rows
    if inverse_rows(new_rows, t + 1) is None:
        raise InvariantViolation("table block became singular after adding a counterexample")


def learn(
    mq: MembershipOracle,
    eq: EquivalenceStrategy,
    max_eq: int | None = None,
    on_equivalence: Callable[[LearnerState], None] | None = None,
) -> tuple[M2MA, LearnerState]:
    """Run the learning loop until ``eq`` accepts or ``max_eq`` queries are spent.

    ``on_equivalence`` is called after every equivalence query.  When the
    budget runs out the last hypothesis is returned with
    ``state.converged == False``.
    """
    alphabet = tuple(mq.alphabet)
    state = LearnerState()
    memo = _Memo(mq, state)
    while True:
        state.hypothesis = build_hypothesis(state, memo, alphabet)
        if max_eq is not None and state.eq_count >= max_eq:
            return state.hypothesis, state
        cex = eq(state.hypothesis)
        state.eq_count += 1
        if cex is not None:
            cex = as_word(cex)
        if on_equivalence is not None:
            on_equivalence(state)
        if cex is None:
            state.converged = True
            return state.hypothesis, state
        if state.hypothesis.membership(cex) == memo(cex):
            raise InvariantViolation(f"equivalence strategy returned {cex!r}, which is not a counterexample")
        state.counterexamples.append(cex)
        process_counterexample(state, cex, memo, alphabet)


def table_eq(hypothesis: M2MA, target: M2MA, table: ObservationTable) -> Word | None:
    """Compare on every ``x y`` and ``x s y`` of a complete table of ``target``.

    Rows are scanned by (length, position in table); for each row the table
    words come first, then the one-letter extensions in alphabet order.  The
    empty word is always checked, so the empty table of the empty language
    still catches hypotheses with ``f(eps) = 1``.  Sound for hypotheses of
    dimension at most the target's minimal dimension, which includes every
    hypothesis the learner builds.
    """
    if hypothesis.membership(()) != target.membership(()):
        return ()
    ys = table.suffixes
    h_co = [hypothesis.costate_bits(y) for y in ys]
    t_co = [target.costate_bits(y) for y in ys]

    def row(state: int, costates: list[int]) -> int:
        return sum(parity(state & c) << j for j, c in enumerate(costates))

    order = sorted(range(len(table.prefixes)), key=lambda i: (len(table.prefixes[i]), i))
    for i in order:
        x = table.prefixes[i]
        hs, ts = hypothesis.state_bits(x), target.state_bits(x)
        steps = [((), hs, ts)] + [
            ((s,), xor_rows(hs, hypothesis.packed_rows(s)), xor_rows(ts, target.packed_rows(s)))
            for s in hypothesis.alphabet
        ]
        for ext, h_state, t_state in steps:
            diff = row(h_state, h_co) ^ row(t_state, t_co)
            if diff:
                j = (diff & -diff).bit_length() - 1
                return x + ext + ys[j]
    return None


def table_equivalence(target: M2MA, table: ObservationTable) -> EquivalenceStrategy:
    """Equivalence strategy backed by :func:`table_eq` against a minimized target."""
    return lambda h: table_eq(h, target, table)


def print_table(state: LearnerState) -> str:
    return state.table.render()
