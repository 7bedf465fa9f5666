"""Büchi automata, lasso words, and the SUBA -> UFA -> M2MA pipeline.

States are numbered ``1..n``.  An ultimately periodic word ``u v v v ...`` is
handled as the finite word ``u $ v`` over the alphabet extended with ``$``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator

from .gf2 import Gf2Vector, Gf2Matrix
from .m2ma import M2MA, Word, as_word

SEPARATOR = "$"
KINDS = ("nba", "suba", "ufa")


@dataclass(frozen=True)
class LassoWord:
    """The ultimately periodic word ``u (v)^omega``; ``v`` must be nonempty."""

    u: Word
    v: Word

    def __post_init__(self):
        object.__setattr__(self, "u", as_word(self.u))
        object.__setattr__(self, "v", as_word(self.v))
        if not self.v:
            raise ValueError("the periodic part v of a lasso word must be nonempty")
        if SEPARATOR in self.u or SEPARATOR in self.v:
            raise ValueError(f"{SEPARATOR!r} is reserved as the lasso separator")

    def to_word(self) -> Word:
        """Encoding ``u $ v`` as a finite word."""
        return self.u + (SEPARATOR,) + self.v

    @classmethod
    def from_word(cls, w) -> "LassoWord | None":
        """Decode ``u $ v``; ``None`` when ``w`` is not a valid encoding."""
        w = as_word(w)
        if w.count(SEPARATOR) != 1:
            return None
        k = w.index(SEPARATOR)
        if k == len(w) - 1:
            return None
        return cls(w[:k], w[k + 1:])

    def __str__(self) -> str:
        return " ".join(list(map(str, self.u)) + [SEPARATOR] + list(map(str, self.v)))


@dataclass(frozen=True)
class Nfa:
    """Shared shape of NBAs, SUBAs and UFAs: ``(alphabet, 1..n, I, Delta, F)``."""

    alphabet: tuple
    n: int
    initial: frozenset
    transitions: frozenset          # of (p, symbol, q)
    final: frozenset
    kind: str = "nba"
    _succ: dict = field(default=None, init=False, repr=False, compare=False, hash=False)
    _cache: dict = field(default=None, init=False, repr=False, compare=False, hash=False)
    _masks: tuple = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "final", frozenset(self.final))
        if isinstance(self.transitions, frozenset):
            trans = self.transitions
        else:
            trans = list(self.transitions)
            if len(set(trans)) != len(trans):
                raise ValueError("duplicate transitions")
            trans = frozenset(trans)
        object.__setattr__(self, "transitions", trans)
        if self.kind not in KINDS:
            raise ValueError(f"unknown automaton kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("an automaton needs at least one state")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate symbols in alphabet")
        for q in self.initial | self.final:
            if not 1 <= q <= self.n:
                raise ValueError(f"state {q} outside 1..{self.n}")
        symbols = set(self.alphabet)
        for p, s, q in self.transitions:
            if not (1 <= p <= self.n and 1 <= q <= self.n):
                raise ValueError(f"transition ({p}, {s}, {q}) leaves states 1..{self.n}")
            if s not in symbols:
                raise ValueError(f"transition ({p}, {s}, {q}) uses unknown symbol {s!r}")
        # successor bitmasks: bit (q-1) of succ[s][p] set iff (p, s, q) in Delta
        succ = {s: [0] * (self.n + 1) for s in self.alphabet}
        for p, s, q in self.transitions:
            succ[s][p] |= 1 << (q - 1)
        object.__setattr__(self, "_succ", succ)
        object.__setattr__(self, "_cache", {})
        object.__setattr__(self, "_masks", (
            sum(1 << (q - 1) for q in self.initial),
            sum(1 << (q - 1) for q in self.final),
        ))

    @property
    def initial_mask(self) -> int:
        return self._masks[0]

    @property
    def final_mask(self) -> int:
        return self._masks[1]

    def post(self, mask: int, symbol) -> int:
        """States reachable in one ``symbol`` step from the set ``mask``."""
        row = self._succ[symbol]
        out = 0
        while mask:
            low = mask & -mask
            out |= row[low.bit_length()]
            mask ^= low
        return out

    def post_word(self, mask: int, w: Iterable) -> int:
        for s in w:
            mask = self.post(mask, s)
        return mask

    def with_kind(self, kind: str) -> "Nfa":
        return Nfa(self.alphabet, self.n, self.initial, self.transitions, self.final, kind)


def states_of(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length()
        mask ^= low


def _check_symbols(a: Nfa, w: Word) -> None:
    for pos, s in enumerate(w, start=1):
        if s not in a._succ:
            raise ValueError(f"symbol {s!r} at position {pos} is not in alphabet {list(a.alphabet)}")


# -- SUBA -> UFA -> M2MA ---------------------------------------------------

def ufa_state(n: int, p: int, q: int, bit: int) -> int:
    """Number of the loop-phase state ``(p, q, bit)`` in :func:`suba_to_ufa` output."""
    return n + 1 + 2 * ((p - 1) * n + (q - 1)) + bit


def suba_to_ufa(s: Nfa) -> Nfa:
    """UFA over ``alphabet + ('$',)`` accepting ``u $ v`` iff ``s`` accepts ``u v^omega``.

    States ``1..n`` read ``u`` with the original transitions.  Reading ``$``
    from ``q`` enters ``(q, q, 0)``; the loop phase ``(p, q, b)`` remembers
    the state ``p`` where ``v`` started, the current state ``q`` and whether a
    final state was entered.  Accepting states are ``(p, p, 1)``.  The result
    has ``2 n^2 + n`` states.
    """
    if s.kind != "suba":
        raise ValueError(f"expected a SUBA, got kind {s.kind!r}")
    if SEPARATOR in s.alphabet:
        raise ValueError(f"{SEPARATOR!r} may not appear in the input alphabet")
    n = s.n
    trans = set(s.transitions)
    for q in range(1, n + 1):
        trans.add((q, SEPARATOR, ufa_state(n, q, q, 0)))
    for (q, sym, q2) in s.transitions:
        fin = int(q2 in s.final)
        for p in range(1, n + 1):
            for b in (0, 1):
                trans.add((ufa_state(n, p, q, b), sym, ufa_state(n, p, q2, b | fin)))
    final = {ufa_state(n, p, p, 1) for p in range(1, n + 1)}
    return Nfa(s.alphabet + (SEPARATOR,), 2 * n * n + n, s.initial, frozenset(trans), frozenset(final), "ufa")


def ufa_to_m2ma(u: Nfa) -> M2MA:
    """Read the UFA's adjacency matrices as an M2MA of the same dimension.

    ``f(w)`` is the number of accepting runs mod 2, which is acceptance when
    the automaton really is unambiguous.
    """
    if u.kind != "ufa":
        raise ValueError(f"expected a UFA, got kind {u.kind!r}")
    n = u.n
    rows = {s: tuple(u._succ[s][1:]) for s in u.alphabet}
    return M2MA(
        u.alphabet,
        Gf2Vector(n, u.initial_mask),
        {s: Gf2Matrix(n, n, rows[s]) for s in u.alphabet},
        Gf2Vector(n, u.final_mask),
    )


def suba_to_m2ma(s: Nfa) -> M2MA:
    return ufa_to_m2ma(suba_to_ufa(s))


# -- membership queries ----------------------------------------------------

def _loop_targets(a: Nfa, start: int, v: Word) -> int:
    """Pairs reached from ``(start, 0)`` after one pass over ``v``.

    A pair ``(q, b)`` is encoded as bit ``2 (q - 1) + b``; ``b`` records that
    some transition along the way entered a final state.
    """
    final = a.final_mask
    cur = 1 << (2 * (start - 1))
    return _pair_post_word(a, cur, v, final)


def _pair_post_word(a: Nfa, pairs: int, v: Word, final: int) -> int:
    for sym in v:
        row = a._succ[sym]
        nxt = 0
        while pairs:
            low = pairs & -pairs
            idx = low.bit_length() - 1
            q, b = (idx >> 1) + 1, idx & 1
            tgt = row[q]
            while tgt:
                tl = tgt & -tgt
                q2 = tl.bit_length() - 1
                nxt |= 1 << (2 * q2 + (b | ((final >> q2) & 1)))
                tgt ^= tl
            pairs ^= low
        pairs = nxt
    return pairs


def suba_mq(s: Nfa, w: LassoWord) -> int:
    """1 iff some state reached on ``u`` has a ``v``-loop through a final state.

    Valid for strongly unambiguous automata, whose unique final run on
    ``v^omega`` repeats with period ``|v|``.
    """
    if s.kind != "suba":
        raise ValueError(f"expected a SUBA, got kind {s.kind!r}")
    if not w.v:
        raise ValueError("empty periodic part")
    _check_symbols(s, w.u + w.v)
    reached = s.post_word(s.initial_mask, w.u)
    for q in states_of(reached):
        if (_loop_targets(s, q, w.v) >> (2 * (q - 1) + 1)) & 1:
            return 1
    return 0


def _reachable(a: Nfa, mask: int, v: Word) -> int:
    """States reachable from ``mask`` by reading ``v`` one or more times."""
    key = ("reach", mask, v)
    hit = a._cache.get(key)
    if hit is not None:
        return hit
    found = a.post_word(mask, v)
    while True:
        more = a.post_word(found, v)
        if more & ~found == 0:
            break
        found |= more
    if len(a._cache) < _CACHE_LIMIT:
        a._cache[key] = found
    return found


def _has_accepting_loop(a: Nfa, s: int, v: Word) -> bool:
    """Whether ``s`` returns to itself on some ``v^k`` (k >= 1) through a final state."""
    key = ("loop", s, v)
    hit = a._cache.get(key)
    if hit is not None:
        return hit
    final = a.final_mask
    found = _pair_post_word(a, 1 << (2 * (s - 1)), v, final)
    while True:
        more = _pair_post_word(a, found, v, final)
        if more & ~found == 0:
            break
        found |= more
    ok = bool((found >> (2 * (s - 1) + 1)) & 1)
    if len(a._cache) < _CACHE_LIMIT:
        a._cache[key] = ok
    return ok


_CACHE_LIMIT = 200_000


def nba_mq(a: Nfa, w: LassoWord) -> int:
    """Membership of ``u v^omega`` in the language of a Büchi automaton.

    ``S_u`` is the set reached on ``u``; ``S_uv`` adds everything reachable
    by further copies of ``v``.  The word is accepted iff some state of
    ``S_uv`` lies on a ``v``-loop that enters a final state.  Loop search runs
    the reachability fixpoint over (state, seen-final) pairs.  Intermediate
    sets are memoised on the automaton.
    """
    u, v = w.u, w.v
    if not v:
        raise ValueError("empty periodic part")
    if not a._succ.keys() >= set(u + v):
        _check_symbols(a, u + v)
    cache = a._cache
    key = ("start", u)
    s_u = cache.get(key)
    if s_u is None:
        s_u = a.post_word(a._masks[0], u)
        if len(cache) < _CACHE_LIMIT:
            cache[key] = s_u
    s_uv = s_u | _reachable(a, s_u, v)
    while s_uv:
        low = s_uv & -s_uv
        if _has_accepting_loop(a, low.bit_length(), v):
            return 1
        s_uv ^= low
    return 0


def check_unambiguous(u: Nfa, max_len: int) -> Word | None:
    """A word of length <= ``max_len`` with two or more accepting runs, else ``None``.

    Run counts per state are tracked with saturation at 2.
    """
    alphabet = u.alphabet
    start = [0] * (u.n + 1)
    for q in u.initial:
        start[q] = 1
    final = u.final
    stack = [((), start)]
    while stack:
        w, counts = stack.pop()
        if sum(counts[q] for q in final) >= 2:
            return w
        if len(w) == max_len:
            continue
        for sym in reversed(alphabet):
            nxt = [0] * (u.n + 1)
            row = u._succ[sym]
            for p in range(1, u.n + 1):
                c = counts[p]
                if c:
                    for q in states_of(row[p]):
                        nxt[q] = min(2, nxt[q] + c)
            if any(nxt):
                stack.append((w + (sym,), nxt))
    return None


def make_nfa(alphabet, n: int, transitions, final, kind: str = "nba", initial=(1,)) -> Nfa:
    """Convenience constructor; symbols in transition triples may be strings."""
    return Nfa(tuple(alphabet), n, frozenset(initial), frozenset(tuple(t) for t in transitions), frozenset(final), kind)
