"""A three-state automaton over GF(2): membership, reachable states, DFA size.

Run with ``python3 demos/01_m2ma_basics.py``.
"""

from pathlib import Path

from m2learn.cli import parse_m2ma_file
from m2learn.m2ma import minimal_dfa_state_count, to_reachable_dfa

DATA = Path(__file__).parent / "data"

m = parse_m2ma_file((DATA / "worked_example.m2ma").read_text())
print(f"dimension {m.dim}, alphabet {m.alphabet}")

for word in ["", "a", "b", "bb", "ab", "bab"]:
    verdict = "accepted" if m.accepts(word) else "rejected"
    print(f"  {word or '_':>4}: state {m.state(word)} -> {verdict}")

# Each reachable row vector is a DFA state; there are at most 2^dim of them.
dfa = to_reachable_dfa(m)
print("reachable states:", " ".join(str(v) for v in dfa.state_vectors()))
print("minimal DFA size:", minimal_dfa_state_count(m))
