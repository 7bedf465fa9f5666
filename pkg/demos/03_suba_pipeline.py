"""From a strongly unambiguous Buchi automaton to a minimal M2MA.

Lasso words ``u v^omega`` are written as finite words ``u $ v``; the UFA
built from an n-state SUBA has 2n^2 + n states.
"""

from pathlib import Path

from m2learn import LassoWord, M2maOracle, learn, minimize, suba_mq, suba_to_m2ma, table_equivalence
from m2learn.cli import parse_nfa_file

DATA = Path(__file__).parent / "data"

rows = [
    ("a^omega", "a_omega.suba"),
    ("a Sigma*(Sigma* b Sigma*)^omega", "a_then_inf_b.suba"),
    ("(ab^5)^omega", "ab5.suba"),
    ("Sigma* a Sigma^5 a b^omega", "sigma_a_sigma5_a_b.suba"),
    ("(a* a^4 b)^omega", "a_star_a4_b.suba"),
    ("(ab^10)^omega", "ab10.suba"),
]
print(f"{'language':36} {'n':>3} {'2n^2+n':>7} {'learned':>8}")
for label, name in rows:
    suba, _ = parse_nfa_file((DATA / name).read_text(), "suba")
    big = suba_to_m2ma(suba)
    minimal, table = minimize(big)
    learned, _ = learn(M2maOracle(minimal), table_equivalence(minimal, table))
    print(f"{label:36} {suba.n:>3} {big.dim:>7} {learned.dim:>8}")

suba, _ = parse_nfa_file((DATA / "a_then_inf_b.suba").read_text(), "suba")
m = minimize(suba_to_m2ma(suba))[0]
for u, v in [("a", "b"), ("a", "ab"), ("ab", "a"), ("b", "b")]:
    w = LassoWord(u, v)
    print(f"  {str(w):10} M2MA says {m.membership(w.to_word())}, automaton says {suba_mq(suba, w)}")
