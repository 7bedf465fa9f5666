"""Learning a general Buchi automaton with sampled equivalence queries.

With no exact equivalence oracle available, each hypothesis is tested on
random lasso words; the run is seeded so it can be replayed.
"""

import random
from pathlib import Path

from m2learn import ApproxEqConfig, approximate_equivalence, learn, nba_mq, nba_oracle
from m2learn.cli import parse_nfa_file
from m2learn.oracles import random_lasso

DATA = Path(__file__).parent / "data"

nba, cfg = parse_nfa_file((DATA / "inf_many_a.nba").read_text(), "nba", seed=0)
print(f"NBA with {nba.n} states: infinitely many a's")
print(f"sampling {cfg.num_tests} lassos of length <= {cfg.max_len} per equivalence query")

oracle = nba_oracle(nba)
h, state = learn(oracle, approximate_equivalence(oracle, cfg), max_eq=cfg.max_eq)
print(f"learned dimension {h.dim} after {state.eq_count} equivalence queries")
for cex in state.counterexamples:
    print("  counterexample:", " ".join(cex))

rng = random.Random(99)
fresh = [random_lasso(nba.alphabet, 25, rng) for _ in range(20_000)]
agree = sum(h.membership(w.to_word()) == nba_mq(nba, w) for w in fresh)
print(f"agreement on {len(fresh)} fresh lassos: {agree / len(fresh):.2%}")

small = ApproxEqConfig(num_tests=5, max_len=6, max_eq=100, seed=3)
h2, _ = learn(oracle, approximate_equivalence(oracle, small), max_eq=small.max_eq)
print(f"with only {small.num_tests} tests of length <= {small.max_len}: dimension {h2.dim}")
