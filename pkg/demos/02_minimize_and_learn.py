"""Shrink a random automaton, then learn it back from queries alone.

The minimizer's observation table doubles as an exact equivalence oracle,
so the learner's final hypothesis must land on the same dimension.
"""

import random
import time

from m2learn import M2MA, M2maOracle, equivalent, learn, minimize, table_equivalence

rng = random.Random(2024)
dim = 24
rows = {s: [[int(rng.random() < 0.3) for _ in range(dim)] for _ in range(dim)] for s in "ab"}
# make the tail of the state space unreachable so minimization has work to do
for s in "ab":
    for i in range(dim // 2):
        rows[s][i][dim // 2:] = [0] * (dim - dim // 2)
initial = [1] + [0] * (dim - 1)
final = [int(rng.random() < 0.5) for _ in range(dim)]
target = M2MA.from_lists("ab", initial, rows, final)

start = time.perf_counter()
minimal, table = minimize(target)
print(f"input dimension {target.dim}, minimized to {minimal.dim}")
print(f"table prefixes: {[''.join(x) or '_' for x in table.prefixes[:6]]} ...")

history = []
hypothesis, state = learn(M2maOracle(minimal), table_equivalence(minimal, table),
                          on_equivalence=lambda s: history.append(s.size))
elapsed = time.perf_counter() - start
print(f"hypothesis sizes after each equivalence query: {history}")
print(f"learned dimension {hypothesis.dim} with {state.mq_count} membership queries in {elapsed:.3f}s")
assert equivalent(hypothesis, target) is None
print("learned automaton is equivalent to the input")
