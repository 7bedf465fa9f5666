"""Learning a language whose only description is a running program.

``data/parity_oracle.py`` answers 1 for words of even length.  The learner
talks to it over stdin/stdout, one word per line.
"""

import sys
from pathlib import Path

from m2learn import ApproxEqConfig, ExternalOracle, ExternalOracleSpec, approximate_equivalence, learn

DATA = Path(__file__).parent / "data"

spec = ExternalOracleSpec(("a", "b"), [sys.executable, str(DATA / "parity_oracle.py")])
cfg = ApproxEqConfig(num_tests=1000, max_len=20, max_eq=20)
with ExternalOracle(spec) as oracle:
    h, state = learn(oracle, approximate_equivalence(oracle, cfg), max_eq=cfg.max_eq)
    print(f"{oracle.queries} distinct words sent to the child process")

print(f"learned dimension {h.dim}")
for s in h.alphabet:
    print(f"  transition {s}: {h.transitions[s].to_dense().to_lists()}")
print("even-length words accepted:", all(h.accepts("ab" * k) for k in range(5)))
print("odd-length words rejected:", not any(h.accepts("a" + "ab" * k) for k in range(5)))
