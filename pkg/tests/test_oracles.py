import random
import sys
from pathlib import Path

import pytest

from m2learn.learner import learn
from m2learn.m2ma import M2MA
from m2learn.omega import SEPARATOR, LassoWord, make_nfa, nba_mq
from m2learn.oracles import (
    ApproxEqConfig,
    ExternalOracle,
    ExternalOracleError,
    ExternalOracleSpec,
    LassoOracle,
    ValidationConfig,
    approx_eq,
    approximate_equivalence,
    encode_query,
    external_mq,
    nba_oracle,
    random_lasso,
    random_word,
    validate_learned,
)

DATA = Path(__file__).resolve().parents[1] / "demos" / "data"
PARITY = [sys.executable, str(DATA / "parity_oracle.py")]


def script(tmp_path, body):
    p = tmp_path / "oracle.py"
    p.write_text(body)
    return [sys.executable, str(p)]


def test_random_word_lengths_cover_range():
    rng = random.Random(0)
    lengths = {len(random_word("ab", 5, rng)) for _ in range(500)}
    assert lengths == set(range(6))


def test_random_lasso_fits_max_len():
    rng = random.Random(1)
    for _ in range(500):
        w = random_lasso("ab", 6, rng)
        assert w.v and len(w.to_word()) <= 6


def test_configs_reject_nonpositive_values():
    with pytest.raises(ValueError):
        ApproxEqConfig(num_tests=0)
    with pytest.raises(ValueError):
        ValidationConfig(sample_count=0)


def test_lasso_oracle_rejects_malformed_words():
    oracle = LassoOracle("a", lambda w: 1)
    assert oracle.alphabet == ("a", SEPARATOR)
    assert oracle(("a",)) == 0
    assert oracle(("a", SEPARATOR)) == 0
    assert oracle((SEPARATOR, "a")) == 1


def test_approx_eq_finds_disagreement():
    oracle = LassoOracle("ab", lambda w: int("b" in w.v))
    empty = M2MA.empty(oracle.alphabet)
    cex = approx_eq(empty, oracle, ApproxEqConfig(num_tests=200), random.Random(0))
    assert cex is not None and oracle(cex) == 1


def test_approximate_equivalence_is_seeded():
    nba = make_nfa("ab", 2, [(1, "a", 2), (1, "b", 1), (2, "a", 2), (2, "b", 1)], [2])
    cfg = ApproxEqConfig(num_tests=500, max_len=15, seed=4)
    runs = [learn(nba_oracle(nba), approximate_equivalence(nba_oracle(nba), cfg))[1] for _ in range(2)]
    assert runs[0].counterexamples == runs[1].counterexamples


def test_encode_query():
    assert encode_query(()) == "_"
    assert encode_query(("a", "b")) == "a b"
    assert encode_query(LassoWord("a", "b")) == "a $ b"


def test_external_parity_oracle():
    spec = ExternalOracleSpec(("a", "b"), PARITY)
    with ExternalOracle(spec) as oracle:
        assert oracle(()) == 1
        assert oracle(("a",)) == 0
        assert oracle(("a", "b")) == 1
        assert oracle(("a",)) == 0
        assert oracle.queries == 3
    assert external_mq(spec, ("b", "b", "b")) == 0


def test_external_lasso_mode_forwards_only_valid_words(tmp_path):
    log = tmp_path / "seen.txt"
    cmd = script(tmp_path, f"""
import sys
with open({str(log)!r}, "w") as fh:
    for line in sys.stdin:
        if line.strip() == "quit":
            break
        fh.write(line)
        fh.flush()
        print(1, flush=True)
""")
    with ExternalOracle(ExternalOracleSpec(("a",), cmd, lasso=True)) as oracle:
        assert oracle(("a",)) == 0
        assert oracle((SEPARATOR, "a")) == 1
    assert log.read_text().splitlines() == ["$ a"]


def test_malformed_reply(tmp_path):
    cmd = script(tmp_path, "import sys\nfor line in sys.stdin:\n    print('yes', flush=True)\n")
    with pytest.raises(ExternalOracleError, match="malformed"):
        external_mq(ExternalOracleSpec(("a",), cmd), ("a",))


def test_process_exit(tmp_path):
    cmd = script(tmp_path, "import sys\nsys.stdin.readline()\n")
    with pytest.raises(ExternalOracleError, match="exited"):
        external_mq(ExternalOracleSpec(("a",), cmd), ("a",))


def test_query_timeout(tmp_path):
    cmd = script(tmp_path, "import sys, time\nsys.stdin.readline()\ntime.sleep(5)\n")
    with pytest.raises(ExternalOracleError, match="within"):
        external_mq(ExternalOracleSpec(("a",), cmd, timeout=0.3), ("a",))


def test_missing_command():
    with pytest.raises(ExternalOracleError, match="cannot launch"):
        external_mq(ExternalOracleSpec(("a",), ["/nonexistent/oracle"]), ("a",))


def test_validation_report_names_witnesses():
    oracle = LassoOracle("ab", lambda w: 1)
    report = validate_learned(M2MA.empty(oracle.alphabet), oracle, ValidationConfig(50, 8, seed=2))
    assert not report.passed
    assert report.disagreements == 50
    assert "FAILED" in report.summary() and "$" in report.summary()


def test_validation_passes_on_exact_match():
    nba = make_nfa("ab", 1, [(1, "a", 1), (1, "b", 1)], [1])
    oracle = LassoOracle("ab", lambda w: nba_mq(nba, w))
    # accepts u $ v with v nonempty and exactly one separator
    full = M2MA.from_lists(
        oracle.alphabet,
        [1, 0, 0],
        {"a": [[1, 0, 0], [0, 0, 1], [0, 0, 1]], "b": [[1, 0, 0], [0, 0, 1], [0, 0, 1]],
         SEPARATOR: [[0, 1, 0], [0, 0, 0], [0, 0, 0]]},
        [0, 0, 1],
    )
    assert validate_learned(full, oracle, ValidationConfig(300, 12)).passed
