import random
from pathlib import Path

import pytest

from m2learn.cli import parse_m2ma_file
from m2learn.gf2 import is_invertible
from m2learn.learner import (
    FunctionOracle,
    InvariantViolation,
    LearnerState,
    M2maOracle,
    learn,
    print_table,
    process_counterexample,
    table_eq,
    table_equivalence,
)
from m2learn.m2ma import M2MA, equivalent
from m2learn.minimize import minimize
from reference import random_m2ma, words_upto

DATA = Path(__file__).resolve().parents[1] / "demos" / "data"


def exact_eq(target):
    return lambda h: equivalent(h, target)


def test_worked_example_learns_dimension_three():
    a = parse_m2ma_file((DATA / "worked_example.m2ma").read_text())
    h, state = learn(M2maOracle(a), exact_eq(a))
    assert h.dim == 3 and state.converged
    assert equivalent(h, a) is None
    assert state.eq_count == len(state.counterexamples) + 1


def test_hypotheses_keep_invertible_table():
    rng = random.Random(1)
    a = random_m2ma(rng, 8, ("a", "b", "c"))
    seen = []

    def check(state: LearnerState):
        assert is_invertible(state.table.block)
        for i, x in enumerate(state.prefixes):
            for j, y in enumerate(state.suffixes):
                assert state.table.block[i, j] == a.membership(x + y)
        seen.append(state.size)

    learn(M2maOracle(a), exact_eq(a), on_equivalence=check)
    assert seen == sorted(seen)
    assert all(b - s == 1 for s, b in zip(seen, seen[1:]))


def test_learned_dimension_is_minimal_under_table_eq():
    rng = random.Random(2)
    for _ in range(25):
        a = random_m2ma(rng, rng.randint(1, 10), ("a", "b"))
        m, table = minimize(a)
        h, state = learn(M2maOracle(a), table_equivalence(m, table))
        assert state.converged
        assert h.dim == m.dim
        assert equivalent(h, a) is None


def test_empty_language_is_learned_without_counterexamples():
    a = M2MA.empty(("a", "b"))
    h, state = learn(M2maOracle(a), exact_eq(a))
    assert state.eq_count == 1 and h.is_empty_language()


def test_budget_exhaustion_leaves_unconverged():
    a = random_m2ma(random.Random(3), 8)
    _, state = learn(M2maOracle(a), exact_eq(a), max_eq=2)
    assert not state.converged and state.eq_count == 2


def test_non_counterexample_is_rejected():
    a = parse_m2ma_file((DATA / "worked_example.m2ma").read_text())
    with pytest.raises(InvariantViolation):
        learn(M2maOracle(a), lambda h: ("a",) if h.membership("a") == 0 else None)


def test_process_counterexample_requires_disagreement():
    a = parse_m2ma_file((DATA / "worked_example.m2ma").read_text())
    state = LearnerState(hypothesis=M2MA.empty(a.alphabet))
    with pytest.raises(InvariantViolation):
        process_counterexample(state, ("a",), M2maOracle(a), a.alphabet)


def test_inconsistent_oracle_is_detected():
    flips = iter(range(10**6))
    oracle = FunctionOracle("ab", lambda w: (next(flips) // 3) % 2 if w else 1)
    with pytest.raises(InvariantViolation):
        learn(oracle, lambda h: next((w for w in words_upto("ab", 3) if h.membership(w) != oracle(w)), None))


def test_even_number_of_as():
    oracle = FunctionOracle("ab", lambda w: int(w.count("a") % 2 == 0))
    target = M2MA.from_lists("ab", [1, 0], {"a": [[0, 1], [1, 0]], "b": [[1, 0], [0, 1]]}, [1, 0])
    h, state = learn(oracle, exact_eq(target))
    assert h.dim == 2 and equivalent(h, target) is None


def test_table_eq_agrees_with_direct_sum_check():
    rng = random.Random(5)
    for _ in range(60):
        a = random_m2ma(rng, rng.randint(1, 7))
        m, table = minimize(a)
        h, _ = learn(M2maOracle(a), exact_eq(a), max_eq=rng.randint(1, 6))
        cex = table_eq(h, m, table)
        if cex is None:
            assert equivalent(h, a) is None
        else:
            assert h.membership(cex) != a.membership(cex)


def test_print_table_lists_prefixes():
    a = parse_m2ma_file((DATA / "worked_example.m2ma").read_text())
    _, state = learn(M2maOracle(a), exact_eq(a))
    lines = print_table(state).splitlines()
    assert len(lines) == 2 + state.size
