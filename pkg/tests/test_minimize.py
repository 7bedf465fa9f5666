import random
from pathlib import Path

from hypothesis import given, settings, strategies as st

from m2learn.cli import parse_m2ma_file
from m2learn.m2ma import M2MA, equivalent
from m2learn.minimize import backward_reduce, forward_reduce, minimize
from reference import evaluate, hankel_rank, random_m2ma, words_upto

DATA = Path(__file__).resolve().parents[1] / "demos" / "data"


def test_worked_example_minimizes_to_three():
    a = parse_m2ma_file((DATA / "worked_example.m2ma").read_text())
    m, table = minimize(a)
    assert m.dim == 3
    assert table.is_complete()
    assert equivalent(a, m) is None


def test_table_block_holds_membership_values():
    rng = random.Random(1)
    for _ in range(40):
        a = random_m2ma(rng, rng.randint(1, 7), ("a", "b", "c"))
        m, table = minimize(a)
        if a.is_empty_language() or table.size == (0, 0):
            continue
        assert table.size == (m.dim, m.dim)
        assert table.is_complete()
        for i, x in enumerate(table.prefixes):
            for j, y in enumerate(table.suffixes):
                assert table.block[i, j] == a.membership(x + y)


def test_minimized_initial_vector_is_first_unit():
    rng = random.Random(2)
    for _ in range(30):
        m, _ = minimize(random_m2ma(rng, 5))
        assert m.initial.bits == 1


def test_empty_language_gives_canonical_automaton():
    a = M2MA.from_lists("ab", [1, 0], {"a": [[0, 1], [0, 0]], "b": [[1, 0], [0, 1]]}, [0, 0])
    m, table = minimize(a)
    assert m.dim == 1 and m.final.is_zero()
    assert table.size == (0, 0)


def test_zero_initial_vector_is_empty_language():
    a = M2MA.from_lists("a", [0, 0], {"a": [[1, 1], [1, 1]]}, [1, 1])
    assert minimize(a)[0].dim == 1


def test_forward_and_backward_passes_keep_language():
    rng = random.Random(3)
    for _ in range(30):
        a = random_m2ma(rng, 6)
        f, _ = forward_reduce(a)
        b, _ = backward_reduce(a)
        for w in words_upto(a.alphabet, 5):
            assert f.membership(w) == b.membership(w) == evaluate(a, w)


def test_dimension_equals_hankel_rank():
    rng = random.Random(4)
    for _ in range(40):
        a = random_m2ma(rng, rng.randint(1, 5), ("a", "b"))
        m, _ = minimize(a)
        expected = hankel_rank(a, 5)
        assert m.dim == max(expected, 1)


def test_progress_events_in_order():
    rng = random.Random(5)
    events = []
    minimize(random_m2ma(rng, 6), progress=events.append)
    assert [e.stage for e in events] == ["input", "forward", "backward", "table"]
    assert events[-1].detail["table"].is_complete()


def test_render_marks_empty_word():
    a = parse_m2ma_file((DATA / "worked_example.m2ma").read_text())
    text = minimize(a)[1].render()
    assert "_" in text.splitlines()[0]


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.integers(0, 10**6))
def test_minimization_is_idempotent(dim, seed):
    a = random_m2ma(random.Random(seed), dim)
    once, _ = minimize(a)
    twice, _ = minimize(once)
    assert twice.dim == once.dim
    assert equivalent(once, twice) is None
