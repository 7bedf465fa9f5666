import itertools
import random
from pathlib import Path

import numpy as np
import pytest

from m2learn.cli import parse_nfa_file
from m2learn.omega import (
    SEPARATOR,
    LassoWord,
    Nfa,
    check_unambiguous,
    make_nfa,
    nba_mq,
    suba_mq,
    suba_to_m2ma,
    suba_to_ufa,
    ufa_state,
)
from reference import (
    all_lassos,
    lasso_accepts_batch,
    nfa_from_arrays,
    random_nba_arrays,
    random_nfa,
    ufa_run_counts,
)

DATA = Path(__file__).resolve().parents[1] / "demos" / "data"


def load(name, kind="suba"):
    return parse_nfa_file((DATA / name).read_text(), kind)[0]


def lassos(alphabet, max_u, max_v):
    for nu in range(max_u + 1):
        for nv in range(1, max_v + 1):
            for u in itertools.product(alphabet, repeat=nu):
                for v in itertools.product(alphabet, repeat=nv):
                    yield LassoWord(u, v)


def test_lasso_word_encoding():
    w = LassoWord("ab", "b")
    assert w.to_word() == ("a", "b", SEPARATOR, "b")
    assert LassoWord.from_word(w.to_word()) == w
    assert str(w) == "a b $ b"


@pytest.mark.parametrize("bad", ["ab", "a$", "$a$b", ""])
def test_malformed_lasso_encodings(bad):
    assert LassoWord.from_word(tuple(bad)) is None


def test_empty_period_rejected():
    with pytest.raises(ValueError):
        LassoWord("a", "")


def test_nfa_validation():
    with pytest.raises(ValueError):
        make_nfa("ab", 2, [(1, "a", 3)], [1])
    with pytest.raises(ValueError):
        make_nfa("ab", 2, [(1, "c", 2)], [1])
    with pytest.raises(ValueError):
        Nfa(("a",), 1, frozenset({1}), [(1, "a", 1), (1, "a", 1)], frozenset({1}))


def test_ufa_size_law():
    rng = random.Random(1)
    for n in range(1, 11):
        s = random_nfa(rng, n, kind="suba")
        assert suba_to_ufa(s).n == 2 * n * n + n
        assert suba_to_m2ma(s).dim == 2 * n * n + n


def test_ufa_state_numbering_is_a_bijection():
    n = 4
    nums = {ufa_state(n, p, q, b) for p in range(1, n + 1) for q in range(1, n + 1) for b in (0, 1)}
    assert nums == set(range(n + 1, 2 * n * n + n + 1))


def test_a_omega():
    s = load("a_omega.suba")
    assert suba_mq(s, LassoWord((), "a")) == 1
    assert suba_mq(s, LassoWord("aa", "aaa")) == 1
    m = suba_to_m2ma(s)
    assert m.dim == 3
    assert m.membership([SEPARATOR, "a"]) == 1
    assert m.membership(["a", SEPARATOR]) == 0


def test_starts_with_a_infinitely_many_b():
    s = load("a_then_inf_b.suba")
    assert suba_mq(s, LassoWord("a", "b")) == 1
    assert suba_mq(s, LassoWord("b", "b")) == 0
    assert suba_mq(s, LassoWord("ab", "a")) == 0
    assert suba_mq(s, LassoWord((), "ab")) == 1


@pytest.mark.parametrize("name", ["a_omega.suba", "a_then_inf_b.suba", "ab5.suba", "sigma_a_sigma5_a_b.suba",
                                  "a_star_a4_b.suba", "abcd_patterns.suba"])
def test_suba_m2ma_agrees_with_suba_mq_and_nba_mq(name):
    s = load(name)
    m = suba_to_m2ma(s)
    for w in itertools.islice(lassos(s.alphabet, 3, 4), 3000):
        expected = suba_mq(s, w)
        assert m.membership(w.to_word()) == expected
        assert nba_mq(s.with_kind("nba"), w) == expected


@pytest.mark.parametrize("name", ["a_then_inf_b.suba", "ab5.suba", "a_star_a4_b.suba"])
def test_constructed_ufa_is_unambiguous(name):
    ufa = suba_to_ufa(load(name))
    assert check_unambiguous(ufa, 8) is None
    assert all(runs <= 1 for _, runs in ufa_run_counts(ufa, 8))


def test_check_unambiguous_finds_two_runs():
    amb = make_nfa("a", 3, [(1, "a", 2), (1, "a", 3)], [2, 3], kind="ufa")
    assert check_unambiguous(amb, 3) == ("a",)


def test_suba_kind_is_enforced():
    with pytest.raises(ValueError):
        suba_to_ufa(random_nfa(random.Random(2), 2, kind="nba"))


def test_nba_mq_matches_reference_on_random_automata():
    rng = np.random.default_rng(7)
    table = all_lassos(3, 3)
    words = [LassoWord(tuple("ab"[c] for c in u), tuple("ab"[c] for c in v)) for u, v in table]
    for n in (1, 2, 3, 4):
        succ, fin = random_nba_arrays(rng, 200, n, 0.35)
        expected = lasso_accepts_batch(succ, fin, table)
        for b in range(200):
            a = nfa_from_arrays(succ[b], int(fin[b]))
            got = [nba_mq(a, w) for w in words]
            assert got == expected[b].astype(int).tolist()


def test_nba_infinitely_many_a():
    a = load("inf_many_a.nba", "nba")
    assert nba_mq(a, LassoWord("bbb", "ab")) == 1
    assert nba_mq(a, LassoWord("aaa", "b")) == 0


def test_nondeterministic_nba_language():
    # Sigma* b^omega; the automaton guesses where the b-suffix starts
    a = make_nfa("ab", 2, [(1, "a", 1), (1, "b", 2), (2, "b", 2), (1, "b", 1)], [2])
    assert nba_mq(a, LassoWord("aab", "b")) == 1
    assert nba_mq(a, LassoWord("", "ab")) == 0
