import io
import subprocess
import sys
from pathlib import Path

import pytest

from m2learn import cli
from m2learn.cli import ParseError, format_m2ma, main, parse_arbitrary_file, parse_m2ma_file, parse_nfa_file
from m2learn.m2ma import equivalent
from m2learn.oracles import ValidationReport

DATA = Path(__file__).resolve().parents[1] / "demos" / "data"


def run(args, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(args, stdin=io.StringIO(stdin), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def header(text, key):
    for line in text.splitlines():
        if line.startswith(f"# {key}:"):
            return line.split(":", 1)[1].strip()
    return None


def test_m2ma_with_dfa_count_and_prompt():
    code, out, err = run(["m2ma", str(DATA / "worked_example.m2ma"), "-a"], "b b\na\nc\n_\nquit\nb b\n")
    assert code == 0
    assert header(out, "learned dimension") == "3"
    assert header(out, "minimal DFA states") == "6"
    assert out.splitlines()[-3:] == ["accepted", "rejected", "accepted"]
    assert "'c'" in err


def test_suba_row_for_infinitely_many_b():
    code, out, _ = run(["suba", str(DATA / "a_then_inf_b.suba"), "--no-prompt"])
    assert code == 0
    assert header(out, "unminimized dimension") == "10"
    assert header(out, "learned dimension") == "5"


def test_a_omega_prompt_uses_lasso_words():
    code, out, err = run(["suba", str(DATA / "a_omega.suba")], "$ a\na $\n")
    assert code == 0
    assert out.splitlines()[-1] == "accepted"
    assert "u $ v" in err


def test_minimize_dimension_only():
    code, out, _ = run(["minimize", str(DATA / "sigma_a_sigma5_a_b.suba"), "-d"])
    assert code == 0 and out == "10\n"


def test_minimize_m2ma_file():
    code, out, _ = run(["minimize", str(DATA / "worked_example.m2ma"), "--no-prompt"])
    assert code == 0 and header(out, "minimized dimension") == "3"


def test_dimension_flag_needs_suba_minimize():
    code, _, err = run(["m2ma", str(DATA / "worked_example.m2ma"), "-d"])
    assert code == 1 and "-d" in err


def test_output_round_trips():
    _, out, _ = run(["suba", str(DATA / "ab5.suba"), "--no-prompt"])
    again = parse_m2ma_file(out)
    assert again.dim == 43
    _, out2, _ = run(["m2ma", str(DATA / "worked_example.m2ma"), "--no-prompt"])
    learned = parse_m2ma_file(out2)
    assert equivalent(learned, parse_m2ma_file((DATA / "worked_example.m2ma").read_text())) is None


def test_diagnostics_go_to_stderr_only():
    path = str(DATA / "worked_example.m2ma")
    _, plain, _ = run(["m2ma", path, "--no-prompt"])
    _, noisy, err = run(["m2ma", path, "--no-prompt", "-v", "-m"])
    assert plain == noisy
    assert any(line.startswith("[minimize]") for line in err.splitlines())
    assert any(line.startswith("[learn]") for line in err.splitlines())


def test_same_seed_same_output():
    path = str(DATA / "inf_many_a.nba")
    outs = {run(["nba", path, "--seed", "5", "--no-prompt"])[1] for _ in range(2)}
    assert len(outs) == 1
    assert header(outs.pop(), "learned dimension") == "3"


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("ALMA_SEED", "17")
    _, out, _ = run(["nba", str(DATA / "inf_many_a.nba"), "--no-prompt"])
    assert header(out, "seed") == "17"
    monkeypatch.setenv("ALMA_SEED", "x")
    assert run(["nba", str(DATA / "inf_many_a.nba"), "--no-prompt"])[0] == 1


def test_unconverged_run_exits_with_three(tmp_path):
    text = (DATA / "inf_many_a.nba").read_text().replace("eq-limit: 100", "eq-limit: 1")
    path = tmp_path / "short.nba"
    path.write_text(text)
    code, out, err = run(["nba", str(path), "--no-prompt"])
    assert code == 3
    assert "WARNING" in out and "warning" in err


def test_arbitrary_parity_oracle():
    code, out, _ = run(["arbitrary", str(DATA / "even_length.oracle")], "a b\na\n")
    assert code == 0
    assert header(out, "learned dimension") == "2"
    assert out.splitlines()[-2:] == ["accepted", "rejected"]


def test_internal_failure_exits_with_two(monkeypatch):
    monkeypatch.setattr(cli, "validate_learned", lambda *a, **k: ValidationReport(0, 1, 1, 0, [()], 1))
    code, _, err = run(["m2ma", str(DATA / "worked_example.m2ma"), "--no-prompt"])
    assert code == 2 and "internal" in err


def test_missing_file():
    assert run(["m2ma", "/nonexistent.m2ma"])[0] == 1


@pytest.mark.parametrize("text, line", [
    ("alphabet: a\ndimension: 2\nfinal: 1 0\ntransition a:\n1 0\n1 2\n", 6),
    ("alphabet: a\ndimension: 1\nfinal: 1\ntransition b:\n1\n", 4),
    ("alphabet: a\ndimension: 2\nfinal: 1\n", 3),
])
def test_m2ma_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError, match=f"line {line}"):
        parse_m2ma_file(text)


def test_nfa_parse_errors():
    with pytest.raises(ParseError):
        parse_nfa_file("alphabet: a\nstates: 1\nfinal: 2\ntransitions:\n1 a 1\n", "suba")
    with pytest.raises(ParseError, match="eq-"):
        parse_nfa_file("alphabet: a\nstates: 1\nfinal: 1\ntransitions:\n1 a 1\n", "nba")


def test_arbitrary_command_may_contain_hash():
    spec, cfg = parse_arbitrary_file(
        "alphabet: a\noracle: python3 -c 'print(1) # x'\nlasso: no\neq-tests: 5\neq-maxlen: 3\neq-limit: 2\n"
    )
    assert "# x" in spec.command and cfg.num_tests == 5


def test_format_is_parseable():
    a = parse_m2ma_file((DATA / "worked_example.m2ma").read_text())
    assert equivalent(parse_m2ma_file(format_m2ma(a, ["note"])), a) is None


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "m2learn", "minimize", str(DATA / "a_omega.suba"), "-d"],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0 and proc.stdout == "3\n"


@pytest.mark.parametrize("sub, name", [
    ("m2ma", "worked_example.m2ma"),
    ("suba", "a_then_inf_b.suba"),
    ("minimize", "a_star_a4_b.suba"),
    ("nba", "inf_many_a.nba"),
    ("arbitrary", "even_length.oracle"),
])
def test_printed_automaton_reparses_to_result(sub, name):
    out = io.StringIO()
    result = cli.execute(cli.RunSpec(sub, str(DATA / name), prompt=False), out, io.StringIO())
    assert equivalent(parse_m2ma_file(out.getvalue()), result.automaton) is None


def test_ambiguous_suba_is_rejected(tmp_path):
    path = tmp_path / "amb.suba"
    path.write_text("alphabet: a\nstates: 2\nfinal: 1 2\ntransitions:\n1 a 1\n1 a 2\n2 a 2\n")
    code, _, err = run(["suba", str(path), "--no-prompt"])
    assert code == 1 and "strongly unambiguous" in err
