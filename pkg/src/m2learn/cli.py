"""Command-line front end: ``alma <m2ma|suba|minimize|nba|arbitrary> FILE [flags]``.

Input files are line oriented; ``#`` starts a comment.

M2MA files::

    alphabet: a b
    dimension: 3
    final: 1 1 0
    transition a:
    0 0 1
    1 0 0
    1 1 1
    transition b:
    ...

The initial vector is always ``e_1``.  SUBA/NBA files::

    alphabet: a b
    states: 2
    final: 2
    transitions:
    1 a 1
    1 b 2

with state 1 initial; NBA files also carry ``eq-tests``, ``eq-maxlen`` and
``eq-limit``.  Arbitrary-oracle files carry ``alphabet``, ``oracle: <command>``,
``lasso: yes|no`` and the three ``eq-*`` keys.

Results go to standard output in the M2MA file format, so they can be fed
back in.  Tables (``-v``) and minimization progress (``-m``) go to standard
error.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from dataclasses import dataclass, replace
from typing import TextIO

from .gf2 import Gf2Matrix, Gf2Vector
from .learner import InvariantViolation, LearnerState, M2maOracle, learn, table_equivalence
from .m2ma import M2MA, StateCapExceeded, format_word, minimal_dfa_state_count, with_unit_initial
from .minimize import ProgressEvent, minimize
from .omega import SEPARATOR, LassoWord, Nfa, check_unambiguous, suba_to_ufa, ufa_to_m2ma
from .oracles import (
    ApproxEqConfig,
    ExternalOracle,
    ExternalOracleError,
    ExternalOracleSpec,
    ValidationConfig,
    approximate_equivalence,
    nba_oracle,
    suba_oracle,
    validate_learned,
)

SUBCOMMANDS = ("m2ma", "suba", "minimize", "nba", "arbitrary")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2
EXIT_UNCONVERGED = 3

UNAMBIGUITY_CHECK_LEN = 8   # SUBA inputs: words checked for two accepting UFA runs


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


# -- parsing ----------------------------------------------------------------

def _lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _bits(tokens: list[str], line: int, what: str) -> list[int]:
    out = []
    for t in tokens:
        if t not in ("0", "1"):
            raise ParseError(f"{what}: entry {t!r} is not 0 or 1", line)
        out.append(int(t))
    return out


def _alphabet(value: str, line: int, allow_separator: bool = False) -> tuple:
    symbols = tuple(value.split())
    if not symbols:
        raise ParseError("alphabet is empty", line)
    if len(set(symbols)) != len(symbols):
        dup = next(s for s in symbols if symbols.count(s) > 1)
        raise ParseError(f"duplicate symbol {dup!r} in alphabet", line)
    for s in symbols:
        if s == "_" or ":" in s or (s == SEPARATOR and not allow_separator):
            raise ParseError(f"symbol {s!r} is reserved", line)
    return symbols


def _positive(value: str, line: int, key: str) -> int:
    try:
        n = int(value)
    except ValueError:
        raise ParseError(f"{key} must be an integer, got {value!r}", line) from None
    if n < 1:
        raise ParseError(f"{key} must be positive, got {n}", line)
    return n


def _key_value(line: str):
    if ":" not in line:
        return None, None
    key, value = line.split(":", 1)
    return key.strip().lower(), value.strip()


def parse_m2ma_file(text: str) -> M2MA:
    alphabet = dim = final = None
    matrices: dict[str, list[list[int]]] = {}
    current = None
    for number, line in _lines(text):
        key, value = _key_value(line)
        if key is None:
            if current is None:
                raise ParseError(f"unexpected line {line!r}", number)
            sym, rows = current
            if dim is None:
                raise ParseError("matrix rows before 'dimension'", number)
            row = _bits(line.split(), number, f"transition {sym}")
            if len(row) != dim:
                raise ParseError(f"transition {sym}: row has {len(row)} entries, expected {dim}", number)
            if len(rows) == dim:
                raise ParseError(f"transition {sym}: more than {dim} rows", number)
            rows.append(row)
            continue
        if current is not None and len(current[1]) != dim:
            raise ParseError(f"transition {current[0]}: {len(current[1])} rows, expected {dim}", number)
        current = None
        if key == "alphabet":
            alphabet = _alphabet(value, number, allow_separator=True)
        elif key == "dimension":
            dim = _positive(value, number, "dimension")
        elif key == "final":
            if dim is None:
                raise ParseError("'final' before 'dimension'", number)
            final = _bits(value.split(), number, "final vector")
            if len(final) != dim:
                raise ParseError(f"final vector has {len(final)} entries, expected {dim}", number)
        elif key.split()[0] == "transition":
            header = line[: line.index(":")].split(None, 1)
            sym = header[1].strip() if len(header) == 2 else ""
            if not sym:
                raise ParseError("transition header needs a symbol, e.g. 'transition a:'", number)
            if alphabet is None:
                raise ParseError("transition before 'alphabet'", number)
            if sym not in alphabet:
                raise ParseError(f"transition for unknown symbol {sym!r}", number)
            if sym in matrices:
                raise ParseError(f"second transition matrix for {sym!r}", number)
            matrices[sym] = []
            current = (sym, matrices[sym])
        else:
            raise ParseError(f"unknown key {key!r}", number)
    if current is not None and len(current[1]) != dim:
        raise ParseError(f"transition {current[0]}: {len(current[1])} rows, expected {dim}")
    for name, val in (("alphabet", alphabet), ("dimension", dim), ("final", final)):
        if val is None:
            raise ParseError(f"missing '{name}'")
    missing = [s for s in alphabet if s not in matrices]
    if missing:
        raise ParseError(f"missing transition matrix for {missing[0]!r}")
    return M2MA(
        alphabet,
        Gf2Vector.unit(dim, 0),
        {s: Gf2Matrix.from_lists(matrices[s], dim) for s in alphabet},
        Gf2Vector.from_list(final),
    )


def _eq_config(values: dict, seed: int, required: bool) -> ApproxEqConfig | None:
    keys = ("eq-tests", "eq-maxlen", "eq-limit")
    present = [k for k in keys if k in values]
    if not present and not required:
        return None
    for k in keys:
        if k not in values:
            raise ParseError(f"missing '{k}' (approximate equivalence queries need eq-tests, eq-maxlen and eq-limit)")
    nums = [_positive(values[k][0], values[k][1], k) for k in keys]
    return ApproxEqConfig(nums[0], nums[1], nums[2], seed)


def parse_nfa_file(text: str, kind: str = "suba", seed: int = 0) -> tuple[Nfa, ApproxEqConfig | None]:
    """Parse a SUBA or NBA file; NBA files must include the ``eq-*`` keys."""
    alphabet = n = None
    final: list[int] = []
    final_line = None
    trans = []
    extra: dict[str, tuple[str, int]] = {}
    in_trans = False
    seen = set()
    for number, line in _lines(text):
        key, value = _key_value(line)
        if key is None:
            if not in_trans:
                raise ParseError(f"unexpected line {line!r}", number)
            parts = line.split()
            if len(parts) != 3:
                raise ParseError(f"transition must be 'p symbol q', got {line!r}", number)
            p, sym, q = parts
            if alphabet is None or n is None:
                raise ParseError("transitions before 'alphabet' and 'states'", number)
            if sym not in alphabet:
                raise ParseError(f"unknown symbol {sym!r}", number)
            ids = []
            for t in (p, q):
                try:
                    s = int(t)
                except ValueError:
                    raise ParseError(f"state {t!r} is not an integer", number) from None
                if not 1 <= s <= n:
                    raise ParseError(f"state {s} out of range 1..{n}", number)
                ids.append(s)
            triple = (ids[0], sym, ids[1])
            if triple in trans:
                raise ParseError(f"duplicate transition {line!r}", number)
            trans.append(triple)
            continue
        in_trans = False
        if key in seen:
            raise ParseError(f"duplicate key {key!r}", number)
        seen.add(key)
        if key == "alphabet":
            alphabet = _alphabet(value, number)
        elif key == "states":
            n = _positive(value, number, "states")
        elif key == "final":
            final_line = number
            try:
                final = [int(t) for t in value.split()]
            except ValueError:
                raise ParseError(f"final states must be integers, got {value!r}", number) from None
        elif key == "transitions":
            in_trans = True
        elif key in ("eq-tests", "eq-maxlen", "eq-limit"):
            extra[key] = (value, number)
        else:
            raise ParseError(f"unknown key {key!r}", number)
    for name, val in (("alphabet", alphabet), ("states", n)):
        if val is None:
            raise ParseError(f"missing '{name}'")
    for q in final:
        if not 1 <= q <= n:
            raise ParseError(f"final state {q} out of range 1..{n}", final_line)
    cfg = _eq_config(extra, seed, required=(kind == "nba"))
    return Nfa(alphabet, n, frozenset({1}), frozenset(trans), frozenset(final), kind), cfg


def parse_arbitrary_file(text: str, seed: int = 0) -> tuple[ExternalOracleSpec, ApproxEqConfig]:
    alphabet = command = None
    lasso = False
    extra: dict[str, tuple[str, int]] = {}
    for number, line in _raw_lines(text):
        key, value = _key_value(line)
        if key == "alphabet":
            alphabet = _alphabet(value, number)
        elif key == "oracle":
            if not value:
                raise ParseError("oracle command is empty", number)
            command = value
        elif key == "lasso":
            if value.lower() not in ("yes", "no"):
                raise ParseError(f"lasso must be yes or no, got {value!r}", number)
            lasso = value.lower() == "yes"
        elif key in ("eq-tests", "eq-maxlen", "eq-limit"):
            extra[key] = (value, number)
        else:
            raise ParseError(f"unexpected line {line!r}", number)
    if alphabet is None:
        raise ParseError("missing 'alphabet'")
    if command is None:
        raise ParseError("missing 'oracle'")
    return ExternalOracleSpec(alphabet, command, lasso), _eq_config(extra, seed, required=True)


def _raw_lines(text: str):
    # the oracle command may legitimately contain '#', so only full-line comments count there
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _ = _key_value(line)
        if key != "oracle":
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
        yield number, line


def format_m2ma(a: M2MA, comments: list[str] = ()) -> str:
    """Render in the input file format (after moving to a basis with ``v_I = e_1``)."""
    a = with_unit_initial(a)
    out = [f"# {c}" for c in comments]
    out.append("# initial vector: e1 (implicit)")
    out.append("alphabet: " + " ".join(map(str, a.alphabet)))
    out.append(f"dimension: {a.dim}")
    out.append("final: " + " ".join(map(str, a.final.to_list())))
    for s in a.alphabet:
        out.append(f"transition {s}:")
        out.extend(" ".join(map(str, row)) for row in a.transitions[s].to_lists())
    return "\n".join(out) + "\n"


# -- running ----------------------------------------------------------------

@dataclass
class RunSpec:
    subcommand: str
    input_path: str
    verbose: bool = False       # -v
    minimize_log: bool = False  # -m
    dimension_only: bool = False  # -d
    dfa_count: bool = False     # -a
    seed: int = 0
    prompt: bool = True


@dataclass
class RunResult:
    status: int
    automaton: M2MA | None = None
    omega: bool = False


class _Sinks:
    def __init__(self, spec: RunSpec, out: TextIO, err: TextIO):
        self.spec, self.out, self.err = spec, out, err

    def progress(self, event: ProgressEvent) -> None:
        d = event.detail
        if event.stage == "input":
            self.err.write(f"[minimize] initial M2MA (dimension {d['dimension']}):\n")
            for line in format_m2ma(d["automaton"]).splitlines():
                self.err.write(f"[minimize]   {line}\n")
        elif event.stage == "forward":
            self.err.write(f"[minimize] state space complete: {d['size']} basis vectors\n")
        elif event.stage == "backward":
            self.err.write(f"[minimize] co-state space complete: {d['size']} basis vectors\n")
        elif event.stage == "table":
            self.err.write(f"[minimize] observation table complete (dimension {d['dimension']}):\n")
            for line in d["table"].render().splitlines():
                self.err.write(f"[minimize]   {line}\n")

    def table(self, state: LearnerState) -> None:
        self.err.write(f"[learn] after equivalence query {state.eq_count}, table {state.size}x{state.size}:\n")
        for line in state.table.render().splitlines():
            self.err.write(f"[learn]   {line}\n")


def _minimize(a: M2MA, spec: RunSpec, sinks: _Sinks):
    return minimize(a, progress=sinks.progress if spec.minimize_log else None)


def _learn_exact(minimal: M2MA, table, spec: RunSpec, sinks: _Sinks) -> tuple[M2MA, LearnerState]:
    learned, state = learn(
        M2maOracle(minimal),
        table_equivalence(minimal, table),
        on_equivalence=sinks.table if spec.verbose else None,
    )
    if learned.dim != minimal.dim:
        raise InvariantViolation(
            f"learned dimension {learned.dim} differs from minimized dimension {minimal.dim}"
        )
    return learned, state


def _validate(result: M2MA, reference, spec: RunSpec, notes: list[str]) -> None:
    report = validate_learned(result, reference, ValidationConfig(seed=spec.seed))
    if not report.passed:
        raise InvariantViolation(report.summary())
    notes.append(report.summary())


def _dfa_line(a: M2MA) -> str:
    try:
        return f"minimal DFA states: {minimal_dfa_state_count(a)}"
    except StateCapExceeded as exc:
        return f"minimal DFA states: unavailable ({exc})"


def execute(spec: RunSpec, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> RunResult:
    """Run one subcommand; the caller maps exceptions to exit codes."""
    with open(spec.input_path, encoding="utf-8") as fh:
        text = fh.read()
    sinks = _Sinks(spec, out, err)
    sub = spec.subcommand
    is_suba_file = "states:" in text and "dimension:" not in text
    if spec.dimension_only and not (sub == "minimize" and is_suba_file):
        raise ParseError("-d applies only to 'minimize' on a SUBA input")
    notes = [f"seed: {spec.seed}"]

    if sub in ("m2ma", "suba") or sub == "minimize":
        if sub == "suba" or (sub == "minimize" and is_suba_file):
            suba, _ = parse_nfa_file(text, "suba", spec.seed)
            ufa = suba_to_ufa(suba)
            witness = check_unambiguous(ufa, UNAMBIGUITY_CHECK_LEN)
            if witness is not None:
                raise ParseError(
                    "automaton is not strongly unambiguous: "
                    f"'{format_word(witness)}' has two accepting runs in the constructed UFA"
                )
            target = ufa_to_m2ma(ufa)
            reference = suba_oracle(suba)
            omega = True
            notes.append(f"unminimized dimension: {target.dim}")
        else:
            target = parse_m2ma_file(text)
            reference = target
            omega = False
        minimal, table = _minimize(target, spec, sinks)
        notes.append(f"minimized dimension: {minimal.dim}")
        if sub == "minimize":
            result = minimal
        else:
            result, state = _learn_exact(minimal, table, spec, sinks)
            notes.append(f"learned dimension: {result.dim}")
            notes.append(f"equivalence queries: {state.eq_count}, membership queries: {state.mq_count}")
        _validate(result, reference, spec, notes)
        if spec.dimension_only:
            out.write(f"{result.dim}\n")
            return RunResult(EXIT_OK, result, omega)
        if spec.dfa_count:
            notes.append(_dfa_line(result))
        out.write(format_m2ma(result, notes))
        return RunResult(EXIT_OK, result, omega)

    if sub == "nba":
        nba, cfg = parse_nfa_file(text, "nba", spec.seed)
        oracle = nba_oracle(nba)
        return _approx_run(oracle, cfg, spec, sinks, notes, omega=True)

    if sub == "arbitrary":
        ext, cfg = parse_arbitrary_file(text, spec.seed)
        # relative oracle commands resolve next to the input file
        ext = replace(ext, cwd=os.path.dirname(os.path.abspath(spec.input_path)))
        with ExternalOracle(ext) as oracle:
            return _approx_run(oracle, cfg, spec, sinks, notes, omega=ext.lasso)

    raise ParseError(f"unknown subcommand {sub!r}")


def _approx_run(oracle, cfg: ApproxEqConfig, spec: RunSpec, sinks: _Sinks, notes: list[str], omega: bool) -> RunResult:
    rng = random.Random(cfg.seed)
    learned, state = learn(
        oracle,
        approximate_equivalence(oracle, cfg, rng),
        max_eq=cfg.max_eq,
        on_equivalence=sinks.table if spec.verbose else None,
    )
    notes.append(f"learned dimension: {learned.dim}")
    notes.append(f"equivalence queries: {state.eq_count}, membership queries: {state.mq_count}")
    notes.append(f"approximate equivalence: {cfg.num_tests} tests of length <= {cfg.max_len}, limit {cfg.max_eq}")
    if not state.converged:
        notes.append("WARNING: equivalence query limit reached; hypothesis not confirmed")
    # sampled equivalence can miss differences, so a failed check here is a
    # warning about the hypothesis rather than an internal error
    report = validate_learned(learned, oracle, ValidationConfig(seed=spec.seed))
    notes.append(report.summary())
    if spec.dfa_count:
        notes.append(_dfa_line(learned))
    sinks.out.write(format_m2ma(learned, notes))
    if not state.converged:
        sinks.err.write("warning: equivalence query limit reached before convergence\n")
    if not report.passed:
        sinks.err.write("warning: learned automaton disagrees with the oracle on sampled words\n")
    if not (state.converged and report.passed):
        return RunResult(EXIT_UNCONVERGED, learned, omega)
    return RunResult(EXIT_OK, learned, omega)


def parse_query(line: str, alphabet: tuple, omega: bool):
    """Decode a prompt line into a word; raises ``ValueError`` when malformed."""
    tokens = line.split()
    if tokens == ["_"]:
        tokens = []
    known = set(alphabet) | ({SEPARATOR} if omega else set())
    for pos, t in enumerate(tokens, start=1):
        if t not in known:
            raise ValueError(f"symbol {t!r} at position {pos} is not in the alphabet {' '.join(alphabet)}")
    if omega:
        lasso = LassoWord.from_word(tokens)
        if lasso is None:
            raise ValueError("expected an ultimately periodic word written 'u $ v' with v nonempty")
        return lasso.to_word()
    return tuple(tokens)


def query_prompt(a: M2MA, omega: bool, stdin: TextIO = sys.stdin, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> None:
    """Answer ``accepted``/``rejected`` for each word read until ``quit`` or end of input."""
    base = tuple(s for s in a.alphabet if not (omega and s == SEPARATOR))
    interactive = hasattr(stdin, "isatty") and stdin.isatty()
    if interactive:
        hint = "u $ v" if omega else "symbols separated by spaces, _ for the empty word"
        err.write(f"Enter words to test ({hint}); 'quit' exits.\n")
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        if line == "quit":
            break
        try:
            w = parse_query(line, base, omega)
        except ValueError as exc:
            err.write(f"error: {exc}\n")
            continue
        out.write("accepted\n" if a.membership(w) else "rejected\n")
        out.flush()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="alma", description="Learn and minimize modulo-2 multiplicity automata.")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("input", help="input file")
    p.add_argument("-v", action="store_true", help="print the observation table after every equivalence query")
    p.add_argument("-m", action="store_true", help="print minimization progress")
    p.add_argument("-d", action="store_true", help="with 'minimize' on a SUBA: print only the dimension")
    p.add_argument("-a", action="store_true", help="also print the minimal DFA state count")
    p.add_argument("--seed", type=int, default=None, help="random seed (default: $ALMA_SEED or 0)")
    p.add_argument("--no-prompt", action="store_true", help="skip the interactive membership prompt")
    return p


def main(argv: list[str] | None = None, stdin: TextIO | None = None,
         out: TextIO | None = None, err: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    seed = args.seed
    if seed is None:
        env = os.environ.get("ALMA_SEED")
        try:
            seed = int(env) if env else 0
        except ValueError:
            err.write(f"error: ALMA_SEED must be an integer, got {env!r}\n")
            return EXIT_INPUT
    spec = RunSpec(args.subcommand, args.input, args.v, args.m, args.d, args.a, seed, not args.no_prompt)
    try:
        result = execute(spec, out, err)
    except (ParseError, OSError, ValueError, ExternalOracleError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except InvariantViolation as exc:
        err.write(f"internal check failed: {exc}\n")
        return EXIT_INTERNAL
    out.flush()
    if spec.prompt and result.automaton is not None and not spec.dimension_only:
        query_prompt(result.automaton, result.omega, stdin, out, err)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
