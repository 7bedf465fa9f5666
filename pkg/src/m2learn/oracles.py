"""Membership oracles, random sampling, approximate equivalence and validation."""

from __future__ import annotations

import logging
import queue
import random
import shlex
import subprocess
import threading
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from .m2ma import M2MA, Word, as_word, format_word
from .omega import SEPARATOR, LassoWord, Nfa, nba_mq, suba_mq

log = logging.getLogger(__name__)

DEFAULT_QUERY_TIMEOUT = 10.0


@dataclass(frozen=True)
class ApproxEqConfig:
    num_tests: int = 10_000
    max_len: int = 25
    max_eq: int = 100
    seed: int = 0

    def __post_init__(self):
        for name in ("num_tests", "max_len", "max_eq"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class ValidationConfig:
    sample_count: int = 1000
    sample_max_len: int = 25
    seed: int = 0

    def __post_init__(self):
        if self.sample_count < 1 or self.sample_max_len < 1:
            raise ValueError("validation sample parameters must be positive")


# -- random words -----------------------------------------------------------

def random_word(alphabet: Sequence[Hashable], max_len: int, rng: random.Random) -> Word:
    """Length uniform on ``0..max_len``, letters uniform."""
    if not alphabet:
        raise ValueError("cannot draw words over an empty alphabet")
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    n = rng.randint(0, max_len)
    return tuple(rng.choice(alphabet) for _ in range(n))


def random_lasso(alphabet: Sequence[Hashable], max_len: int, rng: random.Random) -> LassoWord:
    """Lasso whose encoding ``u $ v`` has length at most ``max_len``.

    ``|u| + |v|`` is uniform on ``1..max_len - 1`` and ``|v|`` uniform on the
    nonempty splits.
    """
    if not alphabet:
        raise ValueError("cannot draw words over an empty alphabet")
    if max_len < 2:
        raise ValueError("lasso words need max_len >= 2")
    total = rng.randint(1, max_len - 1)
    nv = rng.randint(1, total)
    u = tuple(rng.choice(alphabet) for _ in range(total - nv))
    v = tuple(rng.choice(alphabet) for _ in range(nv))
    return LassoWord(u, v)


# -- oracles ----------------------------------------------------------------

class LassoOracle:
    """Membership in ``L_$`` for an omega-language given on lasso words.

    The learner's alphabet is the base alphabet plus ``$``; words that do not
    encode a lasso are rejected without consulting ``fn``.
    """

    lasso = True

    def __init__(self, base_alphabet: Iterable[Hashable], fn: Callable[[LassoWord], int]):
        self.base_alphabet = tuple(base_alphabet)
        if SEPARATOR in self.base_alphabet:
            raise ValueError(f"{SEPARATOR!r} is reserved and may not be an alphabet symbol")
        self.alphabet = self.base_alphabet + (SEPARATOR,)
        self.fn = fn

    def __call__(self, w) -> int:
        lasso = LassoWord.from_word(as_word(w))
        if lasso is None:
            return 0
        return int(self.fn(lasso))

    def lasso_query(self, w: LassoWord) -> int:
        return int(self.fn(w))


def nba_oracle(a: Nfa) -> LassoOracle:
    return LassoOracle(a.alphabet, lambda w: nba_mq(a, w))


def suba_oracle(s: Nfa) -> LassoOracle:
    return LassoOracle(s.alphabet, lambda w: suba_mq(s, w))


def _sampler(oracle, max_len: int) -> Callable[[random.Random], Word]:
    if getattr(oracle, "lasso", False):
        base = oracle.base_alphabet if hasattr(oracle, "base_alphabet") else tuple(
            s for s in oracle.alphabet if s != SEPARATOR
        )
        return lambda rng: random_lasso(base, max_len, rng).to_word()
    alphabet = tuple(oracle.alphabet)
    return lambda rng: random_word(alphabet, max_len, rng)


def approx_eq(hypothesis: M2MA, target, cfg: ApproxEqConfig, rng: random.Random) -> Word | None:
    """First sampled word where ``hypothesis`` and ``target`` disagree, if any."""
    draw = _sampler(target, cfg.max_len)
    for _ in range(cfg.num_tests):
        w = draw(rng)
        if hypothesis.membership(w) != target(w):
            return w
    return None


def approximate_equivalence(target, cfg: ApproxEqConfig, rng: random.Random | None = None):
    """Equivalence strategy drawing from one seeded generator across all queries."""
    rng = rng if rng is not None else random.Random(cfg.seed)
    return lambda h: approx_eq(h, target, cfg, rng)


# -- external process oracle -------------------------------------------------

class ExternalOracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExternalOracleSpec:
    alphabet: tuple
    command: str | Sequence[str]
    lasso: bool = False
    timeout: float = DEFAULT_QUERY_TIMEOUT
    cwd: str | None = None      # working directory of the child process

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if not self.command:
            raise ValueError("oracle command must be nonempty")

    @property
    def argv(self) -> list[str]:
        return shlex.split(self.command) if isinstance(self.command, str) else list(self.command)


def encode_query(w: Word | LassoWord) -> str:
    """Wire form: space-separated symbols, ``_`` for the empty word."""
    if isinstance(w, LassoWord):
        return str(w)
    return format_word(tuple(w))


class ExternalOracle:
    """Membership answered by a child process over a line protocol.

    The parent writes one word per line and expects ``0`` or ``1`` back; it
    sends ``quit`` when closed.  Answers are cached.  In lasso mode only valid
    ``u $ v`` words are forwarded.
    """

    def __init__(self, spec: ExternalOracleSpec):
        self.spec = spec
        self.lasso = spec.lasso
        if spec.lasso:
            if SEPARATOR in spec.alphabet:
                raise ValueError(f"{SEPARATOR!r} is reserved and may not be an alphabet symbol")
            self.base_alphabet = spec.alphabet
            self.alphabet = spec.alphabet + (SEPARATOR,)
        else:
            self.alphabet = spec.alphabet
        self.cache: dict[Word, int] = {}
        self.queries = 0
        self._proc: subprocess.Popen | None = None
        self._lines: queue.Queue = queue.Queue()

    def _start(self) -> None:
        try:
            self._proc = subprocess.Popen(
                self.spec.argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
                cwd=self.spec.cwd,
            )
        except OSError as exc:
            raise ExternalOracleError(f"cannot launch oracle {self.spec.argv}: {exc}") from exc
        threading.Thread(target=self._pump, args=(self._proc.stdout,), daemon=True).start()

    def _pump(self, stream) -> None:
        for line in stream:
            self._lines.put(line)
        self._lines.put(None)

    def _ask(self, line: str) -> int:
        if self._proc is None:
            self._start()
        try:
            self._proc.stdin.write(line + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise ExternalOracleError(f"oracle process died before query {line!r}: {exc}") from exc
        try:
            reply = self._lines.get(timeout=self.spec.timeout)
        except queue.Empty:
            raise ExternalOracleError(f"oracle gave no answer to {line!r} within {self.spec.timeout} s") from None
        if reply is None:
            code = self._proc.poll()
            raise ExternalOracleError(f"oracle process exited (status {code}) while answering {line!r}")
        answer = reply.strip()
        if answer not in ("0", "1"):
            raise ExternalOracleError(f"malformed oracle reply {reply!r} to query {line!r}")
        self.queries += 1
        return int(answer)

    def query(self, w) -> int:
        """Answer for a finite word, or for a :class:`LassoWord`."""
        if isinstance(w, LassoWord):
            key = w.to_word()
        else:
            key = as_word(w)
            if self.lasso:
                lasso = LassoWord.from_word(key)
                if lasso is None:
                    return 0
                w = lasso
        hit = self.cache.get(key)
        if hit is None:
            hit = self.cache[key] = self._ask(encode_query(w))
        return hit

    __call__ = query

    def close(self) -> None:
        if self._proc is None:
            return
        proc, self._proc = self._proc, None
        try:
            proc.stdin.write("quit\n")
            proc.stdin.close()
        except (BrokenPipeError, OSError):
            pass
        try:
            proc.wait(timeout=self.spec.timeout)
        except subprocess.TimeoutExpired:
            proc.kill()
            proc.wait()
        if proc.stdout:
            proc.stdout.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def external_mq(spec: ExternalOracleSpec, w) -> int:
    """One-shot query; prefer :class:`ExternalOracle` for repeated use."""
    with ExternalOracle(spec) as oracle:
        return oracle.query(w)


# -- validation --------------------------------------------------------------

@dataclass
class ValidationReport:
    seed: int
    sample_count: int
    sample_max_len: int
    agreements: int
    witnesses: list[Word] = field(default_factory=list)
    disagreements: int = 0

    @property
    def passed(self) -> bool:
        return self.disagreements == 0

    def summary(self) -> str:
        status = "passed" if self.passed else "FAILED"
        text = (
            f"validation {status}: {self.agreements}/{self.sample_count} sampled words agree "
            f"(max length {self.sample_max_len}, seed {self.seed})"
        )
        if self.witnesses:
            text += "; disagreements on: " + ", ".join(format_word(w) for w in self.witnesses)
        return text


def validate_learned(learned: M2MA, reference, cfg: ValidationConfig) -> ValidationReport:
    """Compare ``learned`` with ``reference`` on a random sample (lassos for omega references)."""
    rng = random.Random(cfg.seed)
    draw = _sampler(reference, cfg.sample_max_len)
    agree, bad, witnesses = 0, 0, []
    for _ in range(cfg.sample_count):
        w = draw(rng)
        if learned.membership(w) == reference(w):
            agree += 1
        else:
            bad += 1
            if len(witnesses) < 10:
                witnesses.append(w)
    report = ValidationReport(cfg.seed, cfg.sample_count, cfg.sample_max_len, agree, witnesses, bad)
    if not report.passed:
        log.warning(report.summary())
    return report
