"""Membership oracle for a target function and finite blocks of its Hankel matrix F, F[u][v] = f(uv)."""

import logging
import threading
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

import pandas as pd

from .errors import DomainMismatchError, WalError
from .semiring import Semiring, SemiringId, Value, semiring
from .wfa import Wfa
from .words import EPSILON_STATE, check_word, render_word

logger = logging.getLogger(__name__)

TargetFunction = Callable[[str], Value]


@dataclass(frozen=True)
class SubHankel:
    """
    The rows Q ∪ QΣ of F restricted to the columns T.

    base[i][j] = f(Q[i] T[j]), extensions[a][i][j] = f(Q[i] a T[j]),
    eps_row[j] = f(T[j]) and finals[i] = f(Q[i]).
    """
    semiring: SemiringId
    alphabet: tuple[str, ...]
    Q: tuple[str, ...]
    T: tuple[str, ...]
    base: tuple[tuple[Value, ...], ...]
    extensions: Mapping[str, tuple[tuple[Value, ...], ...]]
    eps_row: tuple[Value, ...]
    finals: tuple[Value, ...]

    def row_of(self, q: str) -> tuple[Value, ...]:
        return self.base[self.Q.index(q)]

    def column_of(self, t: str) -> tuple[Value, ...]:
        """[t]_Q"""
        j = self.T.index(t)
        return tuple(row[j] for row in self.base)

    def shifted_column(self, letter: str, t: str) -> tuple[Value, ...]:
        """(a·[t])_Q = [at]_Q, read off the extension rows"""
        j = self.T.index(t)
        return tuple(row[j] for row in self.extensions[letter])

    def to_frame(self) -> pd.DataFrame:
        """Rendered block with a (block, row) index and one column per t in T"""
        d = semiring(self.semiring)
        index, data = [], []
        for q, row in zip(self.Q, self.base):
            index.append(("Q", render_word(q)))
            data.append([d.render(x) for x in row])
        for q_position, q in enumerate(self.Q):
            for a in self.alphabet:
                index.append(("QΣ", render_word(q + a)))
                data.append([d.render(x) for x in self.extensions[a][q_position]])
        return pd.DataFrame(
            data,
            index=pd.MultiIndex.from_tuples(index, names=["block", "row"]),
            columns=[render_word(t) for t in self.T],
        )

    def to_records(self) -> pd.DataFrame:
        """Long format: one (row, column, value) record per entry"""
        frame = self.to_frame().reset_index()
        long = frame.melt(id_vars=["block", "row"], var_name="column", value_name="value")
        return long[["row", "column", "value"]].drop_duplicates(ignore_index=True)


class MembershipOracle:
    """
    Answers membership queries f(w) for a target given as an automaton or
    as a closed-form evaluator. Answers are cached by the full word, so
    F[u][v] and F[x][y] with uv = xy cost one query.

    query_count counts distinct words evaluated (cache misses);
    request_count counts every value handed out.
    """

    def __init__(self, sid: SemiringId, alphabet: Sequence[str], source: Wfa | TargetFunction, name: str = "target"):
        self.semiring = sid
        self.alphabet = tuple(sorted(set(alphabet)))
        if EPSILON_STATE in self.alphabet:
            raise DomainMismatchError(f"{EPSILON_STATE!r} names the empty-word state and cannot be a letter")
        self.source = source
        self.name = name
        self.query_count = 0
        self.request_count = 0
        self._cache: dict[str, Value] = {}
        self._lock = threading.Lock()

    @classmethod
    def from_wfa(cls, automaton: Wfa, name: str = "automaton") -> "MembershipOracle":
        return cls(automaton.semiring, automaton.alphabet, automaton, name)

    @property
    def descriptor(self) -> Semiring:
        return semiring(self.semiring)

    @property
    def automaton(self) -> Optional[Wfa]:
        return self.source if isinstance(self.source, Wfa) else None

    def value(self, word: str) -> Value:
        check_word(word, self.alphabet)
        with self._lock:
            self.request_count += 1
            if word in self._cache:
                return self._cache[word]
        result = self.descriptor.check(self.source(word))
        with self._lock:
            if word not in self._cache:
                self._cache[word] = result
                self.query_count += 1
            return self._cache[word]

    def __call__(self, word: str) -> Value:
        return self.value(word)

    def entry(self, u: str, v: str) -> Value:
        return self.value(u + v)

    def row(self, u: str, T: Sequence[str]) -> tuple[Value, ...]:
        """⟨u⟩_T"""
        return tuple(self.value(u + t) for t in T)

    def column(self, v: str, Q: Sequence[str]) -> tuple[Value, ...]:
        """[v]_Q"""
        return tuple(self.value(q + v) for q in Q)

    def shift_row(self, v: str, u: str, T: Sequence[str]) -> tuple[Value, ...]:
        """(⟨v⟩·u)_T = ⟨vu⟩_T"""
        return self.row(v + u, T)

    def assemble(self, Q: Sequence[str], T: Sequence[str]) -> SubHankel:
        Q, T = tuple(Q), tuple(T)
        for name, words in (("Q", Q), ("T", T)):
            if not words:
                raise WalError(f"{name} must be nonempty")
            if len(set(words)) != len(words):
                raise WalError(f"{name} has duplicate words: {list(words)}")
        block = SubHankel(
            semiring=self.semiring,
            alphabet=self.alphabet,
            Q=Q,
            T=T,
            base=tuple(self.row(q, T) for q in Q),
            extensions={a: tuple(self.row(q + a, T) for q in Q) for a in self.alphabet},
            eps_row=self.row("", T),
            finals=tuple(self.value(q) for q in Q),
        )
        logger.debug("Assembled %dx%d block of %s (%d distinct queries so far)", len(Q), len(T), self.name, self.query_count)
        return block
