"""Weighted finite automata over the semirings of wal.semiring."""

import json
import logging
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import AutomatonFormatError, DomainMismatchError, UnknownLetterError, UnknownStateError
from .semiring import Semiring, SemiringId, Value, semiring
from .words import check_word, shortlex_key, words_up_to

logger = logging.getLogger(__name__)


def object_vector(values: Sequence[Value]) -> np.ndarray:
    """A 1-d object array holding the values as-is (tuples are not unpacked)"""
    vector = np.empty(len(values), dtype=object)
    for i, value in enumerate(values):
        vector[i] = value
    return vector


def object_matrix(rows: Sequence[Sequence[Value]], width: int) -> np.ndarray:
    matrix = np.empty((len(rows), width), dtype=object)
    for i, row in enumerate(rows):
        for j, value in enumerate(row):
            matrix[i, j] = value
    return matrix


@dataclass(frozen=True)
class LiteralCertificate:
    """Labeling σ of states by words, with the weight-1 run reaching each state"""
    sigma: Mapping[str, str]
    runs: Mapping[str, tuple[str, ...]]

    def words(self) -> set[str]:
        return set(self.sigma.values())


@dataclass(frozen=True, eq=False)
class Wfa:
    """
    A weighted automaton (α, (M(a))_a, η) over a semiring.

    The value on w = w1...wk is α M(w1)...M(wk) η. Vectors and matrices
    are numpy object arrays and are read-only once constructed.
    """

    semiring: SemiringId
    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    initial: np.ndarray
    transitions: Mapping[str, np.ndarray]
    final: np.ndarray

    _index: dict = field(init=False, repr=False)
    _rows: dict = field(init=False, repr=False)

    def __post_init__(self):
        d = semiring(self.semiring)
        alphabet = tuple(sorted(set(self.alphabet)))
        if any(len(letter) != 1 for letter in alphabet):
            raise AutomatonFormatError(f"Letters must be single characters: {list(alphabet)}")
        if not self.states:
            raise AutomatonFormatError("An automaton needs at least one state")
        if len(set(self.states)) != len(self.states):
            raise AutomatonFormatError(f"Duplicate state names in {list(self.states)}")
        n = len(self.states)

        initial = self._frozen(self.initial, (n,), "initial")
        final = self._frozen(self.final, (n,), "final")
        if set(self.transitions) != set(alphabet):
            raise AutomatonFormatError(
                f"Transition letters {sorted(self.transitions)} do not match the alphabet {list(alphabet)}"
            )
        transitions = {a: self._frozen(self.transitions[a], (n, n), f"M({a})") for a in alphabet}

        for value in [*initial, *final, *(x for m in transitions.values() for x in m.flat)]:
            if not d.contains(value):
                raise DomainMismatchError(f"Weight {value!r} is not a {self.semiring} value")

        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "final", final)
        object.__setattr__(self, "transitions", MappingProxyType(transitions))
        object.__setattr__(self, "_index", {q: i for i, q in enumerate(self.states)})
        object.__setattr__(self, "_rows", {a: m.tolist() for a, m in transitions.items()})

    @staticmethod
    def _frozen(array: Any, shape: tuple, name: str) -> np.ndarray:
        if not isinstance(array, np.ndarray) or array.dtype != object:
            raise AutomatonFormatError(f"{name} must be a numpy object array")
        if array.shape != shape:
            raise AutomatonFormatError(f"{name} has shape {array.shape}, expected {shape}")
        copy = array.copy()
        copy.setflags(write=False)
        return copy

    @classmethod
    def build(
        cls,
        sid: SemiringId,
        alphabet: Iterable[str],
        states: Sequence[str],
        initial: Mapping[str, Value],
        final: Mapping[str, Value],
        transitions: Iterable[tuple[str, str, str, Value]],
    ) -> "Wfa":
        """
        Build an automaton from sparse entries.

        Args:
            sid: Semiring of the weights
            alphabet: Letters
            states: Ordered state names
            initial: State -> initial weight; omitted states get 0
            final: State -> final weight; omitted states get 0
            transitions: (from, letter, to, weight) entries; repeated entries are ⊕-merged

        Returns:
            The automaton
        """
        d = semiring(sid)
        alphabet = tuple(sorted(set(alphabet)))
        states = tuple(states)
        index = {q: i for i, q in enumerate(states)}
        n = len(states)

        def position(state: str) -> int:
            if state not in index:
                raise UnknownStateError(f"Unknown state {state!r}")
            return index[state]

        alpha = [d.zero] * n
        eta = [d.zero] * n
        for state, weight in initial.items():
            alpha[position(state)] = d.check(weight)
        for state, weight in final.items():
            eta[position(state)] = d.check(weight)
        matrices = {a: [[d.zero] * n for _ in range(n)] for a in alphabet}
        for source, letter, target, weight in transitions:
            if letter not in matrices:
                raise UnknownLetterError(f"Transition letter {letter!r} is not in the alphabet {list(alphabet)}")
            i, j = position(source), position(target)
            matrices[letter][i][j] = d.plus(matrices[letter][i][j], d.check(weight))

        return cls(
            semiring=sid,
            alphabet=alphabet,
            states=states,
            initial=object_vector(alpha),
            transitions={a: object_matrix(rows, n) for a, rows in matrices.items()},
            final=object_vector(eta),
        )

    @property
    def descriptor(self) -> Semiring:
        return semiring(self.semiring)

    @property
    def size(self) -> int:
        return len(self.states)

    def index_of(self, state: str) -> int:
        try:
            return self._index[state]
        except KeyError:
            raise UnknownStateError(f"Unknown state {state!r}; states are {list(self.states)}") from None

    def matrix(self, letter: str) -> list[list[Value]]:
        return self._rows[letter]

    def weight(self, source: str, letter: str, target: str) -> Value:
        if letter not in self._rows:
            raise UnknownLetterError(f"Letter {letter!r} is not in the alphabet {list(self.alphabet)}")
        return self._rows[letter][self.index_of(source)][self.index_of(target)]

    def forward(self, word: str, start: Optional[Sequence[Value]] = None) -> list[Value]:
        """Row vector α M(word), or start M(word) when a start vector is given"""
        check_word(word, self.alphabet)
        d = self.descriptor
        vector = list(self.initial) if start is None else list(start)
        for letter in word:
            vector = d.vecmat(vector, self._rows[letter])
        return vector

    def backward(self, word: str) -> list[Value]:
        """Column vector M(word) η"""
        check_word(word, self.alphabet)
        d = self.descriptor
        vector = list(self.final)
        for letter in reversed(word):
            vector = d.matvec(self._rows[letter], vector)
        return vector

    def evaluate(self, word: str) -> Value:
        return self.descriptor.dot(self.forward(word), list(self.final))

    def __call__(self, word: str) -> Value:
        return self.evaluate(word)

    def state_row_function(self, state: str, word: str) -> Value:
        """Value on word when `state` is the unique initial state with weight 1"""
        return self.backward(word)[self.index_of(state)]

    def state_column_function(self, state: str, word: str) -> Value:
        """Value on word when `state` is the unique final state with weight 1"""
        return self.forward(word)[self.index_of(state)]

    def mirror(self) -> "Wfa":
        """Transpose every M(a) and swap initial and final vectors"""
        return Wfa(
            semiring=self.semiring,
            alphabet=self.alphabet,
            states=self.states,
            initial=self.final,
            transitions={a: m.T for a, m in self.transitions.items()},
            final=self.initial,
        )

    def relabel(self, names: Sequence[str]) -> "Wfa":
        if len(names) != self.size:
            raise AutomatonFormatError(f"Expected {self.size} state names, got {len(names)}")
        return Wfa(self.semiring, self.alphabet, tuple(names), self.initial, dict(self.transitions), self.final)

    def is_literal(self) -> Optional[LiteralCertificate]:
        """
        Look for a literal labeling of the states.

        A labeling σ maps states bijectively onto a prefix-closed word set,
        σ(initial) = ε, and each σ(q) labels a unique run from the initial
        state, all of whose transitions have weight 1, ending in q.

        Returns:
            The certificate for the first labeling found when candidates are
            tried in shortlex order, or None when no labeling exists
        """
        d = self.descriptor
        n = self.size
        starts = [i for i, weight in enumerate(self.initial) if weight != d.zero]
        if len(starts) != 1 or self.initial[starts[0]] != d.one:
            return None
        start = starts[0]

        # step[(q, a)] = p when the only nonzero a-transition out of q goes to p with weight 1
        step = {}
        for a in self.alphabet:
            for i, row in enumerate(self._rows[a]):
                targets = [j for j, weight in enumerate(row) if weight != d.zero]
                if len(targets) == 1 and row[targets[0]] == d.one:
                    step[(i, a)] = targets[0]

        # Words with a unique all-weight-1 run visiting distinct states, in shortlex order
        candidates: dict[int, list[tuple[str, tuple[int, ...]]]] = {i: [] for i in range(n)}
        queue = deque([("", (start,))])
        while queue:
            word, path = queue.popleft()
            candidates[path[-1]].append((word, path))
            for a in self.alphabet:
                target = step.get((path[-1], a))
                if target is not None and target not in path:
                    queue.append((word + a, path + (target,)))
        if any(not options for options in candidates.values()):
            return None

        order = sorted(range(n), key=lambda i: shortlex_key(candidates[i][0][0]))
        assignment: dict[int, tuple[str, tuple[int, ...]]] = {}

        def search(k: int) -> bool:
            if k == len(order):
                return True
            state = order[k]
            if state in assignment:
                return search(k + 1)
            for word, path in candidates[state]:
                forced = {path[j]: (word[:j], path[:j + 1]) for j in range(len(path))}
                if any(s in assignment and assignment[s][0] != forced[s][0] for s in forced):
                    continue
                added = [s for s in forced if s not in assignment]
                for s in added:
                    assignment[s] = forced[s]
                if search(k + 1):
                    return True
                for s in added:
                    del assignment[s]
            return False

        if not search(0):
            return None
        return LiteralCertificate(
            sigma=MappingProxyType({self.states[i]: assignment[i][0] for i in range(n)}),
            runs=MappingProxyType({self.states[i]: tuple(self.states[j] for j in assignment[i][1]) for i in range(n)}),
        )

    def to_json(self) -> dict:
        """The automaton file format; zero entries are omitted"""
        d = self.descriptor
        transitions = []
        for i, source in enumerate(self.states):
            for a in self.alphabet:
                for j, target in enumerate(self.states):
                    weight = self._rows[a][i][j]
                    if weight != d.zero:
                        transitions.append({"from": source, "letter": a, "to": target, "weight": d.render(weight)})
        return {
            "semiring": self.semiring.tag.value,
            "alphabet": list(self.alphabet),
            "states": list(self.states),
            "initial": {q: d.render(w) for q, w in zip(self.states, self.initial) if w != d.zero},
            "final": {q: d.render(w) for q, w in zip(self.states, self.final) if w != d.zero},
            "transitions": transitions,
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "Wfa":
        missing = [key for key in ("semiring", "alphabet", "states") if key not in data]
        if missing:
            raise AutomatonFormatError(f"Missing required fields: {missing}")
        alphabet = [str(letter) for letter in data["alphabet"]]
        sid = SemiringId.parse(str(data["semiring"]), alphabet)
        d = semiring(sid)

        def value(text: Any) -> Value:
            if isinstance(text, int) and not isinstance(text, bool):
                text = str(text)
            if not isinstance(text, str):
                raise AutomatonFormatError(f"Weights are written as strings, got {text!r}")
            return d.parse(text)

        try:
            transitions = [
                (entry["from"], entry["letter"], entry["to"], value(entry.get("weight", d.render(d.one))))
                for entry in data.get("transitions", [])
            ]
        except KeyError as exc:
            raise AutomatonFormatError(f"Transition entry is missing field {exc}") from None
        return cls.build(
            sid,
            alphabet,
            [str(q) for q in data["states"]],
            {q: value(w) for q, w in data.get("initial", {}).items()},
            {q: value(w) for q, w in data.get("final", {}).items()},
            transitions,
        )

    @classmethod
    def load(cls, path: Path | str) -> "Wfa":
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Automaton file not found: {path}")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise AutomatonFormatError(f"{path}: {exc}") from None
        logger.debug("Loaded automaton from %s", path)
        return cls.from_json(data)

    def dump(self, path: Path | str) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")


def first_disagreement(
    alphabet: Sequence[str],
    depth: int,
    left: Callable[[str], Value],
    right: Callable[[str], Value],
) -> Optional[str]:
    """The shortlex-first word of length ≤ depth on which left and right differ"""
    for word in words_up_to(alphabet, depth):
        if left(word) != right(word):
            return word
    return None
