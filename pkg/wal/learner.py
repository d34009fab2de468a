"""
The learning game: a teacher answering membership and equivalence queries
(and choosing hypothesis coefficients as an ally or an adversary), and three
learner strategies playing against it.
"""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import count
from typing import Callable, Optional, Sequence

import pandas as pd

from .errors import BudgetExhaustedError, DomainMismatchError, InvariantViolation
from .hankel import MembershipOracle
from .hypothesis_automaton import (
    BlockOutcome, SolutionLambda, Target, block_targets, build_hypothesis, solve_lambda,
)
from .linear_solve import (
    DEFAULT_LIMITS, ENUMERABLE_TAGS, LinearSystem, SolverLimits, SolveStatus, enumerate_left,
)
from .semiring import RAT, SemiringId, Value, semiring
from .wfa import Wfa, first_disagreement
from .words import EPSILON, render_word, shortlex_segment, sort_shortlex, suffixes, words_up_to

logger = logging.getLogger(__name__)


class EquivalenceKind(Enum):
    FIELD_EXACT = "field"
    BOUNDED = "bounded"


class TeacherMode(Enum):
    ALLY = "ally"
    ADVERSARY = "adversary"


class LearnOutcome(Enum):
    SUCCESS = "SUCCESS"
    BUDGET_EXHAUSTED = "BUDGET_EXHAUSTED"


@dataclass(frozen=True)
class EquivalenceChecker:
    """Exact forward-space equivalence over RAT, or comparison of all words up to depth"""
    kind: EquivalenceKind = EquivalenceKind.BOUNDED
    depth: int = 6

    def __post_init__(self):
        if self.depth < 0:
            raise DomainMismatchError(f"Equivalence depth must be nonnegative, got {self.depth}")

    @property
    def bounded(self) -> bool:
        return self.kind is EquivalenceKind.BOUNDED


@dataclass(frozen=True)
class Budget:
    """
    Limits on a learning run: teacher interactions (solver calls plus
    equivalence queries) and the longest word admitted into Q or T.
    """
    interactions: int = 500
    max_length: Optional[int] = None

    @classmethod
    def for_checker(cls, checker: EquivalenceChecker, interactions: int = 500,
                    max_length: Optional[int] = None) -> "Budget":
        """Bounded checkers cannot see errors of tables with words longer than depth - 2"""
        if max_length is None and checker.bounded:
            max_length = max(checker.depth - 2, 0)
        return cls(interactions, max_length)


# Verdicts and transcript events share one vocabulary

@dataclass(frozen=True)
class Equal:
    bounded: bool
    depth: Optional[int] = None


@dataclass(frozen=True)
class PairQueried:
    Q: tuple[str, ...]
    T: tuple[str, ...]

    def to_json(self, sid: SemiringId) -> dict:
        return {"Q": [render_word(q) for q in self.Q], "T": [render_word(t) for t in self.T]}


@dataclass(frozen=True)
class EmptyDeclared:
    failing: Optional[Target]
    status: SolveStatus = SolveStatus.NO_SOLUTION

    def to_json(self, sid: SemiringId) -> dict:
        return {"failing": str(self.failing) if self.failing else None, "status": self.status.value}


@dataclass(frozen=True)
class HypothesisIssued:
    solution: SolutionLambda
    automaton: Wfa
    fidelity: str

    def to_json(self, sid: SemiringId) -> dict:
        return {"fidelity": self.fidelity, "lambda": self.solution.to_json(), "automaton": self.automaton.to_json()}


@dataclass(frozen=True)
class Counterexample:
    word: str
    expected: Value
    actual: Value

    def to_json(self, sid: SemiringId) -> dict:
        d = semiring(sid)
        return {"word": render_word(self.word), "expected": d.render(self.expected), "actual": d.render(self.actual)}


@dataclass(frozen=True)
class Success:
    automaton: Wfa
    bounded: bool
    depth: Optional[int]

    def to_json(self, sid: SemiringId) -> dict:
        return {"bounded": self.bounded, "depth": self.depth, "automaton": self.automaton.to_json()}


@dataclass(frozen=True)
class BudgetExhausted:
    reason: str

    def to_json(self, sid: SemiringId) -> dict:
        return {"reason": self.reason}


Event = PairQueried | EmptyDeclared | HypothesisIssued | Counterexample | Success | BudgetExhausted


@dataclass
class GameTranscript:
    """Ordered events of one game with the interaction count at each event"""
    semiring: SemiringId
    events: list[Event] = field(default_factory=list)
    stamps: list[int] = field(default_factory=list)
    interactions: int = 0
    membership_queries: int = 0

    def record(self, event: Event) -> None:
        if self.events and isinstance(self.events[-1], (Success, BudgetExhausted)):
            raise InvariantViolation(f"Event {type(event).__name__} recorded after the game ended")
        self.events.append(event)
        self.stamps.append(self.interactions)

    def of_kind(self, kind: type) -> list:
        return [event for event in self.events if isinstance(event, kind)]

    def records(self) -> list[dict]:
        return [
            {"event": type(event).__name__, "interactions": stamp, **event.to_json(self.semiring)}
            for event, stamp in zip(self.events, self.stamps)
        ]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(record) + "\n" for record in self.records())

    def to_frame(self) -> pd.DataFrame:
        """One row per event: step, event name, interaction count and a short detail"""
        rows = []
        for step, (event, stamp) in enumerate(zip(self.events, self.stamps)):
            rows.append({
                "step": step,
                "event": type(event).__name__,
                "interactions": stamp,
                "detail": _detail(event, self.semiring),
            })
        return pd.DataFrame(rows, columns=["step", "event", "interactions", "detail"])


def _detail(event: Event, sid: SemiringId) -> str:
    if isinstance(event, PairQueried):
        return f"Q={','.join(map(render_word, event.Q))} T={','.join(map(render_word, event.T))}"
    if isinstance(event, EmptyDeclared):
        return f"failing {event.failing}"
    if isinstance(event, HypothesisIssued):
        return f"{event.automaton.size} states; {event.fidelity}"
    if isinstance(event, Counterexample):
        d = semiring(sid)
        return f"{render_word(event.word)}: expected {d.render(event.expected)}, got {d.render(event.actual)}"
    if isinstance(event, Success):
        return f"equal up to depth {event.depth}" if event.bounded else "equal"
    return event.reason


@dataclass(frozen=True)
class LearnResult:
    outcome: LearnOutcome
    automaton: Optional[Wfa]
    transcript: GameTranscript
    reason: Optional[str] = None

    @property
    def succeeded(self) -> bool:
        return self.outcome is LearnOutcome.SUCCESS


@dataclass
class Teacher:
    """Answers membership queries from the oracle and judges hypotheses"""
    oracle: MembershipOracle
    equivalence: EquivalenceChecker = field(default_factory=EquivalenceChecker)
    mode: TeacherMode = TeacherMode.ALLY
    probe_depth: int = 4
    limits: SolverLimits = DEFAULT_LIMITS
    adversary_cap: int = 200

    def __post_init__(self):
        if self.equivalence.kind is EquivalenceKind.FIELD_EXACT:
            if self.oracle.semiring != RAT:
                raise DomainMismatchError(f"Exact equivalence needs a RAT target, got {self.oracle.semiring}")
            if self.oracle.automaton is None:
                raise DomainMismatchError("Exact equivalence needs the target as an automaton")


@dataclass(frozen=True)
class NoneDeclared:
    failing: Optional[Target]


@dataclass(frozen=True)
class LambdaChoice:
    solution: SolutionLambda
    fidelity: str


def _field_disagreement(target: Wfa, hypothesis: Wfa) -> Optional[str]:
    """
    Shortlex-first word where two RAT automata differ, or None.

    Explores words breadth-first, keeping the paired forward vectors
    (α M(w), α' M'(w)) in an echelon basis; words whose vector depends on
    earlier ones are not extended.
    """
    d = target.descriptor
    basis: list[tuple[int, list[Fraction]]] = []
    queue = [(EPSILON, list(target.initial), list(hypothesis.initial))]
    position = 0
    while position < len(queue):
        word, left, right = queue[position]
        position += 1
        if d.dot(left, list(target.final)) != d.dot(right, list(hypothesis.final)):
            return word
        vector = left + right
        for pivot, row in basis:
            if vector[pivot] != 0:
                factor = vector[pivot] / row[pivot]
                vector = [x - factor * y for x, y in zip(vector, row)]
        pivot = next((i for i, x in enumerate(vector) if x != 0), None)
        if pivot is None:
            continue
        basis.append((pivot, vector))
        for a in target.alphabet:
            queue.append((word + a, d.vecmat(left, target.matrix(a)), d.vecmat(right, hypothesis.matrix(a))))
    return None


def equivalence_query(t: Teacher, hypothesis: Wfa) -> Equal | Counterexample:
    o = t.oracle
    if hypothesis.semiring != o.semiring or hypothesis.alphabet != o.alphabet:
        raise DomainMismatchError(
            f"Hypothesis over {hypothesis.semiring}/{list(hypothesis.alphabet)} "
            f"does not match the target over {o.semiring}/{list(o.alphabet)}"
        )
    if t.equivalence.kind is EquivalenceKind.FIELD_EXACT:
        word = _field_disagreement(o.automaton, hypothesis)
    else:
        word = first_disagreement(o.alphabet, t.equivalence.depth, hypothesis, o)
    if word is None:
        return Equal(t.equivalence.bounded, t.equivalence.depth if t.equivalence.bounded else None)
    expected, actual = o.value(word), hypothesis(word)
    if expected == actual:
        raise InvariantViolation(f"Counterexample {render_word(word)!r} does not separate the hypothesis from the target")
    return Counterexample(word, expected, actual)


def _errs(t: Teacher, solution: SolutionLambda) -> bool:
    hypothesis = build_hypothesis(t.oracle, solution)
    return first_disagreement(t.oracle.alphabet, t.probe_depth, hypothesis, t.oracle) is not None


def _solved_or_raise(outcome: BlockOutcome) -> Optional[SolutionLambda]:
    if outcome.status is SolveStatus.BOUND_EXCEEDED:
        raise BudgetExhaustedError(f"solver bound exceeded at target {outcome.failing}: {outcome.bound_note}")
    return outcome.solution


def _ally(t: Teacher, outcome: BlockOutcome) -> LambdaChoice:
    block = outcome.block
    probe_columns = sort_shortlex([*block.T, *words_up_to(t.oracle.alphabet, t.probe_depth)])
    probe = solve_lambda(t.oracle, block.Q, probe_columns, t.limits)
    if probe.solved:
        return LambdaChoice(probe.solution.restrict(block.T), f"ally: solved on columns up to length {t.probe_depth}")
    return LambdaChoice(outcome.solution, f"ally: probe columns not closed ({probe.status.value}); principal witness")


def _adversary(t: Teacher, outcome: BlockOutcome) -> LambdaChoice:
    principal = outcome.solution
    block = outcome.block
    if _errs(t, principal):
        return LambdaChoice(principal, "adversary: principal witness errs")
    d = semiring(block.semiring)
    tried = 0

    for target in block_targets(block.Q, block.alphabet):
        coefficients = principal.coefficients_for(target)
        for p, x in enumerate(coefficients):
            if x == d.zero or tried >= t.adversary_cap:
                continue
            zeroed = list(coefficients)
            zeroed[p] = d.zero
            candidate = principal.replace_target(target, zeroed)
            if not candidate.satisfies(block):
                continue
            tried += 1
            if _errs(t, candidate):
                return LambdaChoice(candidate, f"adversary: zeroed coefficient {p} of target {target}")

    systems_finite = block.semiring.tag in ENUMERABLE_TAGS
    if systems_finite and not LinearSystem(block.semiring, block.base, block.eps_row).zero_generators():
        for target in block_targets(block.Q, block.alphabet):
            if tried >= t.adversary_cap:
                break
            vector = block.eps_row if target.is_epsilon else block.extensions[target.letter][block.Q.index(target.word)]
            system = LinearSystem(block.semiring, block.base, vector)
            alternatives = enumerate_left(system, cap=t.adversary_cap, limits=t.limits)
            for alternative in alternatives.solutions:
                if tried >= t.adversary_cap:
                    break
                if alternative == principal.coefficients_for(target):
                    continue
                tried += 1
                candidate = principal.replace_target(target, alternative)
                if _errs(t, candidate):
                    return LambdaChoice(candidate, f"adversary: alternative coefficients for target {target}")
    return LambdaChoice(principal, f"adversary: no erring alternative among {tried} tried")


def choose_lambda(t: Teacher, Q: Sequence[str], T: Sequence[str]) -> NoneDeclared | LambdaChoice:
    """
    The teacher's reply to the pair (Q, T): NoneDeclared when Λ_{Q,T} is
    empty, otherwise one element chosen as an ally (correct up to
    probe_depth when possible) or an adversary (incorrect when possible).

    Raises:
        BudgetExhaustedError: when a solver bound was exceeded on (Q, T)
    """
    outcome = solve_lambda(t.oracle, Q, T, t.limits)
    solution = _solved_or_raise(outcome)
    if solution is None:
        return NoneDeclared(outcome.failing)
    if t.mode is TeacherMode.ALLY:
        return _ally(t, outcome)
    return _adversary(t, outcome)


class _Ledger:
    """Interaction accounting for one run"""

    def __init__(self, t: Teacher, budget: Budget, transcript: GameTranscript,
                 progress_callback: Optional[Callable[[int, Optional[int]], None]]):
        self.teacher = t
        self.budget = budget
        self.transcript = transcript
        self.progress_callback = progress_callback

    def spend(self) -> None:
        if self.transcript.interactions >= self.budget.interactions:
            raise BudgetExhaustedError(f"interaction budget of {self.budget.interactions} exhausted")
        self.transcript.interactions += 1
        if self.progress_callback:
            self.progress_callback(self.transcript.interactions, self.budget.interactions)

    def admit(self, words: Sequence[str]) -> None:
        self.admit_length(len(max(words, key=len)))

    def admit_length(self, length: int) -> None:
        limit = self.budget.max_length
        if limit is not None and length > limit:
            raise BudgetExhaustedError(f"words of length {length} exceed the length bound of {limit}")

    def hypothesis(self, choice: LambdaChoice) -> Wfa:
        automaton = build_hypothesis(self.teacher.oracle, choice.solution)
        self.transcript.record(HypothesisIssued(choice.solution, automaton, choice.fidelity))
        return automaton

    def judge(self, automaton: Wfa) -> Equal | Counterexample:
        self.spend()
        verdict = equivalence_query(self.teacher, automaton)
        if isinstance(verdict, Counterexample):
            self.transcript.record(verdict)
            logger.debug("Counterexample %r", render_word(verdict.word))
        else:
            self.transcript.record(Success(automaton, verdict.bounded, verdict.depth))
        return verdict


def _resolve_budget(t: Teacher, budget: Budget | int | None) -> Budget:
    if budget is None:
        return Budget.for_checker(t.equivalence)
    if isinstance(budget, int):
        return Budget.for_checker(t.equivalence, budget)
    return budget


def _play(t: Teacher, budget: Budget | int | None, game: Callable[[_Ledger], Wfa],
          progress_callback: Optional[Callable[[int, Optional[int]], None]], name: str) -> LearnResult:
    transcript = GameTranscript(t.oracle.semiring)
    ledger = _Ledger(t, _resolve_budget(t, budget), transcript, progress_callback)
    queries_before = t.oracle.query_count
    try:
        automaton = game(ledger)
    except BudgetExhaustedError as exhausted:
        reason = str(exhausted)
        transcript.record(BudgetExhausted(reason))
        transcript.membership_queries = t.oracle.query_count - queries_before
        logger.info("%s: budget exhausted after %d interactions (%s)", name, transcript.interactions, reason)
        return LearnResult(LearnOutcome.BUDGET_EXHAUSTED, None, transcript, reason)
    transcript.membership_queries = t.oracle.query_count - queries_before
    logger.info("%s: learned a %d-state automaton after %d interactions", name, automaton.size, transcript.interactions)
    return LearnResult(LearnOutcome.SUCCESS, automaton, transcript)


def run_hkrs(t: Teacher, budget: Budget | int | None = None,
             progress_callback: Optional[Callable[[int, Optional[int]], None]] = None) -> LearnResult:
    """
    Closure-then-test loop: start from Q = T = {ε}; while some row qa is not
    a left combination of the rows of Q on T, add qa to Q; then submit the
    teacher's hypothesis and add all suffixes of any counterexample to T.
    """
    o = t.oracle

    def game(ledger: _Ledger) -> Wfa:
        Q, T = (EPSILON,), (EPSILON,)
        while True:
            while True:
                ledger.transcript.record(PairQueried(Q, T))
                ledger.spend()
                outcome = solve_lambda(o, Q, T, t.limits)
                if outcome.solved:
                    break
                _solved_or_raise(outcome)
                ledger.transcript.record(EmptyDeclared(outcome.failing))
                if outcome.failing.is_epsilon:
                    raise InvariantViolation("The ε row failed although ε is among the rows")
                row = outcome.failing.word + outcome.failing.letter
                ledger.admit([row])
                logger.debug("Closure adds row %r", render_word(row))
                Q = sort_shortlex([*Q, row])

            ledger.spend()
            choice = choose_lambda(t, Q, T)
            if isinstance(choice, NoneDeclared):
                raise InvariantViolation(f"Teacher declared no solution on a closed pair Q={list(Q)}")
            automaton = ledger.hypothesis(choice)
            verdict = ledger.judge(automaton)
            if isinstance(verdict, Equal):
                return automaton
            added = suffixes(verdict.word)
            ledger.admit(added)
            T = sort_shortlex([*T, *added])

    return _play(t, budget, game, progress_callback, "hkrs")


def run_incremental(t: Teacher, budget: Budget | int | None = None,
                    progress_callback: Optional[Callable[[int, Optional[int]], None]] = None) -> LearnResult:
    """
    Query (Q_i, T_j) with Q_i, T_j all words of length at most i, j:
    an empty solution set moves to Q_{i+1}, a wrong hypothesis to T_{j+1}.
    """
    alphabet = t.oracle.alphabet

    def game(ledger: _Ledger) -> Wfa:
        i = j = 0
        while True:
            ledger.admit_length(max(i, j))
            Q, T = words_up_to(alphabet, i), words_up_to(alphabet, j)
            ledger.transcript.record(PairQueried(Q, T))
            ledger.spend()
            choice = choose_lambda(t, Q, T)
            if isinstance(choice, NoneDeclared):
                ledger.transcript.record(EmptyDeclared(choice.failing))
                i += 1
                continue
            automaton = ledger.hypothesis(choice)
            verdict = ledger.judge(automaton)
            if isinstance(verdict, Equal):
                return automaton
            j += 1

    return _play(t, budget, game, progress_callback, "incremental")


def diagonal_pairs():
    """(i, j) with i, j ≥ 1 in Cantor-diagonal order"""
    for total in count(2):
        for i in range(1, total):
            yield i, total - i


def run_enumeration(t: Teacher, budget: Budget | int | None = None,
                    progress_callback: Optional[Callable[[int, Optional[int]], None]] = None) -> LearnResult:
    """
    Query every pair (Q, T) of shortlex initial segments of Σ* in diagonal
    order until a hypothesis is accepted. Pairs using words longer than the
    length bound are skipped; once a whole diagonal is skipped the run ends.
    """
    alphabet = t.oracle.alphabet

    def game(ledger: _Ledger) -> Wfa:
        limit = ledger.budget.max_length
        diagonal, admitted_on_diagonal = None, False
        for i, j in diagonal_pairs():
            if i + j != diagonal:
                if diagonal is not None and not admitted_on_diagonal:
                    raise BudgetExhaustedError(f"every pair within the length bound of {limit} was tried")
                diagonal, admitted_on_diagonal = i + j, False
            Q, T = shortlex_segment(alphabet, i), shortlex_segment(alphabet, j)
            if limit is not None and max(len(Q[-1]), len(T[-1])) > limit:
                continue
            admitted_on_diagonal = True
            ledger.transcript.record(PairQueried(Q, T))
            ledger.spend()
            choice = choose_lambda(t, Q, T)
            if isinstance(choice, NoneDeclared):
                ledger.transcript.record(EmptyDeclared(choice.failing))
                continue
            automaton = ledger.hypothesis(choice)
            verdict = ledger.judge(automaton)
            if isinstance(verdict, Equal):
                return automaton

    return _play(t, budget, game, progress_callback, "enumeration")


STRATEGIES = {
    "hkrs": run_hkrs,
    "incremental": run_incremental,
    "enumeration": run_enumeration,
}
