# tests/test_learner.py
import json
from itertools import islice

import pytest

from wal.errors import DomainMismatchError, InvariantViolation
from wal.fixtures import get_fixture
from wal.hankel import MembershipOracle
from wal.learner import (
    Budget, BudgetExhausted, Counterexample, Equal, EquivalenceChecker, EquivalenceKind, GameTranscript,
    HypothesisIssued, LearnOutcome, NoneDeclared, PairQueried, STRATEGIES, Success, Teacher, TeacherMode,
    choose_lambda, diagonal_pairs, equivalence_query, run_enumeration, run_hkrs, run_incremental,
)
from wal.randomized import generator, random_rational_automaton
from wal.semiring import RAT
from wal.wfa import Wfa, first_disagreement

ALPHABET = ("a", "b")
FIELD = EquivalenceChecker(EquivalenceKind.FIELD_EXACT)


@pytest.fixture
def sample_constant_teacher():
    """Create an allied teacher for the constant function f4"""
    return Teacher(get_fixture("f4").oracle())


@pytest.fixture
def sample_rational_target():
    """Create a small RAT automaton"""
    return random_rational_automaton(generator(31), ALPHABET, 3)


class TestBudget:
    """Interaction and length bounds"""

    def test_bounded_checker_limits_length(self):
        assert Budget.for_checker(EquivalenceChecker(depth=6)).max_length == 4
        assert Budget.for_checker(EquivalenceChecker(depth=1)).max_length == 0

    def test_exact_checker_has_no_length_limit(self):
        assert Budget.for_checker(FIELD, 50).max_length is None
        assert Budget.for_checker(FIELD, 50).interactions == 50

    def test_explicit_length_wins(self):
        assert Budget.for_checker(EquivalenceChecker(depth=6), max_length=2).max_length == 2

    def test_negative_depth(self):
        with pytest.raises(DomainMismatchError):
            EquivalenceChecker(depth=-1)


class TestTeacher:
    """Validation and replies"""

    def test_exact_equivalence_needs_rat(self):
        with pytest.raises(DomainMismatchError):
            Teacher(get_fixture("f4").oracle(), FIELD)

    def test_exact_equivalence_needs_automaton(self):
        oracle = MembershipOracle(RAT, ALPHABET, lambda w: 0, "closed form")
        with pytest.raises(DomainMismatchError):
            Teacher(oracle, FIELD)

    def test_choose_lambda_declares_empty_sets(self):
        teacher = Teacher(get_fixture("f1p").oracle())
        assert isinstance(choose_lambda(teacher, [""], [""]), NoneDeclared)

    def test_exact_equivalence(self, sample_rational_target):
        teacher = Teacher(MembershipOracle.from_wfa(sample_rational_target), FIELD)
        verdict = equivalence_query(teacher, sample_rational_target)
        assert verdict == Equal(bounded=False)

    def test_exact_counterexample(self, sample_rational_target):
        teacher = Teacher(MembershipOracle.from_wfa(sample_rational_target), FIELD)
        d = sample_rational_target.descriptor
        shifted = Wfa.build(RAT, ALPHABET, ["x"], {"x": d.one}, {"x": d.one}, [])
        verdict = equivalence_query(teacher, shifted)
        assert isinstance(verdict, Counterexample)
        assert verdict.expected == sample_rational_target(verdict.word)
        assert verdict.actual == shifted(verdict.word)

    def test_hypothesis_over_other_semiring(self, sample_constant_teacher, sample_rational_target):
        with pytest.raises(DomainMismatchError):
            equivalence_query(sample_constant_teacher, sample_rational_target)


class TestTranscript:
    """Game records"""

    def test_constant_function_game(self, sample_constant_teacher):
        result = run_hkrs(sample_constant_teacher)
        assert result.succeeded
        transcript = result.transcript
        assert [type(e) for e in transcript.events] == [PairQueried, HypothesisIssued, Success]
        assert transcript.interactions == 3
        assert transcript.membership_queries == 127

    def test_jsonl(self, sample_constant_teacher):
        lines = run_hkrs(sample_constant_teacher).transcript.to_jsonl().splitlines()
        records = [json.loads(line) for line in lines]
        assert records[0] == {"event": "PairQueried", "interactions": 0, "Q": ["eps"], "T": ["eps"]}
        assert records[-1]["event"] == "Success"
        assert records[-1]["depth"] == 6

    def test_frame(self, sample_constant_teacher):
        frame = run_hkrs(sample_constant_teacher).transcript.to_frame()
        assert list(frame.columns) == ["step", "event", "interactions", "detail"]
        assert frame["event"].tolist() == ["PairQueried", "HypothesisIssued", "Success"]
        assert frame["detail"].iloc[-1] == "equal up to depth 6"

    def test_no_events_after_the_end(self):
        transcript = GameTranscript(RAT)
        transcript.record(BudgetExhausted("out of time"))
        with pytest.raises(InvariantViolation):
            transcript.record(BudgetExhausted("again"))

    def test_progress_callback(self, sample_constant_teacher):
        calls = []
        run_hkrs(sample_constant_teacher, 10, lambda done, total: calls.append((done, total)))
        assert calls == [(1, 10), (2, 10), (3, 10)]


class TestStrategies:
    """The three learners on reference targets"""

    def test_registry(self):
        assert STRATEGIES == {"hkrs": run_hkrs, "incremental": run_incremental, "enumeration": run_enumeration}

    def test_diagonal_order(self):
        assert list(islice(diagonal_pairs(), 6)) == [(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1)]

    def test_interaction_budget(self, sample_constant_teacher):
        result = run_hkrs(sample_constant_teacher, 1)
        assert result.outcome is LearnOutcome.BUDGET_EXHAUSTED
        assert result.automaton is None
        assert "interaction budget" in result.reason
        assert isinstance(result.transcript.events[-1], BudgetExhausted)

    def test_hkrs_learns_rational_targets(self):
        rng = generator(7)
        for _ in range(100):
            target = random_rational_automaton(rng, ALPHABET, 3)
            teacher = Teacher(MembershipOracle.from_wfa(target), FIELD)
            result = run_hkrs(teacher)
            assert result.succeeded
            assert result.automaton.size <= 3
            assert first_disagreement(ALPHABET, 10, result.automaton, target) is None

    @pytest.mark.parametrize("name", ["f3", "f3p", "f3pp", "f5"])
    def test_incremental_against_adversary(self, name):
        teacher = Teacher(get_fixture(name).oracle(), EquivalenceChecker(depth=6), TeacherMode.ADVERSARY)
        result = run_incremental(teacher, 500)
        assert result.succeeded
        assert result.transcript.interactions <= 500
        assert first_disagreement(ALPHABET, 6, result.automaton, teacher.oracle) is None

    def test_adversary_defeats_weakly_guessable_target(self):
        teacher = Teacher(get_fixture("f2").oracle(), EquivalenceChecker(depth=6), TeacherMode.ADVERSARY)
        result = run_incremental(teacher)
        assert result.outcome is LearnOutcome.BUDGET_EXHAUSTED
        assert result.reason == "words of length 5 exceed the length bound of 4"
        assert not result.transcript.of_kind(Success)

    def test_hkrs_diverges_on_f1p(self):
        teacher = Teacher(get_fixture("f1p").oracle())
        result = run_hkrs(teacher)
        assert result.outcome is LearnOutcome.BUDGET_EXHAUSTED
        assert result.reason == "words of length 5 exceed the length bound of 4"
        assert isinstance(result.transcript.events[-1], BudgetExhausted)

    @pytest.mark.parametrize("mode", list(TeacherMode))
    def test_hkrs_on_f1p_hits_the_solver_bound(self, mode):
        teacher = Teacher(get_fixture("f1p").oracle(), mode=mode)
        result = run_hkrs(teacher, Budget(500))
        assert result.outcome is LearnOutcome.BUDGET_EXHAUSTED
        assert result.reason.startswith("solver bound exceeded")
        assert result.transcript.interactions < 500

    def test_enumeration_with_ally(self):
        teacher = Teacher(get_fixture("f3").oracle())
        result = run_enumeration(teacher)
        assert result.succeeded
        last_pair = result.transcript.of_kind(PairQueried)[-1]
        assert last_pair.Q == ("", "a", "b")
        assert last_pair.T == ("",)
