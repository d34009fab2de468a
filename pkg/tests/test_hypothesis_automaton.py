# tests/test_hypothesis_automaton.py
import pytest

from wal.errors import LiteralizationError, WalError
from wal.fixtures import get_fixture
from wal.hankel import MembershipOracle
from wal.hypothesis_automaton import (
    EPSILON_TARGET, SolutionLambda, Target, block_targets, build_cohypothesis, build_hypothesis, literalize,
    solve_gamma, solve_lambda, state_hankel_automaton,
)
from wal.randomized import generator, random_automaton, random_rational_automaton
from wal.semiring import NAT_MAX, NEG_INF
from wal.wfa import first_disagreement
from wal.words import words_up_to

ALPHABET = ("a", "b")
N = NEG_INF


@pytest.fixture
def sample_f3_oracle():
    """Create a membership oracle for f3"""
    return get_fixture("f3").oracle()


@pytest.fixture
def sample_running_lambda():
    """Create the two-row solution for f3 on T = {ε} that sends both letters from ε to a"""
    return SolutionLambda(NAT_MAX, ALPHABET, ("", "a"), ("",), (0, N), {
        "a": ((N, 0), (N, 1)),
        "b": ((N, 0), (N, 0)),
    })


@pytest.fixture
def sample_first_letter_lambda():
    """Create the three-row solution for f3 on T = {ε} that remembers the first letter"""
    return SolutionLambda(NAT_MAX, ALPHABET, ("", "a", "b"), ("",), (0, N, N), {
        "a": ((N, 0, N), (N, 1, N), (N, N, 0)),
        "b": ((N, N, 0), (N, 0, N), (N, N, 1)),
    })


class TestTargets:
    """Equation order within a block"""

    def test_order(self):
        targets = block_targets(["a", ""], ALPHABET)
        assert [str(t) for t in targets] == ["eps", "(eps,a)", "(eps,b)", "(a,a)", "(a,b)"]
        assert targets[0] is EPSILON_TARGET

    def test_epsilon(self):
        assert EPSILON_TARGET.is_epsilon
        assert not Target("a", "b").is_epsilon


class TestSolveLambda:
    """Closedness systems of row blocks"""

    def test_running_example_is_solved(self, sample_f3_oracle):
        outcome = solve_lambda(sample_f3_oracle, ["", "a"], [""])
        assert outcome.solved
        assert outcome.solution.satisfies(outcome.block)

    def test_principal_initial_vector(self, sample_f3_oracle):
        """With T = {ε} both rows may be weighted -inf in the initial vector"""
        solution = solve_lambda(sample_f3_oracle, ["", "a"], [""]).solution
        assert solution.initial == (N, N)
        assert solution.coefficient("a", "a", "a") == 1

    def test_constant_function(self):
        oracle = get_fixture("f4").oracle()
        outcome = solve_lambda(oracle, [""], [""])
        automaton = build_hypothesis(oracle, outcome.solution)
        assert first_disagreement(ALPHABET, 8, automaton, oracle) is None

    def test_failing_target(self):
        oracle = get_fixture("f1p").oracle()
        outcome = solve_lambda(oracle, [""], [""])
        assert not outcome.solved
        assert outcome.failing == Target("", "a")


class TestSolveGamma:
    """Closedness systems of column blocks"""

    def test_constant_function(self):
        oracle = get_fixture("f4").oracle()
        outcome = solve_gamma(oracle, [""], [""])
        assert outcome.solved
        automaton = build_cohypothesis(oracle, outcome.solution)
        assert first_disagreement(ALPHABET, 8, automaton, oracle) is None

    def test_mirror_columns(self):
        oracle = get_fixture("f3_mirror").oracle()
        outcome = solve_gamma(oracle, [""], ["", "a", "b"])
        assert outcome.solved
        assert outcome.solution.satisfies(outcome.block)
        assert outcome.solution.final == (N, N, N)


class TestHypothesis:
    """Automata read off a solution"""

    def test_running_example_first_error(self, sample_f3_oracle, sample_running_lambda):
        assert sample_running_lambda.satisfies(sample_f3_oracle.assemble(["", "a"], [""]))
        automaton = build_hypothesis(sample_f3_oracle, sample_running_lambda)
        assert automaton("aa") == 2
        assert automaton("ba") == 2
        assert first_disagreement(ALPHABET, 8, automaton, sample_f3_oracle) == "ba"

    def test_running_example_closed_form(self, sample_f3_oracle, sample_running_lambda):
        automaton = build_hypothesis(sample_f3_oracle, sample_running_lambda)
        for word in words_up_to(ALPHABET, 6):
            if not word:
                assert automaton(word) is N
            elif word[0] == "a":
                assert automaton(word) == word.count("a")
            else:
                assert automaton(word) == word.count("a") + 1

    def test_principal_hypothesis_first_error(self, sample_f3_oracle):
        solution = solve_lambda(sample_f3_oracle, ["", "a"], [""]).solution
        automaton = build_hypothesis(sample_f3_oracle, solution)
        assert first_disagreement(ALPHABET, 8, automaton, sample_f3_oracle) == "a"

    def test_first_letter_rows(self, sample_f3_oracle, sample_first_letter_lambda):
        assert sample_first_letter_lambda.satisfies(sample_f3_oracle.assemble(["", "a", "b"], [""]))
        automaton = build_hypothesis(sample_f3_oracle, sample_first_letter_lambda)
        assert automaton.states == ("ε", "a", "b")
        assert first_disagreement(ALPHABET, 8, automaton, sample_f3_oracle) is None

    def test_epsilon_state_differs_from_the_word_eps(self):
        oracle = MembershipOracle(NAT_MAX, ("e", "p", "s"), len)
        stay = ((0, N), (N, 0))
        solution = SolutionLambda(NAT_MAX, oracle.alphabet, ("", "eps"), ("",), (0, N), dict.fromkeys(oracle.alphabet, stay))
        automaton = build_hypothesis(oracle, solution)
        assert automaton.states == ("ε", "eps")
        assert list(automaton.final) == [0, 3]


class TestSolutionLambda:
    """Re-verification and derived solutions"""

    def test_satisfies_needs_same_rows(self, sample_f3_oracle, sample_running_lambda):
        assert not sample_running_lambda.satisfies(sample_f3_oracle.assemble(["", "b"], [""]))

    def test_satisfies_rejects_wrong_coefficients(self, sample_f3_oracle, sample_running_lambda):
        broken = sample_running_lambda.replace_target(Target("a", "a"), (N, 0))
        assert not broken.satisfies(sample_f3_oracle.assemble(["", "a"], [""]))

    def test_replace_target(self, sample_running_lambda):
        replaced = sample_running_lambda.replace_target(EPSILON_TARGET, (N, N))
        assert replaced.initial == (N, N)
        assert replaced.transitions == sample_running_lambda.transitions
        row = sample_running_lambda.replace_target(Target("", "b"), (N, 1))
        assert row.coefficients_for(Target("", "b")) == (N, 1)
        assert row.coefficients_for(Target("a", "b")) == (N, 0)

    def test_restrict(self):
        oracle = get_fixture("f4").oracle()
        solution = solve_lambda(oracle, [""], ["", "a"]).solution
        restricted = solution.restrict([""])
        assert restricted.T == ("",)
        assert restricted.satisfies(oracle.assemble([""], [""]))
        with pytest.raises(WalError):
            solution.restrict(["b"])

    def test_to_json(self, sample_running_lambda):
        data = sample_running_lambda.to_json()
        assert data["Q"] == ["eps", "a"]
        assert data["initial"] == {"eps": "0", "a": "-inf"}
        assert {"from": "a", "letter": "a", "to": "a", "weight": "1"} in data["transitions"]
        assert len(data["transitions"]) == 4


class TestLiteralize:
    """Literal automata over the prefix closure"""

    def test_first_letter_rows(self, sample_f3_oracle, sample_first_letter_lambda):
        result = literalize(sample_f3_oracle, sample_first_letter_lambda)
        assert result.Q == ("", "a", "b")
        assert dict(result.certificate.sigma) == {"ε": "", "a": "a", "b": "b"}
        assert first_disagreement(ALPHABET, 8, result.automaton, sample_f3_oracle) is None

    @pytest.mark.parametrize("name", ["f3", "f3p"])
    def test_solved_first_letter_rows(self, name):
        oracle = get_fixture(name).oracle()
        outcome = solve_lambda(oracle, ["", "a", "b"], words_up_to(ALPHABET, 3))
        assert outcome.solved
        result = literalize(oracle, outcome.solution)
        assert result.automaton.is_literal() is not None
        assert first_disagreement(ALPHABET, 8, result.automaton, oracle) is None

    def test_constant_function(self):
        oracle = get_fixture("f4").oracle()
        solution = solve_lambda(oracle, [""], [""]).solution
        result = literalize(oracle, solution)
        assert result.automaton.size == 1
        assert result.automaton.is_literal() is not None

    def test_rejects_solution_outside_lambda_q(self, sample_f3_oracle, sample_running_lambda):
        with pytest.raises(LiteralizationError):
            literalize(sample_f3_oracle, sample_running_lambda)


class TestStateHankel:
    """Hypotheses over the state rows of a known automaton"""

    def test_rational_automata(self):
        rng = generator(17)
        T = words_up_to(ALPHABET, 8)
        for _ in range(50):
            automaton = random_rational_automaton(rng, ALPHABET, 3)
            rebuilt = state_hankel_automaton(automaton, T)
            assert first_disagreement(ALPHABET, 8, rebuilt, automaton) is None

    def test_max_plus_automata(self):
        rng = generator(23)
        T = words_up_to(ALPHABET, 8)
        for _ in range(20):
            automaton = random_automaton(NAT_MAX, ALPHABET, rng, 3, [N, 0, 1, 2])
            rebuilt = state_hankel_automaton(automaton, T)
            assert first_disagreement(ALPHABET, 8, rebuilt, automaton) is None
