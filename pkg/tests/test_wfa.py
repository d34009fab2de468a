# tests/test_wfa.py
from fractions import Fraction
from itertools import product

import pytest

from wal.errors import (
    AutomatonFormatError, DomainMismatchError, UnknownLetterError, UnknownStateError, ValueParseError,
)
from wal.fixtures import get_fixture
from wal.randomized import generator, random_automaton
from wal.semiring import BOOL, INT_MAX, NAT, NAT_MAX, NEG_INF, RAT, finlang, semiring
from wal.wfa import Wfa, first_disagreement
from wal.words import reverse, words_up_to

ALPHABET = ("a", "b")
FINLANG_AB = finlang(ALPHABET)

SMALL_POOLS = {
    BOOL: [True],
    NAT: [1, 2, 3],
    RAT: [Fraction(-1), Fraction(1, 2), Fraction(2)],
    NAT_MAX: [0, 1, 3],
    INT_MAX: [-2, 0, 1],
    FINLANG_AB: [("",), ("a",), ("b",), ("", "a")],
}


def brute_force(automaton, word):
    """Sum over all runs of the product of their weights"""
    d = automaton.descriptor
    total = d.zero
    for path in product(range(automaton.size), repeat=len(word) + 1):
        weight = automaton.initial[path[0]]
        for k, letter in enumerate(word):
            weight = d.times(weight, automaton.matrix(letter)[path[k]][path[k + 1]])
        total = d.plus(total, d.times(weight, automaton.final[path[-1]]))
    return total


@pytest.fixture
def sample_word_automaton():
    """Create the one-state FINLANG automaton computing w ↦ {w}"""
    d = semiring(FINLANG_AB)
    return Wfa.build(FINLANG_AB, ALPHABET, ["q"], {"q": d.one}, {"q": d.one},
                     [("q", "a", "q", d.of("a")), ("q", "b", "q", d.of("b"))])


@pytest.fixture
def sample_counter():
    """Create a two-state NAT automaton counting occurrences of a"""
    return Wfa.build(NAT, ALPHABET, ["p", "q"], {"p": 1}, {"q": 1},
                     [("p", "a", "p", 1), ("p", "b", "p", 1), ("p", "a", "q", 1),
                      ("q", "a", "q", 1), ("q", "b", "q", 1)])


class TestEvaluate:
    """Evaluation by vector-matrix products"""

    def test_fixture_examples(self):
        assert get_fixture("f1p").automaton("aaa") == 7
        assert get_fixture("f3").automaton("") is NEG_INF
        assert get_fixture("f1").automaton("baab") == 2

    def test_counter(self, sample_counter):
        assert sample_counter("") == 0
        assert sample_counter("abab") == 2
        assert sample_counter("aaa") == 3

    def test_unknown_letter(self, sample_counter):
        with pytest.raises(UnknownLetterError):
            sample_counter("abc")

    @pytest.mark.parametrize("sid", list(SMALL_POOLS), ids=str)
    def test_agrees_with_run_enumeration(self, sid):
        rng = generator(11)
        for _ in range(8):
            automaton = random_automaton(sid, ALPHABET, rng, 3, SMALL_POOLS[sid])
            for word in words_up_to(ALPHABET, 4):
                assert automaton(word) == brute_force(automaton, word)

    @pytest.mark.parametrize("sid", [NAT, RAT, NAT_MAX], ids=str)
    def test_factorizes_at_every_cut(self, sid):
        rng = generator(5)
        automaton = random_automaton(sid, ALPHABET, rng, 3, SMALL_POOLS[sid])
        d = automaton.descriptor
        for word in words_up_to(ALPHABET, 6):
            for cut in range(len(word) + 1):
                u, v = word[:cut], word[cut:]
                assert d.dot(automaton.forward(u), automaton.backward(v)) == automaton(word)


class TestStateFunctions:
    """Residual functions of single states"""

    def test_row_functions_sum_to_evaluation(self, sample_counter):
        d = sample_counter.descriptor
        for word in words_up_to(ALPHABET, 4):
            total = d.sum(d.times(alpha, sample_counter.state_row_function(q, word))
                          for q, alpha in zip(sample_counter.states, sample_counter.initial))
            assert total == sample_counter(word)

    def test_column_functions_sum_to_evaluation(self, sample_counter):
        d = sample_counter.descriptor
        for word in words_up_to(ALPHABET, 4):
            total = d.sum(d.times(sample_counter.state_column_function(q, word), eta)
                          for q, eta in zip(sample_counter.states, sample_counter.final))
            assert total == sample_counter(word)

    def test_final_state_on_epsilon(self, sample_counter):
        assert sample_counter.state_row_function("q", "") == 1
        assert sample_counter.state_column_function("p", "") == 1

    def test_f3_counting_state(self):
        automaton = get_fixture("f3").automaton
        assert automaton.state_row_function("qa", "aa") == 2
        assert automaton.state_row_function("qa", "bb") == 0

    def test_unknown_state(self, sample_counter):
        with pytest.raises(UnknownStateError):
            sample_counter.state_row_function("r", "a")


class TestMirror:
    """Transposition and the reversal of words"""

    def test_involution(self, sample_counter):
        twice = sample_counter.mirror().mirror()
        assert first_disagreement(ALPHABET, 6, twice, sample_counter) is None

    @pytest.mark.parametrize("name", ["f1", "f1p", "f2", "f3", "f3p", "f4", "f5"])
    def test_commutative_fixtures(self, name):
        automaton = get_fixture(name).automaton
        mirrored = automaton.mirror()
        for word in words_up_to(ALPHABET, 8):
            assert mirrored(word) == automaton(reverse(word))

    def test_f3_example(self):
        automaton = get_fixture("f3").automaton
        assert automaton.mirror()("abb") == automaton("bba") == 2

    def test_noncommutative_caveat(self, sample_word_automaton):
        """The mirrored automaton does not compute the mirrored function over FINLANG"""
        assert sample_word_automaton("ab") == ("ab",)
        assert sample_word_automaton.mirror()("ab") == ("ab",)
        assert sample_word_automaton.mirror()("ab") != (reverse("ab"),)


class TestLiteral:
    """Literal labelings"""

    def test_one_state_automaton(self):
        automaton = Wfa.build(NAT, ALPHABET, ["q"], {"q": 1}, {"q": 1}, [("q", "a", "q", 1), ("q", "b", "q", 1)])
        certificate = automaton.is_literal()
        assert certificate is not None
        assert dict(certificate.sigma) == {"q": ""}
        assert certificate.runs["q"] == ("q",)

    def test_two_initial_states(self):
        automaton = Wfa.build(NAT, ALPHABET, ["p", "q"], {"p": 1, "q": 1}, {"q": 1}, [])
        assert automaton.is_literal() is None

    def test_initial_weight_must_be_one(self):
        automaton = Wfa.build(NAT, ALPHABET, ["q"], {"q": 2}, {"q": 1}, [])
        assert automaton.is_literal() is None

    def test_tree_labeling(self):
        automaton = Wfa.build(NAT, ALPHABET, ["r", "x", "y"], {"r": 1}, {"x": 3},
                              [("r", "a", "x", 1), ("r", "b", "y", 1), ("x", "a", "x", 2)])
        certificate = automaton.is_literal()
        assert dict(certificate.sigma) == {"r": "", "x": "a", "y": "b"}
        assert certificate.words() == {"", "a", "b"}
        assert certificate.runs["x"] == ("r", "x")


class TestCodec:
    """The automaton file format"""

    def test_round_trip(self, tmp_path):
        automaton = get_fixture("f3").automaton
        path = tmp_path / "f3.json"
        automaton.dump(path)
        loaded = Wfa.load(path)
        assert loaded.states == automaton.states
        assert first_disagreement(ALPHABET, 6, loaded, automaton) is None

    def test_zero_entries_are_omitted(self):
        data = get_fixture("f3").automaton.to_json()
        assert data["semiring"] == "NAT_MAX"
        assert data["initial"] == {"q0": "0"}
        assert "q0" not in data["final"]
        assert {"from": "q0", "letter": "a", "to": "qa", "weight": "1"} in data["transitions"]

    def test_finlang_codec(self, sample_word_automaton):
        data = sample_word_automaton.to_json()
        assert data["semiring"] == "FINLANG"
        loaded = Wfa.from_json(data)
        assert loaded("ba") == ("ba",)

    def test_missing_field(self):
        with pytest.raises(AutomatonFormatError):
            Wfa.from_json({"semiring": "NAT", "alphabet": ["a"]})

    def test_bad_weight(self):
        data = {"semiring": "NAT", "alphabet": ["a"], "states": ["q"], "initial": {"q": "-1"}}
        with pytest.raises(ValueParseError) as info:
            Wfa.from_json(data)
        assert info.value.text == "-1"

    def test_unknown_state_in_transition(self):
        data = {"semiring": "NAT", "alphabet": ["a"], "states": ["q"],
                "transitions": [{"from": "q", "letter": "a", "to": "r", "weight": "1"}]}
        with pytest.raises(UnknownStateError):
            Wfa.from_json(data)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            Wfa.load(tmp_path / "absent.json")

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(AutomatonFormatError):
            Wfa.load(path)

    def test_weight_outside_domain(self):
        with pytest.raises(DomainMismatchError):
            Wfa.build(NAT, ALPHABET, ["q"], {"q": -1}, {}, [])
