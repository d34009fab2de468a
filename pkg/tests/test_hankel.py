# tests/test_hankel.py
import threading

import pytest

from wal.errors import DomainMismatchError, UnknownLetterError, WalError
from wal.fixtures import get_fixture
from wal.hankel import MembershipOracle
from wal.randomized import generator, random_automaton
from wal.semiring import NAT, NEG_INF
from wal.words import words_up_to

ALPHABET = ("a", "b")


@pytest.fixture
def sample_f3_oracle():
    """Create a membership oracle for f3"""
    return get_fixture("f3").oracle()


@pytest.fixture
def sample_closed_form_oracle():
    """Create an oracle answering f3 from its closed form"""
    fx = get_fixture("f3")
    return MembershipOracle(fx.semiring, fx.alphabet, fx.closed_form, "f3-formula")


class TestEntries:
    """Membership values and Hankel structure"""

    def test_f3_entries(self, sample_f3_oracle):
        assert sample_f3_oracle.entry("", "") is NEG_INF
        assert sample_f3_oracle.entry("a", "b") == 1

    def test_hankel_consistency(self, sample_f3_oracle):
        for word in words_up_to(ALPHABET, 6):
            values = {sample_f3_oracle.entry(word[:i], word[i:]) for i in range(len(word) + 1)}
            assert len(values) == 1

    def test_unknown_letter(self, sample_f3_oracle):
        with pytest.raises(UnknownLetterError):
            sample_f3_oracle.entry("a", "c")

    def test_epsilon_state_is_not_a_letter(self):
        with pytest.raises(DomainMismatchError):
            MembershipOracle(NAT, ("a", "ε"), len)

    def test_closed_form_matches_automaton(self, sample_f3_oracle, sample_closed_form_oracle):
        for word in words_up_to(ALPHABET, 8):
            assert sample_f3_oracle(word) == sample_closed_form_oracle(word)

    def test_caching(self, sample_f3_oracle):
        sample_f3_oracle.entry("a", "b")
        sample_f3_oracle.entry("ab", "")
        sample_f3_oracle.entry("", "ab")
        assert sample_f3_oracle.query_count == 1
        assert sample_f3_oracle.request_count == 3

    def test_concurrent_queries(self, sample_f3_oracle):
        words = words_up_to(ALPHABET, 5)
        results = {}

        def worker(k):
            results[k] = [sample_f3_oracle(w) for w in words]

        threads = [threading.Thread(target=worker, args=(k,)) for k in range(4)]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()
        assert all(results[k] == results[0] for k in range(4))
        assert sample_f3_oracle.query_count == len(words)


class TestRowsAndColumns:
    """Finite restrictions of rows and columns"""

    def test_rows(self, sample_f3_oracle):
        assert sample_f3_oracle.row("a", [""]) == (1,)
        assert sample_f3_oracle.row("aa", [""]) == (2,)

    def test_column(self, sample_f3_oracle):
        assert sample_f3_oracle.column("aaa", ["a", "b"]) == (4, 1)

    def test_shift(self, sample_f3_oracle):
        assert sample_f3_oracle.shift_row("a", "a", [""]) == (2,)
        assert sample_f3_oracle.shift_row("ab", "", ["", "a"]) == sample_f3_oracle.row("ab", ["", "a"])

    def test_shift_is_concatenation(self):
        rng = generator(3)
        T = words_up_to(ALPHABET, 2)
        for _ in range(5):
            oracle = MembershipOracle.from_wfa(random_automaton(NAT, ALPHABET, rng, 3, [1, 2]))
            for v in words_up_to(ALPHABET, 2):
                for u in words_up_to(ALPHABET, 2):
                    assert oracle.shift_row(v, u, T) == oracle.row(v + u, T)


class TestAssemble:
    """Blocks for the closedness systems"""

    def test_running_example(self, sample_f3_oracle):
        block = sample_f3_oracle.assemble(["", "a"], [""])
        assert block.base == ((NEG_INF,), (1,))
        assert block.extensions["a"] == ((1,), (2,))
        assert block.extensions["b"] == ((1,), (1,))
        assert block.finals == (NEG_INF, 1)
        assert block.eps_row == (NEG_INF,)

    def test_request_count(self, sample_f3_oracle):
        sample_f3_oracle.assemble(["", "a"], [""])
        assert sample_f3_oracle.request_count == 2 * 1 + 2 * 2 * 1 + 1 + 2
        assert sample_f3_oracle.query_count == 5

    def test_constant_function(self):
        oracle = get_fixture("f4").oracle()
        block = oracle.assemble(["", "a", "ab"], ["", "b"])
        assert all(x == 1 for row in block.base for x in row)
        assert all(x == 1 for a in ALPHABET for row in block.extensions[a] for x in row)

    def test_f1p_base(self):
        block = get_fixture("f1p").oracle().assemble(["", "a"], ["", "a"])
        assert block.base == ((0, 1), (1, 3))

    def test_rejects_empty_and_duplicates(self, sample_f3_oracle):
        with pytest.raises(WalError):
            sample_f3_oracle.assemble([], [""])
        with pytest.raises(WalError):
            sample_f3_oracle.assemble(["a", "a"], [""])

    def test_frame(self, sample_f3_oracle):
        frame = sample_f3_oracle.assemble(["", "a"], ["", "b"]).to_frame()
        assert frame.shape == (6, 2)
        assert list(frame.columns) == ["eps", "b"]
        assert frame.loc[("Q", "eps"), "eps"] == "-inf"
        assert frame.loc[("QΣ", "ab"), "b"] == "1"

    def test_records(self, sample_f3_oracle):
        records = sample_f3_oracle.assemble(["", "a"], [""]).to_records()
        assert list(records.columns) == ["row", "column", "value"]
        # the row a appears both in Q and as eps·a
        assert len(records) == 5
