# tests/test_fixtures.py
import pytest

from wal.errors import UnknownFixtureError
from wal.fixtures import ALIASES, EVERYWHERE, NOWHERE, ROWS_ONLY, fixture_names, fixtures, get_fixture, mirror_fixture
from wal.semiring import NAT, NAT_MAX, NEG_INF, Tag
from wal.words import reverse, words_up_to


@pytest.fixture
def sample_f3():
    """Get the f3 fixture"""
    return get_fixture("f3")


class TestRegistry:
    """Names, aliases and lookup"""

    def test_names(self):
        names = fixture_names()
        assert names[:4] == ["f1", "f1p", "f1pp", "f2"]
        assert "f3_mirror" in names
        assert "f1@INT_MAX" not in names
        assert "f1@INT_MAX" in fixture_names(include_variants=True)

    def test_aliases(self):
        for alias, name in ALIASES.items():
            assert get_fixture(alias).name == name

    def test_unknown_fixture(self):
        with pytest.raises(UnknownFixtureError):
            get_fixture("f9")

    def test_fixed_order(self):
        assert [fx.name for fx in fixtures()] == fixture_names()


class TestClosedForms:
    """Each automaton computes its closed form"""

    @pytest.mark.parametrize("name", fixture_names(include_variants=True))
    def test_automaton_matches_closed_form(self, name):
        fx = get_fixture(name)
        depth = 6 if fx.semiring.tag is Tag.FINLANG else 8
        for word in words_up_to(fx.alphabet, depth):
            assert fx.automaton(word) == fx(word), word

    def test_f3_values(self, sample_f3):
        assert sample_f3.semiring == NAT_MAX
        assert sample_f3("") is NEG_INF
        assert sample_f3("abaa") == 3
        assert sample_f3("bab") == 2

    def test_other_examples(self):
        assert get_fixture("f1")("aabaaab") == 3
        assert get_fixture("f1p")("aaaa") == 15
        assert get_fixture("f1p")("ab") == 0
        assert get_fixture("f1pp")("abb") == ("a", "bb")
        assert get_fixture("f3p")("bab") == 4
        assert get_fixture("f3pp")("aab") == ("aa",)
        assert get_fixture("f4")("abba") == 1
        assert get_fixture("f5")("aba") == 4
        assert get_fixture("f5")("baa") == 1
        assert get_fixture("f2")("") is NEG_INF


class TestExpectedClasses:
    """Class memberships and their duals"""

    def test_expectations(self):
        assert get_fixture("f1").expected == NOWHERE
        assert get_fixture("f4").expected == EVERYWHERE
        assert get_fixture("f3").expected == ROWS_ONLY
        f2 = get_fixture("f2").expected
        assert f2.weakly_guessable and not f2.guessable

    def test_mirror_swaps_sides(self):
        expected = get_fixture("f3_mirror").expected
        assert expected == ROWS_ONLY.dual()
        assert expected.coguessable and not expected.weakly_guessable

    def test_dual_is_an_involution(self):
        for fx in fixtures():
            assert fx.expected.dual().dual() == fx.expected

    def test_as_dict(self):
        assert EVERYWHERE.as_dict() == dict.fromkeys(EVERYWHERE.as_dict(), True)
        assert len(NOWHERE.as_dict()) == 6


class TestMirror:
    """Mirrored fixtures"""

    def test_mirror_reverses_words(self, sample_f3):
        mirrored = mirror_fixture(sample_f3)
        assert mirrored.name == "f3_mirror"
        assert mirrored.mirror_of == "f3"
        for word in words_up_to(sample_f3.alphabet, 6):
            assert mirrored(word) == sample_f3(reverse(word))
            assert mirrored.automaton(word) == mirrored(word)

    def test_oracle_uses_automaton(self, sample_f3):
        oracle = sample_f3.oracle()
        assert oracle.automaton is sample_f3.automaton
        assert oracle.name == "f3"

    def test_commutativity(self):
        assert get_fixture("f3").commutative
        assert not get_fixture("f3pp").commutative
        assert get_fixture("f3p").semiring == NAT
