# tests/test_sources.py
import pytest

from wal.errors import UnknownFixtureError
from wal.fixtures import get_fixture
from wal.sources import AutomatonFileSource, FixtureSource


@pytest.fixture
def sample_automaton_file(tmp_path):
    """Write the f3 automaton to a temporary file"""
    path = tmp_path / "first_letter.json"
    get_fixture("f3").automaton.dump(path)
    return path


class TestAutomatonFileSource:
    """Targets read from automaton files"""

    def test_oracle(self, sample_automaton_file):
        with AutomatonFileSource(sample_automaton_file) as source:
            source.initialize()
            oracle = source.oracle()
            assert oracle("aab") == 2
            assert oracle.name == "first_letter"

    def test_requires_initialize(self, sample_automaton_file):
        source = AutomatonFileSource(sample_automaton_file)
        with pytest.raises(RuntimeError):
            source.oracle()

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            AutomatonFileSource(tmp_path / "absent.json").initialize()

    def test_close_releases_automaton(self, sample_automaton_file):
        with AutomatonFileSource(sample_automaton_file) as source:
            source.initialize()
        assert source.automaton is None


class TestFixtureSource:
    """Targets from the fixture registry"""

    def test_alias(self):
        with FixtureSource("f'3") as source:
            assert source.name == "f'3"
            source.initialize()
            assert source.name == "f3p"
            assert source.oracle()("bb") == 4

    def test_unknown(self):
        with pytest.raises(UnknownFixtureError):
            FixtureSource("nope").initialize()

    def test_requires_initialize(self):
        with pytest.raises(RuntimeError):
            FixtureSource("f4").oracle()
