import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .fixtures import Fixture, get_fixture
from .hankel import MembershipOracle
from .wfa import Wfa

logger = logging.getLogger(__name__)


class TargetSource(ABC):
    """Abstract base class for the target functions a learning session plays against"""

    @abstractmethod
    def initialize(self, **kwargs) -> None:
        """Load the target"""
        pass

    @abstractmethod
    def oracle(self) -> MembershipOracle:
        """Return a fresh membership oracle for the target"""
        pass

    @property
    @abstractmethod
    def name(self) -> str:
        pass

    def close(self) -> None:
        """Release the loaded target"""
        pass

    def __enter__(self):
        """Context manager support"""
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        """Context manager cleanup"""
        self.close()


@dataclass
class AutomatonFileSource(TargetSource):
    """A target read from an automaton JSON file"""

    file_path: Path
    automaton: Optional[Wfa] = field(init=False, default=None)

    def __post_init__(self):
        self.file_path = Path(self.file_path)

    @property
    def name(self) -> str:
        return self.file_path.stem

    def initialize(self, **kwargs) -> None:
        logger.debug("Loading target automaton from %s", self.file_path)
        if not self.file_path.exists():
            raise FileNotFoundError(f"Automaton file not found: {self.file_path}")
        self.automaton = Wfa.load(self.file_path)

    def oracle(self) -> MembershipOracle:
        if self.automaton is None:
            raise RuntimeError("Source not initialized. Call initialize() first.")
        return MembershipOracle.from_wfa(self.automaton, self.name)

    def close(self) -> None:
        self.automaton = None


@dataclass
class FixtureSource(TargetSource):
    """A registered fixture, looked up by name or alias"""

    fixture_name: str
    fixture: Optional[Fixture] = field(init=False, default=None)

    @property
    def name(self) -> str:
        return self.fixture.name if self.fixture is not None else self.fixture_name

    def initialize(self, **kwargs) -> None:
        self.fixture = get_fixture(self.fixture_name)

    def oracle(self) -> MembershipOracle:
        if self.fixture is None:
            raise RuntimeError("Source not initialized. Call initialize() first.")
        return self.fixture.oracle()

    def close(self) -> None:
        self.fixture = None
