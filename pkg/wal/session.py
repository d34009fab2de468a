import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import pandas as pd

from .errors import DomainMismatchError
from .learner import (
    STRATEGIES, Budget, EquivalenceChecker, EquivalenceKind, LearnResult, Teacher, TeacherMode,
)
from .linear_solve import DEFAULT_LIMITS, SolverLimits
from .sources import AutomatonFileSource, FixtureSource, TargetSource
from .wfa import first_disagreement

logger = logging.getLogger(__name__)


@dataclass
class SessionConfig:
    """Configuration for a learning session"""
    strategy: str = "hkrs"
    teacher: TeacherMode = TeacherMode.ALLY
    equivalence: EquivalenceKind = EquivalenceKind.BOUNDED
    equivalence_depth: int = 6
    probe_depth: int = 4
    budget: int = 500
    max_length: Optional[int] = None
    validation_depth: int = 8
    limits: SolverLimits = DEFAULT_LIMITS
    progress_callback: Optional[Callable[[int, Optional[int]], None]] = None

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise DomainMismatchError(f"Unknown strategy {self.strategy!r}; choose one of {sorted(STRATEGIES)}")
        if self.budget < 1:
            raise DomainMismatchError(f"Budget must be positive, got {self.budget}")


@dataclass
class LearningSession:
    """Plays the configured strategy against the target of a source"""

    config: SessionConfig = field(default_factory=SessionConfig)
    checker: EquivalenceChecker = field(init=False)
    result: Optional[LearnResult] = field(init=False, default=None)
    target_name: Optional[str] = field(init=False, default=None)

    def __post_init__(self):
        self.checker = EquivalenceChecker(self.config.equivalence, self.config.equivalence_depth)

    def run(self, source: TargetSource) -> LearnResult:
        """
        Run one game against an initialized source

        Args:
            source: Source of the target function

        Returns:
            The learning result, successful or with BUDGET_EXHAUSTED
        """
        oracle = source.oracle()
        teacher = Teacher(oracle, self.checker, self.config.teacher, self.config.probe_depth, self.config.limits)
        budget = Budget.for_checker(self.checker, self.config.budget, self.config.max_length)
        self.target_name = source.name
        logger.info("Learning %s with %s against an %s teacher", source.name, self.config.strategy,
                    self.config.teacher.value)
        strategy = STRATEGIES[self.config.strategy]
        self.result = strategy(teacher, budget, self.config.progress_callback)
        return self.result

    def validated(self, source: TargetSource) -> Optional[str]:
        """Shortlex-first word up to the validation depth where the learned automaton errs, or None"""
        if self.result is None or self.result.automaton is None:
            raise RuntimeError("No learned automaton. Call run() first.")
        oracle = source.oracle()
        return first_disagreement(oracle.alphabet, self.config.validation_depth, self.result.automaton, oracle)

    def transcript_frame(self) -> pd.DataFrame:
        """
        Get the transcript of the last run

        Returns:
            DataFrame with columns: step, event, interactions, detail
        """
        if self.result is None:
            return pd.DataFrame()
        return self.result.transcript.to_frame()

    def summary(self) -> pd.DataFrame:
        """One-row summary of the last run"""
        if self.result is None:
            return pd.DataFrame()
        transcript = self.result.transcript
        return pd.DataFrame([{
            "target": self.target_name,
            "strategy": self.config.strategy,
            "teacher": self.config.teacher.value,
            "outcome": self.result.outcome.value,
            "states": self.result.automaton.size if self.result.automaton is not None else None,
            "interactions": transcript.interactions,
            "membership_queries": transcript.membership_queries,
            "reason": self.result.reason or "",
        }])


def learn_file(file_path: Path, config: Optional[SessionConfig] = None) -> LearnResult:
    """Convenience function to learn the target stored in an automaton file"""
    session = LearningSession(config or SessionConfig())
    with AutomatonFileSource(file_path) as source:
        source.initialize()
        return session.run(source)


def learn_fixture(name: str, config: Optional[SessionConfig] = None) -> LearnResult:
    """Convenience function to learn a registered fixture"""
    session = LearningSession(config or SessionConfig())
    with FixtureSource(name) as source:
        source.initialize()
        return session.run(source)
