"""
wal - Weighted Automata Learning

Active learning of weighted finite automata over pluggable semirings:
finite Hankel blocks, closedness solvers per semiring, hypothesis
automata, learner/teacher games and class evidence for reference
functions.
"""

__version__ = "0.9"
__author__ = "Dr. Jeffrey Craighead"

# Export main classes for easier imports
from .semiring import SemiringId, semiring, NEG_INF
from .wfa import Wfa
from .hankel import MembershipOracle, SubHankel
from .linear_solve import LinearSystem, SolveStatus, solve_left, solve_right
from .hypothesis_automaton import build_hypothesis, build_cohypothesis, solve_lambda, solve_gamma, literalize
from .learner import Teacher, EquivalenceChecker, Budget, run_hkrs, run_incremental, run_enumeration
from .fixtures import get_fixture
from .session import LearningSession, SessionConfig

__all__ = [
    'SemiringId',
    'semiring',
    'NEG_INF',
    'Wfa',
    'MembershipOracle',
    'SubHankel',
    'LinearSystem',
    'SolveStatus',
    'solve_left',
    'solve_right',
    'build_hypothesis',
    'build_cohypothesis',
    'solve_lambda',
    'solve_gamma',
    'literalize',
    'Teacher',
    'EquivalenceChecker',
    'Budget',
    'run_hkrs',
    'run_incremental',
    'run_enumeration',
    'get_fixture',
    'LearningSession',
    'SessionConfig',
]
