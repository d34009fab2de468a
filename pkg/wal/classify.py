"""
Bounded-scale evidence about the guessability classes of fixtures.

Positive evidence is a finite row (column) set whose block is closed and
whose hypothesis validates; negative evidence is one of the documented
finite systems that has no solution. Neither decides the classes, which
quantify over all finite sets.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Optional, Sequence

import pandas as pd

from .fixtures import Fixture, get_fixture, mirror_fixture
from .hankel import MembershipOracle
from .hypothesis_automaton import build_cohypothesis, build_hypothesis, solve_gamma, solve_lambda
from .learner import Budget, EquivalenceChecker, Teacher, TeacherMode, run_incremental
from .linear_solve import DEFAULT_LIMITS, LinearSystem, SolverLimits, SolveStatus, solve_left, solve_right
from .wfa import first_disagreement
from .words import render_word, reverse, sort_shortlex, words_up_to

logger = logging.getLogger(__name__)

CAVEAT = ("Bounded-scale evidence only: verdicts come from finite Hankel blocks; "
          "a missing witness does not decide a class")

NO_WITNESS = "NO_WITNESS_AT_SCALE"


class ProbeKind(Enum):
    ROW_WITNESS = "row-witness"
    COLUMN_WITNESS = "column-witness"
    ROW_OBSTRUCTION = "row-obstruction"
    COLUMN_OBSTRUCTION = "column-obstruction"
    MIRROR_COHERENCE = "mirror-coherence"
    ADVERSARY_DIVERGENCE = "adversary-divergence"


@dataclass(frozen=True)
class Finding:
    kind: ProbeKind
    parameters: dict
    verdict: str
    system: Optional[dict] = None

    @property
    def fired(self) -> bool:
        """The finding is the evidence its kind looks for"""
        if self.kind in (ProbeKind.ROW_WITNESS, ProbeKind.COLUMN_WITNESS):
            return self.verdict == SolveStatus.SOLVED.value
        if self.kind in (ProbeKind.ROW_OBSTRUCTION, ProbeKind.COLUMN_OBSTRUCTION):
            return self.verdict == SolveStatus.NO_SOLUTION.value
        if self.kind is ProbeKind.MIRROR_COHERENCE:
            return self.verdict == "COHERENT"
        return self.verdict == "BUDGET_EXHAUSTED"


@dataclass
class ProbeReport:
    fixture: str
    kind: ProbeKind
    parameters: dict
    findings: list[Finding] = field(default_factory=list)
    capped: bool = False
    caveat: str = CAVEAT

    @property
    def fired(self) -> bool:
        return any(finding.fired for finding in self.findings)

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {
                "fixture": self.fixture,
                "kind": finding.kind.value,
                "parameters": ", ".join(f"{k}={v}" for k, v in finding.parameters.items()),
                "verdict": finding.verdict,
            }
            for finding in self.findings
        ]
        return pd.DataFrame(rows, columns=["fixture", "kind", "parameters", "verdict"])

    def to_json(self) -> dict:
        return {
            "fixture": self.fixture,
            "kind": self.kind.value,
            "parameters": self.parameters,
            "capped": self.capped,
            "caveat": self.caveat,
            "findings": [
                {"kind": f.kind.value, "parameters": f.parameters, "verdict": f.verdict, "system": f.system}
                for f in self.findings
            ],
        }


def _words(words: Sequence[str]) -> str:
    return ",".join(render_word(w) for w in words)


def _probe(fx: Fixture, maxQ: int, maxT: int, dual: bool, cap: int, validation_depth: Optional[int],
           limits: SolverLimits) -> ProbeReport:
    oracle = fx.oracle()
    alphabet = fx.alphabet
    # the searched side ranges over subsets, the other side is fixed
    searched = words_up_to(alphabet, maxT if dual else maxQ)
    fixed = words_up_to(alphabet, maxQ if dual else maxT)
    depth = validation_depth if validation_depth is not None else len(fixed[-1]) + 1
    kind = ProbeKind.COLUMN_WITNESS if dual else ProbeKind.ROW_WITNESS
    report = ProbeReport(fx.name, kind, {"max_q": maxQ, "max_t": maxT, "validation_depth": depth})

    tried = 0
    for size in range(1, len(searched) + 1):
        for subset in combinations(searched, size):
            if tried >= cap:
                report.capped = True
                report.findings.append(Finding(kind, {"tried": tried}, NO_WITNESS))
                return report
            tried += 1
            if dual:
                outcome = solve_gamma(oracle, fixed, subset, limits)
            else:
                outcome = solve_lambda(oracle, subset, fixed, limits)
            if not outcome.solved:
                continue
            automaton = (build_cohypothesis if dual else build_hypothesis)(oracle, outcome.solution)
            word = first_disagreement(alphabet, depth, automaton, oracle)
            if word is None:
                report.findings.append(Finding(kind, {"T" if dual else "Q": _words(subset), "tried": tried},
                                               SolveStatus.SOLVED.value))
                logger.debug("%s: witness %s after %d subsets", fx.name, _words(subset), tried)
                return report
            logger.debug("%s: %s closed but hypothesis errs on %r", fx.name, _words(subset), render_word(word))
    report.findings.append(Finding(kind, {"tried": tried}, NO_WITNESS))
    return report


def probe_weak_guessability(fx: Fixture, maxQ: int, maxT: int, cap: int = 512,
                            validation_depth: Optional[int] = None,
                            limits: SolverLimits = DEFAULT_LIMITS) -> ProbeReport:
    """
    Search row sets Q ⊆ words ≤ maxQ by increasing size for one whose block
    against T = words ≤ maxT is closed and whose hypothesis agrees with the
    target on all words up to validation_depth (default maxT + 1).
    """
    return _probe(fx, maxQ, maxT, False, cap, validation_depth, limits)


def probe_weak_coguessability(fx: Fixture, maxQ: int, maxT: int, cap: int = 512,
                              validation_depth: Optional[int] = None,
                              limits: SolverLimits = DEFAULT_LIMITS) -> ProbeReport:
    """The dual search over column sets T ⊆ words ≤ maxT against Q = words ≤ maxQ"""
    return _probe(fx, maxQ, maxT, True, cap, validation_depth, limits)


def _verdict(kind: ProbeKind, parameters: dict, system: LinearSystem, status: SolveStatus, side: str) -> Finding:
    cited = system.to_json() if status is SolveStatus.NO_SOLUTION else None
    if cited is not None:
        cited["side"] = side
    return Finding(kind, parameters, status.value, cited)


def witness_row_obstruction(fx: Fixture, W: Sequence[str], target: str, columns: Sequence[str],
                            oracle: Optional[MembershipOracle] = None,
                            limits: SolverLimits = DEFAULT_LIMITS) -> Finding:
    """Is ⟨target⟩ a left combination of the rows ⟨w⟩, w ∈ W, on the given columns?"""
    o = oracle or fx.oracle()
    system = LinearSystem(fx.semiring, tuple(o.row(w, columns) for w in W), o.row(target, columns))
    outcome = solve_left(system, limits)
    parameters = {"W": _words(W), "target": render_word(target), "columns": _words(columns)}
    return _verdict(ProbeKind.ROW_OBSTRUCTION, parameters, system, outcome.status, "left")


def witness_column_obstruction(fx: Fixture, W: Sequence[str], target: str, rows: Sequence[str],
                               oracle: Optional[MembershipOracle] = None,
                               limits: SolverLimits = DEFAULT_LIMITS) -> Finding:
    """Is [target] a right combination of the columns [w], w ∈ W, on the given rows?"""
    o = oracle or fx.oracle()
    system = LinearSystem(fx.semiring, tuple(o.column(w, rows) for w in W), o.column(target, rows))
    outcome = solve_right(system, limits)
    parameters = {"W": _words(W), "target": render_word(target), "rows": _words(rows)}
    return _verdict(ProbeKind.COLUMN_OBSTRUCTION, parameters, system, outcome.status, "right")


@dataclass(frozen=True)
class ObstructionCase:
    W: tuple[str, ...]
    target: str
    index: tuple[str, ...]
    N: int


ROW_FAMILIES = ("f1", "f1p", "f1pp")
COLUMN_FAMILIES = ("f2", "f3", "f3p", "f3pp", "f5")


def row_obstruction_case(fx: Fixture, W: Optional[Sequence[str]] = None) -> Optional[ObstructionCase]:
    """
    The documented row system for fx: rows W (default all words of length
    at most 2), the target row and the columns, with N one more than the
    largest relevant quantity over W. Mirrors of column families reuse the
    column case on reversed words.
    """
    W = tuple(W) if W is not None else words_up_to(fx.alphabet, 2)
    if fx.family == "f1":
        N = 1 + max(int(fx(w)) for w in W)
        return ObstructionCase(W, "a" * (N + 1) + "b", ("b" + "a" * N, "b" + "a" * (N + 1)), N)
    if fx.family == "f1p":
        N = 1 + max(len(w) for w in W)
        return ObstructionCase(W, "a" * N, ("", "a"), N)
    if fx.family == "f1pp":
        N = 1 + max(max(w.count("a"), w.count("b")) for w in W)
        return ObstructionCase(W, "a" * N + "b" * N, ("", "a", "b"), N)
    if fx.mirror_of is not None:
        case = column_obstruction_case(get_fixture(fx.mirror_of), [reverse(w) for w in W])
        if case is not None:
            return ObstructionCase(
                sort_shortlex(reverse(w) for w in case.W), reverse(case.target),
                sort_shortlex(reverse(r) for r in case.index), case.N,
            )
    return None


def column_obstruction_case(fx: Fixture, W: Optional[Sequence[str]] = None) -> Optional[ObstructionCase]:
    """The documented column system: columns W, target column a^N, rows {a, b}"""
    W = tuple(W) if W is not None else words_up_to(fx.alphabet, 2)
    if fx.family in ("f2", "f3", "f3p", "f3pp"):
        N = max(w.count("a") for w in W) + 2
    elif fx.family == "f5":
        N = sum(2 ** (w.count("a") + 1) for w in W) + 1
    else:
        return None
    return ObstructionCase(W, "a" * N, ("a", "b"), N)


def _obstruction_report(fx: Fixture, case: ObstructionCase, rows: bool, limits: SolverLimits) -> ProbeReport:
    kind = ProbeKind.ROW_OBSTRUCTION if rows else ProbeKind.COLUMN_OBSTRUCTION
    report = ProbeReport(fx.name, kind, {"N": case.N})
    if rows:
        report.findings.append(witness_row_obstruction(fx, case.W, case.target, case.index, limits=limits))
    else:
        report.findings.append(witness_column_obstruction(fx, case.W, case.target, case.index, limits=limits))
    return report


def mirror_coherence(fx: Fixture, maxQ: int, maxT: int, cap: int = 256,
                     limits: SolverLimits = DEFAULT_LIMITS) -> ProbeReport:
    """
    Check subset by subset that closing rows Q on T for fx has the same
    verdict as closing columns reverse(Q) on rows reverse(T) for its mirror.
    """
    report = ProbeReport(fx.name, ProbeKind.MIRROR_COHERENCE, {"max_q": maxQ, "max_t": maxT})
    if not fx.commutative:
        report.findings.append(Finding(ProbeKind.MIRROR_COHERENCE, {}, "NOT_APPLICABLE"))
        return report
    mirrored = mirror_fixture(fx)
    oracle, mirror_oracle = fx.oracle(), mirrored.oracle()
    T = words_up_to(fx.alphabet, maxT)
    T_reversed = sort_shortlex(reverse(t) for t in T)
    rows = words_up_to(fx.alphabet, maxQ)
    checked, mismatches = 0, []
    for size in range(1, len(rows) + 1):
        for Q in combinations(rows, size):
            if checked >= cap:
                report.capped = True
                break
            checked += 1
            left = solve_lambda(oracle, Q, T, limits).status
            right = solve_gamma(mirror_oracle, T_reversed, sort_shortlex(reverse(q) for q in Q), limits).status
            if left is not right:
                mismatches.append(_words(Q))
    verdict = "COHERENT" if not mismatches else "INCOHERENT"
    report.findings.append(Finding(ProbeKind.MIRROR_COHERENCE, {"checked": checked, "mismatches": ";".join(mismatches)}, verdict))
    return report


def adversary_divergence(fx: Fixture, budget: int = 500, equivalence_depth: int = 6, probe_depth: int = 4,
                         limits: SolverLimits = DEFAULT_LIMITS) -> ProbeReport:
    """Run the incremental strategy against an adversarial teacher and record whether it fails"""
    checker = EquivalenceChecker(depth=equivalence_depth)
    teacher = Teacher(fx.oracle(), checker, TeacherMode.ADVERSARY, probe_depth, limits)
    result = run_incremental(teacher, Budget.for_checker(checker, budget))
    parameters = {"budget": budget, "equivalence_depth": equivalence_depth, "probe_depth": probe_depth}
    report = ProbeReport(fx.name, ProbeKind.ADVERSARY_DIVERGENCE, parameters)
    report.findings.append(Finding(ProbeKind.ADVERSARY_DIVERGENCE,
                                   {"interactions": result.transcript.interactions, "reason": result.reason or ""},
                                   result.outcome.value))
    return report


def run_table_probes(limits: SolverLimits = DEFAULT_LIMITS) -> list[ProbeReport]:
    """Every probe the expected-table check relies on, in fixture order"""
    reports = []
    for name in ("f1", "f1@INT_MAX", "f1@RAT_MAX", "f1p", "f1p@NONNEG_RAT", "f1pp"):
        fx = get_fixture(name)
        reports.append(_obstruction_report(fx, row_obstruction_case(fx), True, limits))
    for name in ("f2", "f2@RAT_MAX", "f3", "f3p", "f3pp", "f5"):
        fx = get_fixture(name)
        reports.append(probe_weak_guessability(fx, 1, 2, limits=limits))
        reports.append(_obstruction_report(fx, column_obstruction_case(fx), False, limits))
    reports.append(adversary_divergence(get_fixture("f2"), limits=limits))
    f4 = get_fixture("f4")
    reports.append(probe_weak_guessability(f4, 0, 1, limits=limits))
    reports.append(probe_weak_coguessability(f4, 1, 0, limits=limits))
    for name in ("f2_mirror", "f3_mirror", "f3p_mirror"):
        fx = get_fixture(name)
        reports.append(probe_weak_coguessability(fx, 2, 1, limits=limits))
        reports.append(_obstruction_report(fx, row_obstruction_case(fx), True, limits))
    return reports


class CellStatus(Enum):
    PASS = "PASS"
    FAIL = "FAIL"


# probe kind -> (class it speaks about, expected flag it supports)
_EVIDENCE = {
    ProbeKind.ROW_WITNESS: ("weakly_guessable", True),
    ProbeKind.ROW_OBSTRUCTION: ("weakly_guessable", False),
    ProbeKind.COLUMN_WITNESS: ("weakly_coguessable", True),
    ProbeKind.COLUMN_OBSTRUCTION: ("weakly_coguessable", False),
    ProbeKind.ADVERSARY_DIVERGENCE: ("guessable", False),
}


@dataclass(frozen=True)
class Cell:
    fixture: str
    cls: str
    expected: bool
    status: CellStatus
    evidence: str


@dataclass
class TableSummary:
    cells: list[Cell]
    caveat: str = CAVEAT

    @property
    def passed(self) -> bool:
        return all(cell.status is CellStatus.PASS for cell in self.cells)

    def to_frame(self) -> pd.DataFrame:
        """Fixtures as rows, classes as columns, PASS/FAIL in covered cells"""
        frame = pd.DataFrame(
            [{"fixture": c.fixture, "class": c.cls, "status": c.status.value} for c in self.cells],
            columns=["fixture", "class", "status"],
        )
        if frame.empty:
            return frame
        order = list(dict.fromkeys(c.fixture for c in self.cells))
        grid = frame.pivot(index="fixture", columns="class", values="status").reindex(order)
        return grid.fillna("-")


def check_expected_table(reports: Sequence[ProbeReport]) -> TableSummary:
    """
    Cross-reference probe outcomes with the fixtures' expected classes. A
    witness probe must find a witness where membership is expected, and an
    obstruction or divergence probe must fire where non-membership is
    expected. A probe whose evidence points the other way is a failure too.
    """
    cells = []
    for report in reports:
        if report.kind not in _EVIDENCE:
            continue
        cls, supports = _EVIDENCE[report.kind]
        expected = get_fixture(report.fixture).expected.as_dict()[cls]
        if expected == supports:
            status = CellStatus.PASS if report.fired else CellStatus.FAIL
        else:
            # the probe looks for the opposite evidence; it must not find it
            status = CellStatus.FAIL if report.fired else CellStatus.PASS
        evidence = "; ".join(f"{f.kind.value}: {f.verdict}" for f in report.findings)
        cells.append(Cell(report.fixture, cls, expected, status, evidence))
    summary = TableSummary(cells)
    logger.info("Expected-table check: %d cells, %s", len(cells), "all pass" if summary.passed else "failures present")
    return summary
