"""
Command-line front end: `wal <subcommand> [flags]`.

Settings are read from an optional INI file first ([Settings] section of
wal.ini, or --config PATH); command-line flags override them.
"""

import argparse
import configparser
import json
import logging
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional, Sequence

import pandas as pd
from colorama import Fore, Style, init

from . import __version__
from .classify import (
    check_expected_table, column_obstruction_case, mirror_coherence, probe_weak_coguessability,
    probe_weak_guessability, row_obstruction_case, run_table_probes, witness_column_obstruction,
    witness_row_obstruction,
)
from .errors import BudgetExhaustedError, DomainMismatchError, InvariantViolation, WalError
from .fixtures import fixture_names, get_fixture
from .hankel import MembershipOracle
from .hypothesis_automaton import build_cohypothesis, build_hypothesis, literalize, solve_gamma, solve_lambda
from .learner import EquivalenceKind, LearnOutcome, TeacherMode, STRATEGIES
from .linear_solve import LinearSystem, Side, SolverLimits, SolveStatus, solve
from .randomized import generator, random_system
from .semiring import SemiringId, semiring
from .session import LearningSession, SessionConfig
from .sources import AutomatonFileSource, FixtureSource, TargetSource
from .wfa import Wfa
from .words import check_word, parse_word, parse_word_list, render_word

logger = logging.getLogger("wal")

CONFIG_FILE = "wal.ini"

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_BUDGET = 2
EXIT_INVARIANT = 3


@dataclass(frozen=True)
class CliConfig:
    """Settings shared by the subcommands"""
    format: str = "table"
    seed: int = 0
    budget: int = 500
    equiv_depth: int = 6
    probe_depth: int = 4
    max_length: Optional[int] = None
    validation_depth: int = 8
    enumeration_cap: int = 10_000
    pool_cap: int = 1_000
    node_cap: int = 200_000

    @property
    def limits(self) -> SolverLimits:
        return SolverLimits(self.enumeration_cap, self.pool_cap, self.node_cap)

    @classmethod
    def from_file(cls, path: Optional[Path]) -> "CliConfig":
        """Read the [Settings] section of an INI file; a missing default file is not an error"""
        config_file = Path(path) if path is not None else Path(CONFIG_FILE)
        if not config_file.exists():
            if path is not None:
                raise FileNotFoundError(f"Config file not found: {config_file}")
            return cls()
        parser = configparser.ConfigParser()
        parser.read(config_file)
        if "Settings" not in parser:
            return cls()
        settings = parser["Settings"]
        values = {}
        for f in fields(cls):
            if f.name not in settings:
                continue
            try:
                values[f.name] = settings[f.name] if f.name == "format" else settings.getint(f.name)
            except ValueError:
                raise DomainMismatchError(f"{config_file}: setting {f.name} must be an integer") from None
        logger.debug("Settings from %s: %s", config_file, values)
        return cls(**values)

    def override(self, args: argparse.Namespace) -> "CliConfig":
        """Flags given on the command line win over file settings"""
        given = {f.name: getattr(args, f.name) for f in fields(self) if getattr(args, f.name, None) is not None}
        return replace(self, **given)


class ColorFormatter(logging.Formatter):
    COLORS = {
        logging.DEBUG: Fore.CYAN,
        logging.INFO: Fore.GREEN,
        logging.WARNING: Fore.YELLOW,
        logging.ERROR: Fore.RED,
        logging.CRITICAL: Fore.RED,
    }

    def format(self, record: logging.LogRecord) -> str:
        color = self.COLORS.get(record.levelno, "")
        record = logging.makeLogRecord(record.__dict__)
        record.levelname = f"{color}{record.levelname}{Style.RESET_ALL}"
        return super().format(record)


def configure_logging(verbose: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(ColorFormatter("%(levelname)s %(name)s: %(message)s"))
    logger.handlers[:] = [handler]
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    logger.propagate = False


def error(message: str) -> None:
    print(f"{Fore.RED}{message}{Style.RESET_ALL}", file=sys.stderr)


def emit(frame: pd.DataFrame, fmt: str, document: Optional[object] = None) -> None:
    """Print a frame as an aligned table or CSV, or a JSON document (the frame's records by default)"""
    if fmt == "json":
        payload = document if document is not None else frame.to_dict(orient="records")
        print(json.dumps(payload, indent=2))
    elif fmt == "csv":
        print(frame.to_csv(index=False), end="")
    else:
        print(frame.to_string(index=False))


# Target resolution

def _source(args: argparse.Namespace) -> TargetSource:
    if args.target is not None:
        return AutomatonFileSource(Path(args.target))
    return FixtureSource(args.fixture)


def _oracle(args: argparse.Namespace) -> MembershipOracle:
    with _source(args) as source:
        source.initialize()
        return source.oracle()


def _words(text: str, oracle: MembershipOracle) -> tuple[str, ...]:
    words = parse_word_list(text)
    for word in words:
        check_word(word, oracle.alphabet)
    return words


# Subcommands

def cmd_eval(args: argparse.Namespace, config: CliConfig) -> int:
    oracle = _oracle(args)
    d = oracle.descriptor
    if args.word is not None:
        word = check_word(parse_word(args.word), oracle.alphabet)
        value = d.render(oracle(word))
        if config.format == "json":
            print(json.dumps({"word": render_word(word), "value": value}))
        else:
            print(value)
        return EXIT_OK
    words = _words(args.words, oracle)
    frame = pd.DataFrame([{"word": render_word(w), "value": d.render(oracle(w))} for w in words])
    emit(frame, config.format)
    return EXIT_OK


def cmd_hankel(args: argparse.Namespace, config: CliConfig) -> int:
    oracle = _oracle(args)
    block = oracle.assemble(_words(args.rows, oracle), _words(args.cols, oracle))
    if config.format == "table":
        print(block.to_frame().to_string())
    else:
        emit(block.to_records(), config.format)
    logger.info("%d membership values requested, %d distinct words", oracle.request_count, oracle.query_count)
    return EXIT_OK


def _random_system(args: argparse.Namespace, config: CliConfig) -> tuple[LinearSystem, Side]:
    sid = SemiringId.parse(args.random, ("a", "b"))
    return random_system(sid, generator(config.seed)), Side(args.side or "left")


def cmd_solve(args: argparse.Namespace, config: CliConfig) -> int:
    if args.system is not None:
        path = Path(args.system)
        if not path.exists():
            raise FileNotFoundError(f"System file not found: {path}")
        system, side = LinearSystem.from_json(json.loads(path.read_text()))
        if args.side is not None:
            side = Side(args.side)
    else:
        system, side = _random_system(args, config)
    outcome = solve(system, side, config.limits)
    d = semiring(system.semiring)
    witness = [d.render(x) for x in outcome.witness] if outcome.witness is not None else None
    document = {
        "status": outcome.status.value,
        "method": outcome.method,
        "witness": witness,
        "bound_note": outcome.bound_note,
        "system": system.to_json(side),
    }
    if config.format == "json":
        print(json.dumps(document, indent=2))
    else:
        frame = pd.DataFrame([{"generator": p, "coefficient": x} for p, x in enumerate(witness or [])],
                             columns=["generator", "coefficient"])
        print(f"status: {outcome.status.value} ({outcome.method})")
        if outcome.bound_note:
            print(f"bound: {outcome.bound_note}")
        if witness is not None:
            emit(frame, config.format)
    return EXIT_BUDGET if outcome.status is SolveStatus.BOUND_EXCEEDED else EXIT_OK


def cmd_hypothesis(args: argparse.Namespace, config: CliConfig) -> int:
    oracle = _oracle(args)
    Q, T = _words(args.rows, oracle), _words(args.cols, oracle)
    if args.side == "right":
        outcome = solve_gamma(oracle, Q, T, config.limits)
    else:
        outcome = solve_lambda(oracle, Q, T, config.limits)
    document = {"status": outcome.status.value}
    if outcome.solved:
        build = build_cohypothesis if args.side == "right" else build_hypothesis
        automaton = build(oracle, outcome.solution)
        document["automaton"] = automaton.to_json()
        document["solution"] = outcome.solution.to_json()
        if args.output:
            automaton.dump(args.output)
    else:
        document["failing"] = str(outcome.failing)
        document["bound_note"] = outcome.bound_note
    print(json.dumps(document, indent=2))
    return EXIT_BUDGET if outcome.status is SolveStatus.BOUND_EXCEEDED else EXIT_OK


def cmd_learn(args: argparse.Namespace, config: CliConfig) -> int:
    session_config = SessionConfig(
        strategy=args.strategy,
        teacher=TeacherMode(args.teacher),
        equivalence=EquivalenceKind(args.equivalence),
        equivalence_depth=config.equiv_depth,
        probe_depth=config.probe_depth,
        budget=config.budget,
        max_length=config.max_length,
        validation_depth=config.validation_depth,
        limits=config.limits,
    )
    session = LearningSession(session_config)
    with _source(args) as source:
        source.initialize()
        result = session.run(source)
    if args.transcript:
        Path(args.transcript).write_text(result.transcript.to_jsonl())
    if args.output and result.automaton is not None:
        result.automaton.dump(args.output)
    summary = session.summary()
    if config.format == "json":
        document = summary.to_dict(orient="records")[0]
        if result.automaton is not None:
            document["automaton"] = result.automaton.to_json()
        emit(summary, config.format, document)
    else:
        emit(summary, config.format)
    if result.outcome is LearnOutcome.BUDGET_EXHAUSTED:
        error(f"Budget exhausted: {result.reason}")
        return EXIT_BUDGET
    return EXIT_OK


def cmd_literalize(args: argparse.Namespace, config: CliConfig) -> int:
    oracle = _oracle(args)
    outcome = solve_lambda(oracle, _words(args.rows, oracle), _words(args.cols, oracle), config.limits)
    if outcome.status is SolveStatus.BOUND_EXCEEDED:
        raise BudgetExhaustedError(f"Solver bound exceeded at target {outcome.failing}: {outcome.bound_note}")
    if not outcome.solved:
        raise DomainMismatchError(f"The rows are not closed on the columns: target {outcome.failing} has no solution")
    result = literalize(oracle, outcome.solution, config.validation_depth, config.limits)
    if args.output:
        result.automaton.dump(args.output)
    print(json.dumps({
        "rows": [render_word(q) for q in result.Q],
        "labels": {state: render_word(word) for state, word in result.certificate.sigma.items()},
        "automaton": result.automaton.to_json(),
    }, indent=2))
    return EXIT_OK


def cmd_mirror(args: argparse.Namespace, config: CliConfig) -> int:
    mirrored = Wfa.load(args.target).mirror()
    if args.output:
        mirrored.dump(args.output)
    else:
        print(json.dumps(mirrored.to_json(), indent=2))
    return EXIT_OK


def cmd_classify(args: argparse.Namespace, config: CliConfig) -> int:
    if args.table:
        summary = check_expected_table(run_table_probes(config.limits))
        if config.format == "json":
            cells = [{"fixture": c.fixture, "class": c.cls, "expected": c.expected,
                      "status": c.status.value, "evidence": c.evidence} for c in summary.cells]
            print(json.dumps({"passed": summary.passed, "caveat": summary.caveat, "cells": cells}, indent=2))
        else:
            grid = summary.to_frame()
            if config.format == "csv":
                print(grid.to_csv(), end="")
            else:
                print(grid.to_string())
                print(summary.caveat)
        return EXIT_OK if summary.passed else EXIT_INVARIANT

    if args.fixture is None:
        raise DomainMismatchError("classify needs --fixture NAME or --table")
    fx = get_fixture(args.fixture)
    if args.witness is not None:
        rows = args.witness == "row"
        case = row_obstruction_case(fx) if rows else column_obstruction_case(fx)
        if case is None:
            raise DomainMismatchError(f"No {args.witness} obstruction is documented for {fx.name}")
        witness = witness_row_obstruction if rows else witness_column_obstruction
        finding = witness(fx, case.W, case.target, case.index, limits=config.limits)
        document = {"fixture": fx.name, "kind": finding.kind.value, "N": case.N,
                    "parameters": finding.parameters, "verdict": finding.verdict, "system": finding.system}
        frame = pd.DataFrame([{"fixture": fx.name, "kind": finding.kind.value, "N": case.N, "verdict": finding.verdict}])
        emit(frame, config.format, document)
        return EXIT_OK
    max_q = args.max_q if args.max_q is not None else 1
    max_t = args.max_t if args.max_t is not None else 2
    if args.coherence:
        report = mirror_coherence(fx, max_q, max_t, limits=config.limits)
    elif args.dual:
        report = probe_weak_coguessability(fx, max_q, max_t, limits=config.limits)
    else:
        report = probe_weak_guessability(fx, max_q, max_t, limits=config.limits)
    emit(report.to_frame(), config.format, report.to_json())
    if config.format == "table":
        print(report.caveat)
    return EXIT_OK


def cmd_fixtures(args: argparse.Namespace, config: CliConfig) -> int:
    rows = []
    for name in fixture_names(include_variants=True):
        fx = get_fixture(name)
        rows.append({"name": fx.name, "semiring": str(fx.semiring), **fx.expected.as_dict(),
                     "description": fx.description})
        if args.export and fx.automaton is not None:
            directory = Path(args.export)
            directory.mkdir(parents=True, exist_ok=True)
            fx.automaton.dump(directory / f"{fx.name}.json")
    emit(pd.DataFrame(rows), config.format)
    return EXIT_OK


COMMANDS = {
    "eval": cmd_eval,
    "hankel": cmd_hankel,
    "solve": cmd_solve,
    "hypothesis": cmd_hypothesis,
    "learn": cmd_learn,
    "literalize": cmd_literalize,
    "mirror": cmd_mirror,
    "classify": cmd_classify,
    "fixtures": cmd_fixtures,
}


def _add_target(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--target", "--automaton", dest="target", help="Automaton JSON file")
    group.add_argument("--fixture", help="Registered fixture name")


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--format", choices=["table", "csv", "json"], help="Output format")
    shared.add_argument("--seed", type=int, help="Seed for randomized inputs")
    shared.add_argument("--config", help=f"INI settings file (default {CONFIG_FILE})")
    shared.add_argument("--verbose", action="store_true", help="Log debug detail to stderr")

    parser = argparse.ArgumentParser(prog="wal", description="Active learning of weighted automata over semirings")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("eval", parents=[shared], help="Evaluate a target on words")
    _add_target(p)
    words = p.add_mutually_exclusive_group(required=True)
    words.add_argument("--word", help="One word; an empty value is the empty word")
    words.add_argument("--words", help="Comma-separated words")

    p = commands.add_parser("hankel", parents=[shared], help="Print a finite Hankel block")
    _add_target(p)
    p.add_argument("--rows", required=True, help="Comma-separated row words Q")
    p.add_argument("--cols", required=True, help="Comma-separated column words T")

    p = commands.add_parser("solve", parents=[shared], help="Solve a linear system")
    system = p.add_mutually_exclusive_group(required=True)
    system.add_argument("--system", help="System JSON file")
    system.add_argument("--random", metavar="SEMIRING", help="Solve a random system over SEMIRING (uses --seed)")
    p.add_argument("--side", choices=["left", "right"], help="Override the side of the system")
    p.add_argument("--enumeration-cap", dest="enumeration_cap", type=int)
    p.add_argument("--pool-cap", dest="pool_cap", type=int)
    p.add_argument("--node-cap", dest="node_cap", type=int)

    p = commands.add_parser("hypothesis", parents=[shared], help="Build a (co-)hypothesis automaton")
    _add_target(p)
    p.add_argument("--rows", required=True)
    p.add_argument("--cols", required=True)
    p.add_argument("--side", choices=["left", "right"], default="left")
    p.add_argument("--output", help="Write the automaton to this file")

    p = commands.add_parser("learn", parents=[shared], help="Run a learning game")
    _add_target(p)
    p.add_argument("--strategy", choices=sorted(STRATEGIES), default="hkrs")
    p.add_argument("--teacher", choices=[m.value for m in TeacherMode], default="ally")
    p.add_argument("--equivalence", choices=[k.value for k in EquivalenceKind], default="bounded")
    p.add_argument("--equiv-depth", dest="equiv_depth", type=int)
    p.add_argument("--probe-depth", dest="probe_depth", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--max-length", dest="max_length", type=int)
    p.add_argument("--transcript", help="Write the transcript as line-delimited JSON")
    p.add_argument("--output", help="Write the learned automaton to this file")

    p = commands.add_parser("literalize", parents=[shared], help="Literalize the hypothesis of a closed block")
    _add_target(p)
    p.add_argument("--rows", required=True)
    p.add_argument("--cols", required=True)
    p.add_argument("--validation-depth", dest="validation_depth", type=int)
    p.add_argument("--output")

    p = commands.add_parser("mirror", parents=[shared], help="Mirror an automaton")
    p.add_argument("--target", "--automaton", dest="target", required=True)
    p.add_argument("--output")

    p = commands.add_parser("classify", parents=[shared], help="Collect class evidence for fixtures")
    p.add_argument("--fixture")
    p.add_argument("--table", action="store_true", help="Check every covered cell of the expected table")
    p.add_argument("--max-q", dest="max_q", type=int)
    p.add_argument("--max-t", dest="max_t", type=int)
    p.add_argument("--witness", choices=["row", "column"])
    p.add_argument("--dual", action="store_true", help="Probe column sets instead of row sets")
    p.add_argument("--coherence", action="store_true", help="Check mirror coherence")

    p = commands.add_parser("fixtures", parents=[shared], help="List the fixture registry")
    p.add_argument("--export", metavar="DIR", help="Write every fixture automaton as JSON into DIR")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    init()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse reports bad usage with 2, which is reserved for exhausted budgets
        return EXIT_DOMAIN if exc.code == 2 else (exc.code or EXIT_OK)
    configure_logging(args.verbose)
    try:
        config = CliConfig.from_file(Path(args.config) if args.config else None).override(args)
        return COMMANDS[args.command](args, config)
    except (WalError, FileNotFoundError, json.JSONDecodeError) as exc:
        error(f"Error: {exc}")
        return EXIT_DOMAIN
    except BudgetExhaustedError as exc:
        error(f"Budget exhausted: {exc}")
        return EXIT_BUDGET
    except InvariantViolation as exc:
        error(f"Internal invariant violated: {exc}")
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
