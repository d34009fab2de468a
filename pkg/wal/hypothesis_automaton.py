"""
Hypothesis automata from finite Hankel blocks.

A left solution λ for rows Q on columns T expresses ⟨ε⟩_T and every
⟨qa⟩_T as left combinations of the rows ⟨q⟩_T. The hypothesis automaton
has one state per row word. Dually, a right solution γ expresses [ε]_Q and
every [at]_Q through the columns [t]_Q and yields the co-hypothesis
automaton with one state per column word.
"""

import logging
from dataclasses import dataclass, replace
from types import MappingProxyType
from typing import Mapping, Optional, Sequence

from .errors import InvariantViolation, LiteralizationError, WalError
from .hankel import MembershipOracle, SubHankel
from .linear_solve import DEFAULT_LIMITS, LinearSystem, SolverLimits, SolveStatus, solve_left, solve_right
from .semiring import SemiringId, Value, semiring
from .wfa import LiteralCertificate, Wfa, first_disagreement
from .words import EPSILON, prefix_closure, render_word, shortlex_key, state_name

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Target:
    """One equation of a block: ε, or the row qa (column at for Γ)"""
    word: Optional[str] = None
    letter: Optional[str] = None

    @property
    def is_epsilon(self) -> bool:
        return self.word is None

    def __str__(self):
        if self.is_epsilon:
            return "eps"
        return f"({render_word(self.word)},{self.letter})"


EPSILON_TARGET = Target()


def block_targets(words: Sequence[str], alphabet: Sequence[str]) -> list[Target]:
    """ε first, then (q, a) with q in shortlex order and a in letter order"""
    ordered = sorted(words, key=shortlex_key)
    return [EPSILON_TARGET] + [Target(q, a) for q in ordered for a in sorted(alphabet)]


def _freeze_matrices(matrices: Mapping[str, Sequence[Sequence[Value]]]) -> Mapping[str, tuple]:
    return MappingProxyType({a: tuple(tuple(row) for row in m) for a, m in matrices.items()})


@dataclass(frozen=True)
class SolutionLambda:
    """
    Coefficients λ_q (initial) and λ_{q,a,p} (transitions[a][i][j] for
    q = Q[i], p = Q[j]) of one element of Λ_{Q,T}.
    """
    semiring: SemiringId
    alphabet: tuple[str, ...]
    Q: tuple[str, ...]
    T: tuple[str, ...]
    initial: tuple[Value, ...]
    transitions: Mapping[str, tuple[tuple[Value, ...], ...]]

    def __post_init__(self):
        object.__setattr__(self, "initial", tuple(self.initial))
        object.__setattr__(self, "transitions", _freeze_matrices(self.transitions))

    def coefficient(self, q: str, letter: str, p: str) -> Value:
        return self.transitions[letter][self.Q.index(q)][self.Q.index(p)]

    def coefficients_for(self, target: Target) -> tuple[Value, ...]:
        if target.is_epsilon:
            return self.initial
        return self.transitions[target.letter][self.Q.index(target.word)]

    def satisfies(self, block: SubHankel) -> bool:
        """Re-verify the defining equations on a block with the same rows"""
        if block.Q != self.Q:
            return False
        d = semiring(self.semiring)
        if tuple(d.vecmat(self.initial, block.base)) != block.eps_row:
            return False
        for a in self.alphabet:
            for i in range(len(self.Q)):
                if tuple(d.vecmat(self.transitions[a][i], block.base)) != block.extensions[a][i]:
                    return False
        return True

    def restrict(self, T: Sequence[str]) -> "SolutionLambda":
        """The same coefficients read as an element of Λ_{Q,T'} for T' ⊆ T"""
        T = tuple(T)
        if not set(T) <= set(self.T):
            raise WalError(f"Cannot restrict to columns {list(T)} outside {list(self.T)}")
        return replace(self, T=T)

    def replace_target(self, target: Target, coefficients: Sequence[Value]) -> "SolutionLambda":
        if target.is_epsilon:
            return replace(self, initial=tuple(coefficients))
        i = self.Q.index(target.word)
        rows = list(self.transitions[target.letter])
        rows[i] = tuple(coefficients)
        return replace(self, transitions={**self.transitions, target.letter: tuple(rows)})

    def to_json(self) -> dict:
        d = semiring(self.semiring)
        return {
            "Q": [render_word(q) for q in self.Q],
            "T": [render_word(t) for t in self.T],
            "initial": {render_word(q): d.render(x) for q, x in zip(self.Q, self.initial)},
            "transitions": [
                {"from": render_word(q), "letter": a, "to": render_word(p), "weight": d.render(x)}
                for a in self.alphabet
                for q, row in zip(self.Q, self.transitions[a])
                for p, x in zip(self.Q, row)
                if x != d.zero
            ],
        }


@dataclass(frozen=True)
class SolutionGamma:
    """
    Coefficients γ_t (final) and γ_{s,a,t} (transitions[a][i][j] for
    s = T[i], t = T[j]) of one element of Γ_{Q,T}.
    """
    semiring: SemiringId
    alphabet: tuple[str, ...]
    Q: tuple[str, ...]
    T: tuple[str, ...]
    final: tuple[Value, ...]
    transitions: Mapping[str, tuple[tuple[Value, ...], ...]]

    def __post_init__(self):
        object.__setattr__(self, "final", tuple(self.final))
        object.__setattr__(self, "transitions", _freeze_matrices(self.transitions))

    def coefficient(self, s: str, letter: str, t: str) -> Value:
        return self.transitions[letter][self.T.index(s)][self.T.index(t)]

    def satisfies(self, block: SubHankel) -> bool:
        if block.T != self.T:
            return False
        d = semiring(self.semiring)
        if tuple(d.matvec(block.base, self.final)) != block.finals:
            return False
        for a in self.alphabet:
            for j, t in enumerate(self.T):
                column = [row[j] for row in self.transitions[a]]
                if tuple(d.matvec(block.base, column)) != block.shifted_column(a, t):
                    return False
        return True

    def to_json(self) -> dict:
        d = semiring(self.semiring)
        return {
            "Q": [render_word(q) for q in self.Q],
            "T": [render_word(t) for t in self.T],
            "final": {render_word(t): d.render(x) for t, x in zip(self.T, self.final)},
            "transitions": [
                {"from": render_word(s), "letter": a, "to": render_word(t), "weight": d.render(x)}
                for a in self.alphabet
                for s, row in zip(self.T, self.transitions[a])
                for t, x in zip(self.T, row)
                if x != d.zero
            ],
        }


@dataclass(frozen=True)
class BlockOutcome:
    """Result of solving every equation of a block; failing is the first unsolved target"""
    status: SolveStatus
    block: SubHankel
    solution: Optional[SolutionLambda | SolutionGamma] = None
    failing: Optional[Target] = None
    bound_note: Optional[str] = None

    @property
    def solved(self) -> bool:
        return self.status is SolveStatus.SOLVED


def solve_lambda(o: MembershipOracle, Q: Sequence[str], T: Sequence[str],
                 limits: SolverLimits = DEFAULT_LIMITS) -> BlockOutcome:
    """
    Find one element of Λ_{Q,T}.

    Solves the ε equation and the (q, a) equations in shortlex order
    against the shared generators ⟨q⟩_T and stops at the first failure.
    """
    block = o.assemble(Q, T)
    initial = None
    rows = {a: [None] * len(block.Q) for a in block.alphabet}
    for target in block_targets(block.Q, block.alphabet):
        if target.is_epsilon:
            vector = block.eps_row
        else:
            vector = block.extensions[target.letter][block.Q.index(target.word)]
        outcome = solve_left(LinearSystem(block.semiring, block.base, vector), limits)
        if not outcome.solved:
            logger.debug("Rows %s not closed on %s: target %s is %s", list(block.Q), list(block.T), target, outcome.status.value)
            return BlockOutcome(outcome.status, block, failing=target, bound_note=outcome.bound_note)
        if target.is_epsilon:
            initial = outcome.witness
        else:
            rows[target.letter][block.Q.index(target.word)] = outcome.witness

    solution = SolutionLambda(block.semiring, block.alphabet, block.Q, block.T, initial, rows)
    if not solution.satisfies(block):
        raise InvariantViolation(f"Solution for rows {list(block.Q)} does not verify on its own block")
    return BlockOutcome(SolveStatus.SOLVED, block, solution)


def solve_gamma(o: MembershipOracle, Q: Sequence[str], T: Sequence[str],
                limits: SolverLimits = DEFAULT_LIMITS) -> BlockOutcome:
    """Find one element of Γ_{Q,T}; the right-handed dual of solve_lambda"""
    block = o.assemble(Q, T)
    generators = tuple(block.column_of(t) for t in block.T)
    final = None
    columns = {a: [[None] * len(block.T) for _ in block.T] for a in block.alphabet}
    for target in block_targets(block.T, block.alphabet):
        vector = block.finals if target.is_epsilon else block.shifted_column(target.letter, target.word)
        outcome = solve_right(LinearSystem(block.semiring, generators, vector), limits)
        if not outcome.solved:
            logger.debug("Columns %s not closed on %s: target %s is %s", list(block.T), list(block.Q), target, outcome.status.value)
            return BlockOutcome(outcome.status, block, failing=target, bound_note=outcome.bound_note)
        if target.is_epsilon:
            final = outcome.witness
        else:
            j = block.T.index(target.word)
            for i, x in enumerate(outcome.witness):
                columns[target.letter][i][j] = x

    solution = SolutionGamma(block.semiring, block.alphabet, block.Q, block.T, final, columns)
    if not solution.satisfies(block):
        raise InvariantViolation(f"Solution for columns {list(block.T)} does not verify on its own block")
    return BlockOutcome(SolveStatus.SOLVED, block, solution)


def _state_names(words: Sequence[str]) -> list[str]:
    return [state_name(w) for w in words]


def build_hypothesis(o: MembershipOracle, lam: SolutionLambda) -> Wfa:
    """States Q, initial λ_Q, final f(q), and q -a-> p with weight λ_{q,a,p}"""
    states = _state_names(lam.Q)
    return Wfa.build(
        lam.semiring,
        lam.alphabet,
        states,
        dict(zip(states, lam.initial)),
        {state: o.value(q) for state, q in zip(states, lam.Q)},
        [
            (states[i], a, states[j], x)
            for a in lam.alphabet
            for i, row in enumerate(lam.transitions[a])
            for j, x in enumerate(row)
        ],
    )


def build_cohypothesis(o: MembershipOracle, gam: SolutionGamma) -> Wfa:
    """States T, initial f(t), final γ_T, and s -a-> t with weight γ_{s,a,t}"""
    states = _state_names(gam.T)
    return Wfa.build(
        gam.semiring,
        gam.alphabet,
        states,
        {state: o.value(t) for state, t in zip(states, gam.T)},
        dict(zip(states, gam.final)),
        [
            (states[i], a, states[j], x)
            for a in gam.alphabet
            for i, row in enumerate(gam.transitions[a])
            for j, x in enumerate(row)
        ],
    )


@dataclass(frozen=True)
class LiteralizationResult:
    Q: tuple[str, ...]
    mu: SolutionLambda
    automaton: Wfa
    certificate: LiteralCertificate


def literalize(o: MembershipOracle, lam: SolutionLambda, validation_depth: int = 8,
               limits: SolverLimits = DEFAULT_LIMITS) -> LiteralizationResult:
    """
    Turn λ ∈ Λ_Q into μ ∈ Λ_{Q'} over the prefix closure Q' of Q, whose
    hypothesis automaton is literal.

    Every q in Q' gets a coefficient vector ρ(q) over Q with ⟨q⟩ = ρ(q)·⟨Q⟩:
    the unit vector when q ∈ Q, otherwise ρ(r)·Λ_a for q = ra (and λ_Q for
    ε ∉ Q). The letter-a transitions of q follow the spine to qa when qa is
    in Q', and otherwise go to Q with weights ρ(q)·Λ_a.

    Raises:
        LiteralizationError: when μ fails on its block or the automaton
            disagrees with the oracle up to validation_depth, which shows
            that λ was not in Λ_Q
    """
    d = semiring(lam.semiring)
    W = lam.Q
    Q_prime = prefix_closure(W)
    position = {p: i for i, p in enumerate(W)}

    rho: dict[str, list[Value]] = {}
    for q in Q_prime:
        if q in position:
            rho[q] = [d.one if j == position[q] else d.zero for j in range(len(W))]
        elif q == EPSILON:
            rho[q] = list(lam.initial)
        else:
            rho[q] = d.vecmat(rho[q[:-1]], lam.transitions[q[-1]])

    index = {q: i for i, q in enumerate(Q_prime)}
    transitions = {a: [[d.zero] * len(Q_prime) for _ in Q_prime] for a in lam.alphabet}
    for q in Q_prime:
        for a in lam.alphabet:
            row = transitions[a][index[q]]
            if q + a in index:
                row[index[q + a]] = d.one
                continue
            for p, x in zip(W, d.vecmat(rho[q], lam.transitions[a])):
                row[index[p]] = x
    initial = [d.one if q == EPSILON else d.zero for q in Q_prime]

    mu = SolutionLambda(lam.semiring, lam.alphabet, Q_prime, lam.T, initial, transitions)
    if not mu.satisfies(o.assemble(Q_prime, lam.T)):
        raise LiteralizationError(f"Extended solution fails on rows {list(Q_prime)}; the input is not in Λ_Q")
    automaton = build_hypothesis(o, mu)
    word = first_disagreement(o.alphabet, validation_depth, automaton, o)
    if word is not None:
        raise LiteralizationError(
            f"Literal automaton disagrees with the target on {render_word(word)!r}; the input is not in Λ_Q"
        )
    certificate = automaton.is_literal()
    if certificate is None:
        raise InvariantViolation(f"Literalized automaton over {list(Q_prime)} is not literal")
    logger.debug("Literalized %d rows into %d states", len(W), len(Q_prime))
    return LiteralizationResult(Q_prime, mu, automaton, certificate)


def state_hankel_automaton(automaton: Wfa, T: Sequence[str], limits: SolverLimits = DEFAULT_LIMITS) -> Wfa:
    """
    Hypothesis automaton over the state-row functions of an automaton.

    The generators are the functions computed from each state, restricted
    to T; the equations are those of a hypothesis automaton with these rows
    in place of Hankel rows. The result agrees with the automaton on T.
    """
    d = automaton.descriptor
    T = tuple(T)
    backward = {t: automaton.backward(t) for t in T}
    for a in automaton.alphabet:
        for t in T:
            if a + t not in backward:
                backward[a + t] = automaton.backward(a + t)
    n = automaton.size
    generators = tuple(tuple(backward[t][q] for t in T) for q in range(n))

    def solved(vector: tuple) -> tuple:
        outcome = solve_left(LinearSystem(automaton.semiring, generators, vector), limits)
        if not outcome.solved:
            raise InvariantViolation(f"State rows do not generate {vector}: {outcome.status.value}")
        return outcome.witness

    initial = solved(tuple(automaton.evaluate(t) for t in T))
    transitions = {
        a: [solved(tuple(backward[a + t][q] for t in T)) for q in range(n)]
        for a in automaton.alphabet
    }
    return Wfa.build(
        automaton.semiring,
        automaton.alphabet,
        automaton.states,
        dict(zip(automaton.states, initial)),
        dict(zip(automaton.states, automaton.final)),
        [
            (automaton.states[q], a, automaton.states[p], x)
            for a in automaton.alphabet
            for q, row in enumerate(transitions[a])
            for p, x in enumerate(row)
        ],
    )
