"""
Closedness strategies: decide whether a target vector b is a linear
combination of generator vectors g_p over a semiring, and produce a
witness.

Left systems ask for b = ⊕_p λ_p ⊗ g_p, right systems for
b = ⊕_p g_p ⊗ γ_p. Every strategy is complete, except that the
branch-and-bound, Fourier-Motzkin and quotient-pool strategies report
BOUND_EXCEEDED instead of NO_SOLUTION when their configured caps are hit.
Every SOLVED witness is re-verified before it is returned.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import chain, combinations, product
from typing import Any, Iterator, Mapping, Optional, Sequence

from .errors import InfiniteSolutionSetError, InvariantViolation, SystemFormatError
from .semiring import NEG_INF, MAX_PLUS_TAGS, SemiringId, Tag, Value, WordSetSemiring, semiring

logger = logging.getLogger(__name__)


class SolveStatus(Enum):
    SOLVED = "SOLVED"
    NO_SOLUTION = "NO_SOLUTION"
    BOUND_EXCEEDED = "BOUND_EXCEEDED"


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


ENUMERABLE_TAGS = frozenset({Tag.NAT, Tag.NAT_MAX, Tag.FINLANG, Tag.BOOL})


@dataclass(frozen=True)
class SolverLimits:
    """Caps that turn exhaustive searches into BOUND_EXCEEDED verdicts"""
    enumeration_cap: int = 10_000
    pool_cap: int = 1_000
    node_cap: int = 200_000


DEFAULT_LIMITS = SolverLimits()


@dataclass(frozen=True)
class LinearSystem:
    """Generators g_p ∈ S^T and a target b ∈ S^T over one semiring"""
    semiring: SemiringId
    generators: tuple[tuple[Value, ...], ...]
    target: tuple[Value, ...]

    def __post_init__(self):
        d = semiring(self.semiring)
        generators = tuple(tuple(g) for g in self.generators)
        target = tuple(self.target)
        for g in generators:
            if len(g) != len(target):
                raise SystemFormatError(f"Generator of length {len(g)} does not match target length {len(target)}")
        for value in chain(target, *generators):
            d.check(value)
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "target", target)

    @property
    def width(self) -> int:
        return len(self.target)

    def combine(self, coefficients: Sequence[Value], side: Side = Side.LEFT) -> tuple[Value, ...]:
        """⊕_p c_p ⊗ g_p (left) or ⊕_p g_p ⊗ c_p (right)"""
        d = semiring(self.semiring)
        total = [d.zero] * self.width
        for c, g in zip(coefficients, self.generators):
            if c == d.zero:
                continue
            for i, x in enumerate(g):
                if x == d.zero:
                    continue
                term = d.times(c, x) if side is Side.LEFT else d.times(x, c)
                total[i] = d.plus(total[i], term)
        return tuple(total)

    def verifies(self, coefficients: Sequence[Value], side: Side = Side.LEFT) -> bool:
        d = semiring(self.semiring)
        if len(coefficients) != len(self.generators) or not all(d.contains(c) for c in coefficients):
            return False
        return self.combine(coefficients, side) == self.target

    def zero_generators(self) -> list[int]:
        d = semiring(self.semiring)
        return [p for p, g in enumerate(self.generators) if all(x == d.zero for x in g)]

    def restricted(self, columns: Sequence[int]) -> "LinearSystem":
        """The same system on a subset of the index positions"""
        return LinearSystem(
            self.semiring,
            tuple(tuple(g[i] for i in columns) for g in self.generators),
            tuple(self.target[i] for i in columns),
        )

    def to_json(self, side: Side = Side.LEFT) -> dict:
        d = semiring(self.semiring)
        data = {
            "semiring": self.semiring.tag.value,
            "side": side.value,
            "generators": [[d.render(x) for x in g] for g in self.generators],
            "target": [d.render(x) for x in self.target],
        }
        if self.semiring.alphabet:
            data["alphabet"] = list(self.semiring.alphabet)
        return data

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> tuple["LinearSystem", Side]:
        missing = [key for key in ("semiring", "generators", "target") if key not in data]
        if missing:
            raise SystemFormatError(f"Missing required fields: {missing}")
        try:
            side = Side(data.get("side", "left"))
        except ValueError:
            raise SystemFormatError(f"side must be 'left' or 'right', got {data['side']!r}") from None
        texts = [*data["target"], *chain.from_iterable(data["generators"])]
        alphabet = data.get("alphabet")
        if alphabet is None and str(data["semiring"]).upper() == Tag.FINLANG.value:
            alphabet = _letters_in(texts)
        sid = SemiringId.parse(str(data["semiring"]), alphabet)
        d = semiring(sid)
        return (
            cls(sid, tuple(tuple(d.parse(str(x)) for x in g) for g in data["generators"]),
                tuple(d.parse(str(x)) for x in data["target"])),
            side,
        )


# Hankel blocks build one system per target row
LeftLinSystem = LinearSystem


def _letters_in(texts: Sequence[str]) -> list[str]:
    letters = set()
    for text in texts:
        for word in str(text).strip("{}").split(","):
            if word != "eps":
                letters.update(word)
    return sorted(letters) or ["a"]


@dataclass(frozen=True)
class SolveOutcome:
    status: SolveStatus
    witness: Optional[tuple[Value, ...]] = None
    method: str = ""
    bound_note: Optional[str] = None

    @property
    def solved(self) -> bool:
        return self.status is SolveStatus.SOLVED


@dataclass(frozen=True)
class EnumerationResult:
    """All verified solutions up to the cap; cap_hit means the list may be incomplete"""
    solutions: tuple[tuple[Value, ...], ...]
    cap_hit: bool = False


class _BoundHit(Exception):
    pass


def row_reduce(rows: list[list[Fraction]], ncols: int) -> list[int]:
    """
    Bring rows to reduced row echelon form in place, looking for pivots
    in the first ncols columns only (extra columns ride along).

    Returns:
        The pivot column of each of the leading rows
    """
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inverse = 1 / Fraction(rows[r][c])
        rows[r] = [x * inverse for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def _solve_field(system: LinearSystem, side: Side, limits: SolverLimits) -> SolveOutcome:
    n = len(system.generators)
    rows = [[Fraction(g[i]) for g in system.generators] + [Fraction(system.target[i])] for i in range(system.width)]
    pivots = row_reduce(rows, n)
    if any(all(x == 0 for x in row[:n]) and row[n] != 0 for row in rows):
        return SolveOutcome(SolveStatus.NO_SOLUTION, method="gaussian-elimination")
    witness = [Fraction(0)] * n
    for r, c in enumerate(pivots):
        witness[c] = rows[r][n]
    return SolveOutcome(SolveStatus.SOLVED, tuple(witness), "gaussian-elimination")


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) ≥ 0"""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _solve_integer(system: LinearSystem, side: Side, limits: SolverLimits) -> SolveOutcome:
    """
    Column Hermite normalization H = A U with U unimodular, then forward
    substitution H y = b with divisibility checks, and λ = U y.
    """
    n, m = len(system.generators), system.width
    H = [[system.generators[p][i] for p in range(n)] for i in range(m)]
    U = [[int(p == k) for k in range(n)] for p in range(n)]
    pivot_of_row: dict[int, int] = {}
    column = 0
    for i in range(m):
        if column >= n:
            break
        for j in range(column + 1, n):
            if H[i][j] == 0:
                continue
            a, b = H[i][column], H[i][j]
            g, s, t = _xgcd(a, b)
            for matrix in (H, U):
                for row in matrix:
                    x, y = row[column], row[j]
                    row[column] = s * x + t * y
                    row[j] = -(b // g) * x + (a // g) * y
        if H[i][column] != 0:
            pivot_of_row[i] = column
            column += 1

    y = [0] * n
    for i in range(m):
        partial = sum(H[i][k] * y[k] for k in range(n))
        if i in pivot_of_row:
            c = pivot_of_row[i]
            remainder = system.target[i] - partial
            if remainder % H[i][c] != 0:
                return SolveOutcome(SolveStatus.NO_SOLUTION, method="hermite-normalization")
            y[c] = remainder // H[i][c]
        elif partial != system.target[i]:
            return SolveOutcome(SolveStatus.NO_SOLUTION, method="hermite-normalization")
    witness = tuple(sum(U[p][k] * y[k] for k in range(n)) for p in range(n))
    return SolveOutcome(SolveStatus.SOLVED, witness, "hermite-normalization")


def _principal_boolean(system: LinearSystem) -> tuple[bool, ...]:
    d = semiring(system.semiring)
    return tuple(all(d.leq(x, b) for x, b in zip(g, system.target)) for g in system.generators)


def _solve_boolean(system: LinearSystem, side: Side, limits: SolverLimits) -> SolveOutcome:
    witness = _principal_boolean(system)
    if system.verifies(witness, side):
        return SolveOutcome(SolveStatus.SOLVED, witness, "residuation")
    return SolveOutcome(SolveStatus.NO_SOLUTION, method="residuation")


def _principal_max_plus(system: LinearSystem) -> tuple[Value, ...]:
    """Greatest λ with ⊕_p λ_p ⊗ g_p ≤ b; all-NEG_INF generators get NEG_INF"""
    natural = system.semiring.tag is Tag.NAT_MAX
    witness = []
    for g in system.generators:
        bounds = [NEG_INF if b is NEG_INF else b - x for x, b in zip(g, system.target) if x is not NEG_INF]
        value = min(bounds) if bounds else NEG_INF
        if natural and value is not NEG_INF and value < 0:
            value = NEG_INF
        witness.append(value)
    return tuple(witness)


def _solve_max_plus(system: LinearSystem, side: Side, limits: SolverLimits) -> SolveOutcome:
    witness = _principal_max_plus(system)
    if system.verifies(witness, side):
        return SolveOutcome(SolveStatus.SOLVED, witness, "residuation")
    return SolveOutcome(SolveStatus.NO_SOLUTION, method="residuation")


def _natural_search(system: LinearSystem, limits: SolverLimits, collect: Optional[list] = None) -> Optional[tuple[int, ...]]:
    """
    Branch and bound over λ ∈ ℕ^n. Returns the first solution found, or
    collects every solution when `collect` is given (then returns None).
    Raises _BoundHit past the node cap.
    """
    generators, target = system.generators, system.target
    n, m = len(generators), system.width
    witness = [0] * n
    active = []
    for p, g in enumerate(generators):
        if all(x == 0 for x in g):
            continue
        # a positive entry where b is 0 forces λ_p = 0
        if any(x > 0 and target[i] == 0 for i, x in enumerate(g)):
            continue
        active.append(p)
    active.sort(key=lambda p: -max(generators[p]))
    support_after = [set() for _ in range(len(active) + 1)]
    for k in range(len(active) - 1, -1, -1):
        support_after[k] = support_after[k + 1] | {i for i, x in enumerate(generators[active[k]]) if x > 0}

    residual = list(target)
    nodes = 0

    def dfs(k: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > limits.node_cap:
            raise _BoundHit(f"branch-and-bound visited more than {limits.node_cap} nodes")
        if any(residual[i] != 0 and i not in support_after[k] for i in range(m)):
            return False
        if k == len(active):
            if collect is not None:
                collect.append(tuple(witness))
                return len(collect) >= limits.enumeration_cap
            return True
        p = active[k]
        g = generators[p]
        bound = min(residual[i] // g[i] for i in range(m) if g[i] > 0)
        for value in range(bound, -1, -1):
            for i in range(m):
                residual[i] -= value * g[i]
            witness[p] = value
            found = dfs(k + 1)
            for i in range(m):
                residual[i] += value * g[i]
            if found:
                return True
        witness[p] = 0
        return False

    if dfs(0) and collect is None:
        return tuple(witness)
    return None


def _solve_natural(system: LinearSystem, side: Side, limits: SolverLimits) -> SolveOutcome:
    try:
        witness = _natural_search(system, limits)
    except _BoundHit as hit:
        return SolveOutcome(SolveStatus.BOUND_EXCEEDED, method="branch-and-bound", bound_note=str(hit))
    if witness is None:
        return SolveOutcome(SolveStatus.NO_SOLUTION, method="branch-and-bound")
    return SolveOutcome(SolveStatus.SOLVED, witness, "branch-and-bound")


Inequality = tuple[tuple[Fraction, ...], Fraction]  # coefficients·y + constant ≥ 0


def _normalized(inequalities: list[Inequality]) -> Optional[list[Inequality]]:
    """Scale, deduplicate and drop trivial inequalities; None on a contradiction"""
    seen = {}
    for coefficients, constant in inequalities:
        scale = max((abs(c) for c in coefficients), default=0)
        if scale == 0:
            if constant < 0:
                return None
            continue
        key = (tuple(c / scale for c in coefficients), constant / scale)
        seen.setdefault(key, None)
    return list(seen)


def _fourier_motzkin(inequalities: list[Inequality], nvars: int, limits: SolverLimits) -> Optional[list[Fraction]]:
    """A point satisfying all inequalities (least value per variable), or None"""
    current = _normalized(inequalities)
    if current is None:
        return None
    stages = []
    for k in reversed(range(nvars)):
        stages.append(current)
        positive = [q for q in current if q[0][k] > 0]
        negative = [q for q in current if q[0][k] < 0]
        combined = [q for q in current if q[0][k] == 0]
        for (pc, pk), (nc, nk) in product(positive, negative):
            u, v = -nc[k], pc[k]
            combined.append((tuple(u * x + v * y for x, y in zip(pc, nc)), u * pk + v * nk))
        current = _normalized(combined)
        if current is None:
            return None
        if len(current) > limits.node_cap:
            raise _BoundHit(f"Fourier-Motzkin produced more than {limits.node_cap} inequalities")

    values = [Fraction(0)] * nvars
    for k in range(nvars):
        lower, upper = None, None
        for coefficients, constant in stages[nvars - 1 - k]:
            rest = constant + sum(coefficients[j] * values[j] for j in range(k))
            c = coefficients[k]
            if c > 0:
                lower = -rest / c if lower is None else max(lower, -rest / c)
            elif c < 0:
                upper = rest / -c if upper is None else min(upper, rest / -c)
        value = lower if lower is not None else Fraction(0)
        if upper is not None and value > upper:
            raise InvariantViolation(f"Fourier-Motzkin back-substitution failed on variable {k}")
        values[k] = value
    return values


def _solve_nonneg_rational(system: LinearSystem, side: Side, limits: SolverLimits) -> SolveOutcome:
    """Exact equality elimination, then Fourier-Motzkin on the free parameters"""
    n = len(system.generators)
    rows = [[Fraction(g[i]) for g in system.generators] + [Fraction(system.target[i])] for i in range(system.width)]
    pivots = row_reduce(rows, n)
    if any(all(x == 0 for x in row[:n]) and row[n] != 0 for row in rows):
        return SolveOutcome(SolveStatus.NO_SOLUTION, method="fourier-motzkin")
    free = [c for c in range(n) if c not in pivots]
    inequalities: list[Inequality] = [
        (tuple(-rows[r][f] for f in free), rows[r][n]) for r in range(len(pivots))
    ]
    for k in range(len(free)):
        inequalities.append((tuple(Fraction(int(j == k)) for j in range(len(free))), Fraction(0)))
    try:
        values = _fourier_motzkin(inequalities, len(free), limits)
    except _BoundHit as hit:
        return SolveOutcome(SolveStatus.BOUND_EXCEEDED, method="fourier-motzkin", bound_note=str(hit))
    if values is None:
        return SolveOutcome(SolveStatus.NO_SOLUTION, method="fourier-motzkin")
    witness = [Fraction(0)] * n
    for k, f in enumerate(free):
        witness[f] = values[k]
    for r, c in enumerate(pivots):
        witness[c] = rows[r][n] - sum(rows[r][f] * values[k] for k, f in enumerate(free))
    return SolveOutcome(SolveStatus.SOLVED, tuple(witness), "fourier-motzkin")


def _quotient_pool(generator: Sequence[tuple[str, ...]], target: Sequence[tuple[str, ...]], side: Side) -> tuple[str, ...]:
    """
    Words u with u·w ∈ b_i (left) or w·u ∈ b_i (right) for every word w of
    every entry g_i. Their union is the greatest coefficient for this generator.
    """
    position, anchor = next((i, entry[0]) for i, entry in enumerate(generator) if entry)
    targets = [set(b) for b in target]
    pool = []
    for word in target[position]:
        if side is Side.LEFT and word.endswith(anchor):
            u = word[:len(word) - len(anchor)]
        elif side is Side.RIGHT and word.startswith(anchor):
            u = word[len(anchor):]
        else:
            continue
        if all((u + w if side is Side.LEFT else w + u) in targets[i] for i, entry in enumerate(generator) for w in entry):
            pool.append(u)
    return WordSetSemiring.canonical(pool)


def _word_set_pools(system: LinearSystem, side: Side, limits: SolverLimits) -> list[tuple[str, ...]]:
    pools = []
    for g in system.generators:
        if not any(g):
            pools.append(())
            continue
        pool = _quotient_pool(g, system.target, side)
        if len(pool) > limits.pool_cap:
            raise _BoundHit(f"quotient pool of {len(pool)} words exceeds the cap of {limits.pool_cap}")
        pools.append(pool)
    return pools


def _solve_word_sets(system: LinearSystem, side: Side, limits: SolverLimits) -> SolveOutcome:
    try:
        pools = _word_set_pools(system, side, limits)
    except _BoundHit as hit:
        return SolveOutcome(SolveStatus.BOUND_EXCEEDED, method="quotient-pools", bound_note=str(hit))
    witness = tuple(pools)
    if system.verifies(witness, side):
        return SolveOutcome(SolveStatus.SOLVED, witness, "quotient-pools")
    return SolveOutcome(SolveStatus.NO_SOLUTION, method="quotient-pools")


_STRATEGIES = {
    Tag.RAT: _solve_field,
    Tag.INT: _solve_integer,
    Tag.BOOL: _solve_boolean,
    Tag.NAT_MAX: _solve_max_plus,
    Tag.INT_MAX: _solve_max_plus,
    Tag.RAT_MAX: _solve_max_plus,
    Tag.NAT: _solve_natural,
    Tag.NONNEG_RAT: _solve_nonneg_rational,
    Tag.FINLANG: _solve_word_sets,
}


def _solve(system: LinearSystem, side: Side, limits: SolverLimits) -> SolveOutcome:
    d = semiring(system.semiring)
    if not system.generators:
        status = SolveStatus.SOLVED if all(b == d.zero for b in system.target) else SolveStatus.NO_SOLUTION
        return SolveOutcome(status, () if status is SolveStatus.SOLVED else None, "empty")
    outcome = _STRATEGIES[system.semiring.tag](system, side, limits)
    if outcome.solved and not system.verifies(outcome.witness, side):
        raise InvariantViolation(f"{outcome.method} produced a witness that does not verify: {outcome.witness}")
    logger.debug("%s %s system with %d generators on %d indices: %s via %s",
                 system.semiring, side.value, len(system.generators), system.width, outcome.status.value, outcome.method)
    return outcome


def solve_left(system: LinearSystem, limits: SolverLimits = DEFAULT_LIMITS) -> SolveOutcome:
    """Find λ with b = ⊕_p λ_p ⊗ g_p"""
    return _solve(system, Side.LEFT, limits)


def solve_right(system: LinearSystem, limits: SolverLimits = DEFAULT_LIMITS) -> SolveOutcome:
    """Find γ with b = ⊕_p g_p ⊗ γ_p"""
    if semiring(system.semiring).commutative:
        return _solve(system, Side.LEFT, limits)
    return _solve(system, Side.RIGHT, limits)


def solve(system: LinearSystem, side: Side, limits: SolverLimits = DEFAULT_LIMITS) -> SolveOutcome:
    return solve_left(system, limits) if side is Side.LEFT else solve_right(system, limits)


def _subsets(pool: tuple[str, ...]) -> Iterator[tuple[str, ...]]:
    for size in range(len(pool) + 1):
        yield from combinations(pool, size)


def _candidate_space(system: LinearSystem, side: Side, limits: SolverLimits) -> Iterator[tuple[Value, ...]]:
    tag = system.semiring.tag
    n = len(system.generators)
    if tag is Tag.BOOL:
        return product((False, True), repeat=n)
    if tag is Tag.NAT_MAX:
        principal = _principal_max_plus(system)
        ranges = [(NEG_INF,) if top is NEG_INF else (NEG_INF, *range(top + 1)) for top in principal]
        return product(*ranges)
    pools = _word_set_pools(system, side, limits)
    return product(*(list(_subsets(pool)) for pool in pools))


def enumerate_left(system: LinearSystem, cap: Optional[int] = None, limits: SolverLimits = DEFAULT_LIMITS,
                   side: Side = Side.LEFT) -> EnumerationResult:
    """
    All solutions of a left system whose solution set is finite.

    Raises:
        InfiniteSolutionSetError: for semirings other than NAT, NAT_MAX,
            FINLANG and BOOL, or when some generator is identically 0
    """
    tag = system.semiring.tag
    if tag not in ENUMERABLE_TAGS:
        raise InfiniteSolutionSetError(f"Solution sets over {system.semiring} may be infinite")
    zeros = system.zero_generators()
    if zeros:
        raise InfiniteSolutionSetError(f"Generators {zeros} are identically zero; the solution set may be infinite")
    cap = limits.enumeration_cap if cap is None else cap
    limits = SolverLimits(cap, limits.pool_cap, limits.node_cap)

    try:
        if tag is Tag.NAT:
            found: list = []
            _natural_search(system, limits, collect=found)
            solutions = found
        else:
            solutions = []
            for visited, candidate in enumerate(_candidate_space(system, side, limits), start=1):
                if visited > limits.node_cap:
                    return EnumerationResult(tuple(solutions), cap_hit=True)
                candidate = tuple(WordSetSemiring.canonical(c) for c in candidate) if tag is Tag.FINLANG else candidate
                if system.verifies(candidate, side):
                    solutions.append(candidate)
                    if len(solutions) >= cap:
                        break
    except _BoundHit:
        return EnumerationResult(tuple(found if tag is Tag.NAT else solutions), cap_hit=True)
    for solution in solutions:
        if not system.verifies(solution, side):
            raise InvariantViolation(f"Enumerated solution does not verify: {solution}")
    return EnumerationResult(tuple(solutions), cap_hit=len(solutions) >= cap)


def principal_witness(system: LinearSystem) -> Optional[tuple[Value, ...]]:
    """The residuated candidate for idempotent semirings (BOOL, max-plus), verified or not"""
    if system.semiring.tag is Tag.BOOL:
        return _principal_boolean(system)
    if system.semiring.tag in MAX_PLUS_TAGS:
        return _principal_max_plus(system)
    return None
