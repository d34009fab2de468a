"""
Seeded generators of random semiring values, automata and linear systems.

All generators draw from a numpy Generator so a run is reproducible from
its seed; the values they return are plain Python values.
"""

from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .linear_solve import LinearSystem
from .semiring import NEG_INF, RAT, SemiringId, Tag, Value, semiring
from .wfa import Wfa
from .words import sort_shortlex, words_up_to

NUMBER_RANGE = (-20, 20)
DENOMINATOR_RANGE = (1, 20)
MAX_WORDS = 4
MAX_WORD_LENGTH = 3


def generator(seed: Optional[int] = None) -> np.random.Generator:
    return np.random.default_rng(seed)


def _integer(rng: np.random.Generator, low: int, high: int) -> int:
    return int(rng.integers(low, high + 1))


def random_value(sid: SemiringId, rng: np.random.Generator) -> Value:
    """
    A random element: integers and numerators in [-20, 20] (clipped at 0
    for nonnegative domains), denominators in [1, 20], max-plus -inf one
    time in eight, word sets of at most 4 words of length at most 3.
    """
    low, high = NUMBER_RANGE
    tag = sid.tag
    if tag is Tag.BOOL:
        return bool(rng.integers(2))
    if tag in (Tag.NAT_MAX, Tag.INT_MAX, Tag.RAT_MAX) and rng.integers(8) == 0:
        return NEG_INF
    if tag in (Tag.NAT, Tag.NAT_MAX):
        return _integer(rng, 0, high)
    if tag in (Tag.INT, Tag.INT_MAX):
        return _integer(rng, low, high)
    if tag in (Tag.RAT, Tag.RAT_MAX, Tag.NONNEG_RAT):
        numerator = _integer(rng, 0 if tag is Tag.NONNEG_RAT else low, high)
        return Fraction(numerator, _integer(rng, *DENOMINATOR_RANGE))
    pool = words_up_to(sid.alphabet, MAX_WORD_LENGTH)
    size = _integer(rng, 0, MAX_WORDS)
    chosen = rng.choice(len(pool), size=size, replace=False)
    return sort_shortlex(pool[i] for i in chosen)


def _pick(rng: np.random.Generator, pool: Sequence[Value]) -> Value:
    return pool[int(rng.integers(len(pool)))]


def random_automaton(sid: SemiringId, alphabet: Sequence[str], rng: np.random.Generator, max_states: int = 3,
                     pool: Optional[Sequence[Value]] = None, density: float = 0.5) -> Wfa:
    """
    An automaton with 1 to max_states states. Each entry is nonzero with
    probability density; nonzero weights come from pool when given,
    otherwise from random_value.
    """
    d = semiring(sid)
    n = _integer(rng, 1, max_states)
    states = [f"s{i}" for i in range(n)]

    def weight() -> Value:
        if rng.random() >= density:
            return d.zero
        return d.check(_pick(rng, pool)) if pool is not None else random_value(sid, rng)

    initial = {q: weight() for q in states}
    final = {q: weight() for q in states}
    transitions = [(p, a, q, weight()) for p in states for a in alphabet for q in states]
    return Wfa.build(sid, alphabet, states, initial, final, transitions)


RAT_WEIGHTS = tuple(sorted({Fraction(n, k) for n in range(-3, 4) for k in (1, 2) if n != 0}))


def random_rational_automaton(rng: np.random.Generator, alphabet: Sequence[str] = ("a", "b"),
                              max_states: int = 3) -> Wfa:
    """A RAT automaton with weights in [-3, 3]; the initial vector is never zero"""
    while True:
        automaton = random_automaton(RAT, alphabet, rng, max_states, RAT_WEIGHTS)
        if any(x != 0 for x in automaton.initial):
            return automaton


def random_system(sid: SemiringId, rng: np.random.Generator, max_generators: int = 3, max_width: int = 3,
                  pool: Optional[Sequence[Value]] = None) -> LinearSystem:
    """
    A system with 1 to max_generators generators of width 1 to max_width.
    One time in two the target is a combination of the generators, so
    solvable and unsolvable systems both occur often.
    """
    d = semiring(sid)
    k, width = _integer(rng, 1, max_generators), _integer(rng, 1, max_width)

    def value() -> Value:
        return d.check(_pick(rng, pool)) if pool is not None else random_value(sid, rng)

    generators = tuple(tuple(value() for _ in range(width)) for _ in range(k))
    if rng.integers(2) == 0:
        target = tuple(value() for _ in range(width))
        return LinearSystem(sid, generators, target)
    system = LinearSystem(sid, generators, tuple(d.zero for _ in range(width)))
    coefficients = [value() for _ in range(k)]
    return LinearSystem(sid, generators, system.combine(coefficients))
