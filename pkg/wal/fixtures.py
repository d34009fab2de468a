"""
Registry of reference target functions over the alphabet {a, b}.

Each fixture has a closed-form evaluator, an automaton computing the same
function and the class memberships expected of it. Names use ASCII
spellings: f1p for f'1, f1pp for f''1 and f3_mirror for the mirror of f3.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import UnknownFixtureError
from .hankel import MembershipOracle
from .semiring import (
    INT_MAX, NAT, NAT_MAX, NEG_INF, NONNEG_RAT, RAT_MAX, SemiringId, Value, finlang, semiring,
)
from .wfa import Wfa
from .words import reverse

ALPHABET = ("a", "b")


@dataclass(frozen=True)
class ExpectedClasses:
    weakly_guessable: bool
    guessable: bool
    strongly_guessable: bool
    weakly_coguessable: bool
    coguessable: bool
    strongly_coguessable: bool

    def dual(self) -> "ExpectedClasses":
        return ExpectedClasses(
            self.weakly_coguessable, self.coguessable, self.strongly_coguessable,
            self.weakly_guessable, self.guessable, self.strongly_guessable,
        )

    def as_dict(self) -> dict[str, bool]:
        return {
            "weakly_guessable": self.weakly_guessable,
            "guessable": self.guessable,
            "strongly_guessable": self.strongly_guessable,
            "weakly_coguessable": self.weakly_coguessable,
            "coguessable": self.coguessable,
            "strongly_coguessable": self.strongly_coguessable,
        }


NOWHERE = ExpectedClasses(False, False, False, False, False, False)
ROWS_ONLY = ExpectedClasses(True, True, True, False, False, False)
EVERYWHERE = ExpectedClasses(True, True, True, True, True, True)
WEAK_ROWS_ONLY = ExpectedClasses(True, False, False, False, False, False)


@dataclass(frozen=True)
class Fixture:
    name: str
    family: str
    semiring: SemiringId
    closed_form: Callable[[str], Value]
    automaton: Optional[Wfa]
    expected: ExpectedClasses
    description: str = ""
    mirror_of: Optional[str] = None
    alphabet: tuple[str, ...] = field(default=ALPHABET)

    @property
    def commutative(self) -> bool:
        return semiring(self.semiring).commutative

    def __call__(self, word: str) -> Value:
        return self.closed_form(word)

    def oracle(self) -> MembershipOracle:
        """A fresh oracle; the automaton answers when there is one"""
        source = self.automaton if self.automaton is not None else self.closed_form
        return MembershipOracle(self.semiring, self.alphabet, source, self.name)


def _count(word: str, letter: str) -> int:
    return word.count(letter)


def _longest_a_block(word: str) -> int:
    return max(len(block) for block in word.split("b"))


def _f1(sid: SemiringId, name: str) -> Fixture:
    d = semiring(sid)
    zero, one = d.lift(0), d.lift(1)
    automaton = Wfa.build(
        sid, ALPHABET, ["p", "c", "r"],
        {"p": zero},
        {"p": zero, "c": zero, "r": zero},
        [
            ("p", "a", "p", zero), ("p", "b", "p", zero), ("p", "a", "c", one),
            ("c", "a", "c", one), ("c", "b", "r", zero),
            ("r", "a", "r", zero), ("r", "b", "r", zero),
        ],
    )
    return Fixture(name, "f1", sid, lambda w: d.lift(_longest_a_block(w)), automaton, NOWHERE,
                   "length of the longest block of a's")


def _f1p(sid: SemiringId, name: str) -> Fixture:
    d = semiring(sid)
    one, two = d.lift(1), d.lift(2)
    automaton = Wfa.build(
        sid, ALPHABET, ["p", "q"],
        {"p": one},
        {"q": one},
        [("p", "a", "p", one), ("p", "a", "q", one), ("q", "a", "q", two)],
    )

    def closed_form(word: str) -> Value:
        if word and _count(word, "a") == len(word):
            return d.lift(2 ** len(word) - 1)
        return d.zero

    return Fixture(name, "f1p", sid, closed_form, automaton, NOWHERE, "2^n - 1 on a^n, 0 elsewhere")


def _f1pp(name: str) -> Fixture:
    sid = finlang(ALPHABET)
    d = semiring(sid)
    eps, a, b = d.of(""), d.of("a"), d.of("b")
    automaton = Wfa.build(
        sid, ALPHABET, ["s", "t"],
        {"s": eps, "t": eps},
        {"s": eps, "t": eps},
        [("s", "a", "s", a), ("s", "b", "s", eps), ("t", "a", "t", eps), ("t", "b", "t", b)],
    )

    def closed_form(word: str) -> Value:
        return d.of("a" * _count(word, "a"), "b" * _count(word, "b"))

    return Fixture(name, "f1pp", sid, closed_form, automaton, NOWHERE, "{a^|w|_a, b^|w|_b}")


def _first_letter_automaton(sid: SemiringId, counted: Value, other: Value, entry: dict[str, Value],
                            final: Value, loops: Optional[dict[str, dict[str, Value]]] = None) -> Wfa:
    """q0 branches on the first letter x into qx, which weighs x with `counted` and the other letter with `other`"""
    d = semiring(sid)
    loops = loops or {
        "qa": {"a": counted, "b": other},
        "qb": {"a": other, "b": counted},
    }
    return Wfa.build(
        sid, ALPHABET, ["q0", "qa", "qb"],
        {"q0": d.one},
        {"qa": final, "qb": final},
        [
            ("q0", "a", "qa", entry["a"]), ("q0", "b", "qb", entry["b"]),
            *((state, letter, state, weight) for state, row in loops.items() for letter, weight in row.items()),
        ],
    )


def _f3(sid: SemiringId, name: str, family: str, expected: ExpectedClasses) -> Fixture:
    d = semiring(sid)
    one = d.lift(1)
    automaton = _first_letter_automaton(sid, one, d.one, {"a": one, "b": one}, d.one)

    def closed_form(word: str) -> Value:
        return d.lift(_count(word, word[0])) if word else NEG_INF

    return Fixture(name, family, sid, closed_form, automaton, expected,
                   "number of occurrences of the first letter, -inf on the empty word")


def _f3p(name: str) -> Fixture:
    automaton = _first_letter_automaton(NAT, 2, 1, {"a": 2, "b": 2}, 1)

    def closed_form(word: str) -> Value:
        return 2 ** _count(word, word[0]) if word else 0

    return Fixture(name, "f3p", NAT, closed_form, automaton, ROWS_ONLY,
                   "2 to the number of occurrences of the first letter, 0 on the empty word")


def _f3pp(name: str) -> Fixture:
    sid = finlang(ALPHABET)
    d = semiring(sid)
    eps = d.of("")
    automaton = _first_letter_automaton(
        sid, None, None, {"a": d.of("a"), "b": d.of("b")}, eps,
        loops={"qa": {"a": d.of("a"), "b": eps}, "qb": {"a": eps, "b": d.of("b")}},
    )

    def closed_form(word: str) -> Value:
        return d.of(word[0] * _count(word, word[0])) if word else d.zero

    return Fixture(name, "f3pp", sid, closed_form, automaton, ROWS_ONLY,
                   "{x^|w|_x} for the first letter x, empty on the empty word")


def _f4(name: str) -> Fixture:
    automaton = Wfa.build(NAT, ALPHABET, ["q"], {"q": 1}, {"q": 1}, [("q", "a", "q", 1), ("q", "b", "q", 1)])
    return Fixture(name, "f4", NAT, lambda w: 1, automaton, EVERYWHERE, "constantly 1")


def _f5(sid: SemiringId, name: str) -> Fixture:
    d = semiring(sid)
    one, two = d.lift(1), d.lift(2)
    automaton = _first_letter_automaton(
        sid, two, one, {"a": two, "b": one}, one,
        loops={"qa": {"a": two, "b": one}, "qb": {"a": one, "b": one}},
    )

    def closed_form(word: str) -> Value:
        if not word:
            return d.zero
        return d.lift(2 ** _count(word, "a")) if word[0] == "a" else one

    return Fixture(name, "f5", sid, closed_form, automaton, ROWS_ONLY,
                   "2^|w|_a on words starting with a, 1 on words starting with b, 0 on the empty word")


def mirror_fixture(fx: Fixture, name: Optional[str] = None) -> Fixture:
    """The function w ↦ fx(reverse(w)), computed by the mirrored automaton"""
    closed_form = fx.closed_form
    return Fixture(
        name or f"{fx.name}_mirror",
        f"{fx.family}_mirror",
        fx.semiring,
        lambda w: closed_form(reverse(w)),
        fx.automaton.mirror() if fx.automaton is not None else None,
        fx.expected.dual(),
        f"mirror of {fx.name}",
        mirror_of=fx.name,
    )


_BUILDERS: dict[str, Callable[[], Fixture]] = {
    "f1": lambda: _f1(NAT_MAX, "f1"),
    "f1p": lambda: _f1p(NAT, "f1p"),
    "f1pp": lambda: _f1pp("f1pp"),
    "f2": lambda: _f3(INT_MAX, "f2", "f2", WEAK_ROWS_ONLY),
    "f3": lambda: _f3(NAT_MAX, "f3", "f3", ROWS_ONLY),
    "f3p": lambda: _f3p("f3p"),
    "f3pp": lambda: _f3pp("f3pp"),
    "f4": lambda: _f4("f4"),
    "f5": lambda: _f5(NONNEG_RAT, "f5"),
    "f2_mirror": lambda: mirror_fixture(get_fixture("f2")),
    "f3_mirror": lambda: mirror_fixture(get_fixture("f3")),
    "f3p_mirror": lambda: mirror_fixture(get_fixture("f3p")),
}

# Same functions over other semirings of their family
_VARIANTS: dict[str, Callable[[], Fixture]] = {
    "f1@INT_MAX": lambda: _f1(INT_MAX, "f1@INT_MAX"),
    "f1@RAT_MAX": lambda: _f1(RAT_MAX, "f1@RAT_MAX"),
    "f1p@NONNEG_RAT": lambda: _f1p(NONNEG_RAT, "f1p@NONNEG_RAT"),
    "f2@RAT_MAX": lambda: _f3(RAT_MAX, "f2@RAT_MAX", "f2", WEAK_ROWS_ONLY),
}

ALIASES = {
    "f'1": "f1p",
    "f''1": "f1pp",
    "f'3": "f3p",
    "f''3": "f3pp",
    "f̄2": "f2_mirror",
    "f̄3": "f3_mirror",
    "f̄'3": "f3p_mirror",
}


def fixture_names(include_variants: bool = False) -> list[str]:
    names = list(_BUILDERS)
    return names + list(_VARIANTS) if include_variants else names


def get_fixture(name: str) -> Fixture:
    key = ALIASES.get(name, name)
    builder = _BUILDERS.get(key) or _VARIANTS.get(key)
    if builder is None:
        raise UnknownFixtureError(f"Unknown fixture {name!r}; known fixtures are {fixture_names(True)}")
    return builder()


def fixtures(include_variants: bool = False) -> list[Fixture]:
    """The registry in fixed order"""
    return [get_fixture(name) for name in fixture_names(include_variants)]
