"""
Semirings with exact arithmetic.

Nine instances are provided: the Boolean semiring, the counting semirings
over the naturals, integers, rationals and nonnegative rationals, the
max-plus semirings over the naturals, integers and rationals, and the
semiring of finite languages over an alphabet.

Values are plain immutable Python objects:

    BOOL                      bool
    NAT, INT                  int
    RAT, NONNEG_RAT           fractions.Fraction
    NAT_MAX, INT_MAX          int or NEG_INF
    RAT_MAX                   Fraction or NEG_INF
    FINLANG                   tuple of words, shortlex sorted, no duplicates

Descriptors (subclasses of Semiring) carry the operations. Use
`semiring(sid)` to get the shared descriptor for an identifier.
"""

import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cache
from typing import Any, Iterable, Optional, Sequence

from .errors import DomainMismatchError, ValueParseError
from .words import EPSILON, EPSILON_TOKEN, render_word, shortlex_key

Value = Any


class Tag(Enum):
    BOOL = "BOOL"
    NAT = "NAT"
    INT = "INT"
    RAT = "RAT"
    NONNEG_RAT = "NONNEG_RAT"
    NAT_MAX = "NAT_MAX"
    INT_MAX = "INT_MAX"
    RAT_MAX = "RAT_MAX"
    FINLANG = "FINLANG"


MAX_PLUS_TAGS = frozenset({Tag.NAT_MAX, Tag.INT_MAX, Tag.RAT_MAX})
COUNTING_TAGS = frozenset({Tag.NAT, Tag.INT, Tag.RAT, Tag.NONNEG_RAT})


@dataclass(frozen=True)
class SemiringId:
    """Identifies a semiring instance; FINLANG also needs its alphabet"""
    tag: Tag
    alphabet: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.tag is Tag.FINLANG:
            if not self.alphabet:
                raise DomainMismatchError("FINLANG requires a nonempty alphabet")
            letters = tuple(sorted(set(self.alphabet)))
            if any(len(letter) != 1 for letter in letters):
                raise DomainMismatchError(f"Letters must be single characters: {letters}")
            object.__setattr__(self, "alphabet", letters)
        elif self.alphabet is not None:
            raise DomainMismatchError(f"{self.tag.value} does not take an alphabet")

    @classmethod
    def parse(cls, text: str, alphabet: Optional[Iterable[str]] = None) -> "SemiringId":
        try:
            tag = Tag[text.strip().upper()]
        except KeyError:
            raise ValueParseError("Unknown semiring tag", text, 0) from None
        if tag is Tag.FINLANG:
            return cls(tag, tuple(alphabet or ()))
        return cls(tag)

    def __str__(self) -> str:
        return self.tag.value


BOOL = SemiringId(Tag.BOOL)
NAT = SemiringId(Tag.NAT)
INT = SemiringId(Tag.INT)
RAT = SemiringId(Tag.RAT)
NONNEG_RAT = SemiringId(Tag.NONNEG_RAT)
NAT_MAX = SemiringId(Tag.NAT_MAX)
INT_MAX = SemiringId(Tag.INT_MAX)
RAT_MAX = SemiringId(Tag.RAT_MAX)


def finlang(alphabet: Iterable[str]) -> SemiringId:
    return SemiringId(Tag.FINLANG, tuple(alphabet))


class NegInf:
    """The zero of the max-plus semirings; below every number"""
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NEG_INF"

    def __str__(self):
        return "-inf"

    def __reduce__(self):
        return NegInf, ()

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("NEG_INF")

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self


NEG_INF = NegInf()

_INTEGER = re.compile(r"[+-]?\d+")
_RATIONAL = re.compile(r"([+-]?\d+)(?:/(\d+))?")
_PREFIXES = {_INTEGER: re.compile(r"[+-]?\d*"), _RATIONAL: re.compile(r"[+-]?\d*(?:/\d*)?")}


def _bad_position(text: str, pattern: re.Pattern) -> int:
    """Offset of the first character that cannot continue a valid value"""
    return _PREFIXES[pattern].match(text).end()


class Semiring(ABC):
    """A semiring descriptor: value domain, ⊕, ⊗, 0 and 1"""

    zero: Value
    one: Value
    commutative: bool = True

    def __init__(self, sid: SemiringId):
        self.id = sid

    def __repr__(self):
        return f"{type(self).__name__}({self.id})"

    @abstractmethod
    def contains(self, x: Value) -> bool:
        """True when x belongs to the value domain"""
        pass

    @abstractmethod
    def plus(self, x: Value, y: Value) -> Value:
        """⊕ without domain checks"""
        pass

    @abstractmethod
    def times(self, x: Value, y: Value) -> Value:
        """⊗ without domain checks; x is the left factor"""
        pass

    @abstractmethod
    def parse(self, text: str) -> Value:
        pass

    @abstractmethod
    def render(self, x: Value) -> str:
        pass

    def lift(self, n: int) -> Value:
        """The value denoted by the integer n, where the domain has one"""
        raise DomainMismatchError(f"{self.id} has no integer values")

    def check(self, x: Value) -> Value:
        if not self.contains(x):
            raise DomainMismatchError(f"{x!r} is not a {self.id} value")
        return x

    def add(self, x: Value, y: Value) -> Value:
        return self.plus(self.check(x), self.check(y))

    def mul(self, x: Value, y: Value) -> Value:
        return self.times(self.check(x), self.check(y))

    def is_zero(self, x: Value) -> bool:
        return x == self.zero

    def sum(self, values: Iterable[Value]) -> Value:
        total = self.zero
        for value in values:
            total = self.plus(total, value)
        return total

    def dot(self, u: Sequence[Value], v: Sequence[Value]) -> Value:
        """⊕_i u_i ⊗ v_i"""
        total = self.zero
        for x, y in zip(u, v):
            if x == self.zero or y == self.zero:
                continue
            total = self.plus(total, self.times(x, y))
        return total

    def vecmat(self, v: Sequence[Value], m: Sequence[Sequence[Value]]) -> list:
        """Row vector times matrix: (v M)_j = ⊕_i v_i ⊗ M_ij"""
        width = len(m[0]) if len(m) else 0
        result = [self.zero] * width
        for i, vi in enumerate(v):
            if vi == self.zero:
                continue
            row = m[i]
            for j in range(width):
                mij = row[j]
                if mij == self.zero:
                    continue
                result[j] = self.plus(result[j], self.times(vi, mij))
        return result

    def matvec(self, m: Sequence[Sequence[Value]], v: Sequence[Value]) -> list:
        """Matrix times column vector: (M v)_i = ⊕_j M_ij ⊗ v_j"""
        return [self.dot(row, v) for row in m]


class BooleanSemiring(Semiring):
    zero = False
    one = True

    def contains(self, x):
        return type(x) is bool

    def plus(self, x, y):
        return x or y

    def times(self, x, y):
        return x and y

    def leq(self, x, y) -> bool:
        return (not x) or y

    def lift(self, n):
        return n != 0

    def parse(self, text):
        if text == "0":
            return False
        if text == "1":
            return True
        position = 1 if text[:1] in ("0", "1") else 0
        raise ValueParseError("Expected '0' or '1'", text, position)

    def render(self, x):
        return "1" if x else "0"


class CountingSemiring(Semiring):
    """(ℕ|ℤ|ℚ|ℚ≥0, +, ×, 0, 1)"""

    def __init__(self, sid: SemiringId):
        super().__init__(sid)
        self.rational = sid.tag in (Tag.RAT, Tag.NONNEG_RAT)
        self.nonnegative = sid.tag in (Tag.NAT, Tag.NONNEG_RAT)
        self.zero = Fraction(0) if self.rational else 0
        self.one = Fraction(1) if self.rational else 1

    def contains(self, x):
        if self.rational:
            ok = type(x) is Fraction
        else:
            ok = type(x) is int
        return ok and (not self.nonnegative or x >= 0)

    def plus(self, x, y):
        return x + y

    def times(self, x, y):
        return x * y

    def lift(self, n):
        return self.check(Fraction(n) if self.rational else int(n))

    def parse(self, text):
        pattern = _RATIONAL if self.rational else _INTEGER
        match = pattern.fullmatch(text)
        if match is None:
            raise ValueParseError(f"Malformed {self.id} value", text, _bad_position(text, pattern))
        if self.rational:
            numerator, denominator = match.group(1), match.group(2)
            if denominator is not None and int(denominator) == 0:
                raise ValueParseError("Zero denominator", text, text.index("/") + 1)
            value = Fraction(int(numerator), int(denominator or 1))
        else:
            value = int(text)
        if self.nonnegative and value < 0:
            raise ValueParseError(f"{self.id} values are nonnegative", text, 0)
        return value

    def render(self, x):
        return _render_number(x)


class MaxPlusSemiring(Semiring):
    """(X ∪ {-inf}, max, +, -inf, 0) for X = ℕ, ℤ or ℚ"""
    zero = NEG_INF

    def __init__(self, sid: SemiringId):
        super().__init__(sid)
        self.rational = sid.tag is Tag.RAT_MAX
        self.nonnegative = sid.tag is Tag.NAT_MAX
        self.one = Fraction(0) if self.rational else 0

    def contains(self, x):
        if x is NEG_INF:
            return True
        ok = type(x) is (Fraction if self.rational else int)
        return ok and (not self.nonnegative or x >= 0)

    def plus(self, x, y):
        if x is NEG_INF:
            return y
        if y is NEG_INF:
            return x
        return x if x >= y else y

    def times(self, x, y):
        if x is NEG_INF or y is NEG_INF:
            return NEG_INF
        return x + y

    def leq(self, x, y) -> bool:
        return x <= y

    def lift(self, n):
        return self.check(Fraction(n) if self.rational else int(n))

    def parse(self, text):
        if text == "-inf":
            return NEG_INF
        pattern = _RATIONAL if self.rational else _INTEGER
        match = pattern.fullmatch(text)
        if match is None:
            raise ValueParseError(f"Malformed {self.id} value", text, _bad_position(text, pattern))
        if self.rational:
            numerator, denominator = match.group(1), match.group(2)
            if denominator is not None and int(denominator) == 0:
                raise ValueParseError("Zero denominator", text, text.index("/") + 1)
            value = Fraction(int(numerator), int(denominator or 1))
        else:
            value = int(text)
        if self.nonnegative and value < 0:
            raise ValueParseError("NAT_MAX values are -inf or nonnegative", text, 0)
        return value

    def render(self, x):
        return "-inf" if x is NEG_INF else _render_number(x)


class WordSetSemiring(Semiring):
    """(finite subsets of Σ*, ∪, concatenation, ∅, {ε}); not commutative"""
    zero = ()
    one = (EPSILON,)
    commutative = False

    def __init__(self, sid: SemiringId):
        super().__init__(sid)
        self.alphabet = sid.alphabet
        self._letters = frozenset(sid.alphabet)

    @staticmethod
    def canonical(words: Iterable[str]) -> tuple[str, ...]:
        return tuple(sorted(set(words), key=shortlex_key))

    def of(self, *words: str) -> tuple[str, ...]:
        """Build a checked value from words given as strings"""
        return self.check(self.canonical(words))

    def contains(self, x):
        if type(x) is not tuple:
            return False
        if any(type(w) is not str or not self._letters.issuperset(w) for w in x):
            return False
        return x == self.canonical(x)

    def plus(self, x, y):
        if not x:
            return y
        if not y:
            return x
        return self.canonical(x + y)

    def times(self, x, y):
        return self.canonical(u + v for u in x for v in y)

    def leq(self, x, y) -> bool:
        return set(x) <= set(y)

    def parse(self, text):
        if not text.startswith("{"):
            raise ValueParseError("Word sets start with '{'", text, 0)
        if not text.endswith("}") or len(text) < 2:
            raise ValueParseError("Word sets end with '}'", text, len(text))
        body = text[1:-1]
        if body == "":
            return ()
        words = []
        offset = 1
        for item in body.split(","):
            if item == EPSILON_TOKEN:
                words.append(EPSILON)
            elif item == "":
                raise ValueParseError("Empty word entry (use 'eps')", text, offset)
            else:
                for i, letter in enumerate(item):
                    if letter not in self._letters:
                        raise ValueParseError(f"Letter {letter!r} not in alphabet", text, offset + i)
                words.append(item)
            offset += len(item) + 1
        return self.canonical(words)

    def render(self, x):
        return "{" + ",".join(render_word(w) for w in x) + "}"


def _render_number(x) -> str:
    if type(x) is Fraction and x.denominator != 1:
        return f"{x.numerator}/{x.denominator}"
    return str(int(x))


@cache
def semiring(sid: SemiringId) -> Semiring:
    """The shared descriptor for a semiring identifier"""
    if sid.tag is Tag.BOOL:
        return BooleanSemiring(sid)
    if sid.tag in COUNTING_TAGS:
        return CountingSemiring(sid)
    if sid.tag in MAX_PLUS_TAGS:
        return MaxPlusSemiring(sid)
    return WordSetSemiring(sid)


def add(d: Semiring, x: Value, y: Value) -> Value:
    return d.add(x, y)


def mul(d: Semiring, x: Value, y: Value) -> Value:
    return d.mul(x, y)


def parse_value(sid: SemiringId, text: str) -> Value:
    return semiring(sid).parse(text)


def render_value(sid: SemiringId, x: Value) -> str:
    d = semiring(sid)
    return d.render(d.check(x))
