"""Word helpers.

Words are Python strings over single-character letters and the empty
word is "". All orderings are shortlex: shorter words first, then
lexicographic by letter code point.
"""

from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import UnknownLetterError

EPSILON = ""
EPSILON_TOKEN = "eps"
# State name of the empty word; reserved, so never a letter
EPSILON_STATE = "ε"


def shortlex_key(word: str) -> tuple[int, str]:
    return len(word), word


def sort_shortlex(words: Iterable[str]) -> tuple[str, ...]:
    """Deduplicate and sort words in shortlex order"""
    return tuple(sorted(set(words), key=shortlex_key))


def words_of_length(alphabet: Sequence[str], length: int) -> Iterator[str]:
    for letters in product(sorted(alphabet), repeat=length):
        yield "".join(letters)


def words_up_to(alphabet: Sequence[str], max_length: int) -> tuple[str, ...]:
    """All words of length at most max_length, in shortlex order"""
    words = []
    for length in range(max_length + 1):
        words.extend(words_of_length(alphabet, length))
    return tuple(words)


def shortlex_segment(alphabet: Sequence[str], size: int) -> tuple[str, ...]:
    """The first `size` words of the shortlex enumeration of all words"""
    words = []
    length = 0
    while len(words) < size:
        for word in words_of_length(alphabet, length):
            words.append(word)
            if len(words) == size:
                break
        length += 1
    return tuple(words)


def prefixes(word: str) -> list[str]:
    return [word[:i] for i in range(len(word) + 1)]


def suffixes(word: str) -> list[str]:
    """All suffixes of word, including the empty word and word itself"""
    return [word[i:] for i in range(len(word) + 1)]


def prefix_closure(words: Iterable[str]) -> tuple[str, ...]:
    closed = set()
    for word in words:
        closed.update(prefixes(word))
    return sort_shortlex(closed)


def reverse(word: str) -> str:
    return word[::-1]


def render_word(word: str) -> str:
    return EPSILON_TOKEN if word == EPSILON else word


def state_name(word: str) -> str:
    return EPSILON_STATE if word == EPSILON else word


def parse_word(text: str) -> str:
    text = text.strip()
    return EPSILON if text in ("", EPSILON_TOKEN) else text


def parse_word_list(text: str) -> tuple[str, ...]:
    """Parse a comma-separated word list; the result is shortlex sorted"""
    return sort_shortlex(parse_word(item) for item in text.split(","))


def check_word(word: str, alphabet: Iterable[str]) -> str:
    letters = set(alphabet)
    for position, letter in enumerate(word):
        if letter not in letters:
            raise UnknownLetterError(
                f"Letter {letter!r} at position {position} of {word!r} is not in the alphabet {sorted(letters)}"
            )
    return word
