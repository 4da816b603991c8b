"""Words over the relative alphabet: generator letters and peripheral letters.

A letter is either an ``XLetter`` (one symmetric generator, i.e. a name
with a sign) or an ``HLetter`` carrying a nontrivial element of one
peripheral subgroup.  Peripheral elements use the factor-intrinsic
encoding: a bare integer exponent for an infinite cyclic (or residue for
a finite cyclic) peripheral, an exponent tuple for a higher-rank abelian
one, and a tuple of signed generator indices for a free one.

Words are plain tuples of letters, so they hash and compare cheaply.
ShortLex ordering is defined through :func:`letter_key` /
:func:`word_key`; every deterministic ordering in the workbench reduces
to these keys.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple, Union


@dataclass(frozen=True)
class XLetter:
    name: str
    sign: int = 1

    def inverse(self) -> "XLetter":
        return XLetter(self.name, -self.sign)

    def __str__(self) -> str:
        return self.name if self.sign > 0 else f"{self.name}^-1"


@dataclass(frozen=True)
class HLetter:
    lam: int
    payload: Union[int, Tuple]

    def __str__(self) -> str:
        return f"{self.lam}:{format_payload(self.payload)}"


Letter = Union[XLetter, HLetter]
Word = Tuple[Letter, ...]


def format_payload(payload) -> str:
    if isinstance(payload, int):
        return str(payload)
    # free-factor payloads are tuples of signed generator indices,
    # abelian ones are exponent tuples; both print as comma lists
    return ",".join(str(c) for c in payload)


def payload_key(payload):
    """Deterministic order on peripheral payloads: small before large,
    positive before negative at equal magnitude."""
    if isinstance(payload, int):
        return (0, abs(payload), 0 if payload > 0 else 1, payload)
    return (1, len(payload), tuple((abs(c), 0 if c >= 0 else 1) for c in payload))


def letter_key(letter: Letter):
    if isinstance(letter, XLetter):
        return (0, letter.name, 0 if letter.sign > 0 else 1)
    return (1, letter.lam, payload_key(letter.payload))


def word_key(word: Iterable[Letter]):
    """ShortLex key: length first, then letterwise."""
    letters = tuple(word)
    return (len(letters), tuple(letter_key(l) for l in letters))


def format_word(word: Iterable[Letter]) -> str:
    letters = tuple(word)
    if not letters:
        return "1"
    return " ".join(str(l) for l in letters)
