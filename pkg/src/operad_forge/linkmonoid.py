"""Symbolic isotopy classes of 1- and 2-string links under stacking.

Words live over a user-supplied alphabet of prime names; the module implements
the algebra the classification guarantees, never deciding primality of actual
links. A 1-string word is a multiset of prime knots (stacking of long knots is
commutative). A 2-string word is a normal form

    (twist exponent, sorted central multiset, ordered non-central body)

where the units are the pure braids (infinite cyclic, generated by the full
twist u), the central letters are SplitA/SplitB/Cable of prime knots, and the
body is a free word in the non-central prime 2-links. Split and cable letters
of a composite knot are spelled as the letters of its prime factors.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

CENTRAL_KINDS = ("SplitA", "SplitB", "Cable")

Letter = tuple[str, str]  # (kind, prime knot) for central letters


@dataclass(frozen=True)
class GeneratorAlphabet:
    """Named prime generators with linking numbers on the non-central letters."""

    knots: tuple[str, ...]
    noncentral: tuple[tuple[str, int], ...]  # (name, linking number)

    def __post_init__(self):
        names = list(self.knots) + [n for n, _ in self.noncentral]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        for n in names:
            if not n or not n[0].isalpha():
                raise ValueError(f"invalid generator name: {n!r}")

    def lk(self, name: str) -> int:
        for n, v in self.noncentral:
            if n == name:
                return v
        raise ValueError(f"unknown non-central letter: {name!r}")

    def is_knot(self, name: str) -> bool:
        return name in self.knots

    def is_noncentral(self, name: str) -> bool:
        return any(n == name for n, _ in self.noncentral)

    def noncentral_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.noncentral)

    def central_letter(self, kind: str, knot: str) -> Letter:
        if kind not in CENTRAL_KINDS:
            raise ValueError(f"unknown central kind: {kind!r}")
        if not self.is_knot(knot):
            raise ValueError(f"unknown prime knot: {knot!r}")
        return (kind, knot)


def alphabet(
    knots: Iterable[str],
    noncentral: Iterable[str | tuple[str, int]] = (),
) -> GeneratorAlphabet:
    """Convenience builder; non-central entries default to linking number 0."""
    nc = tuple(
        (e, 0) if isinstance(e, str) else (e[0], int(e[1])) for e in noncentral
    )
    return GeneratorAlphabet(tuple(knots), nc)


@dataclass(frozen=True)
class LinkWord:
    """Normal form of a string-link isotopy class over its alphabet."""

    alphabet: GeneratorAlphabet
    color: int
    knots: tuple[str, ...] = ()  # color 1: sorted multiset of primes
    twist: int = 0
    central: tuple[Letter, ...] = ()  # color 2: sorted multiset
    body: tuple[str, ...] = ()  # color 2: ordered non-central letters

    def __post_init__(self):
        if self.color not in (1, 2):
            raise ValueError(f"words exist for colors 1 and 2, got {self.color}")
        if self.color == 1:
            if self.twist or self.central or self.body:
                raise ValueError("a 1-string word is just a knot multiset")
            for k in self.knots:
                if not self.alphabet.is_knot(k):
                    raise ValueError(f"unknown prime knot: {k!r}")
            object.__setattr__(self, "knots", tuple(sorted(self.knots)))
        else:
            if self.knots:
                raise ValueError("2-string words keep knots inside letters")
            for kind, k in self.central:
                self.alphabet.central_letter(kind, k)
            for x in self.body:
                if not self.alphabet.is_noncentral(x):
                    raise ValueError(f"unknown non-central letter: {x!r}")
            object.__setattr__(self, "central", tuple(sorted(self.central)))

    def is_trivial(self) -> bool:
        return not (self.knots or self.twist or self.central or self.body)

    def __repr__(self):
        if self.color == 1:
            return "#".join(self.knots) if self.knots else "unknot"
        parts = []
        if self.twist:
            parts.append(f"u^{self.twist}")
        parts.extend(f"{kind}({k})" for kind, k in self.central)
        parts.extend(self.body)
        return "#".join(parts) if parts else "trivial2"


def knot_word(alph: GeneratorAlphabet, primes: Iterable[str] = ()) -> LinkWord:
    return LinkWord(alph, 1, knots=tuple(primes))


def link2_word(
    alph: GeneratorAlphabet,
    twist: int = 0,
    central: Iterable[Letter] = (),
    body: Iterable[str] = (),
) -> LinkWord:
    return LinkWord(alph, 2, twist=twist, central=tuple(central), body=tuple(body))


def trivial_word(alph: GeneratorAlphabet, color: int) -> LinkWord:
    return LinkWord(alph, color)


def mul(a: LinkWord, b: LinkWord) -> LinkWord:
    """Stack a then b; the result is already in normal form."""
    if a.color != b.color:
        raise ValueError(f"color mismatch: {a.color} vs {b.color}")
    if a.alphabet != b.alphabet:
        raise ValueError("words over different alphabets")
    if a.color == 1:
        return LinkWord(a.alphabet, 1, knots=a.knots + b.knots)
    return LinkWord(
        a.alphabet,
        2,
        twist=a.twist + b.twist,
        central=a.central + b.central,
        body=a.body + b.body,
    )


def mul_all(alph: GeneratorAlphabet, color: int, words: Sequence[LinkWord]) -> LinkWord:
    out = trivial_word(alph, color)
    for w in words:
        out = mul(out, w)
    return out


def equals(a: LinkWord, b: LinkWord) -> bool:
    """Word problem for the modeled submonoid: normal forms compare directly."""
    if a.color != b.color:
        raise ValueError(f"color mismatch: {a.color} vs {b.color}")
    return a == b


def linking_number(w: LinkWord) -> int:
    """Twist plus the letter attributes; a monoid homomorphism to the integers."""
    if w.color != 2:
        raise ValueError("linking number is a 2-string invariant")
    return w.twist + sum(w.alphabet.lk(x) for x in w.body)


def add_twists(w: LinkWord, m: int) -> LinkWord:
    if w.color != 2:
        raise ValueError("twists live on 2-string words")
    return LinkWord(w.alphabet, 2, twist=w.twist + m, central=w.central, body=w.body)


def classify(alph: GeneratorAlphabet, letter) -> str:
    """'unit' | 'central' | 'noncentral' for a letter of the color-2 alphabet."""
    if letter == "u":
        return "unit"
    if isinstance(letter, tuple) and len(letter) == 2 and letter[0] in CENTRAL_KINDS:
        alph.central_letter(*letter)
        return "central"
    if isinstance(letter, str) and alph.is_noncentral(letter):
        return "noncentral"
    raise ValueError(f"unknown letter: {letter!r}")


def is_prime(w: LinkWord) -> bool:
    """Exactly one non-unit letter in total (the twist is a unit factor)."""
    if w.color == 1:
        return len(w.knots) == 1
    return len(w.central) + len(w.body) == 1


def decompose_primes(w: LinkWord) -> list[LinkWord]:
    """Ordered prime factors: body first in order, then central sorted, then units.

    Multiplying the factors back gives the word.
    """
    out: list[LinkWord] = []
    if w.color == 1:
        return [knot_word(w.alphabet, [k]) for k in w.knots]
    for x in w.body:
        out.append(link2_word(w.alphabet, body=[x]))
    for letter in w.central:
        out.append(link2_word(w.alphabet, central=[letter]))
    if w.twist:
        out.append(link2_word(w.alphabet, twist=w.twist))
    return out


def mod_center(w: LinkWord) -> tuple[str, ...]:
    """Image in the free quotient by the center: just the body."""
    if w.color != 2:
        raise ValueError("the center quotient is a 2-string construction")
    return w.body


def in_S2(w: LinkWord) -> bool:
    """Products of non-central primes only: no central letters, no unit factors."""
    if w.color != 2:
        raise ValueError("S2 membership is a 2-string question")
    return not w.central and w.twist == 0


def in_S2_0(w: LinkWord) -> bool:
    return in_S2(w) and linking_number(w) == 0


def letter_str(letter) -> str:
    if letter == "u":
        return "u"
    if isinstance(letter, tuple):
        return f"{letter[0]}({letter[1]})"
    return str(letter)
