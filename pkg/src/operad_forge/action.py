"""Diagrams acting on link words, the commutation checks, and the free
decomposition of the twist-free non-central submonoid.

A muffler contributes a word determined by which standard strand tubes its
holes capture:

- color-1 muffler (hockey puck), output color 2: hole over both tubes ties the
  input knot around everything (a cable letter per prime factor); hole over one
  tube ties it into that strand (a split letter per prime factor); hole off the
  tubes re-embeds away from the link and contributes nothing.
- color-2 muffler, output color 2: holes over the two tubes in order insert the
  input 2-string word verbatim; both holes off the tubes contribute nothing;
  anything else (crossed or partial capture) is rejected.
- output color 1: a puck whose hole is the whole cross-section inserts the
  input knot word; everything else that is recognizable contributes nothing.

Contributions multiply in time order (start, end, index). Mufflers whose time
interiors overlap are forced by the continuity constraint to contribute
commuting letters, and time-separated mufflers stack in time order no matter
which representative order the diagram carries, because the re-embeddings have
essentially disjoint supports and commute as maps.
"""
from __future__ import annotations

from typing import Sequence

from .diagrams import (
    InfectionDiagram,
    Muffler,
    canonicalize,
    check_constraint,
    stacking_element,
)
from .diskforest import DiskRelation
from .linkmonoid import (
    GeneratorAlphabet,
    LinkWord,
    equals,
    in_S2_0,
    link2_word,
    mul,
    trivial_word,
)


def hole_semantics(d: InfectionDiagram, k: int) -> tuple[frozenset[int], ...]:
    """Per hole of muffler k: which marked strand tubes it captures."""
    m = d.mufflers[k - 1]
    marks = d.marked()
    out = []
    for h in m.holes:
        captured = frozenset(
            j
            for j, mk in enumerate(marks, start=1)
            if d.forest.relation(mk, h)
            in (DiskRelation.EQUAL, DiskRelation.STRICTLY_INSIDE)
        )
        out.append(captured)
    return tuple(out)


def classify_muffler(d: InfectionDiagram, k: int) -> str:
    """'insert' | 'splitA' | 'splitB' | 'cable' | 'trivial', or raise."""
    m = d.mufflers[k - 1]
    sem = hole_semantics(d, k)
    if d.output_color == 1:
        if m.color == 1:
            return "insert" if sem[0] == {1} else "trivial"
        if all(not s for s in sem):
            return "trivial"
        raise ValueError(f"muffler {k}: holes capture strands unrecognizably")
    # output color 2
    if m.color == 1:
        s = sem[0]
        if not s:
            return "trivial"
        if s == {1}:
            return "splitA"
        if s == {2}:
            return "splitB"
        if s == {1, 2}:
            return "cable"
        raise ValueError(f"muffler {k}: unrecognizable capture {sorted(s)}")
    if m.color == 2:
        if sem == (frozenset({1}), frozenset({2})):
            return "insert"
        if sem == (frozenset(), frozenset()):
            return "trivial"
        raise ValueError(f"muffler {k}: holes must capture the tubes in order or not at all")
    if all(not s for s in sem):
        return "trivial"
    raise ValueError(f"muffler {k}: color-{m.color} captures have no word semantics")


def _contribution(d: InfectionDiagram, k: int, link: LinkWord) -> LinkWord:
    kind = classify_muffler(d, k)
    alph = link.alphabet
    if kind == "trivial":
        return trivial_word(alph, d.output_color)
    if kind == "insert":
        return link
    letter_kind = {"splitA": "SplitA", "splitB": "SplitB", "cable": "Cable"}[kind]
    if link.color != 1:
        raise ValueError(f"muffler {k} expects a knot word")
    letters = [alph.central_letter(letter_kind, prime) for prime in link.knots]
    return link2_word(alph, central=letters)


def act(
    d: InfectionDiagram,
    links: Sequence[LinkWord],
    alph: GeneratorAlphabet | None = None,
) -> LinkWord:
    """Insert the link words into the mufflers; the resulting word."""
    if d.output_color not in (1, 2):
        raise ValueError(f"action is defined for output colors 1 and 2, not {d.output_color}")
    if len(links) != d.arity:
        raise ValueError(f"{d.arity} mufflers but {len(links)} links")
    for c, w in zip(d.colors, links):
        if w.color != c:
            raise ValueError(f"link color {w.color} does not match input color {c}")
    if alph is None:
        if not links:
            raise ValueError("an alphabet is needed for the empty action")
        alph = links[0].alphabet
    order = sorted(
        range(1, d.arity + 1),
        key=lambda k: (
            d.mufflers[k - 1].time.start,
            d.mufflers[k - 1].time.end,
            k,
        ),
    )
    out = trivial_word(alph, d.output_color)
    for k in order:
        out = mul(out, _contribution(d, k, links[k - 1]))
    return out


def swap_times(d: InfectionDiagram, i: int, k: int) -> InfectionDiagram:
    """Exchange the time intervals of mufflers i and k, keeping everything else."""
    if not (1 <= i <= d.arity and 1 <= k <= d.arity) or i == k:
        raise ValueError(f"bad muffler pair: {i}, {k}")
    ms = list(d.mufflers)
    mi, mk = ms[i - 1], ms[k - 1]
    ms[i - 1] = Muffler(mi.color, mk.time, mi.outer, mi.holes)
    ms[k - 1] = Muffler(mk.color, mi.time, mk.outer, mk.holes)
    swapped = InfectionDiagram(d.colors, d.output_color, d.forest, tuple(ms), d.order)
    bad = check_constraint(swapped)
    if bad is not None:
        raise ValueError(f"time swap breaks the continuity constraint at {bad}")
    return canonicalize(swapped)


def verify_comm_swap(
    d: InfectionDiagram,
    i: int,
    k: int,
    links: Sequence[LinkWord],
    alph: GeneratorAlphabet | None = None,
) -> bool:
    """Whether exchanging the time slots of mufflers i and k leaves the word fixed."""
    for idx in (i, k):
        classify_muffler(d, idx)  # reject unrecognizable pucks up front
    return equals(act(d, links, alph), act(swap_times(d, i, k), links, alph))


def decompose_S2(w: LinkWord) -> tuple[InfectionDiagram, list[LinkWord]]:
    """A twist-free non-central word as a canonical stacking of its primes.

    Returns the stacking diagram with equal slots in index order plus the body
    letters as singleton words; acting recovers the word.
    """
    if not in_S2_0(w):
        raise ValueError("decomposition needs a twist-free, linking-zero non-central word")
    factors = [link2_word(w.alphabet, body=[x]) for x in w.body]
    return stacking_element(len(w.body)), factors
