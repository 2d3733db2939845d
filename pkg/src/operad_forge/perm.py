"""Finite permutations and block permutations.

Permutations are 1-indexed and stored in image form: ``images[i-1] = p(i)``.
This is the representation every other module builds on, so the conventions
are pinned here once:

- ``compose(p, q)`` is right-to-left: the result applies ``q`` first.
- ``apply_to_list(p, xs)`` pushes entries forward: ``result[p(i)] = xs[i]``.
- ``block_permutation(sigma, sizes)`` rearranges a concatenation of blocks
  ``B_1 .. B_n`` (of the given sizes) into ``B_{sigma^-1(1)} .. B_{sigma^-1(n)}``,
  preserving order inside each block.

The direction conventions are enforced by the symmetry-axiom tests in the
cubes module, which fail for any other combination.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..n} in image form.

    >>> p = Permutation((2, 1, 3))
    >>> p(1), p(2), p(3)
    (2, 1, 3)
    """

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {self.images}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise ValueError(f"argument {i} out of range 1..{self.n}")
        return self.images[i - 1]

    def __repr__(self):
        return f"perm{list(self.images)}"


def identity(n: int) -> Permutation:
    """The identity of S_n.

    >>> identity(3).images
    (1, 2, 3)
    """
    return Permutation(tuple(range(1, n + 1)))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.n
    for i, pi in enumerate(p.images, start=1):
        inv[pi - 1] = i
    return Permutation(tuple(inv))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """(p . q)(i) = p(q(i)); applies q first.

    >>> compose(Permutation((2, 1, 3)), Permutation((1, 3, 2))).images
    (2, 3, 1)
    """
    if p.n != q.n:
        raise ValueError(f"degree mismatch: {p.n} vs {q.n}")
    return Permutation(tuple(p.images[qi - 1] for qi in q.images))


def apply_to_list(p: Permutation, xs: Sequence) -> list:
    """Push entries forward: result[p(i)] = xs[i], 1-indexed.

    >>> apply_to_list(Permutation((2, 1)), ["a", "b"])
    ['b', 'a']
    """
    if len(xs) != p.n:
        raise ValueError(f"length mismatch: {len(xs)} items for degree {p.n}")
    out = [None] * p.n
    for i, x in enumerate(xs, start=1):
        out[p(i) - 1] = x
    return out


@dataclass(frozen=True)
class BlockStructure:
    """Sizes (k_1, .., k_n) partitioning 1..sum(k_i) into consecutive runs."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        if any(k < 0 for k in self.sizes):
            raise ValueError(f"negative block size in {self.sizes}")

    @property
    def total(self) -> int:
        return sum(self.sizes)

    def offset(self, i: int) -> int:
        """Number of slots strictly before block i (1-indexed)."""
        return sum(self.sizes[: i - 1])


def block_permutation(sigma: Permutation, blocks: BlockStructure) -> Permutation:
    """The element of S_total moving block B_i to slot sigma(i), order kept inside blocks.

    Equivalently apply_to_list(result, B_1 ++ .. ++ B_n) = B_{sigma^-1(1)} ++ .. ++ B_{sigma^-1(n)}.

    >>> swap = Permutation((2, 1))
    >>> block_permutation(swap, BlockStructure((2, 1))).images
    (2, 3, 1)
    """
    sizes = blocks.sizes
    if sigma.n != len(sizes):
        raise ValueError(f"size mismatch: degree {sigma.n} vs {len(sizes)} blocks")
    inv = inverse(sigma)
    # offset of result slot p = sizes of the blocks landing before it
    slot_offsets = []
    acc = 0
    for p in range(1, sigma.n + 1):
        slot_offsets.append(acc)
        acc += sizes[inv(p) - 1]
    images = [0] * blocks.total
    for i in range(1, sigma.n + 1):
        src = blocks.offset(i)
        dst = slot_offsets[sigma(i) - 1]
        for j in range(1, sizes[i - 1] + 1):
            images[src + j - 1] = dst + j
    return Permutation(tuple(images))


def direct_sum(parts: Sequence[Permutation]) -> Permutation:
    """The block-diagonal permutation acting as parts[i] inside block i.

    >>> direct_sum([Permutation((1,)), Permutation((2, 1))]).images
    (1, 3, 2)
    """
    images: list[int] = []
    off = 0
    for t in parts:
        images.extend(off + v for v in t.images)
        off += t.n
    return Permutation(tuple(images))


def all_permutations(n: int) -> Iterable[Permutation]:
    for images in itertools.permutations(range(1, n + 1)):
        yield Permutation(images)


def lex_least_order(n: int, must_precede: set[tuple[int, int]]) -> Permutation:
    """Lexicographically least linear extension of the given precedence pairs.

    must_precede holds pairs (i, k) meaning index i has to come before index k.
    Greedy minimum-index topological sort; raises on a cycle (which cannot arise
    from constraints induced by an actual linear order).
    """
    preds: dict[int, set[int]] = {i: set() for i in range(1, n + 1)}
    for i, k in must_precede:
        preds[k].add(i)
    placed: list[int] = []
    done: set[int] = set()
    while len(placed) < n:
        pick = next(
            (i for i in range(1, n + 1) if i not in done and preds[i] <= done),
            None,
        )
        if pick is None:
            raise ValueError("precedence constraints contain a cycle")
        placed.append(pick)
        done.add(pick)
    return Permutation(tuple(placed))


def order_constraints(sigma: Permutation, interacting: set[tuple[int, int]]) -> set[tuple[int, int]]:
    """Precedence pairs that sigma induces on the interacting index pairs.

    interacting holds unordered pairs as (i, k) with i < k.
    """
    pos = inverse(sigma)
    out = set()
    for i, k in interacting:
        if pos(i) < pos(k):
            out.add((i, k))
        else:
            out.add((k, i))
    return out


def canonical_order(sigma: Permutation, interacting: set[tuple[int, int]]) -> Permutation:
    """Least representative of sigma's class given which index pairs interact."""
    return lex_least_order(sigma.n, order_constraints(sigma, interacting))


def parse_perm(text: str) -> Permutation:
    """Parse the text form "perm[2,3,1]"."""
    s = text.strip()
    if not (s.startswith("perm[") and s.endswith("]")):
        raise ValueError(f"not a permutation literal: {text!r}")
    body = s[len("perm[") : -1].strip()
    if not body:
        return Permutation(())
    return Permutation(tuple(int(tok) for tok in body.split(",")))


def print_perm(p: Permutation) -> str:
    return "perm[" + ",".join(str(v) for v in p.images) + "]"
