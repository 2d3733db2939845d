"""Overlapping intervals with an ordering, up to reordering of non-touching pairs.

An element is n interval maps (images may overlap freely) plus a permutation
saying which interval sits above which when two of them do meet. Two elements
are the same operation exactly when the intervals agree and the orders agree on
every pair of intervals whose closed images intersect; the canonical
representative is the lexicographically least such order.

"Intersect" includes single-point touching: the maps are maps of closed
intervals, and the identity axiom needs flush composites to count as
interacting.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cubes import AffineMap1, affine_compose, intervals_touch
from .perm import (
    BlockStructure,
    Permutation,
    canonical_order,
    identity,
)
from .diagrams import compose_tau


def intersects(a: AffineMap1, b: AffineMap1) -> bool:
    """Closed images share a point (endpoint touching counts)."""
    return intervals_touch(a, b)


@dataclass(frozen=True)
class OverlapElement:
    intervals: tuple[AffineMap1, ...]
    order: Permutation
    canonical: bool = False

    def __post_init__(self):
        if self.order.n != len(self.intervals):
            raise ValueError(
                f"order degree {self.order.n} vs {len(self.intervals)} intervals"
            )

    @property
    def arity(self) -> int:
        return len(self.intervals)


def make(intervals: Sequence[AffineMap1], order: Permutation) -> OverlapElement:
    """Build and canonicalize in one go."""
    return canonicalize(OverlapElement(tuple(intervals), order))


def interacting_pairs(intervals: Sequence[AffineMap1]) -> set[tuple[int, int]]:
    n = len(intervals)
    return {
        (i, k)
        for i in range(1, n + 1)
        for k in range(i + 1, n + 1)
        if intersects(intervals[i - 1], intervals[k - 1])
    }


def canonicalize(e: OverlapElement) -> OverlapElement:
    """Greedy min-index topological sort of the order constraints on touching pairs."""
    if e.canonical:
        return e
    order = canonical_order(e.order, interacting_pairs(e.intervals))
    return OverlapElement(e.intervals, order, canonical=True)


def equivalent(e1: OverlapElement, e2: OverlapElement) -> bool:
    if e1.arity != e2.arity:
        raise ValueError(f"arity mismatch: {e1.arity} vs {e2.arity}")
    if e1.intervals != e2.intervals:
        return False
    return canonicalize(e1).order == canonicalize(e2).order


def identity_element() -> OverlapElement:
    from .cubes import IDENTITY_MAP

    return make((IDENTITY_MAP,), identity(1))


def compose_overlap(outer: OverlapElement, inners: Sequence[OverlapElement]) -> OverlapElement:
    """Substitute: intervals pass through the outer maps, orders combine via tau."""
    if len(inners) != outer.arity:
        raise ValueError(f"expected {outer.arity} inner elements, got {len(inners)}")
    intervals: list[AffineMap1] = []
    for big, inner in zip(outer.intervals, inners):
        intervals.extend(affine_compose(big, small) for small in inner.intervals)
    sizes = BlockStructure(tuple(inner.arity for inner in inners))
    order = compose_tau(outer.order, [inner.order for inner in inners], sizes)
    return make(intervals, order)


def act_symmetric(e: OverlapElement, p: Permutation) -> OverlapElement:
    """Relabel: new interval at slot i is old interval p(i), order conjugated."""
    if p.n != e.arity:
        raise ValueError(f"arity mismatch: {p.n} vs {e.arity}")
    from .perm import compose, inverse

    intervals = tuple(e.intervals[p(i) - 1] for i in range(1, p.n + 1))
    return make(intervals, compose(inverse(p), e.order))
