"""Exact little j-cubes: increasing affine interval maps and tuples of cubes.

All coordinates are Fractions over the unit interval [0, 1]; equality of
elements is exact rational equality. Images of cubes are closed boxes and the
disjointness condition is on their interiors, so flush (shared-face) cubes are
fine.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .perm import Permutation


@dataclass(frozen=True)
class AffineMap1:
    """An increasing affine map t -> scale*t + offset with image inside [0, 1]."""

    scale: Fraction
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "scale", Fraction(self.scale))
        object.__setattr__(self, "offset", Fraction(self.offset))
        if self.scale <= 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        if self.offset < 0 or self.scale + self.offset > 1:
            raise ValueError(
                f"image [{self.offset}, {self.scale + self.offset}] leaves [0, 1]"
            )

    def __call__(self, t: Fraction) -> Fraction:
        return self.scale * t + self.offset

    @property
    def start(self) -> Fraction:
        return self.offset

    @property
    def end(self) -> Fraction:
        return self.scale + self.offset

    @staticmethod
    def from_interval(a, b) -> "AffineMap1":
        """The increasing affine map with image [a, b]."""
        a, b = Fraction(a), Fraction(b)
        return AffineMap1(b - a, a)

    def __repr__(self):
        return f"[{self.start},{self.end}]"


IDENTITY_MAP = AffineMap1(Fraction(1), Fraction(0))


def affine_compose(a: AffineMap1, b: AffineMap1) -> AffineMap1:
    """(a . b)(t) = a(b(t)), exactly."""
    return AffineMap1(a.scale * b.scale, a.scale * b.offset + a.offset)


def intervals_touch(a: AffineMap1, b: AffineMap1) -> bool:
    """Closed images share at least a point."""
    return a.start <= b.end and b.start <= a.end


def interiors_overlap(a: AffineMap1, b: AffineMap1) -> bool:
    """Open images share at least a point."""
    return a.start < b.end and b.start < a.end


@dataclass(frozen=True)
class LittleCube:
    """One axis-aligned affine embedding of the j-cube: one AffineMap1 per axis."""

    axes: tuple[AffineMap1, ...]

    @property
    def dim(self) -> int:
        return len(self.axes)

    def __repr__(self):
        return "cube" + repr(list(self.axes))


def identity_cube(j: int) -> LittleCube:
    return LittleCube((IDENTITY_MAP,) * j)


def cube_compose(a: LittleCube, b: LittleCube) -> LittleCube:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return LittleCube(tuple(affine_compose(x, y) for x, y in zip(a.axes, b.axes)))


def cubes_disjoint(a: LittleCube, b: LittleCube) -> bool:
    """Open boxes disjoint: disjoint open intervals along at least one axis."""
    return any(not interiors_overlap(x, y) for x, y in zip(a.axes, b.axes))


@dataclass(frozen=True)
class CubesElement:
    """An n-tuple of j-cubes with pairwise disjoint interiors."""

    dim: int
    cubes: tuple[LittleCube, ...]

    def __post_init__(self):
        report = validate(self)
        if report is not None:
            raise ValueError(report)

    @property
    def arity(self) -> int:
        return len(self.cubes)


def validate(e: CubesElement) -> str | None:
    """None if valid, else a description of the first violation."""
    for c in e.cubes:
        if c.dim != e.dim:
            return f"cube {c} has dimension {c.dim}, element says {e.dim}"
    for i in range(len(e.cubes)):
        for k in range(i + 1, len(e.cubes)):
            if not cubes_disjoint(e.cubes[i], e.cubes[k]):
                return f"cubes {i + 1} and {k + 1} have overlapping interiors"
    return None


def identity_element(j: int) -> CubesElement:
    return CubesElement(j, (identity_cube(j),))


def cubes_compose(outer: CubesElement, inners: Sequence[CubesElement]) -> CubesElement:
    """Substitute inner i into the i-th cube of outer, blocks concatenated in order."""
    if len(inners) != outer.arity:
        raise ValueError(f"expected {outer.arity} inner elements, got {len(inners)}")
    for inner in inners:
        if inner.dim != outer.dim:
            raise ValueError(f"dimension mismatch: {inner.dim} vs {outer.dim}")
    cubes: list[LittleCube] = []
    for big, inner in zip(outer.cubes, inners):
        cubes.extend(cube_compose(big, small) for small in inner.cubes)
    return CubesElement(outer.dim, tuple(cubes))


def act_symmetric(e: CubesElement, p: Permutation) -> CubesElement:
    """Relabel the cubes: new cube at slot i is the old cube p(i)."""
    if p.n != e.arity:
        raise ValueError(f"arity mismatch: {p.n} vs {e.arity}")
    return CubesElement(e.dim, tuple(e.cubes[p(i) - 1] for i in range(1, p.n + 1)))


def permute_list(p: Permutation, xs: Sequence) -> list:
    """Companion relabeling for the inner factors: out[i] = xs[p(i)]."""
    if p.n != len(xs):
        raise ValueError(f"arity mismatch: {p.n} vs {len(xs)}")
    return [xs[p(i) - 1] for i in range(1, p.n + 1)]


def c1_to_stacking(e: CubesElement, color: int):
    """Send a 1-dimensional element to the stacking diagram it parametrizes.

    Each interval becomes a full-cross-section muffler (outer = root, holes =
    the standard marked disks of the color) at that time slot, identity order.
    """
    from . import diagrams

    if e.dim != 1:
        raise ValueError("stacking needs 1-dimensional elements")
    return diagrams.stacking_diagram(tuple(c.axes[0] for c in e.cubes), color)
