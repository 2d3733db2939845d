"""Trivial-core infection diagrams: the computable cylinder model.

A diagram of signature (c_1, .., c_n; c) is the trivial fat c-string link
together with n product-shaped mufflers, each a time interval (an increasing
affine self-map of [0, 1]) times a cross-section: one outer disk and c_k hole
disks in the diagram's shared DiskForest. The order field says which muffler
re-embeds first when two of them meet; only the relative order of meeting
pairs is meaningful and the stored representative is the lexicographically
least one.

Continuity constraint
---------------------
A muffler's solid part at an interior time must not touch anything that acts
before it. For product mufflers over a strict nesting forest this is decidable
pairwise: when i acts before k, require one of

  (a) outer disks disjoint,
  (b) outer of i inside (or equal to) some hole of k,
  (c) the time interval of i misses the open time interval of k.

Case analysis behind the rule: the solid of k is int(T_k) x (O_k minus the
open holes). The closure of the i-part splits as cl(T_i \\ T_k) x O_i union
(T_i n T_k) x cl(O_i \\ holes_k). The first term never meets int(T_k) in time,
so only (T_i n int T_k) x (cl(O_i \\ holes_k) n (O_k \\ open holes_k)) can be
nonempty; the radial factor is empty exactly when O_i avoids O_k or sits
inside a hole (flush boundaries allowed, which is what the identity element
needs). The acceptance suite re-checks this against an exact set-theoretic
evaluation on concrete interval realizations.

Color 1 is the splicing case: the trivial 1-strand tube is the whole
cylinder, so a color-1 muffler's hole is its outer disk and its solid part is
only the round boundary.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cubes import AffineMap1, IDENTITY_MAP, affine_compose, interiors_overlap, intervals_touch
from .diskforest import DiskForest, DiskRelation, graft, standard_forest
from .perm import (
    BlockStructure,
    Permutation,
    canonical_order,
    compose as perm_compose,
    identity,
    inverse,
)


@dataclass(frozen=True)
class Muffler:
    """One re-embedding slot: a color, a time interval, and cross-section disks."""

    color: int
    time: AffineMap1
    outer: str
    holes: tuple[str, ...]

    def __post_init__(self):
        if self.color < 1:
            raise ValueError(f"color must be positive, got {self.color}")
        if len(self.holes) != self.color:
            raise ValueError(
                f"color {self.color} muffler needs {self.color} holes, got {len(self.holes)}"
            )


@dataclass(frozen=True, eq=False)
class InfectionDiagram:
    colors: tuple[int, ...]
    output_color: int
    forest: DiskForest
    mufflers: tuple[Muffler, ...]
    order: Permutation
    canonical: bool = field(default=False)

    def __post_init__(self):
        if len(self.colors) != len(self.mufflers):
            raise ValueError(
                f"{len(self.colors)} colors vs {len(self.mufflers)} mufflers"
            )
        if self.order.n != len(self.mufflers):
            raise ValueError(
                f"order degree {self.order.n} vs {len(self.mufflers)} mufflers"
            )
        for want, m in zip(self.colors, self.mufflers):
            if m.color != want:
                raise ValueError(f"muffler color {m.color} vs signature color {want}")
        report = validate_structure(self)
        if report is not None:
            raise ValueError(report)

    @property
    def arity(self) -> int:
        return len(self.mufflers)

    def marked(self) -> tuple[str, ...]:
        return self.forest.marked_disks(self.output_color)

    def __eq__(self, other):
        if not isinstance(other, InfectionDiagram):
            return NotImplemented
        return canonical_key(self) == canonical_key(other)

    def __hash__(self):
        return hash(canonical_key(self))

    def __repr__(self):
        sig = ",".join(map(str, self.colors))
        return f"InfectionDiagram(({sig};{self.output_color}), {len(self.mufflers)} mufflers)"


def validate_structure(d: InfectionDiagram) -> str | None:
    """Cross-section sanity: holes sit in outers, markers stay tight tubes."""
    f = d.forest
    try:
        d.marked()
    except ValueError:
        return f"forest lacks marked disks for color {d.output_color}"
    for idx, m in enumerate(d.mufflers, start=1):
        if m.outer not in f.parent:
            return f"muffler {idx}: unknown outer {m.outer!r}"
        for h in m.holes:
            if h not in f.parent:
                return f"muffler {idx}: unknown hole {h!r}"
        if m.color == 1:
            if m.holes != (m.outer,):
                return f"muffler {idx}: a color-1 hole is its outer disk"
        else:
            for h in m.holes:
                if f.relation(h, m.outer) is not DiskRelation.STRICTLY_INSIDE:
                    return f"muffler {idx}: hole {h!r} not strictly inside {m.outer!r}"
            for a in range(len(m.holes)):
                for b in range(a + 1, len(m.holes)):
                    if f.relation(m.holes[a], m.holes[b]) is not DiskRelation.DISJOINT:
                        return f"muffler {idx}: holes {m.holes[a]!r}, {m.holes[b]!r} overlap"
    return None


# -- equivalence -----------------------------------------------------------


def images_intersect(d: InfectionDiagram, i: int, k: int) -> bool:
    """Closed time intervals meet and the outer disks are not disjoint."""
    if not (1 <= i <= d.arity and 1 <= k <= d.arity):
        raise ValueError(f"muffler index out of range: {i}, {k}")
    mi, mk = d.mufflers[i - 1], d.mufflers[k - 1]
    if not intervals_touch(mi.time, mk.time):
        return False
    return d.forest.relation(mi.outer, mk.outer) is not DiskRelation.DISJOINT


def interacting_pairs(d: InfectionDiagram) -> set[tuple[int, int]]:
    return {
        (i, k)
        for i in range(1, d.arity + 1)
        for k in range(i + 1, d.arity + 1)
        if images_intersect(d, i, k)
    }


def check_constraint(d: InfectionDiagram) -> tuple[int, int] | None:
    """First ordered pair violating the continuity constraint, or None."""
    pos = inverse(d.order)
    f = d.forest
    for i in range(1, d.arity + 1):
        for k in range(1, d.arity + 1):
            if i == k or pos(i) >= pos(k):
                continue
            mi, mk = d.mufflers[i - 1], d.mufflers[k - 1]
            if f.relation(mi.outer, mk.outer) is DiskRelation.DISJOINT:
                continue
            if any(f.inside_or_equal(mi.outer, h) for h in mk.holes):
                continue
            # clause (c): the closed T_i misses the open T_k
            if mi.time.end <= mk.time.start or mi.time.start >= mk.time.end:
                continue
            return (i, k)
    return None


def canonicalize(d: InfectionDiagram) -> InfectionDiagram:
    """Least order representative, pruned forest, deterministic node names."""
    if d.canonical:
        return d
    order = canonical_order(d.order, interacting_pairs(d))
    keep = {d.forest.root}
    keep.update(n for ms in d.forest.marked.values() for n in ms)
    for m in d.mufflers:
        keep.add(m.outer)
        keep.update(m.holes)
    names = _canonical_names(d, keep)
    parent: dict[str, str | None] = {}
    for node in keep:
        if node == d.forest.root:
            parent[names[node]] = None
            continue
        anc = d.forest.parent[node]
        while anc is not None and anc not in keep:
            anc = d.forest.parent[anc]
        parent[names[node]] = names[anc]
    marked = {
        c: tuple(names[n] for n in ms) for c, ms in d.forest.marked.items()
    }
    forest = DiskForest(names[d.forest.root], parent, marked)
    mufflers = tuple(
        Muffler(m.color, m.time, names[m.outer], tuple(names[h] for h in m.holes))
        for m in d.mufflers
    )
    return InfectionDiagram(d.colors, d.output_color, forest, mufflers, order, canonical=True)


def _node_keys(d: InfectionDiagram, keep: set[str]) -> dict[str, tuple]:
    refs: dict[str, list[tuple[int, int, int]]] = {n: [] for n in keep}
    for idx, m in enumerate(d.mufflers, start=1):
        refs[m.outer].append((idx, 0, 0))
        for j, h in enumerate(m.holes, start=1):
            refs[h].append((idx, 1, j))
    marker_of: dict[str, tuple[int, int]] = {}
    for c, ms in sorted(d.forest.marked.items()):
        for j, n in enumerate(ms, start=1):
            marker_of.setdefault(n, (c, j))
    keys: dict[str, tuple] = {}
    for n in keep:
        if n == d.forest.root:
            keys[n] = (0, (), ())
        elif n in marker_of:
            keys[n] = (1, marker_of[n], tuple(sorted(refs[n])))
        else:
            keys[n] = (2, (), tuple(sorted(refs[n])))
    return keys


def _canonical_names(d: InfectionDiagram, keep: set[str]) -> dict[str, str]:
    keys = _node_keys(d, keep)
    names: dict[str, str] = {}
    plain = []
    for n in keep:
        rank = keys[n][0]
        if rank == 0:
            names[n] = "r"
        elif rank == 1:
            c, j = keys[n][1]
            names[n] = f"m{j}" if len(d.forest.marked) == 1 else f"c{c}m{j}"
        else:
            plain.append(n)
    for i, n in enumerate(sorted(plain, key=lambda v: keys[v]), start=1):
        names[n] = f"d{i}"
    return names


def canonical_key(d: InfectionDiagram) -> tuple:
    """Hashable invariant deciding diagram equality.

    Node pairs whose referencing mufflers never overlap in open time (markers
    and the root are always present) keep only nested-versus-disjoint; for
    such pairs the nesting orientation depends on the representative, not the
    diagram.
    """
    c = canonicalize(d)
    keep = set(c.forest.parent)
    keys = _node_keys(c, keep)
    spans: dict[str, list[AffineMap1] | None] = {n: [] for n in keep}
    spans[c.forest.root] = None  # None means the full interval
    for ms in c.forest.marked.values():
        for n in ms:
            spans[n] = None
    for m in c.mufflers:
        for n in (m.outer, *m.holes):
            if spans[n] is not None:
                spans[n].append(m.time)

    def coexist(a: str, b: str) -> bool:
        sa, sb = spans[a], spans[b]
        if sa is None or sb is None:
            return True
        return any(interiors_overlap(x, y) for x in sa for y in sb)

    nodes = sorted(keep, key=lambda n: keys[n])
    rels = []
    for x in range(len(nodes)):
        for y in range(x + 1, len(nodes)):
            a, b = nodes[x], nodes[y]
            rel = c.forest.relation(a, b)
            if coexist(a, b):
                tag = rel.value
            else:
                tag = "disjoint" if rel is DiskRelation.DISJOINT else "near"
            rels.append((keys[a], keys[b], tag))
    mufflers = tuple(
        (
            m.color,
            (m.time.scale, m.time.offset),
            keys[m.outer],
            tuple(keys[h] for h in m.holes),
        )
        for m in c.mufflers
    )
    marked = tuple(
        (color, tuple(keys[n] for n in ms)) for color, ms in sorted(c.forest.marked.items())
    )
    return (c.colors, c.output_color, mufflers, c.order.images, marked, tuple(rels))


# -- structure maps --------------------------------------------------------


def compose_tau(rho: Permutation, sigmas: Sequence[Permutation], sizes: BlockStructure) -> Permutation:
    """Order of a composite: outer order rho, block a internally ordered by sigmas[a].

    Positions run through the blocks in the order rho picks them; the slot at
    position q of block a holds muffler (a, sigmas[a](q)) in the flattened
    lexicographic indexing.
    """
    n = rho.n
    if len(sigmas) != n or len(sizes.sizes) != n:
        raise ValueError(
            f"arity mismatch: rho degree {n}, {len(sigmas)} inner orders, {len(sizes.sizes)} sizes"
        )
    for a, s in enumerate(sigmas, start=1):
        if s.n != sizes.sizes[a - 1]:
            raise ValueError(f"inner order {a} has degree {s.n}, size says {sizes.sizes[a - 1]}")
    images: list[int] = []
    for p in range(1, n + 1):
        a = rho(p)
        off = sizes.offset(a)
        for q in range(1, sizes.sizes[a - 1] + 1):
            images.append(off + sigmas[a - 1](q))
    return Permutation(tuple(images))


def closed_formula_tau(rho: Permutation, sigmas: Sequence[Permutation], sizes: BlockStructure) -> Permutation:
    """The closed formula variant with upper summation limit rho(a).

    Kept separate because it disagrees with compose_tau whenever rho is not an
    involution: the acceptance suite reports the first divergence instead of
    papering over it. Raises ValueError when the formula fails to produce a
    permutation at all.
    """
    n = rho.n
    inv_images = [0] * sizes.total
    for a in range(1, n + 1):
        shift = sum(sizes.sizes[rho(i) - 1] for i in range(1, rho(a)))
        for b in range(1, sizes.sizes[a - 1] + 1):
            inv_images[sizes.offset(a) + b - 1] = inverse(sigmas[a - 1])(b) + shift
    return inverse(Permutation(tuple(inv_images)))


def compose(outer: InfectionDiagram, inners: Sequence[InfectionDiagram]) -> InfectionDiagram:
    """Plug inner diagram a into muffler a of outer.

    The composite keeps the trivial core, so muffler (a, b) is just the outer
    muffler a applied to inner muffler b: times compose affinely and the inner
    cross-section grafts through (outer_a, holes_a).
    """
    if len(inners) != outer.arity:
        raise ValueError(f"expected {outer.arity} inner diagrams, got {len(inners)}")
    for a, inner in enumerate(inners, start=1):
        if inner.output_color != outer.colors[a - 1]:
            raise ValueError(
                f"slot {a} wants color {outer.colors[a - 1]}, inner has {inner.output_color}"
            )
    forest = outer.forest
    maps: list[dict[str, str]] = []
    for a, inner in enumerate(inners, start=1):
        m = outer.mufflers[a - 1]
        forest, phi = graft(forest, m.outer, m.holes, inner.forest, m.color)
        maps.append(phi)
    mufflers: list[Muffler] = []
    colors: list[int] = []
    for a, inner in enumerate(inners, start=1):
        m = outer.mufflers[a - 1]
        phi = maps[a - 1]
        for small in inner.mufflers:
            mufflers.append(
                Muffler(
                    small.color,
                    affine_compose(m.time, small.time),
                    phi[small.outer],
                    tuple(phi[h] for h in small.holes),
                )
            )
            colors.append(small.color)
    sizes = BlockStructure(tuple(inner.arity for inner in inners))
    order = compose_tau(outer.order, [inner.order for inner in inners], sizes)
    result = InfectionDiagram(
        tuple(colors), outer.output_color, forest, tuple(mufflers), order
    )
    bad = check_constraint(result)
    if bad is not None:
        raise AssertionError(f"composite violates the continuity constraint at {bad}")
    return canonicalize(result)


def act_symmetric(d: InfectionDiagram, p: Permutation) -> InfectionDiagram:
    """Relabel mufflers: slot i of the result holds muffler p(i)."""
    if p.n != d.arity:
        raise ValueError(f"arity mismatch: {p.n} vs {d.arity}")
    mufflers = tuple(d.mufflers[p(i) - 1] for i in range(1, p.n + 1))
    colors = tuple(d.colors[p(i) - 1] for i in range(1, p.n + 1))
    order = perm_compose(inverse(p), d.order)
    return canonicalize(
        InfectionDiagram(colors, d.output_color, d.forest, mufflers, order)
    )


# -- standard elements -----------------------------------------------------


def trivial_diagram(color: int) -> InfectionDiagram:
    """The zero-muffler diagram: the trivial link as a constant."""
    return InfectionDiagram((), color, standard_forest(color), (), identity(0), canonical=True)


def identity_diagram(color: int) -> InfectionDiagram:
    """One full muffler at the identity time interval."""
    f = standard_forest(color)
    m = Muffler(color, IDENTITY_MAP, f.root, f.marked_disks(color))
    return canonicalize(InfectionDiagram((color,), color, f, (m,), identity(1)))


def stacking_diagram(times: Sequence[AffineMap1], color: int) -> InfectionDiagram:
    """Full-cross-section mufflers at the given time slots, identity order."""
    f = standard_forest(color)
    marks = f.marked_disks(color)
    mufflers = tuple(Muffler(color, t, f.root, marks) for t in times)
    d = InfectionDiagram((color,) * len(times), color, f, mufflers, identity(len(times)))
    bad = check_constraint(d)
    if bad is not None:
        raise ValueError(f"time slots {bad} overlap in their interiors")
    return canonicalize(d)


def equal_slots(n: int) -> tuple[AffineMap1, ...]:
    """n equal-width consecutive time slots covering [0, 1]."""
    if n == 0:
        return ()
    w = Fraction(1, n)
    return tuple(AffineMap1(w, w * i) for i in range(n))


def stacking_element(n: int, color: int = 2) -> InfectionDiagram:
    """The canonical stacking diagram with n equal slots in index order."""
    return stacking_diagram(equal_slots(n), color)


def make_diagram(
    colors: Sequence[int],
    output_color: int,
    forest: DiskForest,
    mufflers: Sequence[Muffler],
    order: Permutation | None = None,
) -> InfectionDiagram:
    """Validating constructor: checks the continuity constraint, canonicalizes."""
    d = InfectionDiagram(
        tuple(colors),
        output_color,
        forest,
        tuple(mufflers),
        order if order is not None else identity(len(mufflers)),
    )
    bad = check_constraint(d)
    if bad is not None:
        raise ValueError(f"continuity constraint fails for ordered pair {bad}")
    return canonicalize(d)
