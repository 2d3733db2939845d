"""Nesting forests of disks: the combinatorial cross-section geometry.

Disks carry no coordinates. A configuration of disks in the unit disk is
remembered only through its strict-nesting tree (root = the ambient disk) plus,
per color, an ordered tuple of marked disks standing for the standard strand
tubes. Two disks are either equal, strictly nested one way or the other, or
disjoint; there is no partial overlap and no boundary tangency between distinct
disks, except that operations may identify a disk with a marked disk or with
the root (the flush cases the identity elements need).

Color 1 is special: its single marked disk IS the root, because the trivial
1-strand tube fills the whole cylinder. Marked disks of colors >= 2 are kept
childless (nothing sits strictly inside a strand tube), which `graft`
preserves.
"""
from __future__ import annotations

from enum import Enum
from typing import Mapping, Sequence


class DiskRelation(Enum):
    EQUAL = "equal"
    STRICTLY_INSIDE = "inside"
    STRICTLY_CONTAINS = "contains"
    DISJOINT = "disjoint"


class DiskForest:
    """Immutable rooted nesting tree with per-color marked disks.

    parent maps each node to its parent (root maps to None). All mutating
    operations return new forests.
    """

    __slots__ = ("root", "parent", "marked", "_depth")

    def __init__(
        self,
        root: str,
        parent: Mapping[str, str | None],
        marked: Mapping[int, tuple[str, ...]],
    ):
        self.root = root
        self.parent = dict(parent)
        self.marked = {c: tuple(ms) for c, ms in marked.items()}
        report = self._check()
        if report is not None:
            raise ValueError(report)
        depth: dict[str, int] = {root: 0}
        # parents may come in any order; resolve depths by walking up
        for node in self.parent:
            self._depth_of(node, depth)
        self._depth = depth

    def _depth_of(self, node: str, depth: dict[str, int]) -> int:
        if node in depth:
            return depth[node]
        d = self._depth_of(self.parent[node], depth) + 1
        depth[node] = d
        return d

    def _check(self) -> str | None:
        if self.root not in self.parent or self.parent[self.root] is not None:
            return f"root {self.root!r} must be present with no parent"
        for node, par in self.parent.items():
            if node == self.root:
                continue
            if par not in self.parent:
                return f"parent {par!r} of {node!r} is not a node"
        # acyclicity: walk up from every node with a step bound
        bound = len(self.parent)
        for node in self.parent:
            cur, steps = node, 0
            while cur is not None:
                cur = self.parent[cur]
                steps += 1
                if steps > bound:
                    return f"parent chain from {node!r} does not reach the root"
        for color, ms in self.marked.items():
            if len(set(ms)) != len(ms):
                return f"marked disks for color {color} are not distinct"
            for m in ms:
                if m not in self.parent:
                    return f"marked disk {m!r} for color {color} is not a node"
            for i in range(len(ms)):
                for k in range(i + 1, len(ms)):
                    if self.relation(ms[i], ms[k]) is not DiskRelation.DISJOINT:
                        return (
                            f"marked disks {ms[i]!r} and {ms[k]!r} of color "
                            f"{color} are nested"
                        )
        return None

    # -- queries -----------------------------------------------------------

    @property
    def nodes(self) -> list[str]:
        return list(self.parent)

    def depth(self, node: str) -> int:
        return self._depth[node]

    def children(self, node: str) -> list[str]:
        return [v for v, p in self.parent.items() if p == node]

    def is_ancestor(self, a: str, b: str) -> bool:
        """True iff a is a strict ancestor of b."""
        cur = self.parent[b]
        while cur is not None:
            if cur == a:
                return True
            cur = self.parent[cur]
        return False

    def relation(self, a: str, b: str) -> DiskRelation:
        if a not in self.parent or b not in self.parent:
            missing = a if a not in self.parent else b
            raise ValueError(f"unknown node {missing!r}")
        if a == b:
            return DiskRelation.EQUAL
        if self.is_ancestor(b, a):
            return DiskRelation.STRICTLY_INSIDE
        if self.is_ancestor(a, b):
            return DiskRelation.STRICTLY_CONTAINS
        return DiskRelation.DISJOINT

    def inside_or_equal(self, a: str, b: str) -> bool:
        return self.relation(a, b) in (DiskRelation.EQUAL, DiskRelation.STRICTLY_INSIDE)

    def marked_disks(self, color: int) -> tuple[str, ...]:
        try:
            return self.marked[color]
        except KeyError:
            raise ValueError(f"no marked disks for color {color}") from None

    def lowest_common_strict_ancestor(self, targets: Sequence[str]) -> str:
        """Deepest node strictly containing every target."""
        chains = []
        for t in targets:
            chain = []
            cur = self.parent[t]
            while cur is not None:
                chain.append(cur)
                cur = self.parent[cur]
            chains.append(chain)
        common = set(chains[0]).intersection(*map(set, chains[1:])) if chains else set()
        if not common:
            raise ValueError("targets have no common strict ancestor")
        return max(common, key=lambda v: self._depth[v])

    def __eq__(self, other):
        if not isinstance(other, DiskForest):
            return NotImplemented
        return (
            self.root == other.root
            and self.parent == other.parent
            and self.marked == other.marked
        )

    def __hash__(self):
        return hash(
            (
                self.root,
                tuple(sorted(self.parent.items(), key=lambda kv: kv[0])),
                tuple(sorted(self.marked.items())),
            )
        )

    def __repr__(self):
        return f"DiskForest(root={self.root!r}, nodes={sorted(self.parent)})"

    # -- construction ------------------------------------------------------

    def add_disk(self, name: str, parent: str) -> "DiskForest":
        if name in self.parent:
            raise ValueError(f"node {name!r} already present")
        new = dict(self.parent)
        new[name] = parent
        return DiskForest(self.root, new, self.marked)

    def fresh_name(self, taken: set[str] | None = None) -> str:
        used = set(self.parent) | (taken or set())
        i = len(used)
        while f"x{i}" in used:
            i += 1
        return f"x{i}"


def standard_forest(color: int) -> DiskForest:
    """Root plus the standard strand tubes: root children m1..mc, or the root for color 1."""
    if color < 1:
        raise ValueError(f"color must be positive, got {color}")
    if color == 1:
        return DiskForest("r", {"r": None}, {1: ("r",)})
    parent: dict[str, str | None] = {"r": None}
    marks = tuple(f"m{i}" for i in range(1, color + 1))
    for m in marks:
        parent[m] = "r"
    return DiskForest("r", parent, {color: marks})


def validate(f: DiskForest) -> str | None:
    """Re-run the structural checks; None when everything holds."""
    return f._check()


def graft(
    host: DiskForest,
    outer: str,
    holes: Sequence[str],
    guest: DiskForest,
    guest_color: int,
) -> tuple[DiskForest, dict[str, str]]:
    """Map the guest forest through an embedding sending its marked disks onto holes.

    The guest root goes onto outer and marked disk j onto holes[j]. Every other
    guest node becomes a fresh node. Nodes sitting inside a marked disk land
    under the matching hole; nodes disjoint from all marked disks become fresh
    subtrees disjoint from all holes; nodes strictly containing marked disks
    become wrapper nodes inserted tight, i.e. as a child of the lowest host node
    strictly containing the corresponding holes, re-parenting exactly the
    hole-bearing children beneath them. Guest nesting is preserved verbatim.

    Returns the new forest plus the guest-to-host node map.
    """
    marks = guest.marked_disks(guest_color)
    holes = list(holes)
    if len(holes) != guest_color:
        raise ValueError(f"need {guest_color} holes, got {len(holes)}")
    for h in holes:
        if h not in host.parent:
            raise ValueError(f"hole {h!r} is not a host node")
    if outer not in host.parent:
        raise ValueError(f"outer {outer!r} is not a host node")
    for i in range(len(holes)):
        for k in range(i + 1, len(holes)):
            if host.relation(holes[i], holes[k]) is not DiskRelation.DISJOINT:
                raise ValueError(f"holes {holes[i]!r}, {holes[k]!r} are not disjoint")
    for h in holes:
        rel = host.relation(h, outer)
        if rel is DiskRelation.EQUAL:
            if not (guest_color == 1 and marks[0] == guest.root):
                raise ValueError("hole equal to outer is only the whole-root case")
        elif rel is not DiskRelation.STRICTLY_INSIDE:
            raise ValueError(f"hole {h!r} not inside outer {outer!r}")

    phi: dict[str, str] = {guest.root: outer}
    for j, m in enumerate(marks):
        phi[m] = holes[j]

    parent = dict(host.parent)
    taken = set(parent)

    def fresh() -> str:
        i = len(taken)
        while f"x{i}" in taken:
            i += 1
        name = f"x{i}"
        taken.add(name)
        return name

    def subtree_has(node: str, targets: set[str]) -> bool:
        stack = [node]
        kids: dict[str, list[str]] = {}
        for v, p in parent.items():
            kids.setdefault(p, []).append(v)
        while stack:
            cur = stack.pop()
            if cur in targets:
                return True
            stack.extend(kids.get(cur, ()))
        return False

    # top-down over proper guest nodes, deterministic order
    pending = sorted(
        (v for v in guest.parent if v != guest.root and v not in marks),
        key=lambda v: (guest.depth(v), v),
    )
    for v in pending:
        wrapped = [j for j, m in enumerate(marks) if guest.is_ancestor(v, m)]
        name = fresh()
        if wrapped:
            targets = {holes[j] for j in wrapped}
            snapshot = DiskForest(host.root, parent, {})
            anchor = snapshot.lowest_common_strict_ancestor(sorted(targets))
            moving = [
                c
                for c in snapshot.children(anchor)
                if subtree_has(c, targets)
            ]
            parent[name] = anchor
            for c in moving:
                parent[c] = name
        else:
            parent[name] = phi[guest.parent[v]]
        phi[v] = name

    return DiskForest(host.root, parent, host.marked), phi
