"""Seeded random instances of all three operads and the law-checking harness.

Everything is driven by one random.Random(seed), so a fuzz run is a pure
function of (seed, ops, laws) and reports are byte-identical across runs.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Sequence

from . import action as action_mod
from . import cubes as cubes_mod
from . import diagrams as diagrams_mod
from . import linkmonoid as lm
from . import overlap as overlap_mod
from .cubes import AffineMap1, CubesElement, LittleCube
from .diagrams import InfectionDiagram, Muffler
from .diskforest import standard_forest
from .perm import (
    BlockStructure,
    Permutation,
    all_permutations,
    block_permutation,
    direct_sum,
)

GRID = 64

LAW_FAMILIES = ("assoc", "symm", "ident", "dagger", "action")


# -- random building blocks --------------------------------------------------


def rand_fraction(rng: random.Random, lo: Fraction, hi: Fraction) -> Fraction:
    """A 1/GRID grid point in [lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)
    a = int(lo * GRID) if lo * GRID == int(lo * GRID) else int(lo * GRID) + 1
    b = int(hi * GRID)
    if b < a:
        raise ValueError(f"no grid point in [{lo}, {hi}]")
    return Fraction(rng.randint(a, b), GRID)


def rand_subinterval(rng: random.Random, lo=Fraction(0), hi=Fraction(1)) -> AffineMap1:
    """A nondegenerate grid interval inside [lo, hi]."""
    while True:
        a = rand_fraction(rng, lo, hi)
        b = rand_fraction(rng, lo, hi)
        if a > b:
            a, b = b, a
        if a < b:
            return AffineMap1.from_interval(a, b)


def _rand_boxes(rng: random.Random, region: list[tuple[Fraction, Fraction]], n: int):
    """n boxes with disjoint interiors inside the given product region."""
    if n == 1:
        box = []
        for lo, hi in region:
            t = rand_subinterval(rng, lo, hi)
            box.append((t.start, t.end))
        return [box]
    axis = rng.randrange(len(region))
    lo, hi = region[axis]
    cut = rand_fraction(rng, lo + Fraction(1, GRID), hi - Fraction(1, GRID))
    left = list(region)
    right = list(region)
    left[axis] = (lo, cut)
    right[axis] = (cut, hi)
    k = rng.randint(1, n - 1)
    return _rand_boxes(rng, left, k) + _rand_boxes(rng, right, n - k)


def rand_cubes_element(rng: random.Random, dim: int, n: int) -> CubesElement:
    if n == 0:
        return CubesElement(dim, ())
    boxes = _rand_boxes(rng, [(Fraction(0), Fraction(1))] * dim, n)
    rng.shuffle(boxes)
    cubes = tuple(
        LittleCube(tuple(AffineMap1.from_interval(a, b) for a, b in box))
        for box in boxes
    )
    return CubesElement(dim, cubes)


def rand_perm(rng: random.Random, n: int) -> Permutation:
    images = list(range(1, n + 1))
    rng.shuffle(images)
    return Permutation(tuple(images))


def rand_overlap(rng: random.Random, n: int) -> overlap_mod.OverlapElement:
    intervals = tuple(rand_subinterval(rng) for _ in range(n))
    return overlap_mod.make(intervals, rand_perm(rng, n))


def rand_diagram(
    rng: random.Random,
    output_color: int,
    n: int,
    color_pool: Sequence[int] = (1, 2, 3),
) -> InfectionDiagram:
    """A valid trivial-core diagram with n mufflers of colors from the pool."""
    f = standard_forest(output_color)
    marks = f.marked_disks(output_color)
    markset = set(marks) if output_color >= 2 else set()

    def bases():
        return [v for v in f.nodes if v not in markset]

    colors: list[int] = []
    mufflers_cross: list[tuple[int, str, tuple[str, ...]]] = []
    for _ in range(n):
        ck = rng.choice(list(color_pool))
        colors.append(ck)
        if ck == 1:
            if rng.random() < 0.5:
                outer = rng.choice(sorted(f.nodes))
            else:
                outer = f.fresh_name()
                f = f.add_disk(outer, rng.choice(sorted(bases())))
            mufflers_cross.append((ck, outer, (outer,)))
        elif ck == output_color and rng.random() < 0.5:
            mufflers_cross.append((ck, f.root, marks))
        else:
            outer = f.fresh_name()
            f = f.add_disk(outer, rng.choice(sorted(bases())))
            hs = []
            for _ in range(ck):
                h = f.fresh_name()
                f = f.add_disk(h, outer)
                hs.append(h)
            mufflers_cross.append((ck, outer, tuple(hs)))

    def attempt(times: list[AffineMap1]) -> InfectionDiagram | None:
        mufflers = tuple(
            Muffler(c, t, o, hs) for (c, o, hs), t in zip(mufflers_cross, times)
        )
        candidates = []
        for sigma in all_permutations(n):
            d = InfectionDiagram(tuple(colors), output_color, f, mufflers, sigma)
            if diagrams_mod.check_constraint(d) is None:
                candidates.append(d)
        if not candidates:
            return None
        return diagrams_mod.canonicalize(rng.choice(candidates))

    for _ in range(4):
        d = attempt([rand_subinterval(rng) for _ in range(n)])
        if d is not None:
            return d
    slots = list(diagrams_mod.equal_slots(max(n, 1)))[:n]
    rng.shuffle(slots)
    d = attempt(slots)
    assert d is not None, "disjoint slots always admit an order"
    return d


def rand_inners(
    rng: random.Random,
    outer: InfectionDiagram,
    max_arity: int,
    color_pool: Sequence[int] = (1, 2, 3),
) -> list[InfectionDiagram]:
    return [
        rand_diagram(rng, c, rng.randint(0, max_arity), color_pool)
        for c in outer.colors
    ]


def rand_word(rng: random.Random, alph: lm.GeneratorAlphabet, color: int, max_len=3) -> lm.LinkWord:
    if color == 1:
        ks = [rng.choice(alph.knots) for _ in range(rng.randint(0, max_len))]
        return lm.knot_word(alph, ks)
    body = [rng.choice(alph.noncentral_names()) for _ in range(rng.randint(0, max_len))]
    central = []
    for _ in range(rng.randint(0, 2)):
        central.append(
            alph.central_letter(rng.choice(lm.CENTRAL_KINDS), rng.choice(alph.knots))
        )
    return lm.link2_word(alph, twist=rng.randint(-2, 2), central=central, body=body)


FUZZ_ALPHABET = lm.alphabet(
    ["trefoil", "fig8", "cinqfoil"], [("X", 0), ("Y", 0), ("Z", 1)]
)


# -- law checks ---------------------------------------------------------------


def check_cubes_assoc(rng) -> str | None:
    dim = rng.randint(1, 2)
    n = rng.randint(1, 3)
    e = rand_cubes_element(rng, dim, n)
    inners = [rand_cubes_element(rng, dim, rng.randint(1, 3)) for _ in range(n)]
    grand = [
        [rand_cubes_element(rng, dim, rng.randint(1, 2)) for _ in range(f.arity)]
        for f in inners
    ]
    flat = [g for gs in grand for g in gs]
    left = cubes_mod.cubes_compose(cubes_mod.cubes_compose(e, inners), flat)
    right = cubes_mod.cubes_compose(
        e, [cubes_mod.cubes_compose(f, gs) for f, gs in zip(inners, grand)]
    )
    return None if left == right else f"cubes associativity: {left} != {right}"


def check_cubes_symm(rng) -> str | None:
    dim = rng.randint(1, 2)
    n = rng.randint(1, 3)
    e = rand_cubes_element(rng, dim, n)
    inners = [rand_cubes_element(rng, dim, rng.randint(1, 3)) for _ in range(n)]
    p = rand_perm(rng, n)
    sizes = tuple(f.arity for f in inners)
    left = cubes_mod.cubes_compose(
        cubes_mod.act_symmetric(e, p), cubes_mod.permute_list(p, inners)
    )
    beta = block_permutation(p, BlockStructure(tuple(sizes[p(i) - 1] for i in range(1, n + 1))))
    right = cubes_mod.act_symmetric(cubes_mod.cubes_compose(e, inners), beta)
    if left != right:
        return "cubes symmetry (outer relabeling)"
    ts = [rand_perm(rng, f.arity) for f in inners]
    left2 = cubes_mod.cubes_compose(
        e, [cubes_mod.act_symmetric(f, t) for f, t in zip(inners, ts)]
    )
    right2 = cubes_mod.act_symmetric(cubes_mod.cubes_compose(e, inners), direct_sum(ts))
    return None if left2 == right2 else "cubes symmetry (inner relabeling)"


def check_cubes_ident(rng) -> str | None:
    dim = rng.randint(1, 2)
    n = rng.randint(1, 3)
    e = rand_cubes_element(rng, dim, n)
    one = cubes_mod.identity_element(dim)
    if cubes_mod.cubes_compose(one, [e]) != e:
        return "cubes left identity"
    if cubes_mod.cubes_compose(e, [one] * n) != e:
        return "cubes right identity"
    return None


def check_overlap_assoc(rng) -> str | None:
    n = rng.randint(1, 3)
    e = rand_overlap(rng, n)
    inners = [rand_overlap(rng, rng.randint(1, 3)) for _ in range(n)]
    grand = [
        [rand_overlap(rng, rng.randint(1, 2)) for _ in range(f.arity)] for f in inners
    ]
    flat = [g for gs in grand for g in gs]
    left = overlap_mod.compose_overlap(overlap_mod.compose_overlap(e, inners), flat)
    right = overlap_mod.compose_overlap(
        e, [overlap_mod.compose_overlap(f, gs) for f, gs in zip(inners, grand)]
    )
    return None if left == right else "overlap associativity"


def check_overlap_symm(rng) -> str | None:
    n = rng.randint(1, 4)
    e = rand_overlap(rng, n)
    inners = [rand_overlap(rng, rng.randint(1, 3)) for _ in range(n)]
    p = rand_perm(rng, n)
    sizes = tuple(f.arity for f in inners)
    left = overlap_mod.compose_overlap(
        overlap_mod.act_symmetric(e, p), cubes_mod.permute_list(p, inners)
    )
    beta = block_permutation(
        p, BlockStructure(tuple(sizes[p(i) - 1] for i in range(1, n + 1)))
    )
    right = overlap_mod.act_symmetric(overlap_mod.compose_overlap(e, inners), beta)
    if left != right:
        return "overlap symmetry (outer relabeling)"
    ts = [rand_perm(rng, f.arity) for f in inners]
    left2 = overlap_mod.compose_overlap(
        e, [overlap_mod.act_symmetric(f, t) for f, t in zip(inners, ts)]
    )
    right2 = overlap_mod.act_symmetric(
        overlap_mod.compose_overlap(e, inners), direct_sum(ts)
    )
    return None if left2 == right2 else "overlap symmetry (inner relabeling)"


def check_overlap_ident(rng) -> str | None:
    n = rng.randint(1, 4)
    e = rand_overlap(rng, n)
    one = overlap_mod.identity_element()
    if overlap_mod.compose_overlap(one, [e]) != e:
        return "overlap left identity"
    if overlap_mod.compose_overlap(e, [one] * n) != e:
        return "overlap right identity"
    return None


def check_diagram_assoc(rng) -> str | None:
    c = rng.randint(1, 3)
    n = rng.randint(1, 3)
    outer = rand_diagram(rng, c, n)
    inners = rand_inners(rng, outer, 2)
    grand = [rand_inners(rng, f, 2) for f in inners]
    flat = [g for gs in grand for g in gs]
    left = diagrams_mod.compose(diagrams_mod.compose(outer, inners), flat)
    right = diagrams_mod.compose(
        outer, [diagrams_mod.compose(f, gs) for f, gs in zip(inners, grand)]
    )
    return None if left == right else "diagram associativity"


def check_diagram_symm(rng) -> str | None:
    c = rng.randint(1, 3)
    n = rng.randint(1, 3)
    outer = rand_diagram(rng, c, n)
    inners = rand_inners(rng, outer, 2)
    p = rand_perm(rng, n)
    sizes = tuple(f.arity for f in inners)
    left = diagrams_mod.compose(
        diagrams_mod.act_symmetric(outer, p), cubes_mod.permute_list(p, inners)
    )
    beta = block_permutation(
        p, BlockStructure(tuple(sizes[p(i) - 1] for i in range(1, n + 1)))
    )
    right = diagrams_mod.act_symmetric(diagrams_mod.compose(outer, inners), beta)
    if left != right:
        return "diagram symmetry (outer relabeling)"
    ts = [rand_perm(rng, f.arity) for f in inners]
    left2 = diagrams_mod.compose(
        outer, [diagrams_mod.act_symmetric(f, t) for f, t in zip(inners, ts)]
    )
    right2 = diagrams_mod.act_symmetric(
        diagrams_mod.compose(outer, inners), direct_sum(ts)
    )
    return None if left2 == right2 else "diagram symmetry (inner relabeling)"


def check_diagram_ident(rng) -> str | None:
    c = rng.randint(1, 3)
    n = rng.randint(1, 3)
    d = rand_diagram(rng, c, n)
    if diagrams_mod.compose(diagrams_mod.identity_diagram(c), [d]) != d:
        return "diagram left identity"
    ones = [diagrams_mod.identity_diagram(ck) for ck in d.colors]
    if diagrams_mod.compose(d, ones) != d:
        return "diagram right identity"
    return None


def check_dagger_closure(rng) -> str | None:
    c = rng.randint(1, 3)
    n = rng.randint(1, 3)
    outer = rand_diagram(rng, c, n)
    inners = rand_inners(rng, outer, 2)
    try:
        composite = diagrams_mod.compose(outer, inners)
    except AssertionError as e:
        return f"composite broke the constraint: {e}"
    bad = diagrams_mod.check_constraint(composite)
    return None if bad is None else f"composite violates the constraint at {bad}"


def check_action(rng) -> str | None:
    alph = FUZZ_ALPHABET
    c = rng.randint(1, 2)
    n = rng.randint(1, 2)
    outer = rand_diagram(rng, c, n, color_pool=(1, 2))
    inners = rand_inners(rng, outer, 2, color_pool=(1, 2))
    try:
        composite = diagrams_mod.compose(outer, inners)
        links = [
            [rand_word(rng, alph, ck) for ck in inner.colors] for inner in inners
        ]
        flat = [w for ws in links for w in ws]
        lhs = action_mod.act(composite, flat, alph)
        rhs = action_mod.act(
            outer,
            [action_mod.act(f, ws, alph) for f, ws in zip(inners, links)],
            alph,
        )
    except ValueError:
        return None  # unrecognizable capture patterns are rejected, not graded
    if not lm.equals(lhs, rhs):
        return f"action associativity: {lhs} != {rhs}"
    d = rand_diagram(rng, c, n, color_pool=(1, 2))
    ws = [rand_word(rng, alph, ck) for ck in d.colors]
    p = rand_perm(rng, n)
    try:
        left = action_mod.act(diagrams_mod.act_symmetric(d, p), cubes_mod.permute_list(p, ws), alph)
        right = action_mod.act(d, ws, alph)
    except ValueError:
        return None
    if not lm.equals(left, right):
        return "action symmetry"
    w = rand_word(rng, alph, c)
    one = diagrams_mod.identity_diagram(c)
    if not lm.equals(action_mod.act(one, [w], alph), w):
        return "action identity"
    return None


CHECKS: dict[str, list[tuple[str, Callable]]] = {
    "assoc": [
        ("assoc.cubes", check_cubes_assoc),
        ("assoc.overlap", check_overlap_assoc),
        ("assoc.diagrams", check_diagram_assoc),
    ],
    "symm": [
        ("symm.cubes", check_cubes_symm),
        ("symm.overlap", check_overlap_symm),
        ("symm.diagrams", check_diagram_symm),
    ],
    "ident": [
        ("ident.cubes", check_cubes_ident),
        ("ident.overlap", check_overlap_ident),
        ("ident.diagrams", check_diagram_ident),
    ],
    "dagger": [("dagger.closure", check_dagger_closure)],
    "action": [("action.algebra", check_action)],
}


def run_fuzz(seed: int, ops: int, laws: Sequence[str] | None = None):
    """Run ops iterations of every selected law; deterministic in (seed, ops, laws).

    Returns (report_text, failure_count).
    """
    selected = list(laws) if laws else list(LAW_FAMILIES)
    for fam in selected:
        if fam not in CHECKS:
            raise ValueError(f"unknown law family {fam!r} (have {', '.join(LAW_FAMILIES)})")
    lines = [
        "operad-forge fuzz report",
        f"seed={seed} ops={ops} laws={','.join(selected)}",
    ]
    rows: list[tuple[str, int, int]] = []
    total_failures = 0
    for fam in selected:
        for name, fn in CHECKS[fam]:
            rng = random.Random(f"{seed}:{name}")
            failures = []
            for i in range(ops):
                msg = fn(rng)
                if msg is not None:
                    failures.append((i, msg))
            total_failures += len(failures)
            rows.append((name, ops, len(failures)))
            lines.append(f"law {name} ops={ops} failures={len(failures)}")
            for i, msg in failures[:5]:
                lines.append(f"  fail[{i}] {msg}")
    lines.append(f"result {'PASS' if total_failures == 0 else 'FAIL'}")
    return "\n".join(lines) + "\n", total_failures, rows
