"""Deterministic rendering: interval stacks and nested cross-section disks.

SVG output is plain SVG 1.1 text assembled with fixed formatting so identical
inputs give byte-identical files. Forests carry no coordinates, so disk layout
is deterministic packing: children of each disk sit on a horizontal row inside
it, ordered marked-first then by name. The PNG path draws the same layout
through matplotlib for report figures.
"""
from __future__ import annotations

from .cubes import AffineMap1, CubesElement
from .diagrams import InfectionDiagram, canonicalize
from .diskforest import DiskForest
from .overlap import OverlapElement, canonicalize as canon_overlap

SVG_HEADER = '<?xml version="1.0" encoding="UTF-8"?>\n'

PALETTE = ("#4878a8", "#a85448", "#6aa848", "#9848a8", "#a89048", "#48a8a0")


def fmt(x) -> str:
    s = f"{float(x):.4f}"
    s = s.rstrip("0").rstrip(".")
    return s if s else "0"


# -- layout -----------------------------------------------------------------


def disk_layout(f: DiskForest) -> dict[str, tuple[float, float, float]]:
    """node -> (cx, cy, r) inside the unit-ish root disk, deterministic."""
    marked = {n for ms in f.marked.values() for n in ms}

    def order_key(n: str):
        return (0 if n in marked else 1, n)

    radius: dict[str, float] = {}

    def measure(node: str) -> float:
        kids = sorted(f.children(node), key=order_key)
        if not kids:
            radius[node] = 1.0
            return 1.0
        width = sum(2 * measure(k) for k in kids) + 0.6 * (len(kids) + 1)
        radius[node] = max(width / 2, 1.0)
        return radius[node]

    measure(f.root)
    pos: dict[str, tuple[float, float, float]] = {}

    def place(node: str, cx: float, cy: float):
        pos[node] = (cx, cy, radius[node])
        kids = sorted(f.children(node), key=order_key)
        if not kids:
            return
        total = sum(2 * radius[k] for k in kids) + 0.6 * (len(kids) - 1)
        x = cx - total / 2
        for k in kids:
            place(k, x + radius[k], cy)
            x += 2 * radius[k] + 0.6

    place(f.root, 0.0, 0.0)
    return pos


def interval_rows(items: list[tuple[str, AffineMap1, int]]) -> list[str]:
    """SVG fragments for labeled interval bars, one row per item."""
    width, row_h, left, top = 480.0, 26.0, 120.0, 10.0
    out = []
    for row, (label, t, color_idx) in enumerate(items):
        y = top + row * row_h
        x0 = left + float(t.start) * width
        w = float(t.scale) * width
        color = PALETTE[color_idx % len(PALETTE)]
        out.append(
            f'<rect x="{fmt(x0)}" y="{fmt(y)}" width="{fmt(w)}" height="{fmt(row_h - 8)}" '
            f'fill="{color}" stroke="#222222" stroke-width="1"/>'
        )
        out.append(
            f'<text x="4" y="{fmt(y + row_h - 12)}" font-family="monospace" '
            f'font-size="12">{label}</text>'
        )
    # unit-interval frame
    h = top + len(items) * row_h
    out.append(
        f'<rect x="{fmt(left)}" y="{fmt(top - 4)}" width="{fmt(width)}" '
        f'height="{fmt(max(h - top, row_h) - 2)}" fill="none" stroke="#888888" stroke-width="1"/>'
    )
    return out


def svg_document(body: list[str], width: float, height: float) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{fmt(width)}" height="{fmt(height)}" '
        f'viewBox="0 0 {fmt(width)} {fmt(height)}">'
    )
    return SVG_HEADER + "\n".join([head, *body, "</svg>"]) + "\n"


# -- per-object SVG ---------------------------------------------------------


def forest_svg_fragments(
    f: DiskForest,
    offset_x: float,
    offset_y: float,
    scale: float,
    outers: dict[str, int] | None = None,
) -> list[str]:
    pos = disk_layout(f)
    marked = {n for ms in f.marked.values() for n in ms}
    out = []
    for node in sorted(pos):
        cx, cy, r = pos[node]
        x, y = offset_x + cx * scale, offset_y + cy * scale
        stroke = "#222222"
        width = "1"
        if node in marked:
            stroke = "#a85448"
            width = "2"
        if outers and node in outers:
            stroke = PALETTE[outers[node] % len(PALETTE)]
            width = "2.5"
        out.append(
            f'<circle cx="{fmt(x)}" cy="{fmt(y)}" r="{fmt(r * scale)}" '
            f'fill="none" stroke="{stroke}" stroke-width="{width}"/>'
        )
        out.append(
            f'<text x="{fmt(x)}" y="{fmt(y + r * scale - 2)}" text-anchor="middle" '
            f'font-family="monospace" font-size="10">{node}</text>'
        )
    return out


def render_svg(obj) -> str:
    """Byte-stable SVG 1.1 for diagrams, cubes elements, overlaps, and forests."""
    if isinstance(obj, CubesElement):
        if obj.dim == 1:
            items = [
                (f"cube{i}", c.axes[0], i - 1) for i, c in enumerate(obj.cubes, start=1)
            ]
            h = 20 + 26 * max(len(items), 1)
            return svg_document(interval_rows(items), 620, h)
        body = []
        size, left, top = 480.0, 70.0, 10.0
        body.append(
            f'<rect x="{fmt(left)}" y="{fmt(top)}" width="{fmt(size)}" height="{fmt(size)}" '
            f'fill="none" stroke="#888888" stroke-width="1"/>'
        )
        for i, c in enumerate(obj.cubes, start=1):
            tx, ty = c.axes[0], c.axes[1]
            body.append(
                f'<rect x="{fmt(left + float(tx.start) * size)}" '
                f'y="{fmt(top + float(ty.start) * size)}" '
                f'width="{fmt(float(tx.scale) * size)}" height="{fmt(float(ty.scale) * size)}" '
                f'fill="{PALETTE[(i - 1) % len(PALETTE)]}" fill-opacity="0.5" '
                f'stroke="#222222" stroke-width="1"/>'
            )
        return svg_document(body, 620, 500)
    if isinstance(obj, OverlapElement):
        e = canon_overlap(obj)
        items = [
            (f"i{i} (slot {list(e.order.images).index(i) + 1})", t, i - 1)
            for i, t in enumerate(e.intervals, start=1)
        ]
        h = 20 + 26 * max(len(items), 1)
        return svg_document(interval_rows(items), 620, h)
    if isinstance(obj, DiskForest):
        frags = forest_svg_fragments(obj, 310.0, 160.0, scale_for(obj), None)
        return svg_document(frags, 620, 320)
    if isinstance(obj, InfectionDiagram):
        d = canonicalize(obj)
        items = [
            (f"L{i} c={m.color}", m.time, i - 1)
            for i, m in enumerate(d.mufflers, start=1)
        ]
        bars = interval_rows(items)
        bar_h = 20 + 26 * max(len(items), 1)
        outers = {m.outer: i - 1 for i, m in enumerate(d.mufflers, start=1)}
        frags = forest_svg_fragments(d.forest, 310.0, bar_h + 150.0, scale_for(d.forest), outers)
        sig = ",".join(map(str, d.colors)) + ";" + str(d.output_color)
        title = (
            f'<text x="4" y="{fmt(bar_h + 8)}" font-family="monospace" font-size="12">'
            f"signature ({sig})  order {list(d.order.images)}</text>"
        )
        return svg_document(bars + [title] + frags, 620, bar_h + 310)
    raise ValueError(f"no renderer for {type(obj).__name__}")


def scale_for(f: DiskForest) -> float:
    pos = disk_layout(f)
    r = pos[f.root][2]
    return 140.0 / r


# -- ASCII ------------------------------------------------------------------


def ascii_bar(t: AffineMap1, cols: int = 64) -> str:
    a = round(float(t.start) * cols)
    b = max(round(float(t.end) * cols), a + 1)
    return "." * a + "=" * (b - a) + "." * (cols - b)


def render_ascii(obj) -> str:
    if isinstance(obj, CubesElement) and obj.dim == 1:
        lines = [
            f"cube{i} |{ascii_bar(c.axes[0])}|"
            for i, c in enumerate(obj.cubes, start=1)
        ]
        return "\n".join(lines) + "\n"
    if isinstance(obj, OverlapElement):
        e = canon_overlap(obj)
        lines = [
            f"i{i} |{ascii_bar(t)}| slot {list(e.order.images).index(i) + 1}"
            for i, t in enumerate(e.intervals, start=1)
        ]
        return "\n".join(lines) + "\n"
    if isinstance(obj, DiskForest):
        return forest_ascii(obj)
    if isinstance(obj, InfectionDiagram):
        d = canonicalize(obj)
        lines = [
            f"L{i} c={m.color} |{ascii_bar(m.time)}| outer={m.outer} holes={','.join(m.holes)}"
            for i, m in enumerate(d.mufflers, start=1)
        ]
        lines.append("order " + ",".join(map(str, d.order.images)))
        return "\n".join(lines) + "\n" + forest_ascii(d.forest)
    raise ValueError(f"no renderer for {type(obj).__name__}")


def forest_ascii(f: DiskForest) -> str:
    marked = {n for ms in f.marked.values() for n in ms}
    lines: list[str] = []

    def walk(node: str, depth: int):
        star = "*" if node in marked else ""
        lines.append("  " * depth + node + star)
        for k in sorted(f.children(node)):
            walk(k, depth + 1)

    walk(f.root, 0)
    return "\n".join(lines) + "\n"


# -- matplotlib figures (report path) ----------------------------------------


def render_figure(obj, path: str):
    """Draw the same layout through matplotlib and save to path (png, etc.)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Circle, Rectangle

    if isinstance(obj, InfectionDiagram):
        d = canonicalize(obj)
        fig, (ax_t, ax_x) = plt.subplots(1, 2, figsize=(9, 4))
        for i, m in enumerate(d.mufflers, start=1):
            ax_t.add_patch(
                Rectangle(
                    (float(m.time.start), i - 0.4),
                    float(m.time.scale),
                    0.8,
                    facecolor=PALETTE[(i - 1) % len(PALETTE)],
                    edgecolor="black",
                )
            )
            ax_t.text(-0.02, i, f"L{i}", ha="right", va="center", fontsize=8)
        ax_t.set_xlim(-0.15, 1.05)
        ax_t.set_ylim(0, max(len(d.mufflers), 1) + 1)
        ax_t.set_yticks([])
        ax_t.set_xlabel("time")
        pos = disk_layout(d.forest)
        marked = {n for ms in d.forest.marked.values() for n in ms}
        for node, (cx, cy, r) in sorted(pos.items()):
            ax_x.add_patch(
                Circle(
                    (cx, cy),
                    r,
                    fill=False,
                    edgecolor="#a85448" if node in marked else "#222222",
                    linewidth=1.8 if node in marked else 1.0,
                )
            )
            ax_x.text(cx, cy - r * 0.8, node, ha="center", fontsize=7)
        lim = pos[d.forest.root][2] * 1.15
        ax_x.set_xlim(-lim, lim)
        ax_x.set_ylim(-lim, lim)
        ax_x.set_aspect("equal")
        ax_x.set_xticks([])
        ax_x.set_yticks([])
        fig.tight_layout()
        fig.savefig(path, dpi=110)
        plt.close(fig)
        return
    if isinstance(obj, (CubesElement, OverlapElement, DiskForest)):
        fig, ax = plt.subplots(figsize=(6, 4))
        if isinstance(obj, DiskForest):
            pos = disk_layout(obj)
            for node, (cx, cy, r) in sorted(pos.items()):
                ax.add_patch(Circle((cx, cy), r, fill=False, edgecolor="#222222"))
                ax.text(cx, cy - r * 0.8, node, ha="center", fontsize=7)
            lim = pos[obj.root][2] * 1.15
            ax.set_xlim(-lim, lim)
            ax.set_ylim(-lim, lim)
            ax.set_aspect("equal")
        else:
            intervals = (
                [c.axes[0] for c in obj.cubes]
                if isinstance(obj, CubesElement)
                else list(obj.intervals)
            )
            for i, t in enumerate(intervals, start=1):
                ax.add_patch(
                    Rectangle(
                        (float(t.start), i - 0.4),
                        float(t.scale),
                        0.8,
                        facecolor=PALETTE[(i - 1) % len(PALETTE)],
                        edgecolor="black",
                    )
                )
            ax.set_xlim(0, 1)
            ax.set_ylim(0, len(intervals) + 1)
        ax.set_xticks([])
        ax.set_yticks([])
        fig.tight_layout()
        fig.savefig(path, dpi=110)
        plt.close(fig)
        return
    raise ValueError(f"no figure renderer for {type(obj).__name__}")


def summary_figure(rows: list[tuple[str, int, int]], path: str):
    """Bar chart of per-law fuzz results: (law, ops, failures)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 0.5 * max(len(rows), 2) + 1.5))
    laws = [r[0] for r in rows]
    ops = [r[1] for r in rows]
    fails = [r[2] for r in rows]
    y = range(len(rows))
    ax.barh(y, ops, color="#4878a8", label="checks")
    ax.barh(y, fails, color="#a85448", label="failures")
    ax.set_yticks(list(y))
    ax.set_yticklabels(laws, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("instances")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
