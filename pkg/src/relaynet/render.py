"""SVG scene rendering: terminals, relays, obstacles, transmission disks,
and tree edges. SVG keeps renders diff-able in regression tests."""

from __future__ import annotations

from typing import Optional, Sequence

from .network import NetworkState, Scenario
from .optimizer import mst_and_radii

TERMINAL_COLOR = "#1a9641"
RELAY_COLOR = "#2b6cb8"
OBSTACLE_COLOR = "#d7191c"


def _fmt(x: float) -> str:
    return f"{x:.6f}".rstrip("0").rstrip(".")


def render_svg(s: Scenario, st: Optional[NetworkState] = None,
               scale: float = 10.0) -> str:
    """Render a scenario (and optionally a network state) as SVG 1.1.

    Every drawn disk radius equals the model radius times ``scale``,
    declared in the root's data-scale attribute. The y axis is flipped so
    the scene appears in conventional orientation.
    """
    pts = [(p.x, p.y) for p in s.terminals]
    radii_nodes: list = [0.0] * s.m
    relays = []
    tree = []
    if st is not None:
        relays = st.active_relay_positions()
        pts += [(p.x, p.y) for p in relays]
        nodes = list(s.terminals) + relays
        radii_nodes = (list(st.radii_terminals)
                       + [r for r, a in zip(st.radii_relays, st.active) if a])
        if len(nodes) >= 2:
            tree, _ = mst_and_radii(nodes)

    xs = [x for x, _ in pts] + [o.center.x + d * o.radius
                                for o in s.obstacles for d in (-1, 1)]
    ys = [y for _, y in pts] + [o.center.y + d * o.radius
                                for o in s.obstacles for d in (-1, 1)]
    margin = 0.12 * max(max(xs) - min(xs), max(ys) - min(ys), 1.0) \
        + max(radii_nodes, default=0.0)
    x0, x1 = min(xs) - margin, max(xs) + margin
    y0, y1 = min(ys) - margin, max(ys) + margin

    def sx(x):
        return _fmt(x * scale)

    def sy(y):
        return _fmt(-y * scale)

    w = _fmt((x1 - x0) * scale)
    h = _fmt((y1 - y0) * scale)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{sx(x0)} {_fmt(-y1 * scale)} {w} {h}" '
        f'data-scale="{_fmt(scale)}" data-units="{s.units}">',
    ]
    stroke = _fmt(0.03 * scale)

    nodes_all = list(s.terminals) + relays
    for u, v in tree:
        a, b = nodes_all[u], nodes_all[v]
        out.append(f'<line x1="{sx(a.x)}" y1="{sy(a.y)}" x2="{sx(b.x)}" '
                   f'y2="{sy(b.y)}" stroke="#888888" '
                   f'stroke-width="{stroke}"/>')
    if st is not None:
        for p, r, cls in zip(nodes_all, radii_nodes,
                             ["terminal"] * s.m + ["relay"] * len(relays)):
            if r > 0:
                color = TERMINAL_COLOR if cls == "terminal" else RELAY_COLOR
                out.append(f'<circle class="range {cls}" cx="{sx(p.x)}" '
                           f'cy="{sy(p.y)}" r="{_fmt(r * scale)}" '
                           f'fill="{color}" fill-opacity="0.12" '
                           f'stroke="{color}" stroke-width="{stroke}" '
                           f'stroke-opacity="0.5"/>')
    for o in s.obstacles:
        out.append(f'<circle class="obstacle" cx="{sx(o.center.x)}" '
                   f'cy="{sy(o.center.y)}" r="{_fmt(o.radius * scale)}" '
                   f'fill="{OBSTACLE_COLOR}" fill-opacity="0.8"/>')
    dot = 0.08 * scale
    for p in s.terminals:
        out.append(f'<circle class="terminal" cx="{sx(p.x)}" '
                   f'cy="{sy(p.y)}" r="{_fmt(dot)}" '
                   f'fill="{TERMINAL_COLOR}"/>')
    for p in relays:
        out.append(f'<circle class="relay" cx="{sx(p.x)}" cy="{sy(p.y)}" '
                   f'r="{_fmt(0.75 * dot)}" fill="{RELAY_COLOR}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
