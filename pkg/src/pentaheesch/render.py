"""Deterministic SVG rendering of corona patches.

The drawing mirrors the usual presentation of surroundability figures:
kernel tiles filled, each corona layer outlined in its own tint.  The
output is reproducible byte for byte: stable element order, coordinates
rounded to six decimals, no timestamps or random identifiers.

Scale convention: the tile's longest edge class maps to 100 SVG units.
World coordinates are y-up, SVG is y-down, so the vertical axis is
flipped during projection.
"""

from __future__ import annotations

import math

from . import corona

SCALE_TARGET = 100.0
MARGIN = 12.0

STROKE = "#1f1f1f"
KERNEL_FILL = "#9bb0c9"
LAYER_FILLS = ("#ffffff", "#e8eef6", "#f6ede4", "#e9f3e7", "#f3e7f0")


def _fmt(v: float) -> str:
    v = round(float(v), 6)
    if v == 0.0:
        v = 0.0  # collapse -0.0 so repeated runs agree bytewise
    return "%.6f" % v


def _longest_edge(patch: corona.Patch) -> float:
    if patch.tile is not None:
        return max(patch.tile.edges)
    pts = (patch.kernel[0].pts if patch.kernel else patch.layers[0][0].pts)
    n = len(pts)
    return max(math.dist(pts[i], pts[(i + 1) % n]) for i in range(n))


def render_patch(patch: corona.Patch) -> str:
    """Render a patch to SVG text (kernel shaded, layers tinted)."""
    groups = [("kernel", KERNEL_FILL, list(patch.kernel))]
    for i, layer in enumerate(patch.layers):
        fill = LAYER_FILLS[i % len(LAYER_FILLS)]
        groups.append(("layer-%d" % (i + 1), fill, list(layer)))
    placements = [pl for _, _, pls in groups for pl in pls]
    if not placements:
        raise ValueError("patch has no placements to draw")

    scale = SCALE_TARGET / _longest_edge(patch)
    minx = min(float(pl.pts[:, 0].min()) for pl in placements)
    maxx = max(float(pl.pts[:, 0].max()) for pl in placements)
    miny = min(float(pl.pts[:, 1].min()) for pl in placements)
    maxy = max(float(pl.pts[:, 1].max()) for pl in placements)
    width = (maxx - minx) * scale + 2 * MARGIN
    height = (maxy - miny) * scale + 2 * MARGIN

    def project(x: float, y: float) -> tuple[float, float]:
        return ((x - minx) * scale + MARGIN, (maxy - y) * scale + MARGIN)

    out = ['<?xml version="1.0" encoding="UTF-8"?>']
    out.append(
        '<svg xmlns="http://www.w3.org/2000/svg" width="%s" height="%s" '
        'viewBox="0 0 %s %s">'
        % (_fmt(width), _fmt(height), _fmt(width), _fmt(height)))
    for name, fill, pls in groups:
        out.append(
            '  <g id="%s" fill="%s" stroke="%s" stroke-width="1" '
            'stroke-linejoin="round">' % (name, fill, STROKE))
        for pl in pls:
            coords = " ".join(
                "%s,%s" % tuple(map(_fmt, project(float(x), float(y))))
                for x, y in pl.pts)
            out.append('    <polygon points="%s"/>' % coords)
        out.append('  </g>')
    out.append('</svg>')
    return "\n".join(out) + "\n"


def write_svg(patch: corona.Patch, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_patch(patch))
