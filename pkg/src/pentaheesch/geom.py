"""Planar primitives for the tiling search.

Covers rigid motions with optional reflection, strictly convex polygons,
pairwise overlap area, and tracing the outer boundary of a patch of
placed tiles.  The boundary tracer is the workhorse used to validate
finished coronas:

  - merge coincident vertices into a point bank (1e-7 merge radius),
  - split tile edges at interior bank points (vertex-on-edge contacts),
  - cancel opposite directed sub-edges (interior interfaces),
  - walk the remaining edges with a most-clockwise-turn rule, which
    keeps pinch points (tiles kissing at a vertex) on a single cycle,
  - classify cycles: one positive-area outer cycle, negative-area
    cycles are holes (HoleDetected), several positive ones mean the
    tiles are not connected (NotConnected).

Angles at a point are tracked in degrees as "contributions": a corner
contributes its interior angle, a point interior to a tile edge
contributes 180.  A point is sealed when its contributions sum to 360.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels

MERGE_TOL = 1e-7          # vertex merge radius for the point bank
FLAT_TOL_RAD = 1e-7       # collinearity threshold for flat vertices
GAP_SEAL_TOL_DEG = 1e-6   # angular slack when calling a point sealed
OVERLAP_REL_TOL = 1e-9    # overlap area tolerance, times scale**2

TWO_PI = 2.0 * math.pi


class GeometryError(Exception):
    pass


class HoleDetected(GeometryError):
    """The union of tiles encloses an uncovered region."""


class NotConnected(GeometryError):
    """The tiles do not form a single connected patch."""


def wrap_angle(theta: float) -> float:
    """Normalize an angle to [0, 2*pi)."""
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    return t


def ccw_delta(a_from: float, a_to: float) -> float:
    """Counterclockwise sweep from direction a_from to a_to, in [0, 2*pi)."""
    return wrap_angle(a_to - a_from)


@dataclass(frozen=True)
class Isometry:
    """Rotation by `rotation` (radians), then translation; reflection
    across the x axis is applied before the rotation when `reflected`."""

    rotation: float
    translation: tuple[float, float]
    reflected: bool = False

    def __post_init__(self):
        object.__setattr__(self, "rotation", wrap_angle(self.rotation))
        tx, ty = self.translation
        if not (math.isfinite(tx) and math.isfinite(ty) and math.isfinite(self.rotation)):
            raise ValueError("non-finite isometry")

    @staticmethod
    def identity() -> "Isometry":
        return Isometry(0.0, (0.0, 0.0), False)

    def matrix(self) -> np.ndarray:
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        if self.reflected:
            return np.array([[c, s], [s, -c]])
        return np.array([[c, -s], [s, c]])

    @staticmethod
    def from_matrix(m: np.ndarray, t: Sequence[float]) -> "Isometry":
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        theta = math.atan2(m[1, 0], m[0, 0])
        return Isometry(theta, (float(t[0]), float(t[1])), det < 0.0)

    def compose(self, other: "Isometry") -> "Isometry":
        """self after other: (self.compose(other))(p) == self(other(p))."""
        m1, m2 = self.matrix(), other.matrix()
        t = m1 @ np.asarray(other.translation) + np.asarray(self.translation)
        return Isometry.from_matrix(m1 @ m2, t)

    def inverse(self) -> "Isometry":
        m = self.matrix().T  # orthogonal
        t = -(m @ np.asarray(self.translation))
        return Isometry.from_matrix(m, t)

    def apply_to_points(self, pts: np.ndarray) -> np.ndarray:
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        tx, ty = self.translation
        return kernels.transform(np.ascontiguousarray(pts, dtype=np.float64),
                                 c, s, tx, ty, self.reflected)

    def apply_to_point(self, p: Sequence[float]) -> tuple[float, float]:
        out = self.apply_to_points(np.asarray([p], dtype=np.float64))
        return (float(out[0, 0]), float(out[0, 1]))


@dataclass(frozen=True)
class ConvexPolygon:
    """Vertex ring of a strictly convex polygon.

    Constructed via from_points() the ring is validated (finite, strictly
    convex, counterclockwise).  apply_isometry() returns the raw image,
    whose orientation flips when the isometry reflects; use signed_area
    to detect that, or oriented_ccw() to normalize.
    """

    pts: np.ndarray

    @staticmethod
    def from_points(points: Iterable[Sequence[float]], require_ccw: bool = True) -> "ConvexPolygon":
        pts = np.asarray(list(points), dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
            raise ValueError("need at least 3 plane points")
        if not np.all(np.isfinite(pts)):
            raise ValueError("non-finite coordinates")
        poly = ConvexPolygon(pts)
        area = poly.signed_area()
        if require_ccw and area <= 0.0:
            raise ValueError("vertices must wind counterclockwise")
        scale = poly.scale()
        crosses = _edge_crosses(pts)
        if area > 0.0:
            if np.any(crosses <= 1e-12 * scale * scale):
                raise ValueError("polygon is not strictly convex")
        else:
            if np.any(crosses >= -1e-12 * scale * scale):
                raise ValueError("polygon is not strictly convex")
        return poly

    def signed_area(self) -> float:
        return float(kernels.poly_area(np.ascontiguousarray(self.pts), self.pts.shape[0]))

    def area(self) -> float:
        return abs(self.signed_area())

    def is_ccw(self) -> bool:
        return self.signed_area() > 0.0

    def scale(self) -> float:
        d = self.pts - np.roll(self.pts, -1, axis=0)
        return float(np.max(np.hypot(d[:, 0], d[:, 1])))

    def oriented_ccw(self) -> "ConvexPolygon":
        if self.is_ccw():
            return self
        return ConvexPolygon(self.pts[::-1].copy())

    def edge_lengths(self) -> np.ndarray:
        d = np.roll(self.pts, -1, axis=0) - self.pts
        return np.hypot(d[:, 0], d[:, 1])


def _edge_crosses(pts: np.ndarray) -> np.ndarray:
    e = np.roll(pts, -1, axis=0) - pts
    e_next = np.roll(e, -1, axis=0)
    return e[:, 0] * e_next[:, 1] - e[:, 1] * e_next[:, 0]


def apply_isometry(g: Isometry, p: ConvexPolygon) -> ConvexPolygon:
    """Image polygon; vertex order is preserved, so the winding flips
    exactly when g.reflected."""
    return ConvexPolygon(g.apply_to_points(p.pts))


def overlap_area(p: ConvexPolygon, q: ConvexPolygon) -> float:
    """Intersection area of two convex polygons.

    Exactly 0.0 when a separating axis with slack (edge/vertex kisses
    count as separated) exists; otherwise the clipped area.
    """
    a = np.ascontiguousarray(p.oriented_ccw().pts)
    b = np.ascontiguousarray(q.oriented_ccw().pts)
    scale = max(p.scale(), q.scale())
    return float(kernels.overlap_area(a, b, OVERLAP_REL_TOL * scale))


class PointBank:
    """Merges nearby coordinates (within MERGE_TOL) into shared ids."""

    def __init__(self, tol: float = MERGE_TOL):
        self.tol = tol
        self.coords: list[tuple[float, float]] = []
        self._grid: dict[tuple[int, int], list[int]] = {}

    def _cell(self, x: float, y: float) -> tuple[int, int]:
        return (int(math.floor(x / self.tol)), int(math.floor(y / self.tol)))

    def add(self, x: float, y: float) -> int:
        cx, cy = self._cell(x, y)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for pid in self._grid.get((cx + dx, cy + dy), ()):
                    px, py = self.coords[pid]
                    if abs(px - x) <= self.tol and abs(py - y) <= self.tol:
                        return pid
        pid = len(self.coords)
        self.coords.append((x, y))
        self._grid.setdefault((cx, cy), []).append(pid)
        return pid


@dataclass
class BoundaryNode:
    point: tuple[float, float]
    gap_deg: float
    tiles: tuple[int, ...]


@dataclass
class BoundaryPass:
    """One visit of the outer walk at a point (pinch points get several)."""

    pid: int
    point: tuple[float, float]
    in_dir: float
    out_dir: float
    gap_deg: float       # uncovered sector swept CCW from reversed in_dir to out_dir
    straight: bool       # in/out collinear: the walk runs through, not a corner


@dataclass
class BoundarySegment:
    u: int
    v: int
    tile: int
    slot: int            # side index in the tile's original vertex order


@dataclass
class TracedPatch:
    points: list[tuple[float, float]]
    contrib: dict[int, float]       # degrees: corners + 180 per edge-interior incidence
    corner_sum: dict[int, float]    # degrees: corners only
    incident: dict[int, set[int]]
    outer_passes: list[BoundaryPass]
    outer_segments: list[BoundarySegment]
    hole_cycles: int
    # half-open [start, end) spans of outer_passes/outer_segments per
    # walked cycle; the enclosing boundary first, hole cycles after
    cycle_bounds: list[tuple[int, int]]

    def outer_pids(self) -> set[int]:
        return {p.pid for p in self.outer_passes}

    def _span(self, i: int) -> tuple[int, int]:
        for a, b in self.cycle_bounds:
            if a <= i < b:
                return a, b
        raise IndexError(f"pass index {i} outside every cycle")

    def prev_index(self, i: int) -> int:
        a, b = self._span(i)
        return b - 1 if i == a else i - 1

    def next_index(self, i: int) -> int:
        a, b = self._span(i)
        return a if i == b - 1 else i + 1


def _interior_angle_deg(prev_pt, v_pt, next_pt) -> float:
    ax, ay = prev_pt[0] - v_pt[0], prev_pt[1] - v_pt[1]
    bx, by = next_pt[0] - v_pt[0], next_pt[1] - v_pt[1]
    dot = ax * bx + ay * by
    cross = ax * by - ay * bx
    ang = math.degrees(abs(math.atan2(cross, dot)))
    return ang


def trace_patch(tiles_pts: Sequence[np.ndarray], raise_on_defect: bool = True,
                allow_holes: bool = False) -> TracedPatch:
    """Trace the union boundary of placed convex tiles.

    tiles_pts: per tile, the vertex ring in its original order (either
    winding).  Raises HoleDetected / NotConnected when raise_on_defect;
    with allow_holes the walks of enclosed uncovered regions are kept
    and appended to outer_passes/outer_segments instead.  Hole cycles
    run with the uncovered side on the right, same as the outer walk,
    so gap_deg means the same thing on every cycle.
    """
    bank = PointBank()
    n_tiles = len(tiles_pts)
    tile_pids: list[list[int]] = []
    contrib: dict[int, float] = {}
    corner_sum: dict[int, float] = {}
    incident: dict[int, set[int]] = {}

    for t, pts in enumerate(tiles_pts):
        ring = [bank.add(float(x), float(y)) for x, y in pts]
        tile_pids.append(ring)

    coords = bank.coords
    for t, pts in enumerate(tiles_pts):
        ring = tile_pids[t]
        n = len(ring)
        for i in range(n):
            pid = ring[i]
            ang = _interior_angle_deg(pts[i - 1], pts[i], pts[(i + 1) % n])
            contrib[pid] = contrib.get(pid, 0.0) + ang
            corner_sum[pid] = corner_sum.get(pid, 0.0) + ang
            incident.setdefault(pid, set()).add(t)

    # Directed CCW edges, each tagged (tile, slot); slot is the side index
    # between original vertices slot and slot+1.
    all_pts = np.asarray(coords) if coords else np.zeros((0, 2))
    directed: dict[tuple[int, int], list[tuple[int, int]]] = {}

    for t, pts in enumerate(tiles_pts):
        ring = tile_pids[t]
        n = len(ring)
        area = kernels.poly_area(np.ascontiguousarray(pts, dtype=np.float64), n)
        for i in range(n):
            j = (i + 1) % n
            u, v = ring[i], ring[j]
            if area < 0.0:
                u, v = v, u
            if u == v:
                raise GeometryError("degenerate tile edge")
            # split at bank points interior to the segment
            ux, uy = coords[u]
            vx, vy = coords[v]
            ex, ey = vx - ux, vy - uy
            elen = math.hypot(ex, ey)
            inner: list[tuple[float, int]] = []
            if len(coords) > 2:
                dx = all_pts[:, 0] - ux
                dy = all_pts[:, 1] - uy
                s = (dx * ex + dy * ey) / (elen * elen)
                dist = np.abs(dx * ey - dy * ex) / elen
                mask = (dist <= MERGE_TOL) & (s * elen > MERGE_TOL) & ((1.0 - s) * elen > MERGE_TOL)
                for pid in np.nonzero(mask)[0]:
                    pid = int(pid)
                    if pid != u and pid != v:
                        inner.append((float(s[pid]), pid))
            inner.sort()
            chain = [u] + [pid for _, pid in inner] + [v]
            for a, b in zip(chain, chain[1:]):
                directed.setdefault((a, b), []).append((t, i))
            for _, pid in inner:
                contrib[pid] = contrib.get(pid, 0.0) + 180.0
                incident.setdefault(pid, set()).add(t)

    # Cancel opposite directed sub-edges (interior interfaces).
    boundary: dict[tuple[int, int], tuple[int, int]] = {}
    seen_pairs = set()
    for (u, v), owners in directed.items():
        if (v, u) in seen_pairs or (u, v) in seen_pairs:
            continue
        seen_pairs.add((u, v))
        rev = directed.get((v, u), [])
        k, m = len(owners), len(rev)
        if k > 1 or m > 1:
            raise GeometryError("tiles overlap along an edge")
        if k == 1 and m == 0:
            boundary[(u, v)] = owners[0]
        elif k == 0 and m == 1:
            boundary[(v, u)] = rev[0]
        # k == 1 and m == 1: interior interface, cancelled

    if not boundary:
        raise GeometryError("empty boundary")

    # Successor walk: at each point take the most clockwise continuation.
    out_edges: dict[int, list[tuple[int, int]]] = {}
    for (u, v) in boundary:
        out_edges.setdefault(u, []).append((u, v))

    def edge_dir(u: int, v: int) -> float:
        ux, uy = coords[u]
        vx, vy = coords[v]
        return math.atan2(vy - uy, vx - ux)

    def successor(u: int, v: int) -> tuple[int, int]:
        cands = out_edges.get(v, [])
        if len(cands) == 1:
            return cands[0]
        din = edge_dir(u, v)
        best = None
        best_turn = None
        for e in cands:
            turn = math.remainder(edge_dir(*e) - din, TWO_PI)
            if turn <= -math.pi + 1e-15:
                turn = math.pi  # exact U-turn is the last resort
            if best_turn is None or turn < best_turn:
                best, best_turn = e, turn
        if best is None:
            raise GeometryError("boundary walk broke: dangling edge")
        return best

    unvisited = set(boundary)
    cycles: list[list[tuple[int, int]]] = []
    for start in sorted(boundary):
        if start not in unvisited:
            continue
        cyc = []
        e = start
        while True:
            if e not in unvisited:
                raise GeometryError("boundary walk crossed itself")
            unvisited.discard(e)
            cyc.append(e)
            e = successor(*e)
            if e == start:
                break
        cycles.append(cyc)

    def cycle_area(cyc) -> float:
        s = 0.0
        for (u, v) in cyc:
            ux, uy = coords[u]
            vx, vy = coords[v]
            s += ux * vy - vx * uy
        return 0.5 * s

    outers = [c for c in cycles if cycle_area(c) > 0.0]
    holes = [c for c in cycles if cycle_area(c) <= 0.0]
    if raise_on_defect:
        if len(outers) != 1:
            raise NotConnected(f"{len(outers)} separate components")
        if holes and not allow_holes:
            raise HoleDetected(f"{len(holes)} enclosed uncovered regions")
    if not outers:
        raise GeometryError("no outer cycle found")
    outer = max(outers, key=cycle_area)

    def rotated(cyc):
        # start each cycle at its lexicographically smallest point
        start_i = min(range(len(cyc)), key=lambda i: coords[cyc[i][0]])
        return cyc[start_i:] + cyc[:start_i]

    walk = [rotated(outer)]
    if allow_holes:
        walk.extend(sorted((rotated(h) for h in holes),
                           key=lambda c: coords[c[0][0]]))

    passes = []
    segments = []
    bounds = []
    for cyc in walk:
        first = len(passes)
        for i in range(len(cyc)):
            u, v = cyc[i]
            pu, pv = boundary[(u, v)]
            segments.append(BoundarySegment(u, v, pu, pv))
            prev_u, prev_v = cyc[i - 1]
            din = edge_dir(prev_u, prev_v)
            dout = edge_dir(u, v)
            sweep = ccw_delta(din + math.pi, dout)
            straight = abs(math.remainder(dout - din, TWO_PI)) <= FLAT_TOL_RAD
            passes.append(BoundaryPass(u, coords[u], din, dout,
                                       math.degrees(sweep), straight))
        bounds.append((first, len(passes)))

    return TracedPatch(
        points=list(coords),
        contrib=contrib,
        corner_sum=corner_sum,
        incident=incident,
        outer_passes=passes,
        outer_segments=segments,
        hole_cycles=len(holes),
        cycle_bounds=bounds,
    )


def trace_boundary(tiles: Sequence[ConvexPolygon]) -> list[BoundaryNode]:
    """Outer boundary of a patch as a cyclic node list.

    Each node carries the uncovered angle at its point; straight runs of
    the walk contribute nothing, so sealed flat contacts collapse away.
    """
    traced = trace_patch([t.pts for t in tiles])
    order: list[int] = []
    gap: dict[int, float] = {}
    for p in traced.outer_passes:
        if p.pid not in gap:
            gap[p.pid] = 0.0
            order.append(p.pid)
        if not p.straight:
            gap[p.pid] += p.gap_deg
    nodes = []
    for pid in order:
        if gap[pid] <= GAP_SEAL_TOL_DEG:
            continue
        nodes.append(BoundaryNode(
            point=traced.points[pid],
            gap_deg=gap[pid],
            tiles=tuple(sorted(traced.incident.get(pid, ()))),
        ))
    return nodes
