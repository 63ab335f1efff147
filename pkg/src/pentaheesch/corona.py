"""Corona search: surround a kernel with congruent copies, layer by layer.

The search walks the traced union boundary and always fills the
uncovered position with the lexicographically smallest coordinates.
At that vertex the sector hugging the incoming boundary edge is forced:
in edge-to-edge mode the filling tile must share that whole edge, so
the branching factor is the handful of (corner, chirality) pairs whose
glued edge has the right length.  Residual gaps no nonnegative corner
combination can reach are pruned immediately, and the same oracle
powers the dead-spot certificates: a completed corona whose boundary
carries such a gap can never be surrounded again.

The collinear mode additionally places a tile corner at a boundary
vertex with one edge running along the boundary line, without the
full-length match.  That discretization reproduces the known
non-edge-to-edge corona patterns but does not exhaust continuous
slides, so every report in that mode carries a completeness caveat.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from . import geom, kernels, solver, spots

EEC_ONLY = "EEC_ONLY"
EEC_PLUS_COLLINEAR = "EEC_PLUS_COLLINEAR"
MODES = (EEC_ONLY, EEC_PLUS_COLLINEAR)

SURROUNDED_K_TIMES = "SURROUNDED_K_TIMES"
NO_FIRST_CORONA = "NO_FIRST_CORONA"
DEAD_SPOT_CERTIFICATE = "DEAD_SPOT_CERTIFICATE"
SEARCH_EXHAUSTED = "SEARCH_EXHAUSTED"
LAYER_LIMIT_REACHED = "LAYER_LIMIT_REACHED"

DEFAULT_LAYER_LIMIT = 3
DEFAULT_BUDGET = 10_000_000

GAP_TOL_DEG = 1e-6          # residual gap considered sealed / angle slack
SEAL_TOL_DEG = 1e-7         # coverage requirement at kernel points
LEN_TOL = geom.MERGE_TOL    # edge length matching
OVERLAP_AREA_TOL = 1e-9

COLLINEAR_CAVEAT = (
    "EEC_PLUS_COLLINEAR discretizes non-edge-to-edge contact as "
    "vertex-anchored collinear gluing; continuous-offset placements are "
    "not searched, so completed layers are witnesses and failures are "
    "bounds, not impossibility proofs.")


class CoronaError(Exception):
    pass


class BudgetExceeded(CoronaError):
    """Search node budget hit; carries a partial report, claims nothing."""

    def __init__(self, msg: str, report: Optional[dict] = None):
        super().__init__(msg)
        self.report = report


class Placement:
    """A posed copy of the tile: pose plus cached posed vertices."""

    __slots__ = ("tile", "pose", "pts", "center", "radius", "key")

    def __init__(self, tile: solver.Pentagon, pose: geom.Isometry):
        self.tile = tile
        self.pose = pose
        verts = np.asarray(tile.vertices, dtype=np.float64)
        self.pts = np.ascontiguousarray(
            pose.apply_to_points(verts), dtype=np.float64)
        cx = float(np.mean(self.pts[:, 0]))
        cy = float(np.mean(self.pts[:, 1]))
        self.center = (cx, cy)
        self.radius = float(np.max(np.hypot(self.pts[:, 0] - cx,
                                            self.pts[:, 1] - cy)))
        self.key = (round(pose.translation[0], 7),
                    round(pose.translation[1], 7),
                    round(math.cos(pose.rotation), 7),
                    round(math.sin(pose.rotation), 7),
                    pose.reflected)

    def to_json(self) -> dict:
        return {"x": float(self.pose.translation[0]),
                "y": float(self.pose.translation[1]),
                "theta_rad": float(self.pose.rotation),
                "reflected": bool(self.pose.reflected)}

    @staticmethod
    def from_json(tile: solver.Pentagon, d: dict) -> "Placement":
        return Placement(tile, geom.Isometry(
            rotation=float(d["theta_rad"]),
            translation=(float(d["x"]), float(d["y"])),
            reflected=bool(d["reflected"])))


@dataclass
class Patch:
    tile: solver.Pentagon
    kernel: list
    layers: list
    mode: str

    def all_placements(self) -> list:
        out = list(self.kernel)
        for layer in self.layers:
            out.extend(layer)
        return out

    def tiles_pts(self) -> list:
        return [pl.pts for pl in self.all_placements()]

    def to_json(self) -> dict:
        return {
            "kernel": [pl.to_json() for pl in self.kernel],
            "layers": [[pl.to_json() for pl in layer]
                       for layer in self.layers],
            "mode": self.mode,
            "pentagon": solver.pentagon_json(self.tile),
        }

    @staticmethod
    def from_json(d: dict, tile: Optional[solver.Pentagon] = None) -> "Patch":
        if tile is None:
            pj = d.get("pentagon")
            if not pj:
                raise CoronaError("patch JSON lacks pentagon data")
            tile = solver.solve_category(int(pj["category"]),
                                         dict(pj.get("params") or {}))
        kernel = [Placement.from_json(tile, e) for e in d["kernel"]]
        layers = [[Placement.from_json(tile, e) for e in layer]
                  for layer in d["layers"]]
        return Patch(tile=tile, kernel=kernel, layers=layers,
                     mode=d.get("mode", EEC_ONLY))


@dataclass
class HeeschReport:
    category: Optional[int]
    params: dict
    placement_model: str
    layers_completed: int
    status: str
    certificate: Optional[list]
    caveat: Optional[str]
    stats: dict
    patch: Optional[Patch] = None

    def to_json(self) -> dict:
        return {
            "category": self.category,
            "params": self.params,
            "placement_model": self.placement_model,
            "layers_completed": self.layers_completed,
            "status": self.status,
            "certificate": self.certificate,
            "caveat": self.caveat,
            "stats": self.stats,
            "patch": self.patch.to_json() if self.patch is not None else None,
        }


class _Feasibility:
    """Mode-aware gap oracle: corner combinations, plus edge-through
    contributions of 180 degrees each in collinear mode."""

    def __init__(self, tile: solver.Pentagon, mode: str):
        self.sums = spots.AchievableSums(tile.angles_deg, limit=360.0,
                                         tol=GAP_TOL_DEG)
        self.collinear = mode == EEC_PLUS_COLLINEAR

    def gap_ok(self, gap_deg: float) -> bool:
        if gap_deg <= GAP_TOL_DEG:
            return gap_deg >= -GAP_TOL_DEG
        if self.sums.feasible(gap_deg):
            return True
        if self.collinear:
            return (self.sums.feasible(gap_deg - 180.0)
                    or self.sums.feasible(gap_deg - 360.0))
        return False


class _Stack:
    """Growable stacked arrays of placed tiles for the overlap kernel."""

    def __init__(self, placements: Sequence[Placement]):
        cap = max(16, 2 * len(placements) + 8)
        self._pts = np.zeros((cap, 5, 2))
        self._centers = np.zeros((cap, 2))
        self._radii = np.zeros(cap)
        self.items: list = []
        self.n = 0
        for pl in placements:
            self.push(pl)

    def _grow(self):
        cap = 2 * len(self._radii)
        self._pts = np.resize(self._pts, (cap, 5, 2))
        self._centers = np.resize(self._centers, (cap, 2))
        self._radii = np.resize(self._radii, cap)

    def push(self, pl: Placement):
        if self.n == len(self._radii):
            self._grow()
        self._pts[self.n] = pl.pts
        self._centers[self.n] = pl.center
        self._radii[self.n] = pl.radius
        self.items.append(pl)
        self.n += 1

    def pop(self):
        self.n -= 1
        return self.items.pop()

    def pts_arr(self):
        return self._pts[:self.n]

    def centers_arr(self):
        return self._centers[:self.n]

    def radii_arr(self):
        return self._radii[:self.n]


class _Search:
    """Shared search context: budget, tile data, candidate generation."""

    def __init__(self, tile: solver.Pentagon, mode: str, budget: int,
                 reflections: bool):
        if mode not in MODES:
            raise CoronaError(f"unknown placement model {mode!r}")
        self.tile = tile
        self.mode = mode
        self.reflections = reflections
        self.budget = budget
        self.used = 0
        self.nodes = 0
        self.placements_tested = 0
        self.feas = _Feasibility(tile, mode)
        self.verts = np.asarray(tile.vertices, dtype=np.float64)
        self.angles_deg = list(tile.angles_deg)
        self.scale = max(tile.edges)
        self.slack = 1e-9 * self.scale
        # wedge data per (corner, chirality) when the wedge hugs the
        # incoming boundary edge: glued flank, closing flank, far corner,
        # and the far corner's other flank (the one not glued)
        self.wedges = {}
        for c in range(5):
            for refl in (False, True):
                if refl:
                    glue_idx = c
                    far = (c - 1) % 5
                    closing_idx = (c + 1) % 5
                    far_other_idx = far      # flanks of far: (far, far+1=c)
                else:
                    glue_idx = (c + 1) % 5
                    far = (c + 1) % 5
                    closing_idx = c
                    far_other_idx = (far + 1) % 5
                self.wedges[(c, refl)] = (tile.edges[glue_idx],
                                          tile.edges[closing_idx],
                                          far,
                                          tile.edges[far_other_idx])

    def spend(self, n: int = 1):
        self.used += n
        if self.used > self.budget:
            raise BudgetExceeded(f"search budget {self.budget} exhausted")

    def chiralities(self):
        return (False, True) if self.reflections else (False,)

    def pose_at(self, corner: int, reflected: bool, point,
                psi: float) -> Placement:
        """Corner placed at point, leading flank along direction psi."""
        v = self.verts
        if not reflected:
            d = v[(corner + 1) % 5] - v[corner]
            theta = psi - math.atan2(d[1], d[0])
        else:
            d = v[(corner - 1) % 5] - v[corner]
            theta = psi + math.atan2(d[1], d[0])
        ct, st = math.cos(theta), math.sin(theta)
        x, y = v[corner]
        if reflected:
            y = -y
        ix = ct * x - st * y
        iy = st * x + ct * y
        pose = geom.Isometry(rotation=float(theta),
                             translation=(float(point[0] - ix),
                                          float(point[1] - iy)),
                             reflected=reflected)
        return Placement(self.tile, pose)

    def blocked(self, pl: Placement, stack: _Stack) -> bool:
        self.placements_tested += 1
        self.spend()
        if stack.n == 0:
            return False
        idx = kernels.first_blocking_overlap(
            stack.pts_arr(), stack.n, stack.centers_arr(),
            stack.radii_arr(), pl.pts,
            np.asarray(pl.center, dtype=np.float64), pl.radius,
            self.slack, OVERLAP_AREA_TOL)
        return idx >= 0


def _trace(placements: Sequence[Placement]) -> geom.TracedPatch:
    # transient enclosed pockets are legal mid-search; their boundary
    # walks join the pass list and are anchored like any other
    return geom.trace_patch([pl.pts for pl in placements],
                            allow_holes=True)


def _cover_pids(tr: geom.TracedPatch, cover_n: int) -> set:
    """Points lying on a covered tile, as a corner or interior to one of
    its edges: the closure that must end up strictly inside the union."""
    return {pid for pid, tiles in tr.incident.items()
            if any(t < cover_n for t in tiles)}


def _covered(tr: geom.TracedPatch, cover_n: int, cover_pids: set) -> bool:
    # same gap threshold as the anchor filter, so an uncovered patch
    # always presents an anchor
    for seg in tr.outer_segments:
        if seg.tile < cover_n:
            return False
    for bp in tr.outer_passes:
        if bp.pid in cover_pids and bp.gap_deg > GAP_TOL_DEG:
            return False
    return True


def _anchor_passes(tr: geom.TracedPatch, cover_pids: set) -> list:
    """Walk indices of boundary passes that must be filled, ordered by
    rounded point coordinates (then walk index) for determinism."""
    out = [i for i, bp in enumerate(tr.outer_passes)
           if bp.gap_deg > GAP_TOL_DEG and bp.pid in cover_pids]
    out.sort(key=lambda i: (round(tr.outer_passes[i].point[0], 7),
                            round(tr.outer_passes[i].point[1], 7), i))
    return out


def _sector_fits(srch: _Search, tr: geom.TracedPatch, i: int,
                 cover_pids) -> list:
    """(corner, reflected) choices structurally able to fill the sector
    hugging the incoming edge of boundary pass i: angle fit, endpoint
    feasibility where forced, edge-length seal checks.  No poses are
    built and no overlap is tested, so this doubles as a cheap
    most-constrained-anchor probe.

    Gap feasibility prunes an endpoint only when it lies in cover_pids:
    those points must seal within the current layer.  Other boundary
    points may legitimately finish the layer with an unfillable gap;
    that is what a dead spot is."""
    bp = tr.outer_passes[i]
    prev_i = tr.prev_index(i)
    prev = tr.outer_passes[prev_i]
    P = bp.point
    u = prev.point
    L_in = math.hypot(P[0] - u[0], P[1] - u[1])
    w = tr.outer_passes[tr.next_index(i)].point
    L_out = math.hypot(w[0] - P[0], w[1] - P[1])
    t = tr.outer_passes[tr.prev_index(prev_i)].point
    L_u_prev = math.hypot(u[0] - t[0], u[1] - t[1])
    gap_P = bp.gap_deg
    gap_u = prev.gap_deg
    soft = srch.mode == EEC_PLUS_COLLINEAR
    strict_P = bp.pid in cover_pids
    strict_u = prev.pid in cover_pids

    fits = []
    for c in range(5):
        gp = gap_P - srch.angles_deg[c]
        if gp < -GAP_TOL_DEG:
            continue
        if strict_P and not srch.feas.gap_ok(gp):
            continue
        for refl in srch.chiralities():
            glue_len, closing_len, far, far_other_len = srch.wedges[(c, refl)]
            if abs(glue_len - L_in) <= LEN_TOL:
                gu = gap_u - srch.angles_deg[far]
                if gu < -GAP_TOL_DEG:
                    continue
                if strict_u and not srch.feas.gap_ok(gu):
                    continue
                # a vertex sealed in edge-to-edge mode also needs the
                # closing flank to match the adjacent boundary edge
                if gp <= GAP_TOL_DEG and not soft and \
                        abs(closing_len - L_out) > LEN_TOL:
                    continue
                if gu <= GAP_TOL_DEG and not soft and \
                        abs(far_other_len - L_u_prev) > LEN_TOL:
                    continue
            elif not soft:
                continue
            fits.append((c, refl))
    return fits


def _pass_candidates(srch: _Search, tr: geom.TracedPatch, i: int,
                     cover_pids, fits=None) -> list:
    """Placements filling the sector that hugs the incoming edge of
    boundary pass i.  Edge-to-edge candidates glue a full tile edge onto
    the incoming boundary edge; collinear candidates drop the length
    match and only keep the corner on the boundary line."""
    if fits is None:
        fits = _sector_fits(srch, tr, i, cover_pids)
    bp = tr.outer_passes[i]
    rev_in = bp.in_dir + math.pi
    cands = []
    seen = set()
    for c, refl in fits:
        pl = srch.pose_at(c, refl, bp.point, rev_in)
        if pl.key not in seen:
            seen.add(pl.key)
            cands.append(pl)
    cands.sort(key=lambda pl: pl.key)
    return cands


def _surround_layer(srch: _Search, stack: _Stack, cover_n: int,
                    visited: set) -> Iterator[list]:
    """Yield every completion of one corona layer around the first
    cover_n tiles, as snapshot lists of the newly added placements."""
    srch.nodes += 1
    srch.spend()
    tr = _trace(stack.items)
    cover_pids = _cover_pids(tr, cover_n)
    if _covered(tr, cover_n, cover_pids):
        yield list(stack.items[cover_n:])
        return
    # a covered point whose gap fails the subset-sum test can never be
    # sealed (removing an achievable corner keeps a gap unachievable),
    # so the whole branch is dead no matter where the anchor sits
    for bp in tr.outer_passes:
        if bp.pid in cover_pids and bp.gap_deg > GAP_TOL_DEG \
                and not srch.feas.gap_ok(bp.gap_deg):
            return
    anchors = _anchor_passes(tr, cover_pids)
    if not anchors:
        return
    # most-constrained anchor first: any deterministic choice keeps the
    # enumeration complete (each completion must seal every anchor, and
    # all its sealing tiles are candidates), so branch where the fanout
    # is smallest and fail immediately on an unfillable pass
    best_i = None
    best_fits = None
    for i in anchors:
        fits = _sector_fits(srch, tr, i, cover_pids)
        if not fits:
            return
        if best_fits is None or len(fits) < len(best_fits):
            best_i, best_fits = i, fits
            if len(fits) == 1:
                break
    for pl in _pass_candidates(srch, tr, best_i, cover_pids, best_fits):
        if srch.blocked(pl, stack):
            continue
        stack.push(pl)
        key = frozenset(p.key for p in stack.items)
        if key in visited:
            stack.pop()
            continue
        visited.add(key)
        try:
            yield from _surround_layer(srch, stack, cover_n, visited)
        finally:
            stack.pop()


def _layer_variants(srch: _Search, base: Sequence[Placement],
                    cover_n: int) -> Iterator[list]:
    """Stream the completions of one layer around the first cover_n of
    the base placements.  Owns a private stack, so consumers may abandon
    the generator at any point."""
    stack = _Stack(base)
    visited: set = set()
    yield from _surround_layer(srch, stack, cover_n, visited)


def _dead_passes(srch: _Search, placements: Sequence[Placement]) -> list:
    """Boundary passes whose gap no corner multiset can fill."""
    tr = _trace(placements)
    return [bp for bp in tr.outer_passes
            if bp.gap_deg > GAP_TOL_DEG and not srch.feas.gap_ok(bp.gap_deg)]


def _certificate(srch: _Search, bp: geom.BoundaryPass) -> dict:
    sums = srch.feas.sums.sums
    j = bisect.bisect_left(sums, bp.gap_deg)
    near = [round(sums[k], 9) for k in (j - 1, j) if 0 <= k < len(sums)]
    return {
        "vertex": [round(bp.point[0], 9), round(bp.point[1], 9)],
        "gap_deg": round(bp.gap_deg, 9),
        "feasible": False,
        "max_terms": int(math.ceil(bp.gap_deg / min(srch.angles_deg))),
        "nearest_achievable_sums_deg": near,
        "tolerance_deg": GAP_TOL_DEG,
    }


def canonical_frame(kernel: Sequence[Placement]) -> geom.Isometry:
    """Rotation plus translation bringing the kernel to a reproducible
    frame: some tile edge along +x, smallest rounded vertex at the
    origin, minimizing the sorted vertex-coordinate key."""
    best_key = None
    best = None
    for pl in kernel:
        pts = pl.pts
        for i in range(len(pts)):
            j = (i + 1) % len(pts)
            theta = -math.atan2(pts[j, 1] - pts[i, 1], pts[j, 0] - pts[i, 0])
            ct, st = math.cos(theta), math.sin(theta)
            rot = []
            for q in kernel:
                for x, y in q.pts:
                    rot.append((ct * x - st * y, st * x + ct * y))
            ox, oy = min((round(x, 7), round(y, 7)) for x, y in rot)
            key = tuple(sorted((round(x - ox, 7), round(y - oy, 7))
                               for x, y in rot))
            if best_key is None or key < best_key:
                best_key = key
                best = geom.Isometry(rotation=float(theta),
                                     translation=(-float(ox), -float(oy)),
                                     reflected=False)
    if best is None:
        raise CoronaError("empty kernel")
    return best


def _reframe(placements, g: geom.Isometry, tile) -> list:
    return [Placement(tile, g.compose(pl.pose)) for pl in placements]


def candidate_placements(patch: Patch, anchor, mode: str = EEC_ONLY,
                         reflections: bool = True,
                         budget: int = DEFAULT_BUDGET) -> list:
    """All placements covering the anchor vertex in the given mode.

    The anchor is a boundary vertex given as an (x, y) pair, matched to
    the traced boundary within 1e-6.  Candidates glue onto either
    boundary edge incident at the anchor, so the result is the full set
    of patterns a search could ever use at that vertex."""
    srch = _Search(patch.tile, mode, budget, reflections)
    base = patch.all_placements()
    stack = _Stack(base)
    tr = _trace(base)
    cover_pids = _cover_pids(tr, len(base))
    ax, ay = float(anchor[0]), float(anchor[1])
    hits = [i for i, bp in enumerate(tr.outer_passes)
            if math.hypot(bp.point[0] - ax, bp.point[1] - ay) <= 1e-6]
    out = []
    seen = set()
    for i in hits:
        if tr.outer_passes[i].gap_deg <= GAP_TOL_DEG:
            continue
        for pl in _pass_candidates(srch, tr, i, cover_pids):
            if pl.key not in seen and not srch.blocked(pl, stack):
                seen.add(pl.key)
                out.append(pl)
        # glues onto the outgoing edge anchor at the next pass and land
        # a corner back here; keep those that actually touch the anchor
        nxt = tr.next_index(i)
        for pl in _pass_candidates(srch, tr, nxt, cover_pids):
            d = np.hypot(pl.pts[:, 0] - ax, pl.pts[:, 1] - ay)
            if float(np.min(d)) > LEN_TOL:
                continue
            if pl.key not in seen and not srch.blocked(pl, stack):
                seen.add(pl.key)
                out.append(pl)
    out.sort(key=lambda pl: pl.key)
    return out


def surround(kernel: Sequence[Placement], mode: str = EEC_ONLY,
             search_budget: int = DEFAULT_BUDGET,
             reflections: bool = True) -> tuple:
    """One corona around the kernel.  Returns (HeeschReport, Patch);
    the patch carries the first completed layer when one exists."""
    if not kernel:
        raise CoronaError("empty kernel")
    tile = kernel[0].tile
    g = canonical_frame(kernel)
    ginv = g.inverse()
    srch = _Search(tile, mode, search_budget, reflections)
    framed = _reframe(kernel, g, tile)
    layer = None
    for done in _layer_variants(srch, framed, len(framed)):
        layer = done
        break
    caveat = COLLINEAR_CAVEAT if mode == EEC_PLUS_COLLINEAR else None
    stats = {"nodes": srch.nodes,
             "placements_tested": srch.placements_tested,
             "budget_used": srch.used}
    patch = Patch(tile=tile, kernel=list(kernel), layers=[], mode=mode)
    if layer is None:
        report = HeeschReport(
            category=tile.category, params=dict(tile.params),
            placement_model=mode, layers_completed=0,
            status=NO_FIRST_CORONA, certificate=None, caveat=caveat,
            stats=stats, patch=patch)
        return report, patch
    patch.layers.append(_reframe(layer, ginv, tile))
    report = HeeschReport(
        category=tile.category, params=dict(tile.params),
        placement_model=mode, layers_completed=1,
        status=SURROUNDED_K_TIMES, certificate=None, caveat=caveat,
        stats=stats, patch=patch)
    return report, patch


def first_corona_census(p: solver.Pentagon, mode: str = EEC_ONLY,
                        search_budget: int = DEFAULT_BUDGET,
                        reflections: bool = True) -> list:
    """Every distinct first corona of the single tile, as Patch objects
    in canonical search order."""
    kernel = [Placement(p, geom.Isometry.identity())]
    srch = _Search(p, mode, search_budget, reflections)
    out = []
    for done in _layer_variants(srch, kernel, 1):
        out.append(Patch(tile=p, kernel=list(kernel),
                         layers=[list(done)], mode=mode))
    return out


def _extend(srch: _Search, placements: list, layer_idx: int,
            layer_limit: int) -> tuple:
    """Exhaustive layered search from a patch whose first layer_idx - 1
    layers are complete.  Returns (layers_completed, status, certificate,
    new_layers) along the deepest line found."""
    cover_n = len(placements)
    found = False
    any_live = False
    best = (layer_idx - 1, None, None, [])
    for done in _layer_variants(srch, placements, cover_n):
        found = True
        full = placements + done
        if layer_idx >= layer_limit:
            return (layer_idx, LAYER_LIMIT_REACHED, None, [list(done)])
        dead = _dead_passes(srch, full)
        if dead:
            if best[0] < layer_idx:
                certs = [_certificate(srch, bp) for bp in dead]
                best = (layer_idx, DEAD_SPOT_CERTIFICATE, certs,
                        [list(done)])
            continue
        any_live = True
        sub = _extend(srch, full, layer_idx + 1, layer_limit)
        if sub[0] > best[0] or best[1] is None:
            best = (sub[0], sub[1], sub[2], [list(done)] + sub[3])
        if sub[0] >= layer_limit:
            return best
    if not found:
        status = NO_FIRST_CORONA if layer_idx == 1 else SEARCH_EXHAUSTED
        return (layer_idx - 1, status, None, [])
    lc, status, cert, layers = best
    if any_live and status == DEAD_SPOT_CERTIFICATE:
        # some variants were extendable in principle but their searches
        # exhausted, so the universal dead-spot claim does not hold
        status = SEARCH_EXHAUSTED
        cert = None
    return (lc, status, cert, layers)


def heesch_bound(p: solver.Pentagon, mode: str = EEC_ONLY,
                 layer_limit: int = DEFAULT_LAYER_LIMIT,
                 search_budget: int = DEFAULT_BUDGET,
                 reflections: bool = True) -> HeeschReport:
    """Highest completed corona layer count within the layer limit."""
    kernel = [Placement(p, geom.Isometry.identity())]
    srch = _Search(p, mode, search_budget, reflections)
    try:
        layers, status, cert, extra = _extend(srch, kernel, 1, layer_limit)
    except BudgetExceeded as e:
        e.report = {
            "category": p.category, "params": dict(p.params),
            "placement_model": mode, "status": "BUDGET_EXCEEDED",
            "budget": search_budget,
        }
        raise
    caveat = COLLINEAR_CAVEAT if mode == EEC_PLUS_COLLINEAR else None
    patch = Patch(tile=p, kernel=kernel,
                  layers=[list(layer) for layer in extra], mode=mode)
    stats = {"nodes": srch.nodes,
             "placements_tested": srch.placements_tested,
             "budget_used": srch.used}
    return HeeschReport(
        category=p.category, params=dict(p.params), placement_model=mode,
        layers_completed=layers, status=status,
        certificate=cert if cert else None,
        caveat=caveat, stats=stats, patch=patch)


def surround_cluster(p: solver.Pentagon, cluster_spec, mode: str = EEC_ONLY,
                     search_budget: int = DEFAULT_BUDGET,
                     reflections: bool = True) -> HeeschReport:
    """Treats the posed cluster as the kernel and reports whether one
    surrounding layer exists and whether a second one does."""
    kernel = []
    for e in cluster_spec:
        if isinstance(e, Placement):
            kernel.append(e)
        elif isinstance(e, geom.Isometry):
            kernel.append(Placement(p, e))
        else:
            kernel.append(Placement.from_json(p, e))
    for i in range(len(kernel)):
        a = geom.ConvexPolygon.from_points(kernel[i].pts, require_ccw=False)
        for j in range(i + 1, len(kernel)):
            b = geom.ConvexPolygon.from_points(kernel[j].pts,
                                               require_ccw=False)
            if geom.overlap_area(a, b) > OVERLAP_AREA_TOL:
                raise CoronaError("cluster tiles overlap")
    g = canonical_frame(kernel)
    ginv = g.inverse()
    srch = _Search(p, mode, search_budget, reflections)
    framed = _reframe(kernel, g, p)
    layers, status, cert, extra = _extend(srch, framed, 1, 2)
    caveat = COLLINEAR_CAVEAT if mode == EEC_PLUS_COLLINEAR else None
    patch = Patch(tile=p, kernel=list(kernel),
                  layers=[_reframe(layer, ginv, p) for layer in extra],
                  mode=mode)
    if cert:
        mapped = []
        for entry in cert:
            entry = dict(entry)
            gx, gy = ginv.apply_to_point(tuple(entry["vertex"]))
            entry["vertex"] = [round(gx, 9), round(gy, 9)]
            mapped.append(entry)
        cert = mapped
    stats = {"nodes": srch.nodes,
             "placements_tested": srch.placements_tested,
             "budget_used": srch.used}
    return HeeschReport(
        category=p.category, params=dict(p.params), placement_model=mode,
        layers_completed=layers, status=status,
        certificate=cert if cert else None,
        caveat=caveat, stats=stats, patch=patch)


def find_surroundable_cluster(p: solver.Pentagon, size: int = 3,
                              mode: str = EEC_ONLY,
                              search_budget: int = DEFAULT_BUDGET,
                              reflections: bool = True):
    """Search connected edge-glued clusters of the given size for one
    surrounded exactly once and not twice.  Returns (placements, report)
    for the first hit in canonical order, or None."""
    base = Placement(p, geom.Isometry.identity())
    srch = _Search(p, mode, search_budget, reflections)

    def glue_options(stack: _Stack) -> list:
        # cluster tiles need not be surroundable while the cluster is
        # being built, so no endpoint feasibility pruning here
        tr = _trace(stack.items)
        opts = []
        seen = set()
        for i, bp in enumerate(tr.outer_passes):
            if bp.gap_deg <= GAP_TOL_DEG:
                continue
            for pl in _pass_candidates(srch, tr, i, frozenset()):
                if pl.key in seen:
                    continue
                seen.add(pl.key)
                if not srch.blocked(pl, stack):
                    opts.append(pl)
        opts.sort(key=lambda pl: pl.key)
        return opts

    def cluster_key(placements) -> tuple:
        pts = np.vstack([pl.pts for pl in placements])
        best = None
        for flip in (False, True):
            q = pts.copy()
            if flip:
                q[:, 1] = -q[:, 1]
            for a in range(len(q)):
                for b in range(len(q)):
                    if a == b:
                        continue
                    dx, dy = q[b, 0] - q[a, 0], q[b, 1] - q[a, 1]
                    L = math.hypot(dx, dy)
                    if L < 1e-9:
                        continue
                    ct, st = dx / L, -dy / L
                    rx = ct * q[:, 0] - st * q[:, 1]
                    ry = st * q[:, 0] + ct * q[:, 1]
                    ox, oy = min(zip(np.round(rx, 6), np.round(ry, 6)))
                    key = tuple(sorted(zip(np.round(rx - ox, 6),
                                           np.round(ry - oy, 6))))
                    if best is None or key < best:
                        best = key
        return best

    seen_clusters = set()
    stack = _Stack([base])

    def rec(depth: int):
        if depth == size:
            cl = list(stack.items)
            key = cluster_key(cl)
            if key in seen_clusters:
                return None
            seen_clusters.add(key)
            rep = surround_cluster(p, [pl.pose for pl in cl], mode,
                                   search_budget, reflections)
            if rep.layers_completed == 1 and rep.status in (
                    DEAD_SPOT_CERTIFICATE, SEARCH_EXHAUSTED):
                return cl, rep
            return None
        for pl in glue_options(stack):
            stack.push(pl)
            try:
                got = rec(depth + 1)
                if got is not None:
                    return got
            finally:
                stack.pop()
        return None

    return rec(1)


def _segment_distance(a0, a1, b0, b1) -> float:
    def pt_seg(px, py, x0, y0, x1, y1):
        dx, dy = x1 - x0, y1 - y0
        L2 = dx * dx + dy * dy
        if L2 == 0.0:
            return math.hypot(px - x0, py - y0)
        t = max(0.0, min(1.0, ((px - x0) * dx + (py - y0) * dy) / L2))
        return math.hypot(px - (x0 + t * dx), py - (y0 + t * dy))

    return min(pt_seg(a0[0], a0[1], b0[0], b0[1], b1[0], b1[1]),
               pt_seg(a1[0], a1[1], b0[0], b0[1], b1[0], b1[1]),
               pt_seg(b0[0], b0[1], a0[0], a0[1], a1[0], a1[1]),
               pt_seg(b1[0], b1[1], a0[0], a0[1], a1[0], a1[1]))


def _poly_min_dist(p: np.ndarray, q: np.ndarray,
                   stop_at: float = 0.0) -> float:
    best = math.inf
    for i in range(len(p)):
        a0, a1 = p[i], p[(i + 1) % len(p)]
        for j in range(len(q)):
            b0, b1 = q[j], q[(j + 1) % len(q)]
            d = _segment_distance(a0, a1, b0, b1)
            if d < best:
                best = d
                if best <= stop_at:
                    return best
    return best


def validate_patch(patch: Patch) -> dict:
    """Structural audit of a patch: pairwise overlaps, trace defects,
    interior vertex sums, kernel coverage, per-layer adjacency.  Reports
    violations instead of raising.  Pockets enclosed by a layer count as
    boundary, not interior; they are violations only where they expose
    the kernel."""
    violations = []
    placements = patch.all_placements()
    n = len(placements)
    polys = [geom.ConvexPolygon.from_points(pl.pts, require_ccw=False)
             for pl in placements]
    for i in range(n):
        for j in range(i + 1, n):
            dx = placements[i].center[0] - placements[j].center[0]
            dy = placements[i].center[1] - placements[j].center[1]
            rr = placements[i].radius + placements[j].radius
            if dx * dx + dy * dy > rr * rr:
                continue
            area = geom.overlap_area(polys[i], polys[j])
            if area > OVERLAP_AREA_TOL:
                violations.append({"kind": "overlap", "tiles": [i, j],
                                   "area": float(area)})
    tr = None
    try:
        # enclosed pockets between layer tiles are legal as long as the
        # kernel stays interior; walking them puts their boundary pids
        # into the coverage checks below, so a kernel-touching pocket
        # still surfaces as a kernel_coverage violation
        tr = geom.trace_patch([pl.pts for pl in placements],
                              raise_on_defect=False, allow_holes=True)
    except geom.GeometryError as e:
        violations.append({"kind": "trace", "detail": str(e)})
    if tr is not None:
        outer = tr.outer_pids()
        for pid, total in tr.contrib.items():
            if pid in outer:
                continue
            corner = tr.corner_sum.get(pid, 0.0)
            full_ok = abs(total - 360.0) <= GAP_TOL_DEG
            corner_ok = (abs(corner - 360.0) <= GAP_TOL_DEG
                         or abs(corner - 180.0) <= GAP_TOL_DEG)
            if not (full_ok and corner_ok):
                violations.append({
                    "kind": "vertex_sum",
                    "point": [round(tr.points[pid][0], 9),
                              round(tr.points[pid][1], 9)],
                    "corner_sum_deg": round(corner, 6),
                    "total_deg": round(total, 6)})
        if patch.layers:
            kn = len(patch.kernel)
            cover_pids = _cover_pids(tr, kn)
            for seg in tr.outer_segments:
                if seg.tile < kn:
                    violations.append({
                        "kind": "kernel_coverage",
                        "detail": "kernel edge segment on outer boundary",
                        "tile": seg.tile, "slot": seg.slot})
            for bp in tr.outer_passes:
                if bp.pid in cover_pids and bp.gap_deg > SEAL_TOL_DEG:
                    violations.append({
                        "kind": "kernel_coverage",
                        "detail": "kernel point with positive gap",
                        "point": [round(bp.point[0], 9),
                                  round(bp.point[1], 9)],
                        "gap_deg": round(bp.gap_deg, 9)})
    prev = [(pl.pts, pl.center, pl.radius) for pl in patch.kernel]
    offset = len(patch.kernel)
    for li, layer in enumerate(patch.layers):
        for ti, pl in enumerate(layer):
            best = math.inf
            for q, qc, qr in prev:
                lo = math.hypot(pl.center[0] - qc[0],
                                pl.center[1] - qc[1]) - pl.radius - qr
                if lo >= best:
                    continue
                d = _poly_min_dist(pl.pts, q, stop_at=LEN_TOL)
                if d < best:
                    best = d
                    if best <= LEN_TOL:
                        break
            if best > LEN_TOL:
                violations.append({
                    "kind": "layer_adjacency", "layer": li + 1,
                    "tile": offset + ti, "distance": float(best)})
        prev.extend((pl.pts, pl.center, pl.radius) for pl in layer)
        offset += len(layer)
    return {"ok": not violations, "violations": violations}
