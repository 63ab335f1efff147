"""From category constraints to a concrete pentagon.

The angle relations are linear in the five interior angles, so the
generic path runs float Gaussian elimination on them (plus the 540
degree angle sum).  Every two-edge-class family is left with one free
angle, which polygon closure turns into a one-dimensional root-finding
problem: the two edge-class direction sums must be antiparallel.  The
three-edge-class families come out fully pinned and closure instead
solves a 2x2 system for the two unknown class lengths.

Categories 1, 3 and 4 also have closed-form parameterizations (lambda
with epsilon(lambda), sigma/mu, alpha/beta).  Those run as a fast path
whose angles must agree with the generic path to 1e-9 rad; any larger
disagreement raises, guarding against mis-transcribed relations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy.optimize import brentq

from . import catalog, geom
from .catalog import Category, EDGE_NAMES, LETTERS

ANGLE_MARGIN_DEG = 1e-6     # open-interval margin on (0, 180) for scans
SCAN_STEP_DEG = 0.05        # closure-residual scan granularity (~1e-3 rad)
CLASS_SEP = 1e-6            # declared-unequal edge classes must differ by more
FAST_PATH_TOL = 1e-9        # rad, closed form vs generic disagreement is fatal


class SolverError(Exception):
    pass


class NoSolution(SolverError):
    """No convex pentagon satisfies the instantiated constraints."""


class NonConvex(SolverError):
    """The relations pin an angle outside (0, 180) degrees."""


@dataclass(frozen=True)
class SolverTrace:
    aux: dict            # named auxiliary angles, radians
    residuals: dict      # relation/closure residuals
    iterations: int      # root-finder iterations on the accepted root
    dof: int
    method: str


@dataclass(frozen=True)
class Pentagon:
    category: int
    params: dict
    angles: tuple       # radians, order A..E
    edges: tuple        # lengths, order a..e
    vertices: tuple     # five (x, y), A at origin, b along +x
    trace: SolverTrace

    @property
    def angles_deg(self) -> tuple:
        return tuple(math.degrees(t) for t in self.angles)

    def side_length(self, side: int) -> float:
        """Length of polygon side (vertex side -> side+1)."""
        return self.edges[catalog.side_edge_index(side)]

    def polygon(self) -> geom.ConvexPolygon:
        return geom.ConvexPolygon.from_points(self.vertices)

    def min_angle_deg(self) -> float:
        return min(self.angles_deg)


def _relation_matrix(spec: Category) -> tuple[np.ndarray, np.ndarray]:
    rows = []
    rhs = []
    for rel in spec.relations:
        rows.append([float(rel.get(L, 0)) for L in LETTERS])
        rhs.append(360.0)
    rows.append([1.0] * 5)
    rhs.append(540.0)
    return np.array(rows), np.array(rhs)


def _linear_solution(spec: Category) -> tuple[np.ndarray, Optional[np.ndarray], int]:
    """Reduce the relation system; returns (base, direction, dof in {0, 1})."""
    m, b = _relation_matrix(spec)
    aug = np.hstack([m, b[:, None]])
    nrow = aug.shape[0]
    piv_cols: list[int] = []
    r = 0
    for c in range(5):
        if r >= nrow:
            break
        i = int(np.argmax(np.abs(aug[r:, c]))) + r
        if abs(aug[i, c]) < 1e-9:
            continue
        aug[[r, i]] = aug[[i, r]]
        aug[r] /= aug[r, c]
        for j in range(nrow):
            if j != r and abs(aug[j, c]) > 0.0:
                aug[j] -= aug[j, c] * aug[r]
        piv_cols.append(c)
        r += 1
    for j in range(r, nrow):
        if abs(aug[j, 5]) > 1e-9:
            raise NoSolution("angle relations are mutually inconsistent")
    dof = 5 - len(piv_cols)
    free_cols = [c for c in range(5) if c not in piv_cols]
    base = np.zeros(5)
    for row, c in enumerate(piv_cols):
        base[c] = aug[row, 5]
    if dof == 0:
        return base, None, 0
    if dof > 1:
        raise SolverError(f"category {spec.id}: relations leave {dof} free angles")
    f = free_cols[0]
    direction = np.zeros(5)
    direction[f] = 1.0
    for row, c in enumerate(piv_cols):
        direction[c] = -aug[row, f]
    return base, direction, 1


def _t_interval(base: np.ndarray, direction: np.ndarray) -> tuple[float, float]:
    lo, hi = -math.inf, math.inf
    for i in range(5):
        d, b = direction[i], base[i]
        a_lo, a_hi = ANGLE_MARGIN_DEG, 180.0 - ANGLE_MARGIN_DEG
        if abs(d) < 1e-12:
            if not (a_lo < b < a_hi):
                raise NoSolution(
                    f"angle {LETTERS[i]} is pinned at {b:.6g} degrees by the relations")
            continue
        t1, t2 = (a_lo - b) / d, (a_hi - b) / d
        if t1 > t2:
            t1, t2 = t2, t1
        lo, hi = max(lo, t1), min(hi, t2)
    if not (lo < hi):
        raise NoSolution("no convex angle assignment satisfies the relations")
    return lo, hi


def _side_dirs(angles_rad: Sequence[float]) -> np.ndarray:
    """Unit direction of each polygon side; side 0 along +x, exterior
    turn pi - interior angle at each subsequent vertex."""
    phis = np.empty(5)
    phis[0] = 0.0
    for i in range(1, 5):
        phis[i] = phis[i - 1] + (math.pi - angles_rad[i])
    return phis


def _class_sums(angles_rad, side_cls, k) -> np.ndarray:
    phis = _side_dirs(angles_rad)
    s = np.zeros((k, 2))
    for i in range(5):
        s[side_cls[i], 0] += math.cos(phis[i])
        s[side_cls[i], 1] += math.sin(phis[i])
    return s


def _cross(u, v) -> float:
    return u[0] * v[1] - u[1] * v[0]


def _closure_root(base, direction, side_cls) -> tuple[float, float, int, int]:
    """Scan the free angle for the antiparallel-closure root (two edge
    classes).  Returns (t, ratio, iterations, roots found)."""
    t_lo, t_hi = _t_interval(base, direction)

    def f(t):
        s = _class_sums(np.radians(base + t * direction), side_cls, 2)
        return _cross(s[0], s[1])

    def valid(t):
        s = _class_sums(np.radians(base + t * direction), side_cls, 2)
        n0, n1 = math.hypot(*s[0]), math.hypot(*s[1])
        if n1 < 1e-12 or n0 < 1e-12:
            return None
        if np.dot(s[0], s[1]) >= 0.0:
            return None
        return n0 / n1

    n = max(256, int((t_hi - t_lo) / SCAN_STEP_DEG) + 2)
    ts = np.linspace(t_lo, t_hi, n)
    fs = np.array([f(t) for t in ts])
    roots: list[tuple[float, float, int]] = []
    for i in range(n - 1):
        fa, fb = fs[i], fs[i + 1]
        if fa == 0.0:
            fa = -fs[max(i - 1, 0)] if i else fb
        if fa * fb < 0.0:
            x, info = brentq(f, ts[i], ts[i + 1], xtol=1e-13, full_output=True)
            r = valid(x)
            if r is not None and r > 1e-9:
                if not any(abs(x - prev) < 1e-7 for prev, _, _ in roots):
                    roots.append((x, r, info.iterations))
    if not roots:
        raise NoSolution("closure is never achieved inside the convex bracket")
    roots.sort()
    t, r, iters = roots[0]
    return t, r, iters, len(roots)


def _ratio_antiparallel(angles_rad, side_cls) -> float:
    s = _class_sums(angles_rad, side_cls, 2)
    n0, n1 = math.hypot(*s[0]), math.hypot(*s[1])
    if n1 < 1e-12 or abs(_cross(s[0], s[1])) > 1e-9 * max(n0 * n1, 1.0) \
            or np.dot(s[0], s[1]) >= 0.0:
        raise NoSolution("pinned angles do not close a two-class pentagon")
    return n0 / n1


def _ratios_2x2(angles_rad, side_cls, k) -> list[float]:
    s = _class_sums(angles_rad, side_cls, k)
    m = np.array([[s[1][0], s[2][0]], [s[1][1], s[2][1]]])
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(det) < 1e-12:
        raise NoSolution("closure system is singular for the pinned angles")
    r = np.linalg.solve(m, -s[0])
    if r[0] <= 1e-9 or r[1] <= 1e-9:
        raise NoSolution("closure forces a nonpositive edge length")
    return [1.0, float(r[0]), float(r[1])]


def _walk(angles_rad, side_lengths) -> tuple[tuple, float]:
    phis = _side_dirs(angles_rad)
    pts = [(0.0, 0.0)]
    x = y = 0.0
    for i in range(5):
        x += side_lengths[i] * math.cos(phis[i])
        y += side_lengths[i] * math.sin(phis[i])
        pts.append((x, y))
    residual = math.hypot(x, y)
    return tuple(pts[:5]), residual


# closed forms

def _fast_cat1() -> tuple[np.ndarray, dict, int]:
    def eps(lam):
        s2 = math.sin(2 * lam)
        return math.atan(s2 * s2 / (math.cos(lam) - s2 * math.cos(2 * lam)))

    def g(lam_deg):
        lam = math.radians(lam_deg)
        return 7 * lam_deg + 2 * math.degrees(eps(lam)) - 270.0

    lam_deg, info = brentq(g, 15.64, 45.0 - 1e-9, xtol=1e-13, full_output=True)
    lam = math.radians(lam_deg)
    e = eps(lam)
    ang = np.array([
        90.0 + lam_deg,
        180.0 - 2 * lam_deg,
        lam_deg + math.degrees(e),
        270.0 - 4 * lam_deg - math.degrees(e),
        4 * lam_deg,
    ])
    aux = {"lambda": lam, "epsilon": e,
           "gamma": (math.pi - math.radians(ang[4])) / 2.0}
    return ang, aux, info.iterations


def cat3_sigma() -> float:
    """sin(sigma) = (-1 + sqrt(17)) / 4, radians."""
    return math.asin((math.sqrt(17.0) - 1.0) / 4.0)


def cat3_mu(n: int) -> float:
    """mu pinned by (n+1)D + C + E = 360 within the sigma family, radians."""
    if n < 1:
        raise NoSolution("no mu in (0, 90) degrees for n < 1")
    sigma = cat3_sigma()
    mu = math.pi / 2 - (math.pi / 2 - sigma) / (2 * n)
    if not (0.0 < mu < math.pi / 2):
        raise NoSolution(f"mu = {math.degrees(mu):.4f} degrees outside (0, 90)")
    return mu


def _fast_cat3(n: int) -> tuple[np.ndarray, dict, int]:
    sigma, mu = cat3_sigma(), cat3_mu(n)
    sd, md = math.degrees(sigma), math.degrees(mu)
    ang = np.array([90.0 + sd, 180.0 - 2 * sd, 90.0 + md, 180.0 - 2 * md, md + sd])
    return ang, {"sigma": sigma, "mu": mu}, 0


def _cat4_beta(alpha: float) -> float:
    return math.acos(math.cos(alpha) / math.sin(alpha))


def cat4_alpha(m: int, n: int) -> tuple[float, int]:
    """alpha in (45, 90) degrees solving mB + nE + A = 360, radians."""
    def g(alpha_deg):
        a = math.radians(alpha_deg)
        beta_deg = math.degrees(_cat4_beta(a))
        A = 90.0 + beta_deg
        B = 180.0 - 2 * beta_deg
        E = 180.0 - 2 * alpha_deg
        return m * B + n * E + A - 360.0

    lo, hi = 45.0 + 1e-7, 90.0 - 1e-7
    glo, ghi = g(lo), g(hi)
    if glo == 0.0:
        return math.radians(lo), 0
    if glo * ghi > 0.0:
        raise NoSolution(f"no alpha in (45, 90) degrees for (m, n) = ({m}, {n})")
    alpha_deg, info = brentq(g, lo, hi, xtol=1e-13, full_output=True)
    return math.radians(alpha_deg), info.iterations


def _fast_cat4(m: int, n: int) -> tuple[np.ndarray, dict, int]:
    alpha, iters = cat4_alpha(m, n)
    beta = _cat4_beta(alpha)
    ad, bd = math.degrees(alpha), math.degrees(beta)
    ang = np.array([90.0 + bd, 180.0 - 2 * bd, ad + bd, 90.0 + ad, 180.0 - 2 * ad])
    return ang, {"alpha": alpha, "beta": beta}, iters


def solve(spec: Category) -> tuple[Pentagon, SolverTrace]:
    """Solve an instantiated category to a concrete pentagon.

    Raises NoSolution when the constraints admit no convex pentagon
    (empty root bracket, closure failure) and NonConvex when the
    relations pin an angle at or beyond 0/180 degrees.
    """
    base, direction, dof = _linear_solution(spec)
    side_cls = [spec.edge_class_of_side(i) for i in range(5)]
    k = len(spec.edge_classes)
    aux: dict = {}
    iters = 0
    n_roots = 1

    if dof == 0:
        ang_deg = base
        bad = [L for L, a in zip(LETTERS, ang_deg)
               if not (ANGLE_MARGIN_DEG < a < 180.0 - ANGLE_MARGIN_DEG)]
        if bad:
            vals = ", ".join(f"{L} = {ang_deg[LETTERS.index(L)]:.6g}" for L in bad)
            raise NonConvex(f"relations pin angles outside (0, 180): {vals}")
        angles = np.radians(ang_deg)
        if k == 2:
            ratios = [1.0, _ratio_antiparallel(angles, side_cls)]
        elif k == 3:
            ratios = _ratios_2x2(angles, side_cls, k)
        else:
            raise SolverError(f"category {spec.id}: unsupported class count {k}")
        method = "linear+ratios"
    else:
        if k != 2:
            raise SolverError(
                f"category {spec.id}: {k} edge classes leave the angle family unpinned")
        t, ratio, iters, n_roots = _closure_root(base, direction, side_cls)
        ang_deg = base + t * direction
        angles = np.radians(ang_deg)
        ratios = [1.0, ratio]
        method = "closure-root"

    for i in range(k):
        for j in range(i + 1, k):
            if abs(ratios[i] - ratios[j]) <= CLASS_SEP:
                raise NoSolution(
                    f"edge classes {i} and {j} collapse to the same length "
                    f"({ratios[i]:.9g} vs {ratios[j]:.9g})")

    edges = tuple(ratios[spec.edge_class_index(e)] for e in EDGE_NAMES)
    side_lengths = [edges[catalog.side_edge_index(i)] for i in range(5)]
    verts, closure_res = _walk(angles, side_lengths)

    residuals = {
        "relation_max_rad": float(max(
            abs(sum(rel.get(L, 0) * angles[i] for i, L in enumerate(LETTERS))
                - 2 * math.pi)
            for rel in spec.relations)),
        "angle_sum_rad": abs(float(np.sum(angles)) - 3 * math.pi),
        "closure": closure_res,
    }

    if spec.id in (1, 3, 4):
        if spec.id == 1:
            fast_deg, fast_aux, fit = _fast_cat1()
        elif spec.id == 3:
            fast_deg, fast_aux, fit = _fast_cat3(spec.params["n"])
        else:
            fast_deg, fast_aux, fit = _fast_cat4(spec.params["m"], spec.params["n"])
        diff = float(np.max(np.abs(np.radians(fast_deg) - angles)))
        if diff > FAST_PATH_TOL:
            raise SolverError(
                f"category {spec.id}: closed form disagrees with the generic "
                f"path by {diff:.3g} rad")
        aux.update(fast_aux)
        residuals["fast_vs_generic_rad"] = diff
        iters = max(iters, fit)
        method += "+closed-form"

    if n_roots > 1:
        aux["closure_roots"] = float(n_roots)

    trace = SolverTrace(aux=aux, residuals=residuals, iterations=iters,
                        dof=dof, method=method)
    pent = Pentagon(
        category=spec.id,
        params=dict(spec.params),
        angles=tuple(float(a) for a in angles),
        edges=edges,
        vertices=verts,
        trace=trace,
    )
    validate_pentagon(pent, spec)
    return pent, trace


def solve_category(cat_id: int, params: Optional[dict] = None, *,
                   unchecked: bool = False) -> Pentagon:
    spec = catalog.get_category(cat_id, params, unchecked=unchecked)
    pent, _ = solve(spec)
    return pent


def validate_pentagon(p: Pentagon, spec: Optional[Category] = None):
    """Invariant suite; raises SolverError on any violation."""
    if abs(sum(p.angles) - 3 * math.pi) > 1e-10:
        raise SolverError("angle sum differs from 3*pi beyond 1e-10")
    for L, a in zip(LETTERS, p.angles):
        if not (0.0 < a < math.pi):
            raise SolverError(f"angle {L} = {a} rad not strictly convex")
    if spec is None:
        spec = catalog.get_category(p.category, p.params, unchecked=True)
    for cls in spec.edge_classes:
        vals = [p.edges[EDGE_NAMES.index(e)] for e in cls]
        if max(vals) - min(vals) > 1e-10:
            raise SolverError(f"edge class {cls} not equal within 1e-10")
    reps = [p.edges[EDGE_NAMES.index(cls[0])] for cls in spec.edge_classes]
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if abs(reps[i] - reps[j]) <= CLASS_SEP:
                raise SolverError("declared-unequal edge classes agree numerically")
    side_lengths = [p.side_length(i) for i in range(5)]
    _, res = _walk(p.angles, side_lengths)
    if res > 1e-9:
        raise SolverError(f"closure residual {res:.3g} exceeds 1e-9")


def family_parameter(spec_or_id: Union[Category, int], target=None) -> float:
    """Auxiliary family angle, radians: mu for the n-family, alpha for
    the (m, n)-family.  target is n, (m, n), or None when spec_or_id is
    an instantiated Category carrying its own params."""
    if isinstance(spec_or_id, Category):
        cat_id, params = spec_or_id.id, spec_or_id.params
    else:
        cat_id = spec_or_id
        if target is None:
            raise SolverError("family_parameter needs target parameters")
        if isinstance(target, dict):
            params = target
        elif isinstance(target, tuple):
            params = {"m": target[0], "n": target[1]}
        else:
            params = {"n": int(target)}
    catalog.get_category(cat_id, params)  # domain gate
    if cat_id == 3:
        return cat3_mu(params["n"])
    if cat_id == 4:
        return cat4_alpha(params["m"], params["n"])[0]
    if cat_id == 1:
        _, aux, _ = _fast_cat1()
        return aux["lambda"]
    raise SolverError(f"category {cat_id} has no printed family parameterization")


def type7_uniqueness_check(grid: int = 25) -> dict:
    """Sweep the 2B+C = 2D+A family (A = 180 - 2 alpha, B = 90 + beta,
    C = 180 - 2 beta, D = 90 + alpha, E = alpha + beta) and confirm that
    n*E = 360 - A - C admits the integer n = 2 only."""
    samples = []
    n_values = set()
    alphas = np.linspace(1.0, 89.0, grid).tolist()
    betas = np.linspace(1.0, 89.0, grid).tolist()
    for ad in alphas:
        for bd in betas:
            E = ad + bd
            n = (360.0 - (180.0 - 2 * ad) - (180.0 - 2 * bd)) / E
            n_values.add(round(n, 9))
            if len(samples) < 50:
                samples.append((float(ad), float(bd), float(n)))
    return {
        "relation": "n*E = 360 - A - C = 2*alpha + 2*beta",
        "unique_n": 2,
        "always_two": n_values == {2.0},
        "n_values": sorted(n_values),
        "samples": samples,
        "infeasible": {1: "E = 2E forces E = 0", 3: "3E = 2E forces E = 0"},
    }


def build_coordinates(p: Pentagon) -> geom.ConvexPolygon:
    """Vertices A..E counterclockwise, A at the origin, edge b along +x."""
    side_lengths = [p.side_length(i) for i in range(5)]
    verts, res = _walk(p.angles, side_lengths)
    if res > 1e-9:
        raise SolverError(f"closure residual {res:.3g} exceeds 1e-9")
    return geom.ConvexPolygon.from_points(verts)


def pentagon_json(p: Pentagon) -> dict:
    return {
        "category": p.category,
        "params": p.params,
        "angles_deg": list(p.angles_deg),
        "edges": list(p.edges),
        "vertices": [list(v) for v in p.vertices],
        "trace": ({"aux": dict(p.trace.aux),
                   "residuals": dict(p.trace.residuals)}
                  if p.trace is not None else {}),
    }
