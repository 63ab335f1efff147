"""Hot-path geometry kernels with a numba and a pure-numpy backend.

The corona search spends nearly all of its time testing candidate tiles
against already placed tiles: rigid-motion transforms, separating-axis
rejection and convex clipping.  Those primitives live here as plain
array-in/array-out functions written in a loop style that numba can
compile without object mode.

Backend selection:
  - PENTAHEESCH_BACKEND=numpy   force the interpreted implementations
  - PENTAHEESCH_BACKEND=numba   require numba (error if missing)
  - unset                       numba when importable, else numpy

Both implementations stay importable at runtime (see numpy_impls() and
numba_impls()) so benchmarks/bench_kernels.py can time one against the
other in a single process.
"""

from __future__ import annotations

import math
import os

import numpy as np

ENV_FLAG = "PENTAHEESCH_BACKEND"


def _poly_area(pts, n):
    # Shoelace formula; positive for counterclockwise rings.
    s = 0.0
    for i in range(n):
        j = i + 1
        if j == n:
            j = 0
        s += pts[i, 0] * pts[j, 1] - pts[j, 0] * pts[i, 1]
    return 0.5 * s


def _transform(pts, cos_t, sin_t, tx, ty, reflected):
    # Reflection (across the x axis) happens before the rotation.
    n = pts.shape[0]
    out = np.empty((n, 2))
    for i in range(n):
        x = pts[i, 0]
        y = pts[i, 1]
        if reflected:
            y = -y
        out[i, 0] = cos_t * x - sin_t * y + tx
        out[i, 1] = sin_t * x + cos_t * y + ty
    return out


def _sat_separated(p, q, slack):
    # Convex-convex separating axis test over both polygons' edge normals.
    # Returns True when some axis shows penetration <= slack, which treats
    # exact edge/vertex kisses as separated.
    np_, nq = p.shape[0], q.shape[0]
    for which in range(2):
        if which == 0:
            poly, other, n1, n2 = p, q, np_, nq
        else:
            poly, other, n1, n2 = q, p, nq, np_
        for i in range(n1):
            j = i + 1
            if j == n1:
                j = 0
            ex = poly[j, 0] - poly[i, 0]
            ey = poly[j, 1] - poly[i, 1]
            # outward normal of a CCW edge
            nx = ey
            ny = -ex
            norm = math.sqrt(nx * nx + ny * ny)
            if norm == 0.0:
                continue
            nx /= norm
            ny /= norm
            max_self = -1e300
            for k in range(n1):
                d = nx * poly[k, 0] + ny * poly[k, 1]
                if d > max_self:
                    max_self = d
            min_other = 1e300
            for k in range(n2):
                d = nx * other[k, 0] + ny * other[k, 1]
                if d < min_other:
                    min_other = d
            if min_other - max_self >= -slack:
                return True
    return False


def _clip_area(p, q):
    # Area of intersection by Sutherland-Hodgman clipping of p against the
    # half-planes of q.  Convex rings in either orientation (reflected
    # placements arrive clockwise); both are oriented CCW here first.
    np_, nq = p.shape[0], q.shape[0]
    sp = 0.0
    for i in range(np_):
        j = i + 1
        if j == np_:
            j = 0
        sp += p[i, 0] * p[j, 1] - p[j, 0] * p[i, 1]
    sq = 0.0
    for i in range(nq):
        j = i + 1
        if j == nq:
            j = 0
        sq += q[i, 0] * q[j, 1] - q[j, 0] * q[i, 1]
    maxv = np_ + nq + 4
    cur = np.empty((maxv, 2))
    nxt = np.empty((maxv, 2))
    qq = np.empty((nq, 2))
    for i in range(np_):
        k = i if sp >= 0.0 else np_ - 1 - i
        cur[i, 0] = p[k, 0]
        cur[i, 1] = p[k, 1]
    for i in range(nq):
        k = i if sq >= 0.0 else nq - 1 - i
        qq[i, 0] = q[k, 0]
        qq[i, 1] = q[k, 1]
    ncur = np_
    for e in range(nq):
        f = e + 1
        if f == nq:
            f = 0
        ax = qq[e, 0]
        ay = qq[e, 1]
        ex = qq[f, 0] - ax
        ey = qq[f, 1] - ay
        nn = 0
        for i in range(ncur):
            j = i + 1
            if j == ncur:
                j = 0
            px = cur[i, 0]
            py = cur[i, 1]
            qx = cur[j, 0]
            qy = cur[j, 1]
            dp = ex * (py - ay) - ey * (px - ax)
            dq = ex * (qy - ay) - ey * (qx - ax)
            if dp >= 0.0:
                nxt[nn, 0] = px
                nxt[nn, 1] = py
                nn += 1
            if (dp > 0.0 and dq < 0.0) or (dp < 0.0 and dq > 0.0):
                t = dp / (dp - dq)
                nxt[nn, 0] = px + t * (qx - px)
                nxt[nn, 1] = py + t * (qy - py)
                nn += 1
        if nn == 0:
            return 0.0
        for i in range(nn):
            cur[i, 0] = nxt[i, 0]
            cur[i, 1] = nxt[i, 1]
        ncur = nn
    # shoelace, inline so the function jits as one self-contained unit
    a = 0.0
    for i in range(ncur):
        j = i + 1
        if j == ncur:
            j = 0
        a += cur[i, 0] * cur[j, 1] - cur[j, 0] * cur[i, 1]
    a *= 0.5
    if a < 0.0:
        return 0.0
    return a


def _overlap_area(p, q, slack):
    if _sat_separated(p, q, slack):
        return 0.0
    return _clip_area(p, q)


def _first_blocking_overlap(others, m, centers, radii, p, pc, pr, slack, area_tol):
    # Index of the first placed tile whose intersection area with p exceeds
    # area_tol, or -1.  Bounding-circle prefilter, then SAT, then clipping.
    for k in range(m):
        dx = centers[k, 0] - pc[0]
        dy = centers[k, 1] - pc[1]
        rr = radii[k] + pr
        if dx * dx + dy * dy > rr * rr:
            continue
        if _sat_separated(others[k], p, slack):
            continue
        if _clip_area(others[k], p) > area_tol:
            return k
    return -1


_IMPL_NAMES = (
    "poly_area",
    "transform",
    "sat_separated",
    "clip_area",
    "overlap_area",
    "first_blocking_overlap",
)

_NUMPY_IMPLS = {
    "poly_area": _poly_area,
    "transform": _transform,
    "sat_separated": _sat_separated,
    "clip_area": _clip_area,
    "overlap_area": _overlap_area,
    "first_blocking_overlap": _first_blocking_overlap,
}

_numba_cache = None


def numpy_impls():
    """The interpreted kernel set (always available)."""
    return dict(_NUMPY_IMPLS)


def numba_impls():
    """Compile (once) and return the numba kernel set."""
    global _numba_cache
    if _numba_cache is None:
        from numba import njit

        jit = njit(cache=True, fastmath=False)
        poly_area = jit(_poly_area)
        transform = jit(_transform)
        sat_separated = jit(_sat_separated)
        clip_area = jit(_clip_area)

        @jit
        def overlap_area(p, q, slack):
            if sat_separated(p, q, slack):
                return 0.0
            return clip_area(p, q)

        @jit
        def first_blocking_overlap(others, m, centers, radii, p, pc, pr, slack, area_tol):
            for k in range(m):
                dx = centers[k, 0] - pc[0]
                dy = centers[k, 1] - pc[1]
                rr = radii[k] + pr
                if dx * dx + dy * dy > rr * rr:
                    continue
                if sat_separated(others[k], p, slack):
                    continue
                if clip_area(others[k], p) > area_tol:
                    return k
            return -1

        _numba_cache = {
            "poly_area": poly_area,
            "transform": transform,
            "sat_separated": sat_separated,
            "clip_area": clip_area,
            "overlap_area": overlap_area,
            "first_blocking_overlap": first_blocking_overlap,
        }
    return dict(_numba_cache)


def _pick_backend():
    choice = os.environ.get(ENV_FLAG, "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(f"{ENV_FLAG} must be 'numba' or 'numpy', got {choice!r}")
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise RuntimeError(f"{ENV_FLAG}=numba but numba is not installed")
        return "numpy"
    return "numba"


BACKEND = _pick_backend()

_active = numba_impls() if BACKEND == "numba" else numpy_impls()

poly_area = _active["poly_area"]
transform = _active["transform"]
sat_separated = _active["sat_separated"]
clip_area = _active["clip_area"]
overlap_area = _active["overlap_area"]
first_blocking_overlap = _active["first_blocking_overlap"]
