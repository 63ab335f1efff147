"""Isometry algebra and patch boundary tracing."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pentaheesch import geom, solver

SQ = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])

angles = st.floats(-math.pi, math.pi)
shifts = st.floats(-5, 5)


def iso(r, tx, ty, refl):
    return geom.Isometry(rotation=r, translation=(tx, ty), reflected=refl)


class TestIsometry:
    @given(r=angles, tx=shifts, ty=shifts, refl=st.booleans(),
           px=shifts, py=shifts)
    @settings(max_examples=150, deadline=None)
    def test_inverse_roundtrip(self, r, tx, ty, refl, px, py):
        g = iso(r, tx, ty, refl)
        q = g.inverse().apply_to_point(g.apply_to_point((px, py)))
        assert q[0] == pytest.approx(px, abs=1e-9)
        assert q[1] == pytest.approx(py, abs=1e-9)

    @given(r1=angles, r2=angles, t1=shifts, t2=shifts,
           f1=st.booleans(), f2=st.booleans(), px=shifts, py=shifts)
    @settings(max_examples=150, deadline=None)
    def test_compose_is_application_order(self, r1, r2, t1, t2, f1, f2,
                                          px, py):
        g = iso(r1, t1, -t1, f1)
        h = iso(r2, t2, 2 * t2, f2)
        lhs = g.compose(h).apply_to_point((px, py))
        rhs = g.apply_to_point(h.apply_to_point((px, py)))
        assert lhs[0] == pytest.approx(rhs[0], abs=1e-9)
        assert lhs[1] == pytest.approx(rhs[1], abs=1e-9)

    def test_reflection_flips_area(self):
        g = iso(0.7, 0.3, -0.2, True)
        out = g.apply_to_points(SQ)
        s = 0.0
        for i in range(4):
            j = (i + 1) % 4
            s += out[i, 0] * out[j, 1] - out[j, 0] * out[i, 1]
        assert s < 0

    def test_identity(self):
        g = geom.Isometry.identity()
        assert g.apply_to_point((1.25, -3.5)) == pytest.approx((1.25, -3.5))


def test_ccw_delta_range():
    assert geom.ccw_delta(0.0, math.pi / 2) == pytest.approx(math.pi / 2)
    assert geom.ccw_delta(math.pi / 2, 0.0) == pytest.approx(3 * math.pi / 2)


class TestTracePatch:
    def test_single_pentagon_gaps(self, cat1=None):
        p = solver.solve_category(1, {})
        pts = np.array(p.vertices)
        tr = geom.trace_patch([pts])
        assert len(tr.outer_passes) == 5
        got = sorted(bp.gap_deg for bp in tr.outer_passes)
        want = sorted(360.0 - a for a in p.angles_deg)
        assert got == pytest.approx(want, abs=1e-9)
        assert tr.hole_cycles == 0
        assert tr.cycle_bounds == [(0, 5)]

    def test_two_squares_collapse(self):
        right = SQ + np.array([1.0, 0.0])
        tr = geom.trace_patch([SQ, right])
        # shared edge cancels; walk has 6 proper corners of gap 270 and
        # straight passes where the rectangles butt
        corner_gaps = [bp.gap_deg for bp in tr.outer_passes
                       if not bp.straight]
        straight = [bp for bp in tr.outer_passes if bp.straight]
        assert len(corner_gaps) == 4
        assert corner_gaps == pytest.approx([270.0] * 4)
        assert len(straight) == 2
        for bp in straight:
            assert bp.gap_deg == pytest.approx(180.0)

    def test_overlapping_same_edge_raises(self):
        with pytest.raises(geom.GeometryError):
            geom.trace_patch([SQ, SQ])

    def test_prev_next_index_cycle(self):
        tr = geom.trace_patch([SQ])
        n = len(tr.outer_passes)
        for i in range(n):
            assert tr.next_index(tr.prev_index(i)) == i
        assert tr.prev_index(0) == n - 1
        assert tr.next_index(n - 1) == 0


def ring_with_hole():
    """Eight unit squares around an empty unit center cell."""
    tiles = []
    for i in range(3):
        for j in range(3):
            if i == 1 and j == 1:
                continue
            tiles.append(SQ + np.array([float(i), float(j)]))
    return tiles


class TestHoles:
    def test_hole_raises_by_default(self):
        with pytest.raises(geom.HoleDetected):
            geom.trace_patch(ring_with_hole())

    def test_allow_holes_walks_the_pocket(self):
        tr = geom.trace_patch(ring_with_hole(), allow_holes=True)
        assert tr.hole_cycles == 1
        assert len(tr.cycle_bounds) == 2
        a, b = tr.cycle_bounds[1]
        hole = tr.outer_passes[a:b]
        gaps = sorted(bp.gap_deg for bp in hole if not bp.straight)
        assert gaps == pytest.approx([90.0] * 4)
        pts = sorted(bp.point for bp in hole if not bp.straight)
        assert pts[0] == pytest.approx((1.0, 1.0))
        assert pts[-1] == pytest.approx((2.0, 2.0))
        # per-cycle predecessor stays inside the hole cycle
        assert a <= tr.prev_index(a) < b

    def test_hole_cycle_rotation_deterministic(self):
        t1 = geom.trace_patch(ring_with_hole(), allow_holes=True)
        t2 = geom.trace_patch(list(reversed(ring_with_hole())),
                              allow_holes=True)
        p1 = [t1.outer_passes[i].point for i in range(*t1.cycle_bounds[1])]
        p2 = [t2.outer_passes[i].point for i in range(*t2.cycle_bounds[1])]
        assert p1 == pytest.approx(p2)


def test_trace_boundary_nodes():
    p = solver.solve_category(1, {})
    poly = geom.ConvexPolygon.from_points(np.array(p.vertices))
    nodes = geom.trace_boundary([poly])
    assert len(nodes) == 5
    assert sorted(n.gap_deg for n in nodes) == \
        pytest.approx(sorted(360.0 - a for a in p.angles_deg), abs=1e-9)
