"""Backend equivalence and unit behavior of the hot-path kernels."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pentaheesch import kernels

NUMPY = kernels.numpy_impls()
NUMBA = kernels.numba_impls()
BOTH = [NUMPY] + ([NUMBA] if NUMBA is not None else [])

SQ = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def shifted(pts, dx, dy):
    out = np.array(pts, dtype=np.float64)
    out[:, 0] += dx
    out[:, 1] += dy
    return out


@pytest.mark.parametrize("impl", BOTH, ids=["numpy", "numba"][: len(BOTH)])
class TestEachBackend:
    def test_poly_area_signs(self, impl):
        assert impl["poly_area"](SQ, 4) == pytest.approx(1.0)
        assert impl["poly_area"](SQ[::-1].copy(), 4) == pytest.approx(-1.0)

    def test_transform_rotation(self, impl):
        out = impl["transform"](SQ, math.cos(math.pi / 2),
                                math.sin(math.pi / 2), 2.0, 3.0, False)
        assert np.allclose(out[1], [2.0, 4.0], atol=1e-12)

    def test_transform_reflect_before_rotate(self, impl):
        # reflection across the x axis happens first, then the rotation
        out = impl["transform"](SQ, math.cos(math.pi / 2),
                                math.sin(math.pi / 2), 0.0, 0.0, True)
        assert np.allclose(out[2], [1.0, 1.0], atol=1e-12)
        assert impl["poly_area"](out, 4) == pytest.approx(-1.0)

    def test_clip_area_full_and_partial(self, impl):
        assert impl["clip_area"](SQ, SQ) == pytest.approx(1.0)
        assert impl["clip_area"](SQ, shifted(SQ, 0.5, 0.0)) == pytest.approx(0.5)
        assert impl["clip_area"](SQ, shifted(SQ, 2.0, 0.0)) == pytest.approx(0.0)

    def test_clip_area_accepts_clockwise_rings(self, impl):
        # reflected placements arrive clockwise; both orders must agree
        cw = SQ[::-1].copy()
        assert impl["clip_area"](cw, SQ) == pytest.approx(1.0)
        assert impl["clip_area"](SQ, cw) == pytest.approx(1.0)
        assert impl["clip_area"](cw, shifted(cw, 0.5, 0.5)) == pytest.approx(0.25)

    def test_sat_separated(self, impl):
        assert impl["sat_separated"](SQ, shifted(SQ, 1.5, 0.0), 1e-9)
        assert not impl["sat_separated"](SQ, shifted(SQ, 0.5, 0.0), 1e-9)
        # abutting squares separate under slack: shared edge is contact
        assert impl["sat_separated"](SQ, shifted(SQ, 1.0, 0.0), 1e-9)

    def test_first_blocking_overlap(self, impl):
        others = np.zeros((2, 5, 2))
        others[0, :4] = SQ
        others[0, 4] = SQ[3]
        others[1, :4] = shifted(SQ, 3.0, 0.0)
        others[1, 4] = others[1, 3]
        centers = np.array([[0.5, 0.5], [3.5, 0.5]])
        radii = np.array([0.8, 0.8])
        probe = np.zeros((5, 2))
        probe[:4] = shifted(SQ, 0.25, 0.25)
        probe[4] = probe[3]
        pc = np.array([0.75, 0.75])
        idx = impl["first_blocking_overlap"](others, 2, centers, radii,
                                             probe, pc, 0.8, 1e-9, 1e-9)
        assert idx == 0
        probe2 = np.zeros((5, 2))
        probe2[:4] = shifted(SQ, 1.0, 0.0)
        probe2[4] = probe2[3]
        idx2 = impl["first_blocking_overlap"](others, 2, centers, radii,
                                              probe2, np.array([1.5, 0.5]),
                                              0.8, 1e-9, 1e-9)
        assert idx2 == -1


@pytest.mark.skipif(NUMBA is None, reason="numba backend unavailable")
class TestBackendEquivalence:
    @given(dx=st.floats(-2, 2), dy=st.floats(-2, 2),
           rot=st.floats(0, 2 * math.pi), refl=st.booleans())
    @settings(max_examples=120, deadline=None)
    def test_overlap_area_matches(self, dx, dy, rot, refl):
        q = NUMPY["transform"](SQ, math.cos(rot), math.sin(rot), dx, dy, refl)
        a = NUMPY["overlap_area"](SQ, q, 1e-9)
        b = NUMBA["overlap_area"](SQ, q, 1e-9)
        assert a == pytest.approx(b, abs=1e-10)

    @given(dx=st.floats(-2, 2), dy=st.floats(-2, 2),
           rot=st.floats(0, 2 * math.pi))
    @settings(max_examples=120, deadline=None)
    def test_sat_matches(self, dx, dy, rot):
        q = NUMPY["transform"](SQ, math.cos(rot), math.sin(rot), dx, dy, False)
        assert NUMPY["sat_separated"](SQ, q, 1e-9) == \
            NUMBA["sat_separated"](SQ, q, 1e-9)

    def test_transform_bitwise(self):
        q1 = NUMPY["transform"](SQ, 0.6, 0.8, 0.1, -0.2, True)
        q2 = NUMBA["transform"](SQ, 0.6, 0.8, 0.1, -0.2, True)
        assert np.array_equal(q1, q2)


def test_env_flag_documented():
    assert kernels.ENV_FLAG == "PENTAHEESCH_BACKEND"
    assert kernels.BACKEND in ("numpy", "numba")
