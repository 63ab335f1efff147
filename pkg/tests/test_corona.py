"""Corona search engine: frozen search results, certificates, patch
validity, serialization and determinism."""

import json
import math

import numpy as np
import pytest

from pentaheesch import corona, geom, solver, spots

from conftest import regular_pentagon

DEAD_GAP_2E = 170.88991143          # 360 - 2E for the Category 1 tile
CANDIDATE_KEYS_AT_D = [
    (0.4803857, 1.3885472, -0.8813545, -0.4724555, True),
    (1.3883548, 2.5437206, 0.5409576, -0.8410499, True),
]


class TestCat1FirstCorona:
    def test_census_has_four_eec_variants(self, cat1_census):
        assert len(cat1_census) == 4
        assert sorted(len(v.layers[0]) for v in cat1_census) == [6, 6, 7, 7]

    def test_census_variants_validate(self, cat1_census):
        for pat in cat1_census:
            res = corona.validate_patch(pat)
            assert res["ok"], res["violations"]

    def test_every_variant_has_the_2e_dead_vertex(self, cat1, cat1_census):
        e_deg = cat1.angles_deg[4]
        want = 360.0 - 2 * e_deg
        for pat in cat1_census:
            tr = geom.trace_patch([pl.pts for pl in pat.all_placements()])
            gaps = [bp.gap_deg for bp in tr.outer_passes]
            assert any(abs(g - want) <= 1e-6 for g in gaps)
            # and that gap admits no corner combination
            assert not spots.AchievableSums(cat1.angles_deg).feasible(want)

    def test_heesch_bound_report(self, cat1_report):
        rep = cat1_report
        assert rep.layers_completed == 1
        assert rep.status == corona.DEAD_SPOT_CERTIFICATE
        assert rep.placement_model == corona.EEC_ONLY
        assert rep.caveat is None
        gaps = sorted(round(c["gap_deg"], 9) for c in rep.certificate)
        assert DEAD_GAP_2E in gaps
        for c in rep.certificate:
            assert c["feasible"] is False
            assert c["tolerance_deg"] == corona.GAP_TOL_DEG
            assert len(c["vertex"]) == 2
            assert c["nearest_achievable_sums_deg"]

    def test_candidates_at_vertex_d(self, cat1):
        patch = corona.Patch(
            tile=cat1,
            kernel=[corona.Placement(cat1, geom.Isometry.identity())],
            layers=[], mode=corona.EEC_ONLY)
        cands = corona.candidate_placements(patch, cat1.vertices[3])
        assert [pl.key for pl in cands] == CANDIDATE_KEYS_AT_D

    def test_collinear_census_superset(self, cat1):
        col = corona.first_corona_census(
            cat1, mode=corona.EEC_PLUS_COLLINEAR)
        assert len(col) >= 6
        assert len(col) == 10    # regression pin
        for pat in col:
            assert pat.mode == corona.EEC_PLUS_COLLINEAR

    def test_census_deterministic(self, cat1, cat1_census):
        again = corona.first_corona_census(cat1)
        a = [v.to_json() for v in cat1_census]
        b = [v.to_json() for v in again]
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


class TestControls:
    def test_regular_pentagon_has_no_first_corona(self):
        p = regular_pentagon()
        rep = corona.heesch_bound(p)
        assert rep.layers_completed == 0
        assert rep.status == corona.NO_FIRST_CORONA

    def test_embedded_tiles_reach_layer_limit(self):
        for cat, params in ((3, {"n": 1}), (12, {"n": 1})):
            p = solver.solve_category(cat, params)
            rep = corona.heesch_bound(p, layer_limit=2)
            assert rep.layers_completed == 2
            assert rep.status == corona.LAYER_LIMIT_REACHED
            assert all(layer for layer in rep.patch.layers)
            res = corona.validate_patch(rep.patch)
            assert res["ok"], res["violations"]

    def test_collinear_mode_reports_caveat(self, cat1):
        rep = corona.heesch_bound(cat1, mode=corona.EEC_PLUS_COLLINEAR,
                                  layer_limit=1)
        assert rep.caveat == corona.COLLINEAR_CAVEAT
        assert rep.placement_model == corona.EEC_PLUS_COLLINEAR

    def test_invalid_mode_rejected(self, cat1):
        with pytest.raises(corona.CoronaError):
            corona.heesch_bound(cat1, mode="anything-goes")

    def test_budget_exceeded_raises_with_report(self, cat1):
        with pytest.raises(corona.BudgetExceeded) as exc:
            corona.heesch_bound(cat1, search_budget=10)
        rep = exc.value.report
        assert rep["status"] == "BUDGET_EXCEEDED"
        assert rep["budget"] == 10


class TestFrames:
    def test_canonical_frame_invariant_under_motion(self, cat1):
        base = [corona.Placement(cat1, geom.Isometry.identity())]
        g = geom.Isometry(rotation=0.83, translation=(3.5, -1.25),
                          reflected=False)
        moved = [corona.Placement(cat1, g)]
        fb = corona.canonical_frame(base)
        fm = corona.canonical_frame(moved)
        pb = fb.apply_to_points(base[0].pts)
        pm = fm.apply_to_points(moved[0].pts)
        assert np.allclose(np.sort(pb, axis=0), np.sort(pm, axis=0),
                           atol=1e-6)

    def test_surround_matches_identity_search(self, cat1, cat1_census):
        g = geom.Isometry(rotation=-2.1, translation=(0.7, 9.0),
                          reflected=False)
        rep, patch = corona.surround([corona.Placement(cat1, g)])
        assert rep.status == corona.SURROUNDED_K_TIMES
        assert len(patch.layers[0]) == len(cat1_census[0].layers[0])
        # the corona comes back in the caller's frame
        assert np.allclose(patch.kernel[0].pts, g.apply_to_points(
            np.asarray(cat1.vertices)), atol=1e-9)


class TestSerialization:
    def test_patch_roundtrip(self, cat1_census):
        pat = cat1_census[0]
        d = json.loads(json.dumps(pat.to_json()))
        back = corona.Patch.from_json(d)
        assert back.mode == pat.mode
        assert len(back.layers[0]) == len(pat.layers[0])
        for a, b in zip(pat.all_placements(), back.all_placements()):
            assert np.allclose(a.pts, b.pts, atol=1e-9)

    def test_report_json_serializable(self, cat1_report):
        text = json.dumps(cat1_report.to_json(), sort_keys=True)
        d = json.loads(text)
        assert d["layers_completed"] == 1
        assert d["patch"]["pentagon"]["category"] == 1

    def test_placement_roundtrip(self, cat1):
        g = geom.Isometry(rotation=1.0, translation=(0.25, -2.0),
                          reflected=True)
        pl = corona.Placement(cat1, g)
        back = corona.Placement.from_json(cat1, pl.to_json())
        assert back.key == pl.key


class TestClusters:
    def test_overlapping_cluster_rejected(self, cat1):
        ident = geom.Isometry.identity()
        nudge = geom.Isometry(rotation=0.0, translation=(1e-4, 0.0),
                              reflected=False)
        with pytest.raises(corona.CoronaError):
            corona.surround_cluster(cat1, [ident, nudge])

    def test_known_cluster_surrounds_once_not_twice(self):
        p = solver.solve_category(10, {})
        found = corona.find_surroundable_cluster(p, size=3)
        assert found is not None
        placements, rep = found
        assert len(placements) == 3
        assert rep.layers_completed == 1
        assert rep.status in (corona.DEAD_SPOT_CERTIFICATE,
                              corona.SEARCH_EXHAUSTED)
        res = corona.validate_patch(rep.patch)
        assert res["ok"], res["violations"]


class TestValidatePatch:
    def test_no_false_positives_on_census(self, cat1_census):
        for pat in cat1_census:
            assert corona.validate_patch(pat)["ok"]

    @pytest.mark.parametrize("seed", range(4))
    def test_fault_injection_detected(self, cat1_census, seed):
        rng = np.random.default_rng(seed)
        for _ in range(50):
            pat = cat1_census[rng.integers(len(cat1_census))]
            layer = list(pat.layers[0])
            k = int(rng.integers(len(layer)))
            pose = layer[k].pose
            scale = 10.0 ** rng.uniform(-3, -0.5)
            moved = geom.Isometry(
                rotation=pose.rotation + float(rng.normal(0.0, scale)),
                translation=(pose.translation[0] + float(rng.normal(0, scale)),
                             pose.translation[1] + float(rng.normal(0, scale))),
                reflected=pose.reflected)
            layer[k] = corona.Placement(pat.tile, moved)
            broken = corona.Patch(tile=pat.tile, kernel=list(pat.kernel),
                                  layers=[layer], mode=pat.mode)
            assert not corona.validate_patch(broken)["ok"]

    def test_detects_missing_tile(self, cat1_census):
        pat = cat1_census[0]
        broken = corona.Patch(tile=pat.tile, kernel=list(pat.kernel),
                              layers=[pat.layers[0][:-1]], mode=pat.mode)
        assert not corona.validate_patch(broken)["ok"]

    def test_detects_duplicate_tile(self, cat1_census):
        pat = cat1_census[0]
        broken = corona.Patch(tile=pat.tile, kernel=list(pat.kernel),
                              layers=[pat.layers[0] + [pat.layers[0][0]]],
                              mode=pat.mode)
        assert not corona.validate_patch(broken)["ok"]
