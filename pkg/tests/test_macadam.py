"""Atlas integrity, endpoint geometry, and ellipse interpolation."""

import math

import pytest
from hypothesis import given, strategies as st

from chromavib.colorimetry import Chromaticity
from chromavib.macadam import (
    ChromaticityOutOfDiagram,
    MacAdamEllipse,
    atlas_table,
    builtin_atlas,
    endpoint_coords,
    endpoints,
    interpolate_ellipse,
    metric_matrix,
)

ATLAS = builtin_atlas()


class TestAtlas:
    def test_size_and_ids(self):
        assert len(ATLAS) == 25
        assert [e.id for e in ATLAS] == list(range(1, 26))

    def test_known_rows(self):
        e1, e4, e25 = ATLAS[0], ATLAS[3], ATLAS[24]
        assert (e1.center.x, e1.center.y) == (0.1600, 0.0570)
        assert (e1.a, e1.b, e1.theta_deg) == (0.00085, 0.00035, 62.5)
        assert (e4.center.x, e4.center.y) == (0.1500, 0.6800)
        assert (e4.a, e4.b, e4.theta_deg) == (0.00960, 0.00230, 105.0)
        assert (e25.center.x, e25.center.y) == (0.3650, 0.1530)
        assert (e25.a, e25.b, e25.theta_deg) == (0.00360, 0.00095, 40.0)

    def test_row_invariants(self):
        for e in ATLAS:
            assert e.a >= e.b > 0
            assert 0 <= e.theta_deg < 180
            assert e.center.is_valid

    def test_calls_return_equal_values(self):
        again = builtin_atlas()
        assert again == ATLAS

    def test_bad_axes_rejected(self):
        with pytest.raises(ValueError):
            MacAdamEllipse(1, Chromaticity(0.3, 0.3), 0.001, 0.002, 10.0)
        with pytest.raises(ValueError):
            MacAdamEllipse(1, Chromaticity(0.3, 0.3), 0.002, 0.001, 180.0)


class TestEndpoints:
    def test_r_zero_collapses_to_center(self):
        ep = endpoints(ATLAS[0], 0.0)
        assert ep.plus == ep.minus == ATLAS[0].center

    def test_e1_at_unit_ratio(self):
        # oracle: 0.16 +/- 0.00085*sin(62.5deg), 0.057 +/- 0.00085*cos(62.5deg)
        ep = endpoints(ATLAS[0], 1.0)
        assert ep.plus.x == pytest.approx(0.1607539592, abs=1e-9)
        assert ep.plus.y == pytest.approx(0.0573924863, abs=1e-9)
        assert ep.minus.x == pytest.approx(0.1592460408, abs=1e-9)
        assert ep.minus.y == pytest.approx(0.0566075137, abs=1e-9)

    def test_separation_at_paper_threshold(self):
        ep = endpoints(ATLAS[0], 24.4)
        sep = math.hypot(ep.plus.x - ep.minus.x, ep.plus.y - ep.minus.y)
        assert sep == pytest.approx(2 * 24.4 * 0.00085, rel=1e-12)

    def test_matches_brute_force_everywhere(self):
        # brute force written from the axis formula directly, on raw coords
        for e in ATLAS:
            for r in (0.0, 1.0, 5.0, 24.4, 40.0):
                th = math.radians(e.theta_deg)
                ex = r * e.a * math.sin(th)
                ey = r * e.a * math.cos(th)
                (px, py), (mx, my) = endpoint_coords(e, r)
                assert abs(px - (e.center.x + ex)) < 1e-12
                assert abs(py - (e.center.y + ey)) < 1e-12
                assert abs(mx - (e.center.x - ex)) < 1e-12
                assert abs(my - (e.center.y - ey)) < 1e-12

    def test_leaving_diagram_raises(self):
        # e4 at r=40: minus endpoint crosses x=0
        with pytest.raises(ChromaticityOutOfDiagram):
            endpoints(ATLAS[3], 40.0)
        (_, _), (mx, _) = endpoint_coords(ATLAS[3], 40.0)
        assert mx < 0

    def test_negative_r_rejected(self):
        with pytest.raises(ValueError):
            endpoints(ATLAS[0], -0.5)

    @given(st.integers(0, 24), st.floats(0.0, 50.0))
    def test_midpoint_and_separation_laws(self, idx, r):
        e = ATLAS[idx]
        (px, py), (mx, my) = endpoint_coords(e, r)
        assert abs((px + mx) / 2 - e.center.x) < 1e-15
        assert abs((py + my) / 2 - e.center.y) < 1e-15
        sep = math.hypot(px - mx, py - my)
        if r == 0:
            assert sep == 0
        else:
            # relative 1e-12, with an absolute floor: at tiny r the difference
            # of two coordinates near 0.16 cancels down to ~1 ulp of 0.16,
            # which dominates the relative picture
            assert abs(sep - 2 * r * e.a) < max(1e-15, 1e-12 * 2 * r * e.a)

    @given(st.integers(0, 24), st.floats(0.01, 25.0), st.floats(1.01, 2.0))
    def test_monotone_scaling(self, idx, r1, factor):
        e = ATLAS[idx]
        def sep(r):
            (px, py), (mx, my) = endpoint_coords(e, r)
            return math.hypot(px - mx, py - my)
        assert sep(r1 * factor) > sep(r1)


class TestInterpolation:
    def test_coincident_center_passthrough(self):
        e7 = ATLAS[6]
        out = interpolate_ellipse(e7.center, ATLAS)
        assert (out.a, out.b, out.theta_deg) == (e7.a, e7.b, e7.theta_deg)
        assert out.id == e7.id

    def test_consistency_at_every_atlas_center(self):
        for e in ATLAS:
            out = interpolate_ellipse(e.center, ATLAS)
            assert (out.a, out.b, out.theta_deg) == (e.a, e.b, e.theta_deg)

    def test_equal_distance_gives_unweighted_mean(self):
        e1, e2 = ATLAS[0], ATLAS[1]
        mid = Chromaticity(
            (e1.center.x + e2.center.x) / 2, (e1.center.y + e2.center.y) / 2
        )
        out = interpolate_ellipse(mid, [e1, e2])
        m1, m2 = metric_matrix(e1), metric_matrix(e2)
        mean = tuple(
            tuple((m1[i][j] + m2[i][j]) / 2 for j in range(2)) for i in range(2)
        )
        got = metric_matrix(out)
        for i in range(2):
            for j in range(2):
                assert got[i][j] == pytest.approx(mean[i][j], rel=1e-6)
        assert out.id == 0  # synthetic
        assert out.center == mid

    def test_metric_round_trip(self):
        # oracle: closed-form eigendecomposition of the composed matrix
        probe = MacAdamEllipse(0, Chromaticity(0.3, 0.3), 0.003, 0.001, 30.0)
        m = metric_matrix(probe)
        out = interpolate_ellipse(
            Chromaticity(0.3, 0.3), [MacAdamEllipse(5, Chromaticity(0.3, 0.3), 0.003, 0.001, 30.0)]
        )
        assert out.a == pytest.approx(0.003, abs=1e-9)
        assert out.b == pytest.approx(0.001, abs=1e-9)
        assert out.theta_deg == pytest.approx(30.0, abs=1e-9)
        # and via a genuinely off-center query mixing a single ellipse
        far = interpolate_ellipse(Chromaticity(0.4, 0.4), [probe])
        assert far.a == pytest.approx(0.003, abs=1e-9)
        assert far.b == pytest.approx(0.001, abs=1e-9)
        assert far.theta_deg == pytest.approx(30.0, abs=1e-9)
        assert m == metric_matrix(probe)

    def test_result_is_valid_ellipse(self):
        out = interpolate_ellipse(Chromaticity(0.33, 0.33), ATLAS)
        assert out.a >= out.b > 0
        assert 0 <= out.theta_deg < 180

    def test_empty_atlas_rejected(self):
        with pytest.raises(ValueError):
            interpolate_ellipse(Chromaticity(0.3, 0.3), [])


class TestAtlasTable:
    def test_one_row_per_ellipse(self):
        text = atlas_table()
        lines = text.strip().splitlines()
        assert len(lines) == 26  # header + 25
        fields = lines[1].split()
        assert fields[0] == "1"
        assert float(fields[1]) == 0.16
        assert float(fields[5]) == 62.5
