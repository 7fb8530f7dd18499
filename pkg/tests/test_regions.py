import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from ewl.games import BimatrixGame, RegionSample, classical_region_samples
from ewl.hull import convex_hull, hausdorff_distance, polygon_contains
from ewl.quantum import ewl_payoff, ewl_payoff_closed_form
from ewl.regions import (CORNERS, ConvexWeights, OutsideHullError, achieve_target,
                         caratheodory_profile, ewl_region_samples, export_region)

weights3 = st.lists(st.floats(0, 1), min_size=3, max_size=3).filter(lambda w: sum(w) > 1e-6)


def corner_sum(game, w):
    # sum of lambda_ij (a_ij, b_ij), corners ordered 00, 01, 10, 11
    return np.array([sum(w[k] * game.a[c] for k, c in enumerate(CORNERS)),
                     sum(w[k] * game.b[c] for k, c in enumerate(CORNERS))])


def with_zero(w3, omitted):
    w = list(np.array(w3) / sum(w3))
    w.insert(CORNERS.index(omitted), 0.0)
    return w


class TestConvexWeights:
    def test_invariants(self):
        with pytest.raises(ValueError):
            ConvexWeights(0.5, 0.5, 0.5, 0)
        with pytest.raises(ValueError):
            ConvexWeights(1.5, -0.5, 0, 0)
        assert ConvexWeights(0.1, 0.2, 0.3, 0.4)[(1, 0)] == 0.3


class TestCaratheodory:
    def test_pd_thirds(self, pd):
        prof = caratheodory_profile(ConvexWeights(1 / 3, 1 / 3, 1 / 3, 0), (1, 1))
        assert np.allclose(ewl_payoff_closed_form(pd, *prof), (8 / 3, 8 / 3), atol=1e-12)

    def test_point_mass(self, bos):
        for omitted in [(0, 1), (1, 0), (1, 1)]:
            prof = caratheodory_profile(ConvexWeights(1, 0, 0, 0), omitted)
            assert np.allclose(ewl_payoff_closed_form(bos, *prof), bos.payoff(0, 0), atol=1e-12)

    def test_bos_two_corners(self, bos):
        prof = caratheodory_profile(ConvexWeights(0, 0.5, 0, 0.5), (0, 0))
        assert np.allclose(ewl_payoff_closed_form(bos, *prof), (1, 2), atol=1e-12)

    def test_omitted_must_be_zero(self):
        with pytest.raises(ValueError):
            caratheodory_profile(ConvexWeights(0.5, 0, 0, 0.5), (1, 1))
        with pytest.raises(ValueError):
            caratheodory_profile(ConvexWeights(1, 0, 0, 0), (2, 2))

    @pytest.mark.parametrize("omitted", CORNERS)
    @settings(max_examples=100, deadline=None)
    @given(w3=weights3, vals=st.lists(st.floats(-10, 10), min_size=8, max_size=8))
    def test_reproduces_weighted_sum(self, omitted, w3, vals):
        game = BimatrixGame(np.reshape(vals[:4], (2, 2)), np.reshape(vals[4:], (2, 2)))
        w = with_zero(w3, omitted)
        prof = caratheodory_profile(ConvexWeights.from_array(w), omitted)
        assert all(s.beta == 0 for s in prof)
        assert np.allclose(ewl_payoff(game, list(prof)), corner_sum(game, w), atol=1e-10)


class TestAchieveTarget:
    def test_bos_three_three(self, bos):
        prof, residual = achieve_target(bos, (3, 3))
        assert residual <= 1e-9
        assert np.allclose(ewl_payoff_closed_form(bos, *prof), (3, 3), atol=1e-9)

    def test_corner(self, pd):
        for k, c in enumerate(CORNERS):
            _, residual = achieve_target(pd, pd.payoff(*c))
            assert residual <= 1e-12

    def test_pd_uniform(self, pd):
        assert achieve_target(pd, (9 / 4, 9 / 4))[1] <= 1e-9

    def test_outside(self, bos):
        with pytest.raises(OutsideHullError) as info:
            achieve_target(bos, (4, 4))
        assert np.isclose(info.value.distance, math.sqrt(2))

    def test_degenerate_games(self):
        line = BimatrixGame([[0, 1], [2, 3]], [[0, 1], [2, 3]])
        assert achieve_target(line, (1.5, 1.5))[1] <= 1e-9
        point = BimatrixGame(np.ones((2, 2)), np.ones((2, 2)))
        assert achieve_target(point, (1, 1))[1] == 0

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(0, 1), min_size=4, max_size=4).filter(lambda w: sum(w) > 1e-6),
           st.sampled_from(["pd", "bos", "mp"]))
    def test_hull_points(self, w, name):
        from ewl.games import BUILTIN_GAMES
        game = BUILTIN_GAMES[name]
        target = corner_sum(game, np.array(w) / sum(w))
        prof, residual = achieve_target(game, target)
        assert residual <= 1e-9
        assert np.allclose(ewl_payoff_closed_form(game, *prof), target, atol=1e-9)


class TestEwlRegion:
    @pytest.mark.parametrize("name", ["bos", "pd"])
    def test_default_grid_hull(self, name):
        from ewl.games import BUILTIN_GAMES
        game = BUILTIN_GAMES[name]
        sample = ewl_region_samples(game)
        corners = convex_hull(game.corner_points())
        assert sample.tag == "ewl_pure"
        assert hausdorff_distance(sample.hull, corners) <= 1e-6
        assert polygon_contains(corners, np.array(sample.hull), tol=1e-9).all()

    def test_identity_grid(self, pd):
        sample = ewl_region_samples(pd, ([0.0], [0.0], [0.0], [0.0]))
        assert sample.hull == [(3.0, 3.0)]

    def test_rejects_huge_grid(self, pd):
        with pytest.raises(ValueError):
            ewl_region_samples(pd, (400, 400, 400, 2))
        with pytest.raises(ValueError):
            ewl_region_samples(pd, (1, 3, 3, 3))

    def test_bos_noncooperative_gap(self, bos):
        nc = classical_region_samples(bos, "noncooperative", 501)
        assert np.min(np.hypot(*(nc.points - (3, 3)).T)) > 0.4


class TestExport:
    def test_csv(self, bos, tmp_path):
        sample = classical_region_samples(bos, "noncooperative", 7)
        path = export_region(sample, tmp_path / "r.csv")
        lines = path.read_bytes().decode("utf-8").split("\n")
        assert lines[0] == "x,y" and len(lines) == 7 * 7 + 2 and lines[-1] == ""
        assert b"\r" not in path.read_bytes()
        assert lines[1] == "2,4"

    def test_single_point_csv(self, tmp_path):
        path = export_region(RegionSample("pure", [(1 / 3, 2)]), tmp_path / "p.csv")
        assert path.read_text().splitlines() == ["x,y", "0.333333333333,2"]

    def test_svg(self, bos, tmp_path):
        sample = ewl_region_samples(bos, (9, 9, 16, 4))
        text = export_region(sample, tmp_path / "r.svg", "svg").read_text()
        assert 'width="800" height="800"' in text
        assert "Player 1" in text and "Player 2" in text
        assert text.count("<polyline") == 1 and text.count('r="1"') == len(sample)
        ring = text.split('<polyline points="')[1].split('"')[0].split()
        assert len(ring) == 3 + 1  # closed triangle

    def test_bad_format(self, bos, tmp_path):
        with pytest.raises(ValueError):
            export_region(classical_region_samples(bos, "pure"), tmp_path / "x", "png")
