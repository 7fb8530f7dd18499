from itertools import product

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from ewl.games import (BimatrixGame, CorrelatedStrategy, MixedStrategy, classical_region_samples,
                       correlated_payoff, enumerate_equilibria, expected_payoff, format_game,
                       gauss_solve, is_nash_mixed, is_nash_pure, load_game, parse_game, save_game)
from ewl.hull import convex_hull, polygon_contains

EXTENDED_MP = BimatrixGame([[1, -1, 0], [-1, 1, 0], [0, 0, 0]],
                           [[-1, 1, 0], [1, -1, 0], [0, 0, 0]])

payoff_entries = st.integers(-6, 6)
games_2x2 = st.builds(lambda v: BimatrixGame(np.reshape(v[:4], (2, 2)), np.reshape(v[4:], (2, 2))),
                      st.lists(payoff_entries, min_size=8, max_size=8))
probabilities = st.floats(0.0, 1.0)


def brute_force_payoff(game, x, y):
    # plain double loop, no numpy contractions
    u1 = u2 = 0.0
    for i in range(game.rows):
        for j in range(game.cols):
            u1 += game.a[i, j] * x[i] * y[j]
            u2 += game.b[i, j] * x[i] * y[j]
    return u1, u2


class TestBimatrixGame:
    def test_rejects_small_or_ragged(self):
        with pytest.raises(ValueError):
            BimatrixGame([[1, 2]], [[1, 2]])
        with pytest.raises(ValueError):
            BimatrixGame([[1, 2], [3, 4]], [[1, 2, 3], [4, 5, 6]])

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            BimatrixGame([[1, np.inf], [3, 4]], np.zeros((2, 2)))

    def test_rejects_duplicate_labels(self):
        with pytest.raises(ValueError):
            BimatrixGame(np.zeros((2, 2)), np.zeros((2, 2)), row_labels=["x", "x"])

    def test_arrays_read_only(self, pd):
        with pytest.raises(ValueError):
            pd.a[0, 0] = 7

    def test_builtin_matrices(self, pd, mp, bos):
        assert pd.a.tolist() == [[3, 0], [5, 1]] and pd.b.tolist() == [[3, 5], [0, 1]]
        assert mp.a.tolist() == [[1, -1], [-1, 1]] and np.array_equal(mp.b, -mp.a)
        assert bos.a.tolist() == [[4, 0], [0, 2]] and bos.b.tolist() == [[2, 0], [0, 4]]


class TestStrategies:
    def test_mixed_invariants(self):
        with pytest.raises(ValueError):
            MixedStrategy([0.7, 0.7])
        with pytest.raises(ValueError):
            MixedStrategy([1.5, -0.5])
        assert MixedStrategy.pure(1, 3).support == (1,)

    def test_correlated_invariants(self):
        with pytest.raises(ValueError):
            CorrelatedStrategy([[0.5, 0.5], [0.5, 0]])


class TestExpectedPayoff:
    def test_pd_pure(self, pd):
        assert np.allclose(expected_payoff(pd, ([1, 0], [1, 0])), (3, 3))

    def test_degenerate_mixtures_hit_corner(self, bos):
        for i, j in product(range(2), range(2)):
            x, y = np.eye(2)[i], np.eye(2)[j]
            assert np.allclose(expected_payoff(bos, (x, y)), bos.payoff(i, j))

    def test_mp_uniform(self, mp):
        got = expected_payoff(mp, ([0.5, 0.5], [0.5, 0.5]))
        assert np.allclose(got, brute_force_payoff(mp, [0.5, 0.5], [0.5, 0.5]))
        assert np.allclose(got, (0, 0))

    def test_dimension_mismatch(self, pd):
        with pytest.raises(ValueError):
            expected_payoff(pd, ([1, 0, 0], [1, 0]))

    @settings(max_examples=60, deadline=None)
    @given(games_2x2, probabilities, probabilities, probabilities, probabilities, probabilities)
    def test_bilinear(self, game, p1, p2, q, lam, mu):
        x1, x2, y = np.array([p1, 1 - p1]), np.array([p2, 1 - p2]), np.array([q, 1 - q])
        mixed = expected_payoff(game, (lam * x1 + (1 - lam) * x2, y))
        split = lam * expected_payoff(game, (x1, y)) + (1 - lam) * expected_payoff(game, (x2, y))
        assert np.allclose(mixed, split, atol=1e-12)
        assert np.allclose(expected_payoff(game, (x1, y)), brute_force_payoff(game, x1, y), atol=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(games_2x2, probabilities, probabilities)
    def test_inside_cooperative_hull(self, game, p, q):
        u = expected_payoff(game, ([p, 1 - p], [q, 1 - q]))
        assert polygon_contains(convex_hull(game.corner_points()), u, tol=1e-9)


class TestCorrelatedPayoff:
    def test_bos_diagonal(self, bos):
        assert np.allclose(correlated_payoff(bos, [[0.5, 0], [0, 0.5]]), (3, 3))

    def test_point_mass(self, pd):
        assert np.allclose(correlated_payoff(pd, [[1, 0], [0, 0]]), pd.payoff(0, 0))

    def test_uniform_pd(self, pd):
        # (3 + 0 + 5 + 1) / 4 for each player
        assert np.allclose(correlated_payoff(pd, np.full((2, 2), 0.25)), (9 / 4, 9 / 4))

    def test_dimension_mismatch(self, pd):
        with pytest.raises(ValueError):
            correlated_payoff(pd, np.full((3, 3), 1 / 9))


class TestNash:
    def test_extended_mp_shift_profile(self):
        assert is_nash_pure(EXTENDED_MP, (2, 2))

    def test_pd_defect(self, pd):
        assert is_nash_pure(pd, (1, 1))
        assert not any(is_nash_pure(pd, c) for c in [(0, 0), (0, 1), (1, 0)])

    def test_mp_no_pure(self, mp):
        assert not any(is_nash_pure(mp, c) for c in product(range(2), range(2)))

    def test_out_of_range(self, pd):
        with pytest.raises((ValueError, IndexError)):
            is_nash_pure(pd, (2, 0))

    def test_mixed_examples(self, mp, pd):
        assert is_nash_mixed(mp, ([0.5, 0.5], [0.5, 0.5]), 1e-9)
        assert is_nash_mixed(EXTENDED_MP, ([0.5, 0.5, 0], [0, 0, 1]), 1e-9)
        assert not is_nash_mixed(pd, ([0.5, 0.5], [0.5, 0.5]), 1e-9)

    @settings(max_examples=60, deadline=None)
    @given(games_2x2, st.integers(0, 1), st.integers(0, 1))
    def test_pure_matches_mixed(self, game, i, j):
        assert is_nash_pure(game, (i, j)) == is_nash_mixed(game, (np.eye(2)[i], np.eye(2)[j]), 1e-9)


class TestEnumeration:
    def test_mp_unique(self, mp):
        eqs = enumerate_equilibria(mp)
        assert len(eqs) == 1
        assert eqs.contains([0.5, 0.5], [0.5, 0.5])

    def test_extended_mp(self):
        eqs = enumerate_equilibria(EXTENDED_MP)
        for row, col in [([.5, .5, 0], [.5, .5, 0]), ([0, 0, 1], [0, 0, 1]),
                         ([.5, .5, 0], [0, 0, 1]), ([0, 0, 1], [.5, .5, 0])]:
            assert eqs.contains(row, col)

    def test_rank_deficient_systems_reported(self):
        # a constant game makes every indifference system degenerate
        eqs = enumerate_equilibria(BimatrixGame(np.ones((3, 3)), np.ones((3, 3))))
        assert eqs.diagnostics
        assert all(is_nash_mixed(BimatrixGame(np.ones((3, 3)), np.ones((3, 3))), e.profile) for e in eqs)

    def test_size_limit(self):
        with pytest.raises(ValueError):
            enumerate_equilibria(BimatrixGame(np.zeros((7, 2)), np.zeros((7, 2))))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 4), st.integers(2, 4), st.data())
    def test_every_output_is_nash(self, m, n, data):
        vals = data.draw(st.lists(payoff_entries, min_size=2 * m * n, max_size=2 * m * n))
        game = BimatrixGame(np.reshape(vals[:m * n], (m, n)), np.reshape(vals[m * n:], (m, n)))
        eqs = enumerate_equilibria(game)
        assert len(eqs) >= 1
        for e in eqs:
            assert is_nash_mixed(game, e.profile, 1e-9)
            assert np.allclose(e.payoff, expected_payoff(game, e.profile))

    @settings(max_examples=40, deadline=None)
    @given(games_2x2)
    def test_finds_every_pure_equilibrium(self, game):
        eqs = enumerate_equilibria(game)
        for i, j in product(range(2), range(2)):
            if is_nash_pure(game, (i, j)):
                assert eqs.contains(np.eye(2)[i], np.eye(2)[j])


class TestGauss:
    def test_unique(self):
        x, status = gauss_solve(np.array([[0.0, 2.0], [1.0, 1.0]]), np.array([2.0, 3.0]))
        assert status == "unique" and np.allclose(x, [2, 1])

    def test_singular(self):
        _, status = gauss_solve(np.array([[1.0, 1.0], [2.0, 2.0]]), np.array([1.0, 2.0]))
        assert status == "singular"


class TestRegions:
    def test_bos_pure(self, bos):
        pts = classical_region_samples(bos, "pure").points
        assert sorted(map(tuple, pts)) == [(0, 0), (0, 0), (2, 4), (4, 2)]

    def test_bos_cooperative(self, bos):
        assert classical_region_samples(bos, "cooperative").hull == [(0, 0), (4, 2), (2, 4)]

    def test_constant_game_single_point(self):
        game = BimatrixGame(np.full((2, 2), 2.0), np.full((2, 2), -1.0))
        for mode in ("pure", "noncooperative", "cooperative"):
            assert classical_region_samples(game, mode, 5).hull == [(2.0, -1.0)]

    def test_noncooperative_count(self, bos):
        assert len(classical_region_samples(bos, "noncooperative", 11)) == 121

    def test_resolution_checked(self, bos):
        with pytest.raises(ValueError):
            classical_region_samples(bos, "noncooperative", 1)

    @settings(max_examples=30, deadline=None)
    @given(games_2x2)
    def test_nesting(self, game):
        pure = classical_region_samples(game, "pure")
        nc = classical_region_samples(game, "noncooperative", 21)
        co = classical_region_samples(game, "cooperative")
        assert polygon_contains(nc.hull, pure.points).all()
        assert polygon_contains(co.hull, np.array(nc.hull)).all()
        assert nc.max_hull_violation() <= 1e-9


class TestGameFiles:
    def test_round_trip(self, tmp_path):
        game = BimatrixGame([[1, 2.5, 0], [3, 4, -1]], [[0, 1, 2], [3, 4, 5]],
                            row_labels=["up", "down"], col_labels=["l", "m", "r"])
        path = tmp_path / "g.game"
        save_game(game, path)
        again = load_game(path)
        assert again == game
        assert again.row_labels == game.row_labels and again.col_labels == game.col_labels

    def test_parse_sample(self):
        game = parse_game("2 2\n#rows: C D\n3:3 0:5\n5:0 1:1\n")
        assert game.a.tolist() == [[3, 0], [5, 1]] and list(game.row_labels) == ["C", "D"]

    def test_parse_errors(self):
        for bad in ["2 2\n1:1 1:1\n", "2 2\n1:1 1\n1:1 1:1\n", "x y\n", "2 2\n1:1 1:1\n1:a 1:1\n"]:
            with pytest.raises(ValueError):
                parse_game(bad)

    def test_format_is_parseable(self, pd):
        assert parse_game(format_game(pd)) == pd
