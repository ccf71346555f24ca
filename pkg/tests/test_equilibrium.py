import json
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncgame import SolverConfig, check_wardrop, solve_so, solve_wardrop
from ncgame.equilibrium import check_epsilon_ne_of_so, initial_profile
from ncgame.game import total_cost
from ncgame.harness import all_degree_equal, double_limits, pigou, random_game

from oracles import simplex_grid_minimum


@pytest.mark.parametrize("method", ["pairwise", "frank_wolfe"])
def test_pigou_we(method):
    res = solve_wardrop(pigou(1), {"1": 1}, SolverConfig(method=method))
    assert res.converged
    assert res.profile == pytest.approx([1.0, 0.0], abs=1e-9)
    assert total_cost(pigou(1), res.profile) == pytest.approx(1.0)


@pytest.mark.parametrize("method", ["pairwise", "frank_wolfe"])
def test_double_limits_upper_we_and_so(method):
    g = double_limits().subgame(["upper"])
    cfg = SolverConfig(tol=1e-12, method=method)
    we = solve_wardrop(g, {"upper": 10}, cfg)
    so = solve_so(g, {"upper": 10}, cfg)
    assert we.profile == pytest.approx([6, 4], abs=1e-6)
    assert so.profile == pytest.approx([6, 4], abs=1e-6)


def test_pigou_so_examples():
    so = solve_so(pigou(1), {"1": 1}, SolverConfig(tol=1e-12))
    assert so.profile == pytest.approx([0.5, 0.5], abs=1e-6)
    assert so.objective == pytest.approx(0.75, rel=1e-9)
    so4 = solve_so(pigou(4), {"1": 1}, SolverConfig(tol=1e-12))
    assert so4.profile[0] == pytest.approx(5 ** -0.25, abs=1e-6)
    assert total_cost(pigou(4), so4.profile) == pytest.approx(1 - 5**-0.25 + 5**-1.25, rel=1e-9)
    assert total_cost(pigou(4), so4.profile) == pytest.approx(0.46501, abs=1e-5)


def test_check_wardrop_examples():
    g = pigou(1)
    assert check_wardrop(g, {"1": 1}, [1, 0]).gap == 0.0
    chk = check_wardrop(g, {"1": 1}, [0, 1])
    assert chk.gap == pytest.approx(1.0) and not chk.is_equilibrium and chk.worst_group == "1"


def test_check_wardrop_rejects_infeasible():
    with pytest.raises(ValueError):
        check_wardrop(pigou(1), {"1": 1}, [0.2, 0.2])


def test_epsilon_ne_of_so_examples():
    g = pigou(1)
    assert check_epsilon_ne_of_so(g, {"1": 1}, [0.5, 0.5]) == pytest.approx(1.0)
    assert check_epsilon_ne_of_so(g, {"1": 100}, [0.5, 99.5]) == pytest.approx(1.0)
    we = solve_wardrop(all_degree_equal(), {"1": 3, "2": 2}, SolverConfig(tol=1e-12))
    assert check_epsilon_ne_of_so(all_degree_equal(), {"1": 3, "2": 2}, we.profile) <= 1e-9


def test_initial_profile_uses_lowest_index_strategy():
    g = double_limits()
    assert initial_profile(g, [3, 5]).tolist() == [3, 0, 5, 0]


def test_zero_demand():
    res = solve_wardrop(double_limits(), [0, 0])
    assert res.converged and res.iterations == 0 and not res.profile.any()


def test_zero_demand_group_is_left_empty():
    res = solve_wardrop(double_limits(), {"upper": 10}, SolverConfig(tol=1e-12))
    assert res.profile[2:].tolist() == [0.0, 0.0]


def test_non_convergence_returns_best_iterate():
    res = solve_so(pigou(3), {"1": 7.0}, SolverConfig(tol=1e-15, max_iter=1))
    assert not res.converged and res.iterations == 1 and 0 < res.gap < np.inf


def test_config_validation():
    for kw in ({"tol": 0}, {"max_iter": 0}, {"line_search_tol": -1}, {"method": "newton"}):
        with pytest.raises(ValueError):
            SolverConfig(**kw)


def test_solve_result_json():
    res = solve_wardrop(pigou(2), {"1": 2})
    data = json.loads(res.to_json(pigou(2)))
    assert set(data) >= {"profile", "gap", "iterations", "objective"}
    assert set(data["profile"]) == {"x", "const"}


def test_concurrent_solves_are_independent():
    game = random_game(11, (4, 10, 8), 4)
    demands = [np.full(4, float(v)) for v in (1, 5, 25, 125)]
    serial = [solve_wardrop(game, d).profile for d in demands]
    with ThreadPoolExecutor(4) as pool:
        threaded = list(pool.map(lambda d: solve_wardrop(game, d).profile, demands))
    for a, b in zip(serial, threaded):
        assert np.array_equal(a, b)


def test_powerlog_game_we_matches_grid():
    from ncgame.game import Game
    from ncgame.prices import Polynomial, PowerLog

    g = Game.from_mapping(
        {"1": {"s": ["a"], "t": ["b"]}},
        {"a": PowerLog(1.0, "3/2", 1), "b": Polynomial([2.0, 0.5])},
    )
    res = solve_wardrop(g, {"1": 5}, SolverConfig(tol=1e-12))
    _, f = simplex_grid_minimum(g, {"1": 5}, "we", rel_step=1e-3)
    assert res.profile == pytest.approx(f, abs=1e-2 * 5)
    so = solve_so(g, {"1": 5}, SolverConfig(tol=1e-12))
    best, _ = simplex_grid_minimum(g, {"1": 5}, "so", rel_step=1e-3)
    assert total_cost(g, so.profile) <= best + 1e-9


seeds = st.integers(0, 10_000)


def _descends(res):
    hist = np.asarray(res.objective_history)
    return np.all(np.diff(hist) <= 1e-12 * max(1.0, abs(hist[0])))


@given(seeds)
def test_potential_descent_and_small_gap(seed):
    rng = np.random.default_rng(seed)
    game = random_game(seed, (3, 6, 5), 3)
    d = rng.uniform(0.1, 30, game.n_groups)
    res = solve_wardrop(game, d)
    assert _descends(res)
    assert res.converged and -1e-12 <= res.gap <= 1e-9
    assert check_wardrop(game, d, res.profile).gap <= 1e-9


@given(seeds)
def test_frank_wolfe_descends(seed):
    # plain conditional gradient is sublinear near faces; only descent is guaranteed
    rng = np.random.default_rng(seed)
    game = random_game(seed, (3, 6, 5), 3)
    d = rng.uniform(0.1, 30, game.n_groups)
    res = solve_wardrop(game, d, SolverConfig(method="frank_wolfe", max_iter=300))
    assert _descends(res)
    assert res.gap >= -1e-12


@given(seeds)
def test_so_not_worse_than_we(seed):
    rng = np.random.default_rng(seed)
    game = random_game(seed, (3, 6, 5), 3)
    d = rng.uniform(0.1, 30, game.n_groups)
    cfg = SolverConfig(tol=1e-11)
    assert total_cost(game, solve_so(game, d, cfg).profile) <= total_cost(game, solve_wardrop(game, d, cfg).profile) * (1 + 1e-9)
