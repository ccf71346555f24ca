from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncgame.analysis import DemandPath, asymptotic_decomposition
from ncgame.harness import all_degree_equal, alternating_path, double_limits, linear_path, pigou, random_game, square_linear_path


def test_double_limits_square_linear():
    rep = asymptotic_decomposition(double_limits(), square_linear_path())
    ph = rep.phase(0)
    l0, l1 = ph.levels
    assert (l0.groups, l0.alpha_index, l0.t_exponent, l0.g_exponent[0], l0.verdict) == (["upper"], 1, 2, 2, "base")
    assert (l1.groups, l1.alpha_index, l1.t_exponent, l1.g_exponent[0], l1.verdict) == (["lower"], 2, 1, 2, "negligible")
    assert ph.predicted_cost_exponent == 4
    assert ph.level_of("lower") == 1


def test_all_degree_equal_is_one_level():
    rep = asymptotic_decomposition(all_degree_equal(), linear_path(["1", "2"]))
    assert len(rep.phase(0).levels) == 1 and rep.phase(0).levels[0].groups == ["1", "2"]


def test_single_group():
    rep = asymptotic_decomposition(pigou(2), linear_path(["1"]))
    assert len(rep.phase(0).levels) == 1
    assert rep.predicted_cost_exponent == 1


def test_alternating_phases():
    rep = asymptotic_decomposition(double_limits(), alternating_path())
    even, odd = rep.phases
    assert [lv.verdict for lv in even.levels] == ["base", "idle"]
    assert odd.levels[0].groups == ["upper", "lower"] and odd.levels[0].alpha_index == 2
    assert rep.predicted_cost_exponent == [Fraction(2), Fraction(3)]


def test_independent_level():
    path = DemandPath.power_law({"upper": (1.0, 1), "lower": (1.0, 1)})
    rep = asymptotic_decomposition(double_limits(), DemandPath.power_law({"upper": (1.0, 1), "lower": (1.0, Fraction(9, 10))}))
    assert [lv.verdict for lv in rep.phase(0).levels] == ["base", "independent"]
    assert len(asymptotic_decomposition(double_limits(), path).phase(0).levels) == 1


def test_render_and_json():
    rep = asymptotic_decomposition(double_limits(), square_linear_path())
    table = rep.render()
    assert "negligible" in table and "predicted total-cost exponent: 4" in table
    assert rep.to_dict()["phases"][0]["levels"][0]["groups"] == ["upper"]


def test_unknown_group_in_path():
    with pytest.raises(ValueError):
        asymptotic_decomposition(pigou(1), linear_path(["zz"]))


@given(st.integers(0, 2000), st.lists(st.sampled_from([Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)]), min_size=4, max_size=4))
def test_partition_and_increasing_alpha(seed, exps):
    game = random_game(seed, (4, 9, 6), 4)
    path = DemandPath.power_law({k: (1.0, p) for k, p in zip(game.group_ids, exps)})
    levels = asymptotic_decomposition(game, path).phase(0).levels
    groups = [k for lv in levels for k in lv.groups]
    assert sorted(groups) == sorted(game.group_ids) and len(groups) == len(set(groups))
    alphas = [lv.alpha for lv in levels if lv.verdict != "idle"]
    assert all(b > a for a, b in zip(alphas, alphas[1:]))
