"""Decision extraction: type values, type choice, plan schemes."""

import pytest

from bayesdrive.policy import (PolicyError, accurate_plans, choose_plan,
                               estimate_type_values, marginal_plan,
                               select_type)
from bayesdrive.solver.tables import SolveResult


def result_with(n_types, freq, values=None, type_counts=None):
    m = sum(freq.values())
    return SolveResult(n_players=len(n_types), n_types=tuple(n_types),
                       iterations=m, regrets={}, strategies={},
                       values=values or {}, type_counts=type_counts or {},
                       freq=freq)


class TestTypeValues:
    def test_divides_by_visit_count(self):
        res = result_with((2,), {(0, 0): 10},
                          values={(0, 0): -30.0, (0, 1): -5.0},
                          type_counts={(0, 0): 6, (0, 1): 4})
        est = estimate_type_values(res, 0)
        assert est.values[0] == pytest.approx(-5.0)
        assert est.values[1] == pytest.approx(-1.25)

    def test_unvisited_type_raises(self):
        res = result_with((2,), {(0, 0): 10},
                          type_counts={(0, 0): 10, (0, 1): 0})
        with pytest.raises(PolicyError):
            estimate_type_values(res, 0)

    def test_select_type_argmax_and_tiebreak(self):
        res = result_with((3,), {(0, 0, 0): 1},
                          values={(0, 0): -30.0, (0, 1): -12.0,
                                  (0, 2): -12.0},
                          type_counts={(0, 0): 1, (0, 1): 1, (0, 2): 1})
        est = estimate_type_values(res, 0)
        assert select_type(est) == 1  # tie with type 2 goes to lower index
        assert select_type(est, allowed=[0, 2]) == 2
        with pytest.raises(PolicyError):
            select_type(est, allowed=[])


class TestMarginalPlan:
    def test_degenerate_distribution(self):
        res = result_with((1, 1), {(2, 5): 10})
        assert marginal_plan(res, 0, 0) == 2
        assert marginal_plan(res, 1, 0) == 5

    def test_ignores_other_players(self):
        res = result_with((1, 1), {(3, 0): 5, (3, 1): 5})
        assert marginal_plan(res, 0, 0) == 3

    def test_mode_of_marginal(self):
        # plans P1 and P2 agree on (player 0, type 0); P3 differs
        res = result_with((1, 1), {(1, 0): 5, (1, 1): 3, (0, 2): 2})
        assert marginal_plan(res, 0, 0) == 1

    def test_per_type_slots(self):
        res = result_with((2, 1), {(4, 7, 0): 10})
        assert marginal_plan(res, 0, 0) == 4
        assert marginal_plan(res, 0, 1) == 7
        assert marginal_plan(res, 1, 0) == 0

    def test_empty_freq_raises(self):
        res = result_with((1,), {(0,): 1})
        res.freq = {}
        with pytest.raises(PolicyError):
            marginal_plan(res, 0, 0)


class TestAccuratePlans:
    def test_leader_follower_differs_from_joint_mode(self):
        # leader marginal: a=0 has 10 > a=1 with 9, follower conditional
        # on a=0 picks 1 even though the joint mode is (1, 2)
        res = result_with((1, 1), {(0, 0): 4, (0, 1): 6, (1, 2): 9})
        comps = accurate_plans(res, [0, 1])
        assert comps[0] == (0,)
        assert comps[1] == (1,)

    def test_degenerate_any_order(self):
        res = result_with((1, 1), {(2, 3): 10})
        assert accurate_plans(res, [1, 0]) == {0: (2,), 1: (3,)}

    def test_order_must_be_permutation(self):
        res = result_with((1, 1), {(0, 0): 1})
        with pytest.raises(PolicyError):
            accurate_plans(res, [0])

    def test_choose_plan_schemes(self):
        res = result_with((1, 1), {(0, 0): 4, (0, 1): 6, (1, 2): 9})
        assert choose_plan(res, 1, 0, scheme="marginal").action == 2
        assert choose_plan(res, 1, 0, scheme="accurate",
                           order=[0, 1]).action == 1
