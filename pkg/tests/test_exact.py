"""Brute-force oracles: self-checks on hand-computable games."""

import numpy as np
import pytest

from bayesdrive.exact import (bayes_cce_regrets, exact_counterfactual_value,
                              expected_type_value, playout, utility_range)
from bayesdrive.games import ROOT, GameSpec, Prior, matrix_game
from bayesdrive.solver.tables import SolveResult


def hand_game():
    """2 players, 1 type, 1 stage, 2x2 payoff table picked for hand math."""
    payoffs = np.zeros((2, 2, 2))
    payoffs[..., 0] = [[3.0, 0.0], [1.0, 2.0]]
    payoffs[..., 1] = [[1.0, 2.0], [4.0, 0.0]]
    return matrix_game(payoffs)


def fixed_result(spec, freq):
    n_types = tuple(spec.n_types)
    m = sum(freq.values())
    return SolveResult(n_players=spec.n_players, n_types=n_types,
                       iterations=m, regrets={}, strategies={}, values={},
                       type_counts={}, freq=freq)


class TestCounterfactualValue:
    def test_root_value_equals_expected_payoff(self):
        spec = hand_game()

        def sigma(player, _t, _iset, _k):
            return [0.25, 0.75] if player == 0 else [0.5, 0.5]

        # E[u_0] = .25*(.5*3 + .5*0) + .75*(.5*1 + .5*2)
        got = exact_counterfactual_value(spec, (0, 0), 0, ROOT, sigma)
        assert got == pytest.approx(0.25 * 1.5 + 0.75 * 1.5)

    def test_two_stage_hand_value(self):
        def num_actions(_p, _t, _iset):
            return 2

        def utility(_t, z):
            # payoff is 1 for player 0 only when it plays 0 twice
            return [1.0 if z[0][0] == 0 and z[1][0] == 0 else 0.0, 0.0]

        spec = GameSpec(n_players=2, n_types=(1, 1), n_stages=2,
                        num_actions=num_actions, utility=utility)

        def sigma(_p, _t, _iset, _k):
            return [0.5, 0.5]

        got = exact_counterfactual_value(spec, (0, 0), 0, ROOT, sigma)
        assert got == pytest.approx(0.25)


class TestPlayout:
    def test_constant_plans(self):
        spec = hand_game()
        plans = [lambda _iset: 1, lambda _iset: 0]
        assert playout(spec, (0, 0), plans) == ((1, 0),)


class TestUtilityRange:
    def test_hand_game_range(self):
        spec = hand_game()
        assert utility_range(spec, 0) == pytest.approx(3.0)
        assert utility_range(spec, 1) == pytest.approx(4.0)


class TestBayesCceRegrets:
    def test_degenerate_freq_gain_is_best_response_gap(self):
        spec = hand_game()
        prior = Prior(marginals=[[1.0], [1.0]])
        # all mass on joint plan (1, 1): u_0 = 2; deviating to a_0=0
        # against s_1=1 gives 0 and staying gives 2, so the best gain is
        # 0; for player 1 the deviation to a_1=0 against s_0=1 gives 4
        result = fixed_result(spec, {(1, 1): 10})
        regs = bayes_cce_regrets(spec, prior, result)
        assert regs[(0, 0)] == pytest.approx(0.0)
        assert regs[(1, 0)] == pytest.approx(4.0 - 0.0)

    def test_mixed_freq(self):
        spec = hand_game()
        prior = Prior(marginals=[[1.0], [1.0]])
        result = fixed_result(spec, {(0, 0): 5, (1, 1): 5})
        # base u_0 = .5*3 + .5*2 = 2.5; deviations: always-0 -> .5*3 = 1.5,
        # always-1 -> .5*1 + .5*2 = 1.5; gain = -1
        regs = bayes_cce_regrets(spec, prior, result)
        assert regs[(0, 0)] == pytest.approx(-1.0)


class TestExpectedTypeValue:
    def test_matches_hand_expectation(self):
        spec = hand_game()
        prior = Prior(marginals=[[1.0], [1.0]])
        result = fixed_result(spec, {(0, 0): 3, (1, 1): 7})
        got = expected_type_value(spec, prior, result, 0, 0)
        assert got == pytest.approx(0.3 * 3.0 + 0.7 * 2.0)
