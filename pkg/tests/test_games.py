"""Game model: priors, infoset structure, matrix game builders."""

import numpy as np
import pytest

from bayesdrive.games import (BayesianMatrixGame, GameError, GameSpec, Prior,
                              enumerate_infosets, matrix_game)


def simple_spec(n_players=2, n_stages=2, n_actions=2, n_types=1):
    def num_actions(_p, _t, _iset):
        return n_actions

    def utility(_t, _z):
        return [0.0] * n_players

    return GameSpec(n_players=n_players, n_types=(n_types,) * n_players,
                    n_stages=n_stages, num_actions=num_actions,
                    utility=utility)


class TestPrior:
    def test_product_marginals(self):
        p = Prior(marginals=[[0.25, 0.75], [0.5, 0.5]])
        assert p.is_product
        assert p.n_types == (2, 2)
        joint = p.joint_table()
        assert joint[0, 1] == pytest.approx(0.125)
        assert joint.sum() == pytest.approx(1.0)

    def test_joint_table(self):
        p = Prior(joint=np.array([[0.1, 0.2], [0.3, 0.4]]))
        assert not p.is_product
        assert p.marginal(0) == pytest.approx([0.3, 0.7])
        assert p.marginal(1) == pytest.approx([0.4, 0.6])

    def test_conditional_others(self):
        p = Prior(joint=np.array([[0.1, 0.2], [0.3, 0.4]]))
        cond = p.conditional_others(0, 1)
        assert cond == pytest.approx([3 / 7, 4 / 7])

    def test_flat_is_player_major(self):
        p = Prior(joint=np.array([[0.1, 0.2], [0.3, 0.4]]))
        assert p.flat() == pytest.approx([0.1, 0.2, 0.3, 0.4])

    def test_rejects_bad_mass(self):
        with pytest.raises(GameError):
            Prior(marginals=[[0.5, 0.6]])
        with pytest.raises(GameError):
            Prior(joint=np.array([[0.5, -0.1], [0.3, 0.3]]))
        with pytest.raises(GameError):
            Prior(joint=np.array([[0.5, 0.5]]), marginals=[[1.0]])


class TestInfosets:
    def test_single_stage_single_root(self):
        spec = simple_spec(n_players=1, n_stages=1)
        assert enumerate_infosets(spec, 0, 0) == [(0, ())]

    def test_two_stage_counts(self):
        spec = simple_spec(n_players=2, n_stages=2, n_actions=2)
        isets = enumerate_infosets(spec, 0, 0)
        assert len(isets) == 1 + 4

    def test_three_player_four_action_counts(self):
        spec = simple_spec(n_players=3, n_stages=2, n_actions=4)
        isets = enumerate_infosets(spec, 0, 0)
        assert len(isets) == 1 + 4**3

    def test_keys_hide_same_stage_moves(self):
        spec = simple_spec(n_players=2, n_stages=2)
        isets = enumerate_infosets(spec, 0, 0)
        for stage, hist in isets:
            assert len(hist) == stage  # only completed stages appear

    def test_bad_player(self):
        spec = simple_spec()
        with pytest.raises(GameError):
            enumerate_infosets(spec, 5, 0)
        with pytest.raises(GameError):
            enumerate_infosets(spec, 0, 3)


class TestSpec:
    def test_terminal_utility_checks_length(self):
        spec = simple_spec(n_stages=2)
        with pytest.raises(GameError):
            spec.terminal_utility((0, 0), (((0, 0)),))

    def test_zero_sum_matrix_game(self):
        payoffs = np.zeros((2, 2, 2))
        payoffs[..., 0] = [[1, -1], [-1, 1]]
        payoffs[..., 1] = -payoffs[..., 0]
        spec = matrix_game(payoffs)
        for z in spec.terminal_histories():
            u = spec.terminal_utility((0, 0), (z[0],))
            assert u[0] == -u[1]

    def test_bayesian_matrix_game_per_type_actions(self):
        payoffs = {}
        n_actions = [[2, 3], [2, 2]]
        for t0 in range(2):
            for t1 in range(2):
                payoffs[(t0, t1)] = np.zeros(
                    (n_actions[0][t0], n_actions[1][t1], 2))
        game = BayesianMatrixGame(n_actions=n_actions, payoffs=payoffs)
        assert game.spec.num_actions(0, 1, (0, ())) == 3
        assert game.spec.num_actions(0, 0, (0, ())) == 2
