"""Verification suites at reduced iteration budgets."""

from bayesdrive import verify


class TestChecks:
    def test_bayes_cce_small_budget(self):
        check = verify.check_bayes_cce_convergence(iterations=20_000,
                                                   seeds=range(2))
        assert check.passed, check.detail

    def test_matching_pennies(self):
        check = verify.check_matching_pennies(iterations=20_000)
        assert check.passed, check.detail

    def test_regret_decay(self):
        check = verify.check_regret_decay(budgets=(500, 5_000, 50_000))
        assert check.passed, check.detail

    def test_estimator_consistency_small(self):
        check = verify.check_estimator_consistency(
            budgets=(500, 5_000, 50_000), seeds=range(5), tol=0.03)
        assert check.passed, check.detail

    def test_estimator_guard_on_tiny_budget(self):
        check = verify.check_estimator_consistency(budgets=(10, 20))
        assert check.skipped
        assert "insufficient iterations" in check.detail

    def test_unbiasedness_reduced(self):
        check = verify.check_unbiasedness(samples=30_000, tol=0.02)
        assert check.passed, check.detail

    def test_result_line_format(self):
        check = verify.check_matching_pennies(iterations=2_000, tol=1.0)
        assert check.line().startswith("[PASS] matching_pennies:")


class TestGames:
    def test_tiny_game_utilities_in_range(self):
        spec, prior = verify.tiny_bayesian_game()
        assert prior.n_types == (2, 2)
        for t in spec.type_vectors():
            for z in [(((0, 0)),)]:
                u = spec.terminal_utility(t, z)
                assert all(-1.0 <= v <= 0.0 for v in u)
