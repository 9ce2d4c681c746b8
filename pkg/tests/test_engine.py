import numpy as np
import pytest

from optarget import Instance, generate_line, solve_equilibrium, verify_electrical
from optarget.engine import OpinionSolver
from conftest import random_connected_graph


@pytest.fixture(scope="module")
def backends():
    rng = np.random.default_rng(99)
    g = random_connected_graph(120, 0.05, rng)
    minus = (3, 40)
    plus = (7,)
    dense = OpinionSolver(g, minus, plus, dense_cutoff=2000)
    sparse = OpinionSolver(g, minus, plus, dense_cutoff=10)
    return dense, sparse


class TestSparseBackendAgreesWithDense:
    def test_base_objective(self, backends):
        dense, sparse = backends
        assert sparse.base_objective == pytest.approx(dense.base_objective, abs=1e-12)

    def test_objective_on_sets(self, backends):
        dense, sparse = backends
        for extra in [(), (5,), (0, 11), (2, 50, 90), (3,)]:
            assert sparse.objective(extra) == pytest.approx(
                dense.objective(extra), abs=1e-12
            )

    def test_profiles(self, backends):
        dense, sparse = backends
        for extra in [(), (5,), (0, 11, 60)]:
            np.testing.assert_allclose(
                sparse.profile(extra), dense.profile(extra), atol=1e-11
            )

    def test_gain_sweeps(self, backends):
        dense, sparse = backends
        for committed in [(), (5,), (5, 31)]:
            np.testing.assert_allclose(
                sparse.gains(committed), dense.gains(committed), atol=1e-11
            )

    def test_residuals_check_out(self, backends):
        _, sparse = backends
        x = sparse.profile((4, 17))
        assert sparse.residual_norm((4, 17), x) <= sparse.residual_tolerance((4, 17))


class TestLargeInstances:
    def test_long_line_uses_sparse_solver_end_to_end(self):
        # 2600 nodes is beyond the dense cutoff, so this covers the sparse
        # factorization inside the equilibrium API and the sparse branch of
        # the electrical cross-check.
        n = 2600
        inst = Instance(generate_line(n), frozenset({0}), budget=1)
        prof = solve_equilibrium(inst, {3})
        expected = [2 * i / 5 - 1 for i in range(1, 5)] + [2 * 4 / 5 - 1] * (n - 4)
        np.testing.assert_allclose(prof.opinions, expected, atol=1e-9)
        assert verify_electrical(inst, {3}, prof)

    def test_heuristics_on_sparse_backend(self):
        from optarget import brute_force, hill_climb

        rng = np.random.default_rng(5)
        g = random_connected_graph(2100, 0.002, rng)
        inst = Instance(g, frozenset({17}), budget=1)
        exact = brute_force(inst)
        walk = hill_climb(inst)
        assert walk.objective <= exact.objective + 1e-12
        fresh = solve_equilibrium(inst, walk.chosen_set).objective
        assert walk.objective == pytest.approx(fresh, abs=1e-12)
