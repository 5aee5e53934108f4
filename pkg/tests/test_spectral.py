import numpy as np
import pytest

from conftest import random_connected_graph
from pinnet.errors import BoundaryCaseError, BoundUndefinedError, ContractViolationError
from pinnet.pinning import PinningPlan, plan_by_degree, plan_explicit
from pinnet.spectral import (
    check_margin,
    cluster_leaf_gain_bound,
    controlled_spectrum,
    diag_bounds_check,
    eig_symmetric,
    evaluate_plan,
    gershgorin_check,
    min_uniform_gain,
    schur_feasible,
    star_leaf_gain_bound,
)
from pinnet.topology import ClusterSpec, cluster_stars, coupling_matrix, star


def leaf_plan(n, eps, c=1.0):
    return plan_by_degree(star(n), "smallest", n - 1, eps, c)


class TestEigSymmetric:
    def test_diagonal_matrix(self):
        dec = eig_symmetric(np.diag([3.0, 1.0, 2.0]))
        assert np.array_equal(dec.eigenvalues, [3.0, 2.0, 1.0])
        # eigenvectors form a permutation of the identity
        assert np.array_equal(np.abs(dec.eigenvectors), np.eye(3)[:, [0, 2, 1]])

    def test_star_9(self):
        dec = eig_symmetric(coupling_matrix(star(9)))
        expected = np.concatenate([[0.0], -np.ones(7), [-9.0]])
        assert np.max(np.abs(dec.eigenvalues - expected)) < 1e-8

    def test_swap_matrix(self):
        dec = eig_symmetric(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(dec.eigenvalues, [1.0, -1.0], atol=1e-12)

    def test_rejects_asymmetric(self):
        with pytest.raises(ContractViolationError):
            eig_symmetric(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_nonsquare(self):
        with pytest.raises(ContractViolationError):
            eig_symmetric(np.zeros((2, 3)))

    def test_zero_matrix(self):
        dec = eig_symmetric(np.zeros((4, 4)))
        assert np.array_equal(dec.eigenvalues, np.zeros(4))

    def test_residual_orthogonality_and_oracle_1000(self):
        # Residual and orthogonality invariants on 1000 random symmetric
        # matrices, cross-checked against numpy's eigensolver.
        rng = np.random.Generator(np.random.PCG64(7))
        for _ in range(1000):
            n = int(rng.integers(2, 31))
            M = rng.uniform(-10, 10, (n, n))
            M = 0.5 * (M + M.T)
            dec = eig_symmetric(M)
            fro = np.linalg.norm(M)
            resid = np.max(
                np.linalg.norm(M @ dec.eigenvectors - dec.eigenvectors * dec.eigenvalues, axis=0)
            )
            assert resid <= 1e-9 * max(1.0, fro)
            orth = np.max(np.abs(dec.eigenvectors.T @ dec.eigenvectors - np.eye(n)))
            assert orth <= 1e-9
            assert np.all(np.diff(dec.eigenvalues) <= 1e-12)
            oracle = np.sort(np.linalg.eigvalsh(M))[::-1]
            assert np.max(np.abs(dec.eigenvalues - oracle)) <= 1e-9 * max(1.0, fro)


class TestControlledSpectrum:
    def test_leaf_pinning_beats_margin(self):
        A = coupling_matrix(star(9))
        dec = controlled_spectrum(A, leaf_plan(9, 1.5, 10.0))
        assert dec.lambda_max < -1.0

    def test_center_pin_ceiling(self):
        A = coupling_matrix(star(9))
        dec = controlled_spectrum(A, plan_explicit(9, {0: 300.0}, 10.0))
        assert -1.0 <= dec.lambda_max < 0.0

    def test_empty_plan_gives_raw_spectrum(self):
        A = coupling_matrix(star(6))
        dec = controlled_spectrum(A, PinningPlan(6, (0.0,) * 6, 1.0))
        assert abs(dec.lambda_max) < 1e-9

    def test_ceiling_across_sizes_and_gains(self):
        # pinning only the center cannot push the spectrum below -1
        for n in range(3, 21):
            A = coupling_matrix(star(n))
            for eps in (1.0, 10.0, 100.0, 1000.0):
                lam1 = controlled_spectrum(A, plan_explicit(n, {0: eps}, 1.0)).lambda_max
                assert -1.0 - 1e-9 <= lam1 < 0.0

    def test_lambda_max_monotone_in_each_gain(self, rng):
        for _ in range(20):
            n = int(rng.integers(3, 10))
            g = random_connected_graph(rng, n)
            A = coupling_matrix(g)
            gains = rng.uniform(0, 3, n)
            gains[rng.integers(0, n)] = 0.0
            base = eig_symmetric(A - np.diag(gains)).lambda_max
            i = int(rng.integers(0, n))
            bumped = gains.copy()
            bumped[i] += rng.uniform(0.1, 2.0)
            after = eig_symmetric(A - np.diag(bumped)).lambda_max
            assert after <= base + 1e-9


class TestGainBounds:
    def test_star_bound_values(self):
        assert star_leaf_gain_bound(9, 1.0) == pytest.approx(8.0 / 7.0, rel=1e-15)
        assert star_leaf_gain_bound(3, 1.0) == pytest.approx(2.0, rel=1e-15)

    def test_star_bound_undefined(self):
        with pytest.raises(BoundUndefinedError):
            star_leaf_gain_bound(9, 8.5)
        with pytest.raises(BoundUndefinedError):
            star_leaf_gain_bound(9, 0.0)

    def test_star_bound_sufficiency_spot(self):
        for n, margin in [(3, 1.0), (9, 1.0), (12, 2.5)]:
            eps = star_leaf_gain_bound(n, margin) * 1.01
            lam1 = controlled_spectrum(coupling_matrix(star(n)), leaf_plan(n, eps)).lambda_max
            assert lam1 < -margin

    def test_cluster_bound_values(self):
        assert cluster_leaf_gain_bound(2, 1.0) == pytest.approx(2.0, rel=1e-15)
        assert cluster_leaf_gain_bound(3, 1.0) == pytest.approx(1.5, rel=1e-15)

    def test_cluster_bound_undefined(self):
        with pytest.raises(BoundUndefinedError):
            cluster_leaf_gain_bound(1, 1.0)

    def test_cluster_bound_sufficiency_spot(self):
        spec = ClusterSpec((3, 3, 3))
        g = cluster_stars(spec)
        A = coupling_matrix(g)
        eps = cluster_leaf_gain_bound(3, 1.0) * 1.01
        plan = plan_explicit(g.n_nodes, {i: eps for i in range(3, g.n_nodes)}, 1.0)
        assert controlled_spectrum(A, plan).lambda_max < -1.0

    def test_fig5b_gain_clears_cluster_bound(self):
        # shipped cluster scenario gain 2.5 > bound 2 for smallest branch 2
        assert 2.5 > cluster_leaf_gain_bound(2, 1.0)


class TestSchurFeasible:
    def test_star_leaves_true(self):
        A = coupling_matrix(star(9))
        assert schur_feasible(A, range(1, 9), [1.5] * 8, 1.0) is True

    def test_star_center_false(self):
        A = coupling_matrix(star(9))
        for eps in (1.0, 300.0, 1e6):
            assert schur_feasible(A, [0], [eps], 1.0) is False

    def test_small_alpha_true(self, rng):
        g = random_connected_graph(rng, 7)
        A = coupling_matrix(g)
        assert schur_feasible(A, [2, 3], [1.0, 2.0], 1e-6) is True

    def test_boundary_case_raises(self):
        # unpinned block is the center alone: eigenvalue -8; alpha within 1e-9 of 8
        A = coupling_matrix(star(9))
        with pytest.raises(BoundaryCaseError):
            schur_feasible(A, range(1, 9), [50.0] * 8, 8.0 - 1e-10)

    def test_agrees_with_direct_eigen_test(self, rng):
        checked = 0
        while checked < 60:
            n = int(rng.integers(3, 13))
            g = random_connected_graph(rng, n)
            A = coupling_matrix(g)
            k = int(rng.integers(1, n))
            pinned = sorted(rng.choice(n, size=k, replace=False).tolist())
            gains = rng.uniform(0.1, 50.0, k)
            alpha = float(rng.uniform(0.05, 5.0))
            At = A.copy()
            for idx, node in enumerate(pinned):
                At[node, node] -= gains[idx]
            lam1 = eig_symmetric(At).lambda_max
            if abs(lam1 + alpha) < 1e-7:
                continue
            try:
                result = schur_feasible(A, pinned, gains, alpha)
            except BoundaryCaseError:
                continue
            assert result == (lam1 < -alpha)
            checked += 1

    def test_validates_inputs(self):
        A = coupling_matrix(star(4))
        with pytest.raises(ContractViolationError):
            schur_feasible(A, [], [], 1.0)
        with pytest.raises(ContractViolationError):
            schur_feasible(A, range(4), [1.0] * 4, 1.0)
        with pytest.raises(ContractViolationError):
            schur_feasible(A, [1], [1.0, 2.0], 1.0)


class TestMinUniformGain:
    def test_star_leaves_reaches_exact_threshold(self):
        A = coupling_matrix(star(9))
        tol = 1e-6
        eps = min_uniform_gain(A, range(1, 9), 1.0, tol)
        # closed form: the threshold is exactly (N-1)/(N-2) = 8/7
        assert eps <= 8.0 / 7.0 + 2 * tol
        assert eps >= 8.0 / 7.0 - tol
        lam1 = eig_symmetric(A - np.diag([0.0] + [eps] * 8)).lambda_max
        assert lam1 < -1.0

    def test_center_infeasible_at_margin_1(self):
        A = coupling_matrix(star(9))
        assert min_uniform_gain(A, [0], 1.0, 1e-6) is None

    def test_center_feasible_at_half_margin(self):
        A = coupling_matrix(star(9))
        eps = min_uniform_gain(A, [0], 0.5, 1e-6)
        assert eps is not None
        lam1 = eig_symmetric(A - np.diag([eps] + [0.0] * 8)).lambda_max
        assert lam1 < -0.5
        # minimality within tolerance
        lam_below = eig_symmetric(A - np.diag([eps - 1e-5] + [0.0] * 8)).lambda_max
        assert lam_below >= -0.5 - 1e-4

    def test_invalid_tol(self):
        with pytest.raises(ContractViolationError):
            min_uniform_gain(coupling_matrix(star(4)), [1], 1.0, 0.0)

    def test_below_theorem_bound(self, rng):
        # bisection can only improve on the sufficient closed form
        for n in (5, 9, 14):
            A = coupling_matrix(star(n))
            eps = min_uniform_gain(A, range(1, n), 1.0, 1e-9)
            assert eps <= star_leaf_gain_bound(n, 1.0) + 1e-6


class TestDiagBounds:
    def test_star_9(self):
        rep = diag_bounds_check(coupling_matrix(star(9)))
        assert rep.diag_within_spectrum is True
        assert rep.lambda2_bound_holds is True

    def test_identity(self):
        rep = diag_bounds_check(np.eye(3))
        assert rep.diag_within_spectrum is True
        assert rep.lambda2_bound_holds is None

    def test_cluster(self):
        rep = diag_bounds_check(coupling_matrix(cluster_stars(ClusterSpec((2, 3, 4)))))
        assert rep.diag_within_spectrum is True
        assert rep.lambda2_bound_holds is True

    def test_star_two_largest_diagonals(self):
        # a11 + a22 = -1 + -1 = -2 <= lambda_2 = -1 for the star
        A = coupling_matrix(star(9))
        dec = eig_symmetric(A)
        top_two = np.sort(np.diag(A))[::-1][:2]
        assert top_two[0] + top_two[1] <= dec.eigenvalues[1] + 1e-9


class TestGershgorin:
    def test_coupling_matrices(self, rng):
        for _ in range(10):
            g = random_connected_graph(rng, int(rng.integers(2, 12)))
            assert gershgorin_check(coupling_matrix(g))

    def test_diagonal_matrix(self):
        assert gershgorin_check(np.diag([5.0, -3.0]))

    def test_controlled_star(self):
        A = coupling_matrix(star(9))
        At = A - np.diag([0.0] + [1.5] * 8)
        assert gershgorin_check(At)


class TestMarginAndReport:
    def test_check_margin(self):
        A = coupling_matrix(star(9))
        sm = check_margin(A, leaf_plan(9, 1.5, 10.0), 1.0)
        assert sm.satisfied and sm.lambda_max < -1.0
        sm2 = check_margin(A, plan_explicit(9, {0: 300.0}, 10.0), 1.0)
        assert not sm2.satisfied
        assert sm2.satisfied == (sm2.lambda_max < -sm2.margin)

    def test_evaluate_plan(self):
        A = coupling_matrix(star(9))
        rep = evaluate_plan(A, leaf_plan(9, 1.5, 10.0))
        assert rep.cf == 120.0
        assert rep.pinned_count == 8
        assert rep.lambda_max_controlled < -1.0
