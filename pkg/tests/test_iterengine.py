"""Power iteration, RQI, and the two global algorithms."""

import numpy as np
import pytest

from maxeig import models
from maxeig.errors import NonPositiveIterate
from maxeig.iterengine import (
    algorithm1,
    algorithm2,
    power_iteration,
    rqi,
    _update_factory,
)

from conftest import oracle_eigenvalues, oracle_max_pair


class TestPowerIteration:
    def test_identity_fixed_point(self):
        trace = power_iteration(np.eye(3), v0=np.ones(3), steps=5, store_vectors=True)
        assert np.allclose(trace.zs(), 1.0, rtol=0, atol=1e-15)
        for v in trace.vectors:
            assert np.allclose(v, 1.0 / 3.0, rtol=0, atol=1e-15)

    def test_dominant_diagonal(self):
        trace = power_iteration(np.diag([2.0, 1.0]), v0=[0.5, 0.5], steps=120,
                                store_vectors=True)
        assert trace.zs()[-1] == pytest.approx(2.0, abs=1e-10)
        assert np.abs(trace.vectors[-1] - [1.0, 0.0]).max() <= 1e-10

    def test_slow_convergence_on_the_shifted_generator(self):
        # with the efficient seed the estimate drops fast, then crawls:
        # after 1000 steps it is still far from converged at solver tolerance
        from maxeig.tridiag import compute_h, compute_initials

        system = models.bd_squares(7)
        dense = system.dense()
        m = float(np.abs(np.diag(dense)).max())
        A = m * np.eye(8) + dense
        lam = m - 0.525268
        ht = compute_h(system)
        seed = ht.h * compute_initials(ht.transformed).v0_raw
        trace = power_iteration(A, v0=seed, steps=1000)
        zs = trace.zs()
        err0, err10, err1000 = (abs(z - lam) for z in (zs[0], zs[10], zs[1000]))
        assert err10 < err0 / 3.0
        assert err10 < 0.5
        assert err1000 > 10 * 1e-10

    def test_early_stop_tolerance(self):
        trace = power_iteration(np.diag([5.0, 1.0]), v0=[1.0, 1.0], steps=500, tol=1e-12)
        assert trace.termination == "converged"
        assert trace.iterations < 100


class TestRqi:
    def test_invariant_subspace_single_step(self):
        result, trace = rqi(np.diag([3.0, 1.0]), [1.0, 0.0], 2.9)
        assert trace.zs()[1] == 3.0
        assert result.eigenvalue == 3.0
        assert result.iterations == 1

    def test_pitfall_iterates(self):
        # rough uniform start captures the third-lowest decay rate, and the
        # failure mode is preserved to five significant digits
        neg_q = -models.bd_squares(7).dense()
        v0 = np.ones(8) / np.sqrt(8)
        z0 = float(v0 @ neg_q @ v0)
        assert z0 == pytest.approx(8.0, rel=1e-12)
        result, trace = rqi(neg_q, v0, z0, "rayleigh")
        zs = trace.zs()
        for k, expect in enumerate([4.78557, 5.67061, 5.91766, 5.91867], start=1):
            assert zs[k] == pytest.approx(expect, rel=1e-5)
        assert not result.eigenvector_positive

    def test_efficient_initials_two_steps(self):
        from maxeig.tridiag import compute_h, compute_initials

        system = models.bd_squares(7)
        init = compute_initials(compute_h(system).transformed)
        neg_q = -system.dense()
        v0 = init.v0 / np.linalg.norm(init.v0)
        z0 = float(v0 @ neg_q @ v0)
        _, trace = rqi(neg_q, v0, z0, "rayleigh")
        assert trace.zs()[2] == pytest.approx(0.525268, abs=5e-6)
        assert trace.stabilized_at() <= 2

    def test_weighted_update_needs_mu(self):
        with pytest.raises(Exception):
            rqi(np.eye(2), [1.0, 1.0], 0.5, "weighted_rayleigh")

    def test_max_ratio_update_rejects_sign_change(self):
        update = _update_factory("max_ratio", None)
        with pytest.raises(NonPositiveIterate):
            update(np.array([1.0, -1.0]), np.array([1.0, 1.0]))


class TestGlobalAlgorithms:
    def test_specific_rqi_trace(self):
        result, trace = algorithm1(models.negative3())
        zs = trace.zs()
        assert zs[0] == 24.0
        assert zs[1] == pytest.approx(17.3772, rel=1e-4)
        assert zs[2] == pytest.approx(17.5124, rel=1e-4)
        assert result.eigenvalue == pytest.approx(17.5124, abs=5e-4)

    def test_shifted_inverse_trace(self):
        result, trace = algorithm2(models.negative3())
        zs = trace.zs()
        assert zs[1] == pytest.approx(18.5316, rel=1e-4)
        assert zs[2] == pytest.approx(17.5416, rel=1e-4)
        assert zs[3] == pytest.approx(17.5124, rel=1e-4)
        assert result.eigenvector_positive

    def test_identity_converges_immediately(self):
        result, trace = algorithm1(np.eye(4))
        assert result.eigenvalue == 1.0
        assert result.iterations == 0
        assert trace.termination == "converged"

    def test_symmetric_permutation(self):
        A = np.array([[0.0, 1.0], [1.0, 0.0]])
        result, _ = algorithm2(A)
        assert result.eigenvalue == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(np.abs(result.eigenvector), 1.0 / np.sqrt(2.0), atol=1e-10)

    def test_triangular_family_final_value(self):
        result, trace = algorithm2(models.triangular_model(7, "inv_kp1"), negate=True)
        assert trace.zs()[-1] == pytest.approx(0.452339, abs=5e-6)
        # negate mode reports lambda_min(-Q), the positive decay rate
        assert result.eigenvalue == pytest.approx(0.452339, abs=5e-6)

    def test_complex_example(self):
        result, _ = algorithm1(models.complex3())
        oracle = oracle_eigenvalues(models.complex3())
        target = oracle[int(np.argmax(oracle.real))]
        assert abs(result.eigenvalue - target) <= 1e-6
        v = result.eigenvector / np.linalg.norm(result.eigenvector)
        printed = np.array([0.408237, 0.816507, 0.408237])
        assert np.abs(v - printed).max() <= 1e-4

    def test_algorithm2_rejects_complex(self):
        with pytest.raises(NonPositiveIterate):
            algorithm2(models.complex3())


class TestEngineInvariants:
    def test_unit_norm_iterates(self):
        _, trace = algorithm2(models.negative3(), store_vectors=True)
        for v in trace.vectors:
            assert abs(np.linalg.norm(v) - 1.0) <= 1e-12

    def test_max_ratio_upper_bound(self, rng):
        from maxeig.numat import max_ratio

        for _ in range(20):
            n = int(rng.integers(2, 13))
            A = rng.uniform(0.0, 1.0, size=(n, n)) + 0.05 * np.eye(n)
            rho = float(np.max(oracle_eigenvalues(A).real))
            v = rng.uniform(0.1, 2.0, size=n)
            assert max_ratio(A, v) >= rho - 1e-10

    def test_shift_stays_above_rho_during_run(self):
        A = np.abs(models.negative3())  # nonnegative variant
        rho = float(np.max(oracle_eigenvalues(A).real))
        _, trace = algorithm2(A)
        assert (trace.zs() >= rho - 1e-10).all()

    def test_shift_equivalence(self, rng):
        A = models.negative3()
        m = 7.5
        r1, t1 = algorithm2(A)
        r2, t2 = algorithm2(A + m * np.eye(3))
        assert r2.eigenvalue - r1.eigenvalue == pytest.approx(m, abs=1e-10)
        assert np.abs(r1.eigenvector - r2.eigenvector).max() <= 1e-10
        B = rng.uniform(0.0, 1.0, size=(5, 5))
        r3, _ = algorithm1(B)
        r4, _ = algorithm1(B + m * np.eye(5))
        assert r4.eigenvalue - r3.eigenvalue == pytest.approx(m, abs=1e-10)
        assert np.abs(r3.eigenvector - r4.eigenvector).max() <= 1e-10

    def test_determinism_bitwise(self):
        runs = [algorithm2(models.negative3()) for _ in range(2)]
        zs = [t.zs() for _, t in runs]
        res = [t.residuals() for _, t in runs]
        assert np.array_equal(zs[0], zs[1])
        assert np.array_equal(res[0], res[1])
        vecs = [r.eigenvector for r, _ in runs]
        assert np.array_equal(vecs[0], vecs[1])

    def test_oracle_agreement(self):
        lam, g = oracle_max_pair(models.negative3())
        result, _ = algorithm2(models.negative3())
        assert result.eigenvalue == pytest.approx(lam, rel=1e-10)
        got = result.eigenvector / result.eigenvector[-1]
        assert np.abs(got - g).max() <= 1e-8
