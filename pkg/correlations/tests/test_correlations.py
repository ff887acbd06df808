import math
from itertools import permutations

import numpy as np
from django.test import SimpleTestCase
from scipy import integrate

from core.exceptions import DegenerateArguments
from correlations.quaternion import SelfDualQuaternionMatrix, qdet
from correlations.services import CorrelationService, EnergyTuple
from kernels.services import KernelService
from special.services import OscillatorService


def pair_integral(beta, N, x):
    def integrand(y):
        return CorrelationService.r_k(beta, N, (x, y))

    left = integrate.quad(integrand, -np.inf, x, epsabs=1e-10, limit=200)[0]
    right = integrate.quad(integrand, x, np.inf, epsabs=1e-10, limit=200)[0]
    return left + right


def goe_correlation_with_flipped_step(N, xs):
    """R_k assembled with J K = I K + ε(x_p - x_q) + A(x_p) - A(x_q) instead of the library's J."""
    X_p, X_q = EnergyTuple.of(xs).grid()
    kernel = KernelService.expansion(1, N)
    j = KernelService.op_I(kernel, 1, X_p, X_q) + OscillatorService.eps(X_p - X_q)
    if kernel.alpha_levels:
        j = j + OscillatorService.alpha_antiderivative(N, X_p) - OscillatorService.alpha_antiderivative(N, X_q)
    return qdet(SelfDualQuaternionMatrix.from_components(
        kernel.evaluate(X_p, X_q), KernelService.op_D(kernel, 1, X_p, X_q), j, kernel.evaluate(X_q, X_p),
    ))


class EnergyTupleTests(SimpleTestCase):
    def test_rejects_coincident_energies(self):
        with self.assertRaises(DegenerateArguments):
            EnergyTuple((0.1, 0.5, 0.1 + 1e-10))

    def test_rejects_empty_and_non_finite(self):
        with self.assertRaises(ValueError):
            EnergyTuple(())
        with self.assertRaises(ValueError):
            EnergyTuple((0.0, float('inf')))

    def test_grid_orientation(self):
        X_p, X_q = EnergyTuple((1.0, 2.0)).grid()
        self.assertEqual(X_p[0, 1], 1.0)
        self.assertEqual(X_q[0, 1], 2.0)


class UnitaryCorrelationTests(SimpleTestCase):
    def test_one_point_is_density(self):
        self.assertAlmostEqual(
            CorrelationService.r_k_gue(4, (0.3,)), KernelService.level_density(2, 4, 0.3), places=15,
        )

    def test_two_point_cofactor(self):
        x, y = 0.3, -0.4
        K = lambda a, b: KernelService.kernel_gue(3, a, b)  # noqa: E731
        expected = K(x, x) * K(y, y) - K(x, y) ** 2
        self.assertAlmostEqual(CorrelationService.r_k_gue(3, (x, y)), expected, places=14)

    def test_two_levels_exact_pair_density(self):
        x, y = 0.3, -0.4
        expected = 2 / math.pi * (x - y) ** 2 * math.exp(-x * x - y * y)
        self.assertAlmostEqual(CorrelationService.r_k_gue(2, (x, y)), expected, places=13)

    def test_pair_bounded_by_product(self):
        for x in np.linspace(-1.5, 1.5, 4):
            for y in np.linspace(-1.4, 1.6, 4):
                r2 = CorrelationService.r_k_gue(4, (x, y))
                r1 = CorrelationService.r_k_gue(4, (x,)) * CorrelationService.r_k_gue(4, (y,))
                self.assertLessEqual(r2, r1 + 1e-15)


class OrthogonalCorrelationTests(SimpleTestCase):
    def test_one_point_is_density(self):
        for N in (2, 3):
            self.assertAlmostEqual(
                CorrelationService.r_k_goe(N, (0.0,)), KernelService.level_density(1, N, 0.0), places=14,
            )

    def test_single_level_has_no_pairs(self):
        self.assertAlmostEqual(CorrelationService.r_k_goe(1, (0.2, -0.5)), 0.0, places=14)

    def test_two_levels_exact_pair_density(self):
        x, y = 0.3, -0.4
        expected = abs(x - y) * math.exp(-(x * x + y * y) / 2) / (2 * math.sqrt(math.pi))
        self.assertAlmostEqual(CorrelationService.r_k_goe(2, (x, y)), expected, places=12)
        self.assertAlmostEqual(CorrelationService.r_k_goe(2, (y, x)), expected, places=12)

    def test_mehta_assembly_agrees(self):
        for N in (2, 3, 4, 5, 6):
            for xs in ((0.4, -0.4), (0.1, -0.9, 1.3)):
                self.assertAlmostEqual(
                    CorrelationService.r_k_goe(N, xs), CorrelationService.r_k_goe_mehta(N, xs),
                    delta=1e-8, msg=f"N={N} xs={xs}",
                )

    def test_permutation_invariance(self):
        xs = (0.2, -0.7, 1.1)
        reference = CorrelationService.r_k_goe(3, xs)
        for order in permutations(xs):
            self.assertAlmostEqual(CorrelationService.r_k_goe(3, order), reference, delta=1e-12)

    def test_pair_sum_rule(self):
        for N in (2, 3):
            x = 0.3
            self.assertAlmostEqual(
                pair_integral(1, N, x), (N - 1) * KernelService.level_density(1, N, x), delta=1e-6,
            )

    def test_step_term_enters_j_with_minus_sign(self):
        # The reading with +ε(x_p - x_q) and the full α antiderivative difference
        # in J K looks natural but fails the exact two-level pair density and the
        # Mehta-form assembly; the library's J passes both.
        x, y = 0.3, -0.4
        exact = abs(x - y) * math.exp(-(x * x + y * y) / 2) / (2 * math.sqrt(math.pi))
        self.assertAlmostEqual(CorrelationService.r_k_goe(2, (x, y)), exact, places=12)
        self.assertGreater(abs(goe_correlation_with_flipped_step(2, (x, y)) - exact), 1e-3)

        xs = (0.4, -0.4)
        mehta = CorrelationService.r_k_goe_mehta(3, xs)
        self.assertAlmostEqual(CorrelationService.r_k_goe(3, xs), mehta, delta=1e-8)
        self.assertGreater(abs(goe_correlation_with_flipped_step(3, xs) - mehta), 1e-3)

    def test_cluster_decay(self):
        xs = (-5.0, 0.0, 5.0)
        product = np.prod([KernelService.level_density(1, 3, x) for x in xs])
        self.assertAlmostEqual(CorrelationService.r_k_goe(3, xs), product, delta=1e-4)

    def test_self_dual_assembly(self):
        self.assertTrue(CorrelationService.quaternion_matrix(1, 3, (0.1, 0.6)).is_self_dual())


class SymplecticCorrelationTests(SimpleTestCase):
    def test_one_point_is_density(self):
        self.assertAlmostEqual(
            CorrelationService.r_k_gse(2, (0.25,)), KernelService.kernel_gse(2, 0.25, 0.25), places=14,
        )

    def test_single_doublet_has_no_pairs(self):
        self.assertAlmostEqual(CorrelationService.r_k_gse(1, (0.2, -0.5)), 0.0, places=13)
        self.assertAlmostEqual(CorrelationService.r_k_gse_mehta(1, (0.2, -0.5)), 0.0, places=13)

    def test_two_doublets_exact_pair_density(self):
        x, y = 0.2, -0.5
        expected = 16 / (3 * math.pi) * (x - y) ** 4 * math.exp(-2 * (x * x + y * y))
        self.assertAlmostEqual(CorrelationService.r_k_gse(2, (x, y)), expected, places=12)

    def test_mehta_assembly_agrees(self):
        for N in (1, 2, 3):
            for xs in ((0.2, -0.5), (0.3, -0.2, 0.9)):
                self.assertAlmostEqual(
                    CorrelationService.r_k_gse(N, xs), CorrelationService.r_k_gse_mehta(N, xs),
                    delta=1e-8, msg=f"N={N} xs={xs}",
                )

    def test_pair_sum_rule(self):
        x = -0.2
        self.assertAlmostEqual(pair_integral(4, 2, x), KernelService.level_density(4, 2, x), delta=1e-6)

    def test_unitary_has_no_quaternion_form(self):
        with self.assertRaises(ValueError):
            CorrelationService.quaternion_matrix(2, 2, (0.1, 0.2))


class DensityNormalizationTests(SimpleTestCase):
    def test_one_point_integrates_to_level_number(self):
        for beta, N in ((1, 3), (2, 3), (4, 2)):
            total = integrate.quad(
                lambda x: CorrelationService.r_k(beta, N, (x,)), -np.inf, np.inf, epsabs=1e-11, limit=200,
            )[0]
            self.assertAlmostEqual(total, N, delta=1e-6)
