import math

import numpy as np
from django.test import SimpleTestCase
from scipy.special import eval_hermite

from core.exceptions import InsufficientJetOrder
from core.specs import QuadratureSpec
from superint.jets import (
    JetSeries, im_pole_finite_eta, im_pole_functional, jet_order, pole_functional_by_extrapolation, richardson_limit,
)


class JetArithmeticTests(SimpleTestCase):
    def test_gaussian_coefficients_are_scaled_hermite(self):
        x = 0.3
        jet = JetSeries.gaussian(x, 8)
        for k in range(8):
            expected = math.exp(-x * x) * (-1) ** k * eval_hermite(k, x) / math.factorial(k)
            self.assertAlmostEqual(jet.coefficient(k), expected, places=14)

    def test_product_truncates_to_shorter_operand(self):
        product = JetSeries([1.0, 1.0, 0.0, 0.0]) * JetSeries([1.0, -1.0, 0.0])
        np.testing.assert_allclose(product.coefficients, [1.0, 0.0, -1.0])

    def test_division_inverts_geometric_series(self):
        quotient = JetSeries.constant(1.0, 6) / JetSeries([1.0, -1.0, 0, 0, 0, 0])
        np.testing.assert_allclose(quotient.coefficients, np.ones(6))

    def test_division_needs_nonzero_constant_term(self):
        with self.assertRaises(ZeroDivisionError):
            JetSeries.constant(1.0, 3) / JetSeries([0.0, 1.0, 0.0])

    def test_exponential(self):
        jet = JetSeries([0.0, 2.0, 0.0, 0.0, 0.0]).exp()
        np.testing.assert_allclose(jet.coefficients, [2.0 ** k / math.factorial(k) for k in range(5)])

    def test_complex_scalars(self):
        jet = JetSeries.polynomial([1.0, 2.0], 3) * 1j + 1.0
        self.assertEqual(jet.coefficient(0), 1 + 1j)
        self.assertEqual(jet.coefficient(1), 2j)

    def test_evaluate(self):
        self.assertAlmostEqual(JetSeries([1.0, -2.0, 0.5]).evaluate(2.0), 1.0 - 4.0 + 2.0, places=15)

    def test_missing_coefficient(self):
        with self.assertRaises(InsufficientJetOrder):
            JetSeries([1.0, 2.0]).coefficient(2)

    def test_guard_terms(self):
        self.assertEqual(jet_order(5), 9)


class PoleFunctionalTests(SimpleTestCase):
    def test_simple_pole_of_constant(self):
        self.assertAlmostEqual(im_pole_functional(1, JetSeries.constant(1.0, 2)), math.pi, places=15)

    def test_simple_pole_of_gaussian(self):
        x = 0.8
        value = im_pole_functional(1, JetSeries.gaussian(x, 3))
        self.assertAlmostEqual(value, math.pi * math.exp(-x * x), places=14)

    def test_third_order_pole_of_square(self):
        self.assertAlmostEqual(im_pole_functional(3, JetSeries.polynomial([0, 0, 1.0], 5)), math.pi, places=15)

    def test_jet_too_short(self):
        with self.assertRaises(InsufficientJetOrder):
            im_pole_functional(4, JetSeries([1.0, 0.0, 0.0]))

    def test_rejects_order_zero(self):
        with self.assertRaises(ValueError):
            im_pole_functional(0, JetSeries([1.0]))


class FiniteEtaTests(SimpleTestCase):
    def setUp(self):
        self.spec = QuadratureSpec.default()

    def test_richardson_removes_polynomial_bias(self):
        etas = [0.04, 0.02, 0.01]
        limit, error = richardson_limit(etas, [2.0 + 3.0 * e - e * e for e in etas])
        self.assertAlmostEqual(limit, 2.0, places=12)
        # change from the linear to the quadratic extrapolant: e_0 e_1
        self.assertAlmostEqual(error, 0.04 * 0.02, places=12)

    def test_richardson_needs_two_points(self):
        with self.assertRaises(ValueError):
            richardson_limit([0.1], [1.0])

    def test_finite_eta_approaches_functional(self):
        shift = 0.3
        g = lambda s: np.exp(-(s + shift) ** 2)  # noqa: E731
        exact = im_pole_functional(2, JetSeries.gaussian(shift, jet_order(2)))
        near = im_pole_finite_eta(2, g, 1e-3, self.spec)
        self.assertAlmostEqual(near, exact, delta=1e-2)

    def test_extrapolation_matches_functional(self):
        shift = -0.4
        for order in (1, 3, 5, 9):
            exact = im_pole_functional(order, JetSeries.gaussian(shift, jet_order(order)))
            extrapolated = pole_functional_by_extrapolation(order, lambda s: np.exp(-(s + shift) ** 2), self.spec)
            self.assertAlmostEqual(extrapolated, exact, delta=1e-6, msg=f"order={order}")
