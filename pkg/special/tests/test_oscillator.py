import math

import numpy as np
from django.test import SimpleTestCase
from scipy import integrate
from scipy.special import eval_hermite

from special.services import OscillatorService


def reference_wavefunction(n, z):
    """Direct formula H_n(z) e^{-z²/2} / sqrt(2^n n! √π) (small n only)."""
    norm = math.sqrt(2.0 ** n * math.factorial(n) * math.sqrt(math.pi))
    return eval_hermite(n, z) * math.exp(-z * z / 2) / norm


def reference_eps_convolution(n, x):
    left = integrate.quad(lambda t: reference_wavefunction(n, t), -np.inf, x, epsabs=1e-13, epsrel=1e-13)[0]
    right = integrate.quad(lambda t: reference_wavefunction(n, t), x, np.inf, epsabs=1e-13, epsrel=1e-13)[0]
    return 0.5 * left - 0.5 * right


class HermiteTests(SimpleTestCase):
    def test_low_order_values(self):
        self.assertEqual(OscillatorService.hermite(0, 1.7), 1.0)
        self.assertAlmostEqual(OscillatorService.hermite(1, 0.5), 1.0, places=14)
        self.assertAlmostEqual(OscillatorService.hermite(3, 2.0), 40.0, places=12)

    def test_matches_scipy_up_to_order_30(self):
        z = np.linspace(-6, 6, 25)
        for n in range(31):
            ours = OscillatorService.hermite(n, z)
            ref = eval_hermite(n, z)
            scale = np.maximum(1.0, np.abs(ref))
            self.assertLess(np.max(np.abs(ours - ref) / scale), 1e-10, msg=f"n={n}")

    def test_three_term_residual(self):
        z = np.linspace(-6, 6, 13)
        for n in range(1, 60):
            h_next = OscillatorService.hermite(n + 1, z)
            residual = h_next - 2 * z * OscillatorService.hermite(n, z) + 2 * n * OscillatorService.hermite(n - 1, z)
            self.assertLess(np.max(np.abs(residual) / np.maximum(1.0, np.abs(h_next))), 1e-10)

    def test_rejects_negative_order(self):
        with self.assertRaises(ValueError):
            OscillatorService.hermite(-1, 0.0)


class WavefunctionTests(SimpleTestCase):
    def test_ground_state_at_origin(self):
        self.assertAlmostEqual(OscillatorService.osc_wavefunction(0, 0.0), math.pi ** -0.25, places=14)
        self.assertAlmostEqual(OscillatorService.osc_wavefunction(0, 0.0), 0.7511255, places=7)

    def test_odd_state_vanishes_at_origin(self):
        self.assertEqual(OscillatorService.osc_wavefunction(1, 0.0), 0.0)

    def test_fifth_state_against_exact_polynomial(self):
        z = 1.3
        h5 = 32 * z ** 5 - 160 * z ** 3 + 120 * z
        expected = h5 * math.exp(-z * z / 2) / math.sqrt(2 ** 5 * 120 * math.sqrt(math.pi))
        self.assertAlmostEqual(OscillatorService.osc_wavefunction(5, z), expected, places=13)

    def test_orthonormality(self):
        nodes, weights = np.polynomial.hermite.hermgauss(60)
        table = OscillatorService.wavefunction_table(20, nodes)
        gram = (table * weights * np.exp(nodes ** 2)) @ table.T
        self.assertLess(np.max(np.abs(gram - np.eye(21))), 1e-8)

    def test_high_order_far_argument_is_finite(self):
        values = OscillatorService.wavefunction_table(1000, np.array([-40.0, 0.0, 25.0, 40.0]))
        self.assertTrue(np.all(np.isfinite(values)))
        # bounded by the sup of normalized oscillator functions
        self.assertLess(np.max(np.abs(values)), 1.0)

    def test_ladder_derivative_matches_finite_difference(self):
        z, h = 0.37, 1e-5
        deriv = OscillatorService.derivative_table(8, z)
        for n in range(9):
            fd = (OscillatorService.osc_wavefunction(n, z + h) - OscillatorService.osc_wavefunction(n, z - h)) / (2 * h)
            self.assertAlmostEqual(deriv[n], fd, delta=1e-8)

    def test_rejects_non_finite(self):
        with self.assertRaises(ValueError):
            OscillatorService.osc_wavefunction(2, float('nan'))


class EpsTests(SimpleTestCase):
    def test_values(self):
        self.assertEqual(OscillatorService.eps(3.2), 0.5)
        self.assertEqual(OscillatorService.eps(-1e-12), -0.5)
        self.assertEqual(OscillatorService.eps(0.0), 0.0)

    def test_convolution_against_quadrature(self):
        for n in range(7):
            for x in (-1.2, 0.0, 0.7):
                self.assertAlmostEqual(
                    OscillatorService.eps_convolution(n, x), reference_eps_convolution(n, x),
                    delta=1e-9, msg=f"n={n} x={x}",
                )

    def test_first_order_at_origin(self):
        self.assertAlmostEqual(OscillatorService.eps_convolution(1, 0.0), -math.sqrt(2) * math.pi ** -0.25, places=13)

    def test_odd_orders_vanish_far_out(self):
        for n in (1, 3, 7):
            self.assertAlmostEqual(OscillatorService.eps_convolution(n, 12.0), 0.0, places=12)

    def test_derivative_is_wavefunction(self):
        h = 1e-5
        for n in (0, 1, 4, 9):
            for x in (-0.8, 0.3, 1.6):
                fd = (OscillatorService.eps_convolution(n, x + h) - OscillatorService.eps_convolution(n, x - h)) / (2 * h)
                self.assertAlmostEqual(fd, OscillatorService.osc_wavefunction(n, x), delta=1e-6)

    def test_stepping_identity(self):
        x = np.linspace(-3, 3, 11)
        conv = OscillatorService.eps_convolution_table(41, x)
        phi = OscillatorService.wavefunction_table(41, x)
        for n in range(1, 41):
            residual = math.sqrt(n / 2) * conv[n - 1] - phi[n] - math.sqrt((n + 1) / 2) * conv[n + 1]
            self.assertLess(np.max(np.abs(residual)), 1e-10, msg=f"n={n}")


class AlphaTests(SimpleTestCase):
    def test_even_level_number_vanishes(self):
        self.assertEqual(OscillatorService.alpha(4, 0.7), 0.0)

    def test_single_level(self):
        self.assertAlmostEqual(OscillatorService.alpha(1, 0.0), 1 / (math.sqrt(2) * math.sqrt(math.pi)), places=14)

    def test_unit_integral(self):
        for N in (1, 3, 5):
            total = integrate.quad(lambda t: OscillatorService.alpha(N, t), -np.inf, np.inf, epsabs=1e-12)[0]
            self.assertAlmostEqual(total, 1.0, places=9)

    def test_wavefunction_integral_closed_form(self):
        for n in range(0, 9):
            ref = integrate.quad(lambda t: reference_wavefunction(n, t), -np.inf, np.inf, epsabs=1e-13)[0]
            self.assertAlmostEqual(OscillatorService.wavefunction_integral(n), ref, places=10)

    def test_antiderivative(self):
        for x in (-1.1, 0.4, 2.0):
            ref = integrate.quad(lambda t: OscillatorService.alpha(3, t), 0.0, x, epsabs=1e-13)[0]
            self.assertAlmostEqual(OscillatorService.alpha_antiderivative(3, x), ref, places=11)
        self.assertEqual(OscillatorService.alpha_antiderivative(2, 0.5), 0.0)


class HermiteIntegralRepresentationTests(SimpleTestCase):
    def test_examples(self):
        self.assertAlmostEqual(OscillatorService.hermite_integral_repr(0, 0.0), 1.0, delta=1e-10)
        self.assertAlmostEqual(OscillatorService.hermite_integral_repr(2, 1.0), 2.0, delta=1e-10)
        self.assertAlmostEqual(
            OscillatorService.hermite_integral_repr(4, 0.3), OscillatorService.hermite(4, 0.3), delta=1e-8,
        )

    def test_agrees_with_recursion_up_to_order_10(self):
        for N in range(11):
            for x in (-1.4, 0.25, 0.9):
                ref = OscillatorService.hermite(N, x)
                got = OscillatorService.hermite_integral_repr(N, x)
                self.assertAlmostEqual(got, ref, delta=1e-9 * max(1.0, abs(ref)), msg=f"N={N} x={x}")

    def test_contour_route(self):
        ref = OscillatorService.hermite(3, 0.4)
        got = OscillatorService.hermite_integral_repr(3, 0.4, route='contour')
        self.assertAlmostEqual(got, ref, delta=1e-6 * max(1.0, abs(ref)))

    def test_unknown_route(self):
        with self.assertRaises(ValueError):
            OscillatorService.hermite_integral_repr(2, 0.1, route='series')
