import csv
import io
import json
import math
import os
import tempfile
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from core.reports import VerificationReport
from kernels.services import KernelService


def run(*args):
    out = io.StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class KernelCommandTests(SimpleTestCase):
    def test_analytic_row(self):
        table = rows(run('kernel', '--beta', '2', '--n', '4', '--xp', '0.5', '--xq', '-0.5'))
        self.assertEqual(len(table), 1)
        row = table[0]
        self.assertEqual(row['method'], 'analytic')
        self.assertEqual(float(row['uncertainty']), 0.0)
        self.assertEqual(float(row['value']), float(KernelService.kernel_gue(4, 0.5, -0.5)))

    def test_superint_matches_analytic(self):
        row = rows(run('kernel', '--beta', '1', '--n', '3', '--xp', '0.2', '--xq', '0.9', '--method', 'superint'))[0]
        self.assertAlmostEqual(float(row['value']), KernelService.kernel_goe(3, 0.2, 0.9), delta=1e-7)

    def test_grid_skips_diagonal(self):
        table = rows(run('kernel', '--beta', '4', '--n', '2', '--grid=-1:1:1'))
        self.assertEqual(len(table), 6)

    def test_json_output(self):
        document = json.loads(run('kernel', '--beta', '1', '--n', '2', '--xp', '0.1', '--xq', '0.3', '--format', 'json'))
        self.assertEqual(document['columns'][-2:], ['value', 'uncertainty'])
        self.assertEqual(document['rows'][0]['N'], 2)

    def test_monte_carlo_output_ignores_worker_count(self):
        base = ('kernel', '--beta', '2', '--n', '2', '--xp', '0.6', '--xq', '-0.6', '--method', 'mc',
                '--samples', '3000', '--seed', '11', '--eta', '0.1')
        self.assertEqual(run(*base, '--workers', '1'), run(*base, '--workers', '3'))

    def test_unpaired_energies_are_a_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            run('kernel', '--beta', '2', '--n', '2', '--xp', '0.1', '0.2', '--xq', '0.3')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_too_few_samples_is_a_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            run('kernel', '--beta', '2', '--n', '2', '--xp', '0.1', '--xq', '0.5', '--method', 'mc', '--samples', '50')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_degenerate_monte_carlo_point(self):
        with self.assertRaises(CommandError) as ctx:
            run('kernel', '--beta', '2', '--n', '2', '--xp', '0.3', '--xq', '0.3', '--method', 'mc', '--samples', '200')
        self.assertEqual(ctx.exception.returncode, 4)

    def test_out_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'kernel.csv')
            message = run('kernel', '--beta', '2', '--n', '1', '--xp', '0', '--xq', '1', '--out', path)
            self.assertIn(path, message)
            with open(path) as handle:
                self.assertEqual(len(rows(handle.read())), 1)


class CorrelationCommandTests(SimpleTestCase):
    def test_single_point_is_kernel_diagonal(self):
        row = rows(run('corr', '--beta', '1', '--n', '3', '--point', '0.4'))[0]
        self.assertEqual(row['k'], '1')
        self.assertAlmostEqual(float(row['R_k']), float(KernelService.level_density(1, 3, 0.4)), places=14)

    def test_unitary_pair_cofactor(self):
        x, y = -0.3, 0.8
        row = rows(run('corr', '--beta', '2', '--n', '3', f"--point={x},{y}"))[0]
        K = lambda a, b: float(KernelService.kernel_gue(3, a, b))  # noqa: E731
        self.assertAlmostEqual(float(row['R_k']), K(x, x) * K(y, y) - K(x, y) * K(y, x), places=13)

    def test_degenerate_points(self):
        with self.assertRaises(CommandError) as ctx:
            run('corr', '--beta', '4', '--n', '2', '--point', '0.2,0.2')
        self.assertEqual(ctx.exception.returncode, 4)

    def test_mixed_tuple_sizes(self):
        with self.assertRaises(CommandError) as ctx:
            run('corr', '--beta', '2', '--n', '2', '--point', '0.1', '--point', '0.1,0.5')
        self.assertEqual(ctx.exception.returncode, 2)


class DensityCommandTests(SimpleTestCase):
    def test_mass_column_sums_to_level_number(self):
        table = rows(run('density', '--beta', '2', '--n', '10', '--grid=-8:8:0.05'))
        self.assertAlmostEqual(math.fsum(float(r['mass']) for r in table), 10.0, delta=1e-4)

    def test_symmetric_grid_gives_symmetric_column(self):
        values = [float(r['analytic_density']) for r in rows(run('density', '--beta', '1', '--n', '3', '--grid=-2:2:0.25'))]
        for a, b in zip(values, reversed(values)):
            self.assertAlmostEqual(a, b, delta=1e-12)

    def test_monte_carlo_columns(self):
        table = rows(run('density', '--beta', '2', '--n', '2', '--grid=-3:3:0.5', '--method', 'mc',
                         '--samples', '500', '--seed', '1'))
        self.assertIn('mc_density', table[0])
        self.assertIn('mc_err', table[0])


class HistogramCommandTests(SimpleTestCase):
    def test_mass_is_level_number(self):
        table = rows(run('histogram', '--beta', '4', '--n', '3', '--grid=-12:12:0.5', '--samples', '500', '--seed', '3'))
        self.assertAlmostEqual(math.fsum(float(r['mass']) for r in table), 3.0, delta=1e-12)


class ConstantsCommandTests(SimpleTestCase):
    def test_table(self):
        table = {r['name']: r for r in rows(run('constants'))}
        self.assertEqual(float(table['c_0']['value']), 0.0)
        self.assertAlmostEqual(float(table['c_1']['value']), -4 * math.sqrt(2) * math.pi, places=13)
        self.assertAlmostEqual(float(table['omega_1(0)']['value']), -8 * math.pi + 4 * math.sqrt(2) * math.pi, places=12)


class VerifyCommandTests(SimpleTestCase):
    def test_recursions_report(self):
        document = json.loads(run('verify', 'recursions', '--n', '4'))
        self.assertEqual(document['schema'], 1)
        self.assertEqual(document['suite'], 'recursions')
        self.assertEqual(document['summary']['failed'], 0)
        self.assertEqual(set(document['checks'][0]), {'name', 'expected', 'got', 'tol', 'pass'})

    def test_failures_exit_one_after_writing_report(self):
        failing = VerificationReport('recursions')
        failing.add_check('broken', 1.0, 2.0, 1e-3)
        out = io.StringIO()
        with mock.patch('core.management.commands.verify.recursion_suite', return_value=failing):
            with self.assertRaises(CommandError) as ctx:
                call_command('verify', 'recursions', stdout=out)
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertEqual(json.loads(out.getvalue())['summary'], {'total': 1, 'failed': 1})

    def test_unknown_suite(self):
        with self.assertRaises(CommandError):
            run('verify', 'everything')
