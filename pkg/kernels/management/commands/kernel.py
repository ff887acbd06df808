from itertools import product

from core.commands import RmtkCommand
from core.output import TableWriter
from core.serializers import parse_grid
from ensembles_mc.services import MCConfig, MonteCarloService
from kernels.services import KernelService, KernelValue
from superint.services import SuperintegralService

COLUMNS = ['beta', 'N', 'x_p', 'x_q', 'method', 'value', 'uncertainty']


class Command(RmtkCommand):
    help = 'Evaluate the finite-N kernel K_N(x_p, x_q) by the analytic, Monte Carlo or superintegral route.'

    def add_arguments(self, parser):
        self.add_ensemble_arguments(parser)
        parser.add_argument('--xp', type=float, nargs='+', help='First energies (paired with --xq).')
        parser.add_argument('--xq', type=float, nargs='+', help='Second energies.')
        parser.add_argument('--grid', help='lo:hi:step; evaluates every off-diagonal pair of grid points.')
        self.add_method_argument(parser)
        self.add_mc_arguments(parser)
        self.add_quadrature_arguments(parser)
        self.add_output_arguments(parser)

    def points(self, options):
        if options.get('grid'):
            axis = parse_grid(options['grid'])
            return [(float(a), float(b)) for a, b in product(axis, axis) if a != b]
        xp, xq = options.get('xp'), options.get('xq')
        if not xp or not xq or len(xp) != len(xq):
            raise ValueError("Give --grid, or --xp and --xq with the same number of values.")
        return list(zip(xp, xq))

    def evaluate(self, config, x_p: float, x_q: float) -> KernelValue:
        ensemble = config.ensemble
        if config.method == 'mc':
            return MonteCarloService.kernel_mc(MCConfig.build(ensemble, **config.mc), x_p, x_q)
        if config.method == 'superint':
            value = SuperintegralService.kernel_superint(ensemble.beta, ensemble.n_levels, x_p, x_q, config.quadrature)
            return KernelValue(value=value, route='superint')
        value = float(KernelService.kernel(ensemble.beta, ensemble.n_levels, x_p, x_q))
        return KernelValue(value=value, route='analytic')

    def run(self, config, options) -> str:
        table = TableWriter(COLUMNS, fmt=config.fmt)
        ensemble = config.ensemble
        for x_p, x_q in self.points(options):
            result = self.evaluate(config, x_p, x_q)
            table.add_row(ensemble.beta, ensemble.n_levels, x_p, x_q, result.route, result.value, result.uncertainty)
        return table.render()
