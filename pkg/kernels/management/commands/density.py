import logging

import numpy as np

from core.commands import RmtkCommand
from core.output import TableWriter
from core.serializers import parse_grid
from ensembles_mc.services import MCConfig, MonteCarloService
from kernels.services import KernelService

logger = logging.getLogger(__name__)


def trapezoid_weights(grid: np.ndarray) -> np.ndarray:
    weights = np.gradient(grid) if grid.size > 1 else np.ones(1)
    weights[0] = (grid[1] - grid[0]) / 2.0 if grid.size > 1 else 1.0
    weights[-1] = (grid[-1] - grid[-2]) / 2.0 if grid.size > 1 else 1.0
    return weights


class Command(RmtkCommand):
    help = 'Level density R_1 on a grid; --method mc adds a sampled histogram with bins centred on the grid.'
    methods = ['analytic', 'mc']

    def add_arguments(self, parser):
        self.add_ensemble_arguments(parser)
        parser.add_argument('--grid', required=True, help='lo:hi:step')
        self.add_method_argument(parser)
        self.add_mc_arguments(parser)
        self.add_output_arguments(parser)

    def run(self, config, options) -> str:
        ensemble = config.ensemble
        grid = parse_grid(options['grid'])
        density = np.asarray(KernelService.level_density(ensemble.beta, ensemble.n_levels, grid), dtype=float)
        mass = density * trapezoid_weights(grid)
        logger.info(f"density {ensemble.name} N={ensemble.n_levels}: trapezoid mass {mass.sum():.12g}")

        if config.method != 'mc':
            table = TableWriter(['x', 'analytic_density', 'mass'], fmt=config.fmt)
            table.extend(zip(grid.tolist(), density.tolist(), mass.tolist()))
            return table.render()

        step = grid[1] - grid[0] if grid.size > 1 else 1.0
        edges = np.append(grid - step / 2.0, grid[-1] + step / 2.0)
        histogram = MonteCarloService.eigen_histogram(MCConfig.build(ensemble, **config.mc), edges)
        table = TableWriter(['x', 'analytic_density', 'mass', 'mc_density', 'mc_err'], fmt=config.fmt)
        table.extend(zip(grid.tolist(), density.tolist(), mass.tolist(),
                         histogram.density.tolist(), histogram.stderr.tolist()))
        return table.render()
