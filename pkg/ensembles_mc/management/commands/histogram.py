import logging

from core.commands import RmtkCommand
from core.output import TableWriter
from core.serializers import parse_grid
from ensembles_mc.services import MCConfig, MonteCarloService
from kernels.services import KernelService

logger = logging.getLogger(__name__)


class Command(RmtkCommand):
    help = 'Histogram of sampled eigenvalues (GSE doublets once) against the analytic level density.'
    methods = ['mc']

    def add_arguments(self, parser):
        self.add_ensemble_arguments(parser)
        parser.add_argument('--grid', required=True, help='lo:hi:step; grid points are the bin edges.')
        self.add_mc_arguments(parser)
        self.add_output_arguments(parser)

    def run(self, config, options) -> str:
        ensemble = config.ensemble
        edges = parse_grid(options['grid'])
        histogram = MonteCarloService.eigen_histogram(MCConfig.build(ensemble, **config.mc), edges)
        centers = histogram.centers
        analytic = KernelService.level_density(ensemble.beta, ensemble.n_levels, centers)

        logger.info(
            f"histogram {ensemble.name} N={ensemble.n_levels}: mass {histogram.mass:g} "
            f"(in range {histogram.in_range_mass:.6g}, under {histogram.underflow}, over {histogram.overflow})"
        )
        table = TableWriter(['x', 'mc_density', 'mc_err', 'mass', 'analytic_density'], fmt=config.fmt)
        table.extend(zip(
            centers.tolist(), histogram.density.tolist(), histogram.stderr.tolist(),
            (histogram.density * histogram.widths).tolist(), [float(v) for v in analytic],
        ))
        return table.render()
