from core.commands import RmtkCommand
from core.output import TableWriter
from correlations.services import CorrelationService, EnergyTuple
from ensembles_mc.services import MCConfig, MonteCarloService


def parse_point(text: str):
    return tuple(float(v) for v in text.split(','))


class Command(RmtkCommand):
    help = 'k-point correlation functions R_k at energy tuples (--point x1,x2,... repeated).'
    methods = ['analytic', 'mc']

    def add_arguments(self, parser):
        self.add_ensemble_arguments(parser)
        parser.add_argument('--point', action='append', required=True, type=parse_point,
                            help='Comma-separated energies x_1,...,x_k; repeat for more tuples.')
        parser.add_argument('--half-width', type=float, default=0.05, dest='half_width',
                            help='Counting box half width for --method mc.')
        self.add_method_argument(parser)
        self.add_mc_arguments(parser)
        self.add_output_arguments(parser)

    def run(self, config, options) -> str:
        ensemble = config.ensemble
        tuples = [EnergyTuple.of(xs) for xs in options['point']]
        k = tuples[0].k
        if any(t.k != k for t in tuples):
            raise ValueError("All --point tuples must have the same number of energies.")

        columns = ['beta', 'N', 'k'] + [f"x_{i}" for i in range(1, k + 1)] + ['R_k', 'uncertainty']
        table = TableWriter(columns, fmt=config.fmt)
        for energies in tuples:
            if config.method == 'mc':
                mc_config = MCConfig.build(ensemble, **config.mc)
                estimate = MonteCarloService.tuple_density(mc_config, energies.xs, options['half_width'])
                value, error = float(estimate.mean.real), estimate.stderr
            else:
                value, error = float(CorrelationService.r_k(ensemble.beta, ensemble.n_levels, energies)), 0.0
            table.add_row(ensemble.beta, ensemble.n_levels, k, *energies.xs, value, error)
        return table.render()
