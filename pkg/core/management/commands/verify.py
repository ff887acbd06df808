import logging

from core.commands import RmtkCommand
from core.reports import VerificationReport
from core.specs import EnsembleSpec
from ensembles_mc.services import MCConfig
from ensembles_mc.suites import COVERAGE_REPETITIONS, mc_suite
from superint.suites import constants_suite, recursion_suite, superint_suite

logger = logging.getLogger(__name__)

SUITES = ['mc', 'superint', 'constants', 'recursions', 'all']
MC_DEFAULT_LEVELS = 4


class Command(RmtkCommand):
    help = 'Run a verification suite and emit a JSON report; exits 1 if any check fails.'
    ensemble_required = False

    def add_arguments(self, parser):
        parser.add_argument('suite', choices=SUITES, help='Which suite to run.')
        self.add_ensemble_arguments(parser, required=False)
        self.add_mc_arguments(parser)
        parser.add_argument('--repetitions', type=int, default=COVERAGE_REPETITIONS,
                            help='Seeds per point for the Monte Carlo coverage check.')
        self.add_quadrature_arguments(parser)
        self.add_output_arguments(parser, default_format='json')

    def mc_report(self, config, options) -> VerificationReport:
        report = VerificationReport('mc')
        betas = [options['beta']] if options.get('beta') else [1, 2, 4]
        for beta in betas:
            ensemble = EnsembleSpec(beta, options.get('n') or MC_DEFAULT_LEVELS)
            report.extend(mc_suite(MCConfig.build(ensemble, **config.mc), repetitions=options['repetitions']))
        return report

    def run(self, config, options) -> str:
        suite = options['suite']
        beta, n = options.get('beta'), options.get('n')
        spec = config.quadrature
        builders = {
            'constants': lambda: constants_suite(spec),
            'recursions': lambda: recursion_suite(n or 12),
            'superint': lambda: superint_suite(beta, n, spec),
            'mc': lambda: self.mc_report(config, options),
        }

        if suite == 'all':
            report = VerificationReport('all')
            for name in ('constants', 'recursions', 'superint', 'mc'):
                report.extend(builders[name]())
        else:
            report = builders[suite]()

        logger.info(f"verify {suite}: {report.summary}")
        return self.finish_report(report, config.fmt)
