import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from core.exceptions import ReportContainsFailures, RmtkError
from core.output import ReportWriter
from core.serializers import FORMAT_CHOICES, METHOD_CHOICES, RunConfig, RunConfigSerializer

logger = logging.getLogger(__name__)

USAGE_EXIT_CODE = 2


class RmtkCommand(BaseCommand):
    """
    Base for the numerical subcommands.

    Subclasses implement `run(config, options)` returning the rendered text.
    Library errors map to CommandError with the exit code they carry; invalid
    run configurations exit 2.
    """
    ensemble_required = True
    methods = METHOD_CHOICES

    # Arguments
    # --------------------------------------------------------------------------
    def add_ensemble_arguments(self, parser, required: bool = True):
        parser.add_argument('--beta', type=int, required=required, choices=[1, 2, 4],
                            help='Dyson index: 1 (GOE), 2 (GUE) or 4 (GSE).')
        parser.add_argument('--n', type=int, required=required,
                            help='Level number N (Kramers doublets for beta=4).')

    def add_method_argument(self, parser):
        parser.add_argument('--method', default='analytic', choices=self.methods, help='Evaluation route.')

    def add_mc_arguments(self, parser):
        parser.add_argument('--samples', type=int, help='Monte Carlo sample count (default: RMTK MC_SAMPLES).')
        parser.add_argument('--seed', type=int, help='Monte Carlo seed (default: RMTK MC_SEED).')
        parser.add_argument('--eta', type=float, help='Imaginary increment (default: 5%% of the local level spacing).')
        parser.add_argument('--workers', type=int, help='Worker threads; RMTK_THREADS overrides.')
        parser.add_argument('--richardson', action='store_true', help='Combine eta and eta/2 to remove the O(eta) bias.')

    def add_quadrature_arguments(self, parser):
        parser.add_argument('--abs-tol', type=float, dest='abs_tol', help='Quadrature absolute tolerance.')
        parser.add_argument('--rel-tol', type=float, dest='rel_tol', help='Quadrature relative tolerance.')

    def add_output_arguments(self, parser, default_format: str = 'csv'):
        parser.add_argument('--format', default=default_format, choices=FORMAT_CHOICES, help='Output format.')
        parser.add_argument('--out', help='Write to this file instead of stdout.')

    # Execution
    # --------------------------------------------------------------------------
    def build_config(self, options) -> RunConfig:
        data = {
            'method': options.get('method') or 'analytic',
            'format': options.get('format') or 'csv',
            'out': options.get('out'),
            'mc': {key: options.get(key) for key in ('samples', 'seed', 'eta', 'workers')},
            'quadrature': {key: options.get(key) for key in ('abs_tol', 'rel_tol')},
        }
        data['mc']['richardson'] = bool(options.get('richardson'))
        if options.get('beta') is not None and options.get('n') is not None:
            data['ensemble'] = {'beta': options.get('beta'), 'n': options.get('n')}
        elif self.ensemble_required:
            raise CommandError("--beta and --n are required.", returncode=USAGE_EXIT_CODE)

        serializer = RunConfigSerializer(data=data)
        if not serializer.is_valid():
            raise CommandError(f"Invalid arguments: {serializer.errors}", returncode=USAGE_EXIT_CODE)
        return serializer.save()

    def handle(self, *args, **options):
        config = self.build_config(options)
        try:
            text = self.run(config, options)
        except ReportContainsFailures as e:
            self.emit(ReportWriter.render(e.report, config.fmt), config)
            raise CommandError(str(e), returncode=e.exit_code)
        except RmtkError as e:
            logger.error(f"{type(e).__name__}: {e}")
            raise CommandError(str(e), returncode=e.exit_code)
        except ValueError as e:
            raise CommandError(str(e), returncode=USAGE_EXIT_CODE)
        self.emit(text, config)

    def emit(self, text: str, config: RunConfig) -> None:
        if config.out:
            Path(config.out).write_text(text)
            self.stdout.write(self.style.SUCCESS(f"Wrote {config.out}"))
        else:
            self.stdout.write(text, ending='' if text.endswith('\n') else '\n')

    def run(self, config: RunConfig, options) -> str:
        raise NotImplementedError

    @staticmethod
    def finish_report(report, fmt: str) -> str:
        """Rendered report; raises ReportContainsFailures when any check failed."""
        if not report.all_passed:
            raise ReportContainsFailures(report)
        return ReportWriter.render(report, fmt)
