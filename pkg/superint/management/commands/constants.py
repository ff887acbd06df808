from core.commands import RmtkCommand
from core.output import TableWriter
from superint.suites import constants_suite, golden_constants


class Command(RmtkCommand):
    help = 'Print the GOE integration constants and omega_1(0); --check verifies them by independent quadrature.'
    ensemble_required = False

    def add_arguments(self, parser):
        parser.add_argument('--check', action='store_true', help='Run the constants suite and emit its report.')
        self.add_quadrature_arguments(parser)
        self.add_output_arguments(parser)

    def run(self, config, options) -> str:
        if options.get('check'):
            return self.finish_report(constants_suite(config.quadrature), config.fmt)

        table = TableWriter(['name', 'closed_form', 'value'], fmt=config.fmt)
        for name, closed_form, value in golden_constants():
            table.add_row(name, closed_form, float(value))
        return table.render()
