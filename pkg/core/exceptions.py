"""
Exception hierarchy shared by all numerical apps.

Every error carries the process exit code the CLI maps it to:
1 verification failures, 3 numerical failure, 4 degenerate input.
Usage errors (exit 2) are raised by argparse / serializer validation.
"""


class RmtkError(Exception):
    exit_code = 3


# Numerical failures (exit 3)
# ------------------------------------------------------------------------------
class NumericalFailure(RmtkError):
    exit_code = 3


class QuadratureFailure(NumericalFailure):
    """Adaptive quadrature did not reach the requested tolerance."""


class EigenFailure(NumericalFailure):
    """Eigendecomposition of a sampled matrix did not converge."""


class InsufficientJetOrder(NumericalFailure):
    """A truncated Taylor series is too short for the requested derivative."""


class InsufficientSamples(NumericalFailure):
    """Monte Carlo estimator asked for fewer samples than it can report on."""


# Invalid / degenerate input (exit 4)
# ------------------------------------------------------------------------------
class InvalidInput(RmtkError):
    exit_code = 4


class DegenerateArguments(InvalidInput):
    """Energies closer than the configured degeneracy floor."""


class NotAntisymmetric(InvalidInput):
    pass


class OddDimension(InvalidInput):
    pass


class SelfDualityViolated(InvalidInput):
    pass


# Verification (exit 1)
# ------------------------------------------------------------------------------
class ReportContainsFailures(RmtkError):
    exit_code = 1

    def __init__(self, report):
        self.report = report
        failed = report.summary['failed']
        total = report.summary['total']
        super().__init__(f"Suite '{report.suite}': {failed} of {total} checks failed.")
