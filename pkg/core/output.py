import csv
import io
import json
from typing import Any, Iterable, List, Sequence

from core.config import ConfigurationManager
from core.reports import VerificationReport


def format_number(value: Any, digits: int = 17) -> str:
    """Floats at 17 significant digits so CSV round-trips exactly; everything else via str."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return str(value)


class TableWriter:
    """
    Renders result tables as CSV (header row, comma separated, '.' decimal) or JSON.
    """

    def __init__(self, columns: Sequence[str], fmt: str = 'csv'):
        if fmt not in ('csv', 'json'):
            raise ValueError(f"Unknown output format '{fmt}'.")
        self.columns = list(columns)
        self.fmt = fmt
        self.rows: List[List[Any]] = []
        self.digits = ConfigurationManager.get_setting('CSV_DIGITS', 17, int)

    def add_row(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"Row has {len(values)} fields, expected {len(self.columns)}.")
        self.rows.append(list(values))

    def extend(self, rows: Iterable[Sequence[Any]]) -> None:
        for row in rows:
            self.add_row(*row)

    def render(self) -> str:
        if self.fmt == 'json':
            records = [dict(zip(self.columns, row)) for row in self.rows]
            return json.dumps({'columns': self.columns, 'rows': records}, indent=2)

        output = io.StringIO()
        writer = csv.writer(output, lineterminator='\n')
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_number(v, self.digits) for v in row])
        return output.getvalue()


class ReportWriter:

    @staticmethod
    def render(report: VerificationReport, fmt: str = 'json') -> str:
        if fmt == 'json':
            return json.dumps(report.as_dict(), indent=2)

        table = TableWriter(['name', 'expected', 'got', 'tol', 'pass'], fmt='csv')
        for check in report.checks:
            table.add_row(check.name, check.expected, check.got, check.tol, check.passed)
        return table.render()
