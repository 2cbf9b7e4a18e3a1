"""
Row writers for command output: CSV with full-precision floats, or JSON via
DRF's JSONRenderer.
"""

import csv
import io

from rest_framework.renderers import JSONRenderer


def _csv_cell(value) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return format(value, '.17g')
    return str(value)


def render_rows(serializer_class, rows: list, fmt: str) -> str:
    """Serialize ``rows`` with ``serializer_class`` and render them as csv or json."""
    serializer = serializer_class(rows, many=True)
    if fmt == 'json':
        return JSONRenderer().render(serializer.data).decode('utf-8') + '\n'
    if fmt != 'csv':
        raise ValueError(f"Unknown output format {fmt!r}.")

    columns = list(serializer_class().fields)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in serializer.data:
        writer.writerow([_csv_cell(row[c]) for c in columns])
    return buffer.getvalue()
