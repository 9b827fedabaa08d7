"""CSV export of protocol records"""
import csv
import io
from typing import Iterable, List

from domain.entities import ProtocolRecord
from domain.errors import InputError

COLUMNS: List[str] = list(ProtocolRecord.model_fields)


def _format(value) -> str:
    if isinstance(value, int):
        return str(value)
    return format(value, ".12g")


def emit_csv(records: Iterable[ProtocolRecord]) -> str:
    """Header plus one row per step, floats at 12 significant digits"""
    records = list(records)
    if not records:
        raise InputError("no records to export")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(COLUMNS)
    for record in records:
        row = record.model_dump()
        writer.writerow([_format(row[c]) for c in COLUMNS])
    return buffer.getvalue()
