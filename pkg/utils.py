"""
Полезни функции за експортиране на матрици, спектри и отчети
"""
import csv
import json
import logging
from fractions import Fraction
from io import StringIO
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from exceptions import ValidationError
from numeric_core import ExactScalar, MultiIndex, SpectrumReport
from toeplitz import ToeplitzMatrix

logger = logging.getLogger(__name__)

MATRIX_FIELDS = ['row', 'col', 're', 'im']
_FLOAT_MARKERS = set('.eEn')


def _format_index(index: Any) -> str:
    if isinstance(index, MultiIndex):
        return ';'.join(str(c) for c in index)
    return str(index)


def _parse_index(text: str) -> Any:
    if ';' in text:
        return MultiIndex.coerce([int(c) for c in text.split(';')])
    return int(text)


def _format_fraction(value: Fraction) -> str:
    return str(value)


def export_matrix_to_csv(M: ToeplitzMatrix) -> str:
    """
    Експортира матрица в CSV: един ред на елемент (row, col, re, im)

    Floats are written with repr (shortest round-trip decimal), exact entries
    as "p/q" strings; the row-major order is fixed.

    Returns:
        CSV string
    """
    output = StringIO()
    writer = csv.writer(output, lineterminator='\n')
    writer.writerow(MATRIX_FIELDS)
    rows, cols = M.shape
    if M.mode == 'exact':
        for j in range(rows):
            for k in range(cols):
                v = ExactScalar.coerce(M.entries[j][k])
                writer.writerow([
                    _format_index(M.row_indices[j]),
                    _format_index(M.col_indices[k]),
                    _format_fraction(v.re),
                    _format_fraction(v.im),
                ])
    else:
        values = M.as_complex()
        for j in range(rows):
            for k in range(cols):
                v = complex(values[j, k])
                writer.writerow([
                    _format_index(M.row_indices[j]),
                    _format_index(M.col_indices[k]),
                    repr(float(v.real)),
                    repr(float(v.imag)),
                ])
    logger.debug(f"🔍 Exported {rows}x{cols} {M.mode} matrix to CSV")
    return output.getvalue()


def parse_matrix_csv(text: str) -> ToeplitzMatrix:
    """
    Обратното на export_matrix_to_csv

    The arithmetic mode is read from the cells: exact cells never contain a
    decimal point, an exponent or inf/nan.

    Raises:
        ValidationError: malformed header, cell or incomplete matrix
    """
    reader = csv.reader(StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValidationError("empty matrix CSV")
    if header != MATRIX_FIELDS:
        raise ValidationError(f"matrix CSV header must be {MATRIX_FIELDS}, got {header}")

    records = [r for r in reader if r]
    if any(len(r) != 4 for r in records):
        raise ValidationError("every matrix CSV line needs four cells")
    exact = all(not (_FLOAT_MARKERS & set(r[2] + r[3])) for r in records)

    row_indices: List[Any] = []
    col_indices: List[Any] = []
    cells: Dict[tuple, Any] = {}
    for line, (r, c, re, im) in enumerate(records, start=2):
        try:
            row, col = _parse_index(r), _parse_index(c)
            value: Any = (
                ExactScalar(Fraction(re), Fraction(im)) if exact else complex(float(re), float(im))
            )
        except ValueError as e:
            raise ValidationError(f"line {line}: {e}") from e
        if row not in row_indices:
            row_indices.append(row)
        if col not in col_indices:
            col_indices.append(col)
        cells[(row, col)] = value

    if len(cells) != len(row_indices) * len(col_indices):
        raise ValidationError("matrix CSV does not list every entry")
    table = [[cells[(r, c)] for c in col_indices] for r in row_indices]
    entries: Any = table if exact else np.array(table, dtype=complex).reshape(len(row_indices), len(col_indices))
    return ToeplitzMatrix(entries, row_indices, col_indices, mode='exact' if exact else 'float')


def export_spectrum_to_csv(report: SpectrumReport) -> str:
    """(index, value) или (index, re, im) при комплексни стойности"""
    output = StringIO()
    writer = csv.writer(output, lineterminator='\n')
    values = [complex(v) for v in report.values]
    if all(v.imag == 0 for v in values):
        writer.writerow(['index', 'value'])
        for i, v in enumerate(values):
            writer.writerow([i, repr(float(v.real))])
    else:
        writer.writerow(['index', 're', 'im'])
        for i, v in enumerate(values):
            writer.writerow([i, repr(float(v.real)), repr(float(v.imag))])
    return output.getvalue()


def export_rows_to_csv(fieldnames: Sequence[str], rows: Sequence[Dict[str, Any]]) -> str:
    """Таблица (напр. ранг спрямо отрязване) в CSV"""
    output = StringIO()
    writer = csv.DictWriter(output, fieldnames=list(fieldnames), lineterminator='\n')
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return output.getvalue()


def _json_default(value: Any) -> Any:
    if isinstance(value, ExactScalar):
        return str(value.re) if value.im == 0 else [str(value.re), str(value.im)]
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, MultiIndex):
        return list(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        v = complex(value)
        return v.real if v.imag == 0 else [v.real, v.imag]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (set, frozenset, tuple)):
        return sorted(value) if isinstance(value, (set, frozenset)) else list(value)
    if hasattr(value, 'as_dict'):
        return value.as_dict()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def report_to_json(report: Dict[str, Any]) -> str:
    return json.dumps(report, ensure_ascii=False, indent=2, default=_json_default)


def save_artifact(out_dir: Union[str, Path], name: str, content: str) -> Path:
    """
    Записва артефакт (CSV или JSON) в out_dir

    Returns:
        Path of the written file
    """
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / name
    path.write_text(content, encoding='utf-8')
    logger.info(f"💾 Saved {path}")
    return path


def format_results_table(results: Sequence[Dict[str, Any]], title: Optional[str] = None) -> str:
    """Текстова таблица name / status / detail за отчета на пакета тестове"""
    lines = [title] if title else []
    width = max([len(str(r.get('name', ''))) for r in results] + [4])
    lines.append(f"{'name'.ljust(width)}  status  detail")
    lines.append(f"{'-' * width}  ------  ------")
    for r in results:
        status = 'PASS' if r.get('passed') else 'FAIL'
        lines.append(f"{str(r.get('name', '')).ljust(width)}  {status:<6}  {r.get('detail', '')}")
    return '\n'.join(lines)
