"""
🧪 Unit Tests за utils функциите
"""
import json
from fractions import Fraction

import numpy as np
import pytest

from exceptions import ValidationError
from numeric_core import ExactScalar, MultiIndex, SpectrumReport
from toeplitz import ToeplitzMatrix
from utils import (
    export_matrix_to_csv,
    export_rows_to_csv,
    export_spectrum_to_csv,
    format_results_table,
    parse_matrix_csv,
    report_to_json,
    save_artifact,
)


@pytest.fixture
def exact_matrix():
    """Fixture: 1×2 точна матрица"""
    return ToeplitzMatrix(
        [[ExactScalar(Fraction(1, 3)), ExactScalar(0, 1)]], [0], [0, 1], mode='exact'
    )


class TestMatrixCsv:
    """Тестове за CSV на матрици"""

    def test_exact_cells(self, exact_matrix):
        """Тест: Точните елементи се пишат като p/q"""
        lines = export_matrix_to_csv(exact_matrix).splitlines()
        assert lines == ['row,col,re,im', '0,0,1/3,0', '0,1,0,1']

    def test_exact_parse(self, exact_matrix):
        """Тест: Режимът се разпознава по клетките"""
        parsed = parse_matrix_csv(export_matrix_to_csv(exact_matrix))
        assert parsed.mode == 'exact'
        assert parsed.entry(0, 0) == ExactScalar(Fraction(1, 3))

    def test_float_cells_are_repr(self):
        """Тест: Float стойностите запазват всички цифри"""
        M = ToeplitzMatrix(np.array([[0.1 + 0.2j]]), [0], [0])
        text = export_matrix_to_csv(M)
        assert '0.1,0.2' in text
        assert parse_matrix_csv(text).entry(0, 0) == 0.1 + 0.2j

    def test_multi_indices(self):
        """Тест: Мултииндексите се пишат като a;b"""
        M = ToeplitzMatrix(np.ones((1, 1)), [MultiIndex.of(1, 0)], [MultiIndex.of(0, 2)])
        text = export_matrix_to_csv(M)
        assert '1;0,0;2' in text
        assert parse_matrix_csv(text).row_indices == [MultiIndex.of(1, 0)]

    def test_bad_header(self):
        """Тест: Грешна заглавка"""
        with pytest.raises(ValidationError):
            parse_matrix_csv('a,b,c,d\n0,0,1,0\n')

    def test_missing_entry(self):
        """Тест: Непълна матрица"""
        text = 'row,col,re,im\n0,0,1.0,0.0\n0,1,1.0,0.0\n1,0,1.0,0.0\n'
        with pytest.raises(ValidationError):
            parse_matrix_csv(text)

    def test_bad_cell(self):
        """Тест: Нечислова клетка"""
        with pytest.raises(ValidationError):
            parse_matrix_csv('row,col,re,im\n0,0,x.1,0.0\n')


class TestReports:
    """Тестове за спектри, таблици и JSON"""

    def test_real_spectrum(self):
        """Тест: Реални стойности → (index, value)"""
        report = SpectrumReport([2.0, 0.5], 'singular_values', 2, 1e-10, 2)
        assert export_spectrum_to_csv(report).splitlines() == ['index,value', '0,2.0', '1,0.5']

    def test_complex_spectrum(self):
        """Тест: Комплексни стойности → (index, re, im)"""
        report = SpectrumReport([1j], 'eigenvalues', 1, 1e-10, 1)
        assert export_spectrum_to_csv(report).splitlines()[0] == 'index,re,im'

    def test_rows(self):
        """Тест: Таблица ранг спрямо отрязване"""
        text = export_rows_to_csv(['n', 'rank'], [{'n': 4, 'rank': 2}, {'n': 8, 'rank': 2}])
        assert text.splitlines() == ['n,rank', '4,2', '8,2']

    def test_json_default(self):
        """Тест: Точни, комплексни и мултииндексни стойности"""
        data = json.loads(report_to_json({
            'exact': ExactScalar(Fraction(1, 2)),
            'gaussian': ExactScalar(1, -1),
            'complex': 1 + 2j,
            'index': MultiIndex.of(1, 2),
            'array': np.arange(3),
        }))
        assert data['exact'] == '1/2'
        assert data['gaussian'] == ['1', '-1']
        assert data['complex'] == [1.0, 2.0]
        assert data['index'] == [1, 2]
        assert data['array'] == [0, 1, 2]

    def test_save_artifact(self, tmp_path):
        """Тест: Файлът се създава заедно с директорията"""
        path = save_artifact(tmp_path / 'out', 'report.json', '{}')
        assert path.read_text(encoding='utf-8') == '{}'

    def test_results_table(self):
        """Тест: PASS / FAIL редове"""
        table = format_results_table([
            {'name': 'point-mass-rank', 'passed': True, 'detail': 'rank 3'},
            {'name': 'born', 'passed': False, 'detail': 'no growth'},
        ])
        lines = table.splitlines()
        assert 'PASS' in lines[2]
        assert 'FAIL' in lines[3]
