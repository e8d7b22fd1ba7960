"""
🧪 Unit Tests за конфигурацията
"""
import json

import pytest

from config import Config, ExperimentConfig, load_experiment_config, parse_experiment_config
from exceptions import ConfigurationError


class TestConfig:
    """Тестове за Config класа"""

    def test_defaults_are_valid(self):
        """Тест: Стойностите по подразбиране минават валидацията"""
        assert Config.validate() is True

    def test_invalid_threads(self, monkeypatch):
        """Тест: THREADS < 1"""
        monkeypatch.setattr(Config, 'THREADS', 0)
        assert Config.validate() is False

    def test_invalid_tolerance(self, monkeypatch):
        """Тест: RANK_TOL извън (0, 1)"""
        monkeypatch.setattr(Config, 'RANK_TOL', 2.0)
        assert Config.validate() is False


class TestExperimentConfig:
    """Тестове за JSON конфигурациите на експериментите"""

    def test_minimal(self):
        """Тест: Само kind"""
        config = parse_experiment_config('{"kind": "rank"}')
        assert config.kind == 'rank'
        assert config.truncations == [8]
        assert config.exact is False

    def test_full(self):
        """Тест: Всички ключове"""
        text = json.dumps({
            'kind': 'assemble',
            'weight': {'kind': 'radial', 'radius': 1.0, 'profile': 'bump'},
            'basis': {'kind': 'disk'},
            'truncations': [4, 8],
            'rank_tol': 1e-8,
            'exact': True,
            'seed': 7,
            'threads': 2,
            'params': {'closed_form': True},
        })
        config = parse_experiment_config(text)
        assert config.truncations == [4, 8]
        assert config.rank_tol == 1e-8
        assert config.threads == 2
        assert config.params == {'closed_form': True}

    def test_syntax_error_position(self):
        """Тест: Синтактична грешка носи ред и колона"""
        with pytest.raises(ConfigurationError) as e:
            parse_experiment_config('{\n  "kind": "rank",\n  oops\n}')
        assert e.value.line == 3
        assert 'line 3' in str(e.value)

    @pytest.mark.parametrize("text,key", [
        ('{"kind": "rank", "colour": 1}', 'colour'),
        ('{"kind": "fit"}', 'kind'),
        ('{"kind": "rank", "truncations": [0]}', 'truncations'),
        ('{"kind": "rank", "truncations": []}', 'truncations'),
        ('{"kind": "rank", "rank_tol": 0}', 'rank_tol'),
        ('{"kind": "rank", "threads": 0}', 'threads'),
        ('{"kind": "rank", "threads": true}', 'threads'),
        ('{"kind": "rank", "exact": "yes"}', 'exact'),
        ('{"kind": "rank", "weight": []}', 'weight'),
        ('{"kind": "rank", "seed": 1.5}', 'seed'),
    ])
    def test_schema_errors_name_the_key(self, text, key):
        """Тест: Грешката в схемата посочва ключа"""
        with pytest.raises(ConfigurationError) as e:
            parse_experiment_config(text)
        assert e.value.key == key

    def test_top_level_must_be_object(self):
        """Тест: JSON масив"""
        with pytest.raises(ConfigurationError):
            parse_experiment_config('[1, 2]')

    def test_relative_values_file(self, tmp_path):
        """Тест: values_file се търси спрямо конфигурацията"""
        (tmp_path / 'grid.npy').write_bytes(b'')
        path = tmp_path / 'exp.json'
        path.write_text(json.dumps({'kind': 'rank', 'weight': {'kind': 'grid', 'values_file': 'grid.npy'}}))
        config = load_experiment_config(str(path))
        assert config.weight['values_file'] == str(tmp_path / 'grid.npy')

    def test_missing_values_file(self, tmp_path):
        """Тест: Липсващ values_file"""
        path = tmp_path / 'exp.json'
        path.write_text(json.dumps({'kind': 'rank', 'weight': {'kind': 'grid', 'values_file': 'none.npy'}}))
        with pytest.raises(ConfigurationError) as e:
            load_experiment_config(str(path))
        assert e.value.key == 'weight.values_file'

    def test_missing_file(self, tmp_path):
        """Тест: Липсващ конфигурационен файл"""
        with pytest.raises(ConfigurationError):
            load_experiment_config(str(tmp_path / 'absent.json'))

    def test_overrides(self):
        """Тест: CLI флаговете имат приоритет"""
        config = ExperimentConfig(kind='rank').with_overrides(rank_tol=1e-6, exact=True, threads=3, output_dir='out')
        assert (config.rank_tol, config.exact, config.threads, config.output_dir) == (1e-6, True, 3, 'out')
        with pytest.raises(ConfigurationError):
            ExperimentConfig(kind='rank').with_overrides(threads=0)
