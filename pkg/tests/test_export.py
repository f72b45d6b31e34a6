import csv
import json
import math

import numpy as np

from src.utils.export import (dumps_json, format_float, polynomial_rows, write_json,
                              write_numeric_csv, write_rows_csv)


def test_full_precision():
    assert float(format_float(0.1 + 0.2)) == 0.1 + 0.2
    assert format_float(1.0) == '1'


def test_numeric_csv(tmp_path):
    path = write_numeric_csv(tmp_path / 'nested' / 'traj.csv', ['t', 'x'],
                             [np.array([0.0, 0.5]), np.array([1.0, math.pi])])
    lines = path.read_text().splitlines()
    assert lines[0] == 't,x'
    assert float(lines[2].split(',')[1]) == math.pi


def test_rows_csv(tmp_path):
    path = write_rows_csv(tmp_path / 'rows.csv', ['n', 'energy', 'provenance'],
                          [(0, 0.5, 'series'), (1, 1 / 3, 'ladder')])
    with open(path, newline='') as f:
        rows = list(csv.reader(f))
    assert rows[1] == ['0', '0.5', 'series']
    assert float(rows[2][1]) == 1 / 3


def test_json_is_sorted_and_indented(tmp_path):
    path = write_json(tmp_path / 'out.json', {'b': 1, 'a': np.array([1.0, 2.0])})
    text = path.read_text()
    assert text.index('"a"') < text.index('"b"')
    assert text.endswith('}\n')
    assert json.loads(text) == {'a': [1.0, 2.0], 'b': 1}


def test_non_finite_values_become_strings():
    payload = json.loads(dumps_json({'x': math.nan, 'y': [math.inf, np.float64(-np.inf)],
                                     'z': np.int64(3)}))
    assert payload == {'x': 'nan', 'y': ['inf', '-inf'], 'z': 3}


def test_polynomial_rows_are_padded():
    rows = polynomial_rows([[1.0], [0.0, 2.0], [-2.0, 0.0, 4.0]])
    assert rows == [[0, 1.0, 0.0, 0.0], [1, 0.0, 2.0, 0.0], [2, -2.0, 0.0, 4.0]]
    assert polynomial_rows([]) == []
