""" Test functions for the command-line front end.
"""

import csv
import io
import json
import math

import numpy as np
import pytest

from loopreg import cli


def run(tmp_path, *argv, name='out.json'):
    out = tmp_path / name
    code = cli.main(list(argv) + ['--out', str(out)])
    text = out.read_text() if out.exists() else None
    return code, text


@pytest.fixture(autouse=True)
def no_thread_variable(monkeypatch):
    monkeypatch.delenv(cli.THREADS_VARIABLE, raising=False)


def test_eval_dimreg(tmp_path):
    code, text = run(tmp_path, 'eval', '--scheme', 'dimreg', '--d', '3',
                     '--alpha', '1', '--m2', '1')
    assert code == cli.EXIT_OK
    report = json.loads(text)
    record, = report['records']
    assert np.isclose(record['value'], -1 / (4 * math.pi), rtol=1e-14)
    assert record['verdict'] == 'info'
    assert report['summary']['records'] == 1


def test_eval_pole(tmp_path):
    code, _ = run(tmp_path, 'eval', '--d', '4', '--alpha', '2')
    assert code == cli.EXIT_POLE


def test_eval_cutoff_against_oracle(tmp_path):
    code, text = run(tmp_path, 'eval', '--scheme', 'cutoff', '--d', '3',
                     '--alpha', '1', '--m2', '1', '--K', '10')
    assert code == cli.EXIT_OK
    record, = json.loads(text)['records']
    assert record['verdict'] == 'pass'
    assert np.isclose(record['value'], (10 - math.atan(10)) / (2 * math.pi ** 2),
                      rtol=1e-10)
    assert np.isclose(record['gap'], record['value'] + 1 / (4 * math.pi))


@pytest.mark.parametrize('argv', [
    ['eval', '--scheme', 'nonsense', '--d', '3', '--alpha', '1'],
    ['eval', '--scheme', 'cutoff', '--d', '3', '--alpha', '1'],
    ['eval', '--scheme', 'cutoff', '--alpha', '1', '--K', '10'],
    ['eval', '--scheme', 'cutoff', '--d', '3', '--alpha', '1', '--K', '10',
     '--grid', 'K=10:100:3'],
    ['grid', '--scheme', 'cutoff', '--d', '3', '--alpha', '1',
     '--grid', 'K=10:100'],
    ['eval', '--d', '3', '--alpha', '1', '--terms', '0'],
    ['eval', '--d', '3', '--alpha', '1', '--bogus', '1'],
])
def test_configuration_errors(tmp_path, argv):
    code, _ = run(tmp_path, *argv)
    assert code == cli.EXIT_CONFIG


@pytest.mark.parametrize('raw', ['zero', '0', '-2'])
def test_bad_thread_count(tmp_path, monkeypatch, raw):
    monkeypatch.setenv(cli.THREADS_VARIABLE, raw)
    code, _ = run(tmp_path, 'eval', '--d', '3', '--alpha', '1')
    assert code == cli.EXIT_CONFIG


def test_extract_scaleless_is_zero(tmp_path):
    code, text = run(tmp_path, 'extract', '--scheme', 'separate_cutoff',
                     '--d', '3', '--alpha', '1', '--m2', '0', '--K', '10',
                     '--delta', '0.1')
    assert code == cli.EXIT_OK
    record, = json.loads(text)['records']
    assert record['value'] == 0.0
    assert record['verdict'] == 'pass'


def test_extract_two_sided(tmp_path):
    code, text = run(tmp_path, 'extract', '--scheme', 'two_sided', '--d', '3',
                     '--alpha', '1', '--m2', '1', '--delta', '1e-3')
    assert code == cli.EXIT_OK
    record, = json.loads(text)['records']
    assert np.isclose(record['value'], -1 / (4 * math.pi), rtol=1e-10)
    assert record['inputs']['delta'] == 1e-3


def test_extract_pole(tmp_path):
    code, _ = run(tmp_path, 'extract', '--scheme', 'cutoff', '--d', '4',
                  '--alpha', '2', '--K', '100')
    assert code == cli.EXIT_POLE


def test_series_text(tmp_path):
    code, text = run(tmp_path, 'series', '--scheme', 'cutoff', '--d', '3',
                     '--alpha', '1', '--K', '100', '--terms', '4',
                     '--format', 'text', name='out.txt')
    assert code == cli.EXIT_OK
    assert text.startswith('# loopreg formal series')
    assert 'K^(' in text


def test_grid_cutoff_decay(tmp_path):
    code, text = run(tmp_path, 'grid', '--scheme', 'cutoff', '--d', '3',
                     '--alpha', '2', '--m2', '1', '--grid', 'K=10:1e4:4:log')
    assert code == cli.EXIT_OK
    records = json.loads(text)['records']
    assert [r['inputs']['K'] for r in records] == pytest.approx(
        [10, 100, 1000, 10000])
    scaled = [r['gap'] * r['inputs']['K'] for r in records]
    assert np.allclose(scaled, scaled[-1], rtol=5e-2)
    assert all(r['verdict'] == 'pass' for r in records)


def test_grid_keeps_failed_points(tmp_path):
    code, text = run(tmp_path, 'grid', '--scheme', 'dimreg', '--d', '4',
                     '--grid', 'alpha=1:2:2')
    assert code == cli.EXIT_POLE
    records = json.loads(text)['records']
    assert [r['verdict'] for r in records] == ['pole', 'pole']


def test_grid_threads_match_serial(tmp_path, monkeypatch):
    argv = ['grid', '--scheme', 'gaussian', '--d', '3', '--alpha', '1',
            '--grid', 'delta=1e-3:1e-1:5:log', '--grid', 'm2=0.5:2:2']
    _, serial = run(tmp_path, *argv, name='serial.json')
    monkeypatch.setenv(cli.THREADS_VARIABLE, '3')
    _, threaded = run(tmp_path, *argv, name='threaded.json')
    assert serial == threaded
    assert len(json.loads(serial)['records']) == 10


def test_csv_output(tmp_path):
    code, text = run(tmp_path, 'grid', '--scheme', 'window', '--d', '3',
                     '--alpha', '1', '--m2', '0', '--grid', 'K=2:10:3',
                     '--format', 'csv', name='out.csv')
    assert code == cli.EXIT_OK
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == cli.CSV_COLUMNS
    assert len(rows) == 4
    assert all(row[-1] == 'pass' for row in rows[1:])


VERIFY = ['verify', '--d', '3', '--alpha', '1', '--m2', '1']


def test_verify_single_point(tmp_path):
    code, text = run(tmp_path, *VERIFY)
    report = json.loads(text)
    assert code == cli.EXIT_OK
    assert report['summary']['fail'] == 0
    checks = {r['check'] for r in report['records']}
    assert {'recurrence', 'cutoff_extraction', 'commutation',
            'gaussian_extraction', 'two_sided_extraction',
            'separate_cutoff_extraction', 'gaussian_ir_extraction',
            'veltman_zero_cutoff', 'veltman_zero_two_sided'} <= checks
    assert set(cli.FIXED_CHECKS) <= checks


def test_verify_scaleless_extractions_are_exactly_zero(tmp_path):
    _, text = run(tmp_path, *VERIFY)
    zeros = [r for r in json.loads(text)['records']
             if r['check'].startswith('veltman_zero')]
    assert len(zeros) == 6
    assert all(r['verdict'] == 'pass' and r['value'] == 0.0 for r in zeros)
    assert all(r['inputs']['m2'] == 0.0 for r in zeros)


def test_verify_fixed_checks(tmp_path):
    _, text = run(tmp_path, *VERIFY)
    records = json.loads(text)['records']
    bessel = [r for r in records if r['check'] == 'bessel_closed_form']
    assert len(bessel) == 18
    log_case, = [r for r in records if r['check'] == 'log_case']
    assert np.isclose(log_case['value'], 100, rtol=0.1)
    assert all(r['verdict'] == 'pass' for r in records
               if r['check'] in cli.FIXED_CHECKS)


def test_verify_two_mass_grid(tmp_path):
    code, text = run(tmp_path, 'verify', '--d', '3', '--alpha', '1',
                     '--beta', '1', '--m2', '1', '--M2', '2')
    assert code == cli.EXIT_OK
    records = json.loads(text)['records']
    two_mass = [r for r in records if r['inputs']['beta'] is not None]
    # the grid point replaces the fixed two-mass point
    assert {r['inputs']['M2'] for r in two_mass} == {1.0, 2.0}
    assert {r['check'] for r in two_mass} == {
        'two_mass_oracle', 'equal_mass', 'two_mass_cutoff_extraction',
        'two_mass_gaussian_extraction'}


def test_verify_strict_tolerance_fails(tmp_path):
    code, text = run(tmp_path, *VERIFY, '--tol', '1e-30')
    assert code == cli.EXIT_FAILURE
    assert json.loads(text)['summary']['fail'] > 0


def test_verify_skips_poles(tmp_path):
    code, text = run(tmp_path, 'verify', '--d', '4', '--alpha', '2')
    assert code == cli.EXIT_OK
    verdicts = {r['verdict'] for r in json.loads(text)['records']
                if r['check'] not in cli.FIXED_CHECKS}
    assert verdicts == {'pole'}


def test_verify_is_deterministic(tmp_path):
    _, first = run(tmp_path, *VERIFY, name='first.json')
    _, second = run(tmp_path, *VERIFY, name='second.json')
    assert first == second


def test_config_file(tmp_path):
    config = tmp_path / 'run.cfg'
    config.write_text('# cut-off at a continued point\n'
                      'scheme = cutoff\n'
                      'd = 3\n'
                      'alpha = 1\n'
                      'K = 10   # overridden below\n')
    code, text = run(tmp_path, 'eval', '--config', str(config), '--K', '100')
    assert code == cli.EXIT_OK
    report = json.loads(text)
    assert report['config']['scheme'] == 'cutoff'
    assert report['config']['values']['K'] == 100.0


def test_config_file_errors(tmp_path):
    config = tmp_path / 'run.cfg'
    config.write_text('colour = blue\n')
    code, _ = run(tmp_path, 'eval', '--config', str(config))
    assert code == cli.EXIT_CONFIG
    code, _ = run(tmp_path, 'eval', '--config', str(tmp_path / 'missing'))
    assert code == cli.EXIT_CONFIG


def test_grid_axis_parse():
    axis = cli.GridAxis.parse('delta=1e-4:1e-2:3:log')
    assert axis.values() == pytest.approx([1e-4, 1e-3, 1e-2])
    assert cli.GridAxis.parse('d=2:3:1').values() == [2.0]
    with pytest.raises(cli.ConfigError):
        cli.GridAxis.parse('delta=0:1:3:log')
    with pytest.raises(cli.ConfigError):
        cli.GridAxis.parse('colour=0:1:3')


def test_json_numbers_carry_17_digits(tmp_path):
    _, text = run(tmp_path, 'eval', '--scheme', 'dimreg', '--d', '3',
                  '--alpha', '1', '--m2', '0.1')
    assert '"m2": 0.10000000000000001' in text
    assert '"d": 3.0' in text
    record, = json.loads(text)['records']
    assert np.isclose(record['value'], -math.sqrt(0.1) / (4 * math.pi),
                      rtol=1e-14)


@pytest.mark.parametrize('x, text', [
    (1.0, '1.0'),
    (0.1, '0.10000000000000001'),
    (-2.5, '-2.5'),
    (1e-20, '9.9999999999999995e-21'),
    (math.inf, 'Infinity'),
])
def test_json_float(x, text):
    assert cli._json_float(x) == text
    assert json.loads(text) == x


def test_json_layout():
    doc = {'b': [1, None, 'x'], 'a': {}, 'c': [], 'd': {'z': True, 'y': 2}}
    assert cli._to_json(doc) == json.dumps(doc, indent=2, sort_keys=True)
    values = [1 / 3, math.pi * 1e10, 2.0 ** -1074]
    assert json.loads(cli._to_json({'v': values})) == {'v': values}
