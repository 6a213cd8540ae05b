import json

import pytest
from click.testing import CliRunner

from cli import TOOL_VERSION, cli


@pytest.fixture
def runner(tmp_path, monkeypatch):
    monkeypatch.setenv('STEINBERG_CACHE_DIR', str(tmp_path / 'cache'))
    monkeypatch.setenv('STEINBERG_SEED', '20240')
    return CliRunner(mix_stderr=False)


def invoke(runner, args):
    result = runner.invoke(cli, args)
    return result, (json.loads(result.output) if result.exit_code == 0 and result.output.startswith('{') else None)


def test_enum_rejects_undefined_complex(runner):
    result, _ = invoke(runner, ['enum', '--variant', 'BA', '--n', '0', '--m', '2'])
    assert result.exit_code != 0


def test_enum_point_complex(runner):
    result, report = invoke(runner, ['enum', '--variant', 'B', '--n', '1', '--ball', '1'])
    assert result.exit_code == 0, result.output
    assert report['result']['f_vector'] == [1]
    assert report['tool_version'] == TOOL_VERSION
    assert 'spec' in report['input_hashes']


def test_enum_is_deterministic(runner):
    args = ['enum', '--variant', 'BA', '--n', '2', '--ball', '2']
    first = runner.invoke(cli, args).output
    second = runner.invoke(cli, args).output
    assert first == second
    assert json.loads(first)['result']['f_vector'][0] == 8


def test_enum_writes_output_file(runner, tmp_path):
    target = tmp_path / 'b2.json'
    result = runner.invoke(cli, ['enum', '--variant', 'B', '--n', '2', '-o', str(target)])
    assert result.exit_code == 0
    assert json.loads(target.read_text())['result']['f_vector'] == [4, 5]


def test_coinv_vanishes_for_augmented_rank_three(runner):
    result, report = invoke(runner, ['coinv', '--simplex', 'augmented', '--n', '3', '--k', '0'])
    assert result.exit_code == 0, result.output
    assert report['result']['dim'] == 0
    assert report['result']['projector_rank'] == 0
    assert report['result']['degree'] == 2


def test_coinv_rejects_bad_partition(runner):
    result, _ = invoke(runner, ['coinv', '--n', '3', '--k', '2', '--partition', '1'])
    assert result.exit_code != 0


def test_reduce_with_verification(runner):
    result, report = invoke(runner, ['reduce', '--vectors', '1,0;5,3', '--verify'])
    assert result.exit_code == 0, result.output
    assert report['result']['det'] == 3
    assert report['result']['verified'] is True
    assert len(report['result']['symbols']['terms']) == 2


def test_reduce_needs_input(runner):
    result, _ = invoke(runner, ['reduce'])
    assert result.exit_code == 2


def test_presentation_sparse_matrix(runner):
    result, report = invoke(runner, ['presentation', '--n', '2', '--generators-ball', '1', '--format', 'sparse-matrix'])
    assert result.exit_code == 0, result.output
    assert report['config']['format'] == 'sparse-matrix'
    assert report['tool_version'] == TOOL_VERSION
    assert report['seed'] == 20240
    boundary = report['result']['boundary']
    assert (boundary['rows'], boundary['cols'], len(boundary['entries'])) == (5, 2, 6)
    assert all(i < 5 and j < 2 and value in ('1', '-1') for i, j, value in boundary['entries'])
    assert report['result']['cokernel_rank'] == 3


def test_check_cocycle(runner):
    result, report = invoke(runner, ['check', 'cocycle', '--N', '5'])
    assert result.exit_code == 0, result.output
    assert report['result']['passed']
    assert report['result']['params']['N'] == 5


def test_check_unknown_suite(runner):
    result = runner.invoke(cli, ['check', 'nonsense'])
    assert result.exit_code == 2


def test_relative_homology(runner):
    result, report = invoke(runner, ['homology', '--n', '2', '--ball', '1', '--relative', '--ring', 'Z'])
    assert result.exit_code == 0, result.output
    degree_one = [entry for entry in report['result']['homology'] if entry['degree'] == 1][0]
    assert degree_one['betti'] == 3
