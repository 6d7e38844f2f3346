import json
import os
import sys

import numpy as np
import pytest
from PIL import Image

sys.path.append(os.getcwd())
from sectflow.cli import get_parser, get_task_config, main
from sectflow.constants.types import (EXIT_ACCEPT, EXIT_CONFIG,
                                      EXIT_DATA_ERROR, EXIT_NO_INPUT,
                                      EXIT_REJECT, EXIT_USAGE)
from sectflow.shapes.shape import uniform_directions, uniform_levels
from sectflow.transforms.transform import SECTMatrix
from sectflow.utilities.pandas import write_matrix


def write_group(directory, centers, seed):
    rng = np.random.default_rng(seed)
    dirs, levels = uniform_directions(3), uniform_levels(5, 3.0)
    for index, center in enumerate(centers):
        values = center + rng.normal(0.0, 0.01, size=(3, 5))
        write_matrix(SECTMatrix(values=values, direction_grid=dirs, level_grid=levels), os.path.join(directory, f'shape-{index}.csv'))

    return str(directory)


def write_zero_group(directory, count):
    dirs, levels = uniform_directions(3), uniform_levels(5, 3.0)
    for index in range(count):
        write_matrix(SECTMatrix(values=np.zeros((3, 5)), direction_grid=dirs, level_grid=levels),
                     os.path.join(directory, f'shape-{index}.csv'))

    return str(directory)


def test_transform_single_pixel(tmp_path, capsys):
    image = tmp_path / 'images' / 'pixel.pgm'
    image.parent.mkdir()
    Image.fromarray(np.full((1, 1), 255, dtype=np.uint8)).save(image)
    out = tmp_path / 'out'

    code = main(['transform', str(image), '--directions', '4', '--levels', '10', '--mode', 'ect', '--out', str(out)])
    outcome = json.loads(capsys.readouterr().out)

    assert code == EXIT_ACCEPT
    assert outcome == {'outputs': [str(out / 'pixel.csv')]}

    rows = (out / 'pixel.csv').read_text().splitlines()
    assert rows[0].split(',')[0] == 'angle'
    assert len(rows) == 1 + 4
    assert all(row.split(',')[-1] == '1' for row in rows[1:])
    assert all(len(row.split(',')) == 1 + 10 for row in rows)
    assert (out / 'manifest.json').exists()


def test_transform_both_modes(tmp_path, capsys):
    images = tmp_path / 'images'
    images.mkdir()
    for name in ['a', 'b']:
        pixels = np.zeros((5, 5), dtype=np.uint8)
        pixels[1:4, 2] = 255
        Image.fromarray(pixels).save(images / f'{name}.png')

    code = main(['transform', str(images), '--directions', '8', '--levels', '20', '--mode', 'both', '--out', str(tmp_path / 'out')])
    outputs = json.loads(capsys.readouterr().out)['outputs']

    assert code == EXIT_ACCEPT
    assert len(outputs) == 4
    assert (tmp_path / 'out' / 'sect' / 'a.csv').exists()
    assert (tmp_path / 'out' / 'ect' / 'b.csv').exists()


def test_transform_missing_input(tmp_path):
    code = main(['transform', str(tmp_path / 'missing.pgm'), '--out', str(tmp_path / 'out')])

    assert code == EXIT_NO_INPUT


def test_transform_empty_image(tmp_path):
    image = tmp_path / 'blank.pgm'
    Image.fromarray(np.zeros((4, 4), dtype=np.uint8)).save(image)

    code = main(['transform', str(image), '--out', str(tmp_path / 'out')])

    assert code == EXIT_DATA_ERROR


def test_test_rejects_separated_groups(tmp_path, capsys):
    group1 = write_group(tmp_path / 'g1', [0.0] * 5, seed=1)
    group2 = write_group(tmp_path / 'g2', [10.0] * 5, seed=2)
    out = tmp_path / 'result' / 'test.json'

    code = main(['test', '--group1', group1, '--group2', group2, '--permutations', '999', '--seed', '0', '--out', str(out)])
    outcome = json.loads(capsys.readouterr().out)

    assert code == EXIT_REJECT
    assert outcome['decision'] == 'Reject'
    assert outcome['k_star'] == 49
    assert (outcome['n1'], outcome['n2']) == (5, 5)
    assert json.loads(out.read_text()) == outcome
    assert (tmp_path / 'result' / 'manifest.json').exists()


def test_test_accepts_identical_groups(tmp_path, capsys):
    group1 = write_zero_group(tmp_path / 'g1', 4)
    group2 = write_zero_group(tmp_path / 'g2', 4)

    code = main(['test', '--group1', group1, '--group2', group2, '--permutations', '100'])
    outcome = json.loads(capsys.readouterr().out)

    assert code == EXIT_ACCEPT
    assert outcome['decision'] == 'Accept'
    assert outcome['p_value'] == 1.0


def test_test_malformed_matrix(tmp_path):
    group1 = write_zero_group(tmp_path / 'g1', 3)
    group2 = write_zero_group(tmp_path / 'g2', 3)
    (tmp_path / 'g2' / 'shape-0.csv').write_text('angle,1\n0,oops\n')

    code = main(['test', '--group1', group1, '--group2', group2, '--permutations', '100'])

    assert code == EXIT_DATA_ERROR


def test_test_degenerate_group(tmp_path):
    group1 = write_zero_group(tmp_path / 'g1', 1)
    group2 = write_zero_group(tmp_path / 'g2', 3)

    code = main(['test', '--group1', group1, '--group2', group2, '--permutations', '100'])

    assert code == EXIT_DATA_ERROR


def test_test_without_threshold(tmp_path):
    group1 = write_zero_group(tmp_path / 'g1', 3)
    group2 = write_zero_group(tmp_path / 'g2', 3)

    code = main(['test', '--group1', group1, '--group2', group2, '--permutations', '10'])

    assert code == EXIT_CONFIG


def test_test_missing_group():
    assert main(['test', '--permutations', '100']) == EXIT_CONFIG


def test_usage_error():
    with pytest.raises(SystemExit) as error:
        main(['test', '--alpha', 'large'])

    assert error.value.code == EXIT_USAGE


def test_simulate_is_byte_identical(tmp_path, capsys):
    arguments = ['simulate', '--epsilons', '0', '0.1', '--n-per-group', '3', '--replicates', '2', '--resolution', '32',
                 '--permutations', '10', '--alpha', '0.2', '--seed', '4']

    codes = [
        main(arguments + ['--out', str(tmp_path / 'first')]),
        main(arguments + ['--out', str(tmp_path / 'second')]),
        main(arguments + ['--threads', '2', '--out', str(tmp_path / 'third')]),
    ]
    outcome = json.loads(capsys.readouterr().out.splitlines()[0])

    assert codes == [EXIT_ACCEPT] * 3
    assert sorted(outcome) == ['ect', 'sect']
    for name in ['rejection_rates_sect.csv', 'rejection_rates_ect.csv', 'p_values_sect.csv', 'p_values_ect.csv', 'sect_curves.csv']:
        first = (tmp_path / 'first' / name).read_bytes()
        assert first == (tmp_path / 'second' / name).read_bytes()
        assert first == (tmp_path / 'third' / name).read_bytes()
    assert (tmp_path / 'first' / 'rejection_rates_sect.csv').read_text().splitlines()[0] == 'epsilon,rate,replicates'


def test_simulate_from_config_file(tmp_path, capsys):
    config = tmp_path / 'experiment.yaml'
    config.write_text(
        'experiment:\n  name: smoke\n'
        'task:\n  type: simulate\n  method: sect\n  epsilons: [0.05]\n  n_per_group: 2\n  replicates: 1\n'
        '  resolution: 24\n  permutations: 10\n  alpha: 0.2\n  dump_masks: true\n'
        f'  out: {tmp_path / "ignored"}\n'
    )

    code = main(['simulate', '--config', str(config), '--out', str(tmp_path / 'out')])
    outcome = json.loads(capsys.readouterr().out)

    assert code == EXIT_ACCEPT
    assert list(outcome) == ['sect']
    assert not (tmp_path / 'ignored').exists()
    assert (tmp_path / 'out' / 'masks' / 'epsilon_0_group_1_shape_1.pgm').exists()


def test_config_type_mismatch(tmp_path):
    config = tmp_path / 'test.yaml'
    config.write_text('type: test\ngroup1: a\ngroup2: b\n')

    assert main(['simulate', '--config', str(config)]) == EXIT_CONFIG


def test_config_unknown_key(tmp_path):
    config = tmp_path / 'simulate.yaml'
    config.write_text('type: simulate\nout: somewhere\nreplicate_count: 3\n')

    assert main(['simulate', '--config', str(config)]) == EXIT_CONFIG


def test_split(tmp_path, capsys):
    group = write_group(tmp_path / 'group', [0.0] * 8, seed=3)
    out = tmp_path / 'split'

    code = main(['split', '--group', group, '--repeats', '4', '--permutations', '20', '--alpha', '0.2', '--out', str(out)])
    outcome = json.loads(capsys.readouterr().out)

    assert code == EXIT_ACCEPT
    assert (outcome['repeats'], outcome['size']) == (4, 8)
    assert 0.0 < outcome['mean'] <= 1.0
    assert (out / 'split_p_values.csv').read_text().splitlines()[0] == 'repeat,p_value'


def test_get_task_config_precedence(tmp_path):
    config = tmp_path / 'test.yaml'
    config.write_text('type: test\ngroup1: a\ngroup2: b\nalpha: 0.1\npermutations: 500\n')
    args = get_parser().parse_args(['test', '--config', str(config), '--alpha', '0.2'])

    result = get_task_config(args)
    expected_result = {'type': 'test', 'group1': 'a', 'group2': 'b', 'alpha': 0.2, 'permutations': 500}

    assert result == expected_result


def test_angles_flag_replaces_directions_from_config(tmp_path, capsys):
    image = tmp_path / 'pixel.pgm'
    Image.fromarray(np.full((1, 1), 255, dtype=np.uint8)).save(image)
    config = tmp_path / 'transform.yaml'
    config.write_text('type: transform\ndirections: 8\nlevels: 10\nmode: ect\n')
    out = tmp_path / 'out'

    code = main(['transform', str(image), '--config', str(config), '--angles', '0', '1.5707963267948966', '--out', str(out)])

    assert code == EXIT_ACCEPT
    rows = (out / 'pixel.csv').read_text().splitlines()
    assert len(rows) == 1 + 2
    assert rows[1].split(',')[0] == '0'


def test_directions_flag_replaces_angles_from_config(tmp_path):
    config = tmp_path / 'transform.yaml'
    config.write_text('type: transform\nangles: [0.0, 1.0]\nout: out\n')
    args = get_parser().parse_args(['transform', 'image.pgm', '--config', str(config), '--directions', '4'])

    result = get_task_config(args)
    expected_result = {'type': 'transform', 'inputs': ['image.pgm'], 'directions': 4, 'out': 'out'}

    assert result == expected_result


@pytest.mark.parametrize('command', [
    ['transform', 'missing.pgm', '--out', 'out'],
    ['test', '--group1', 'a', '--group2', 'b'],
    ['split', '--group', 'a'],
    ['simulate', '--out', 'out'],
])
def test_zero_threads_is_a_usage_error(command):
    assert main(command + ['--threads', '0']) == EXIT_USAGE


def test_test_does_not_read_mode_subfolders(tmp_path, capsys):
    images = tmp_path / 'images'
    images.mkdir()
    for name in ['a', 'b', 'c']:
        pixels = np.zeros((5, 5), dtype=np.uint8)
        pixels[1:4, 2] = 255
        Image.fromarray(pixels).save(images / f'{name}.png')
    main(['transform', str(images), '--directions', '4', '--levels', '10', '--mode', 'both', '--out', str(tmp_path / 'both')])
    capsys.readouterr()

    code = main(['test', '--group1', str(tmp_path / 'both'), '--group2', str(tmp_path / 'both' / 'sect'), '--permutations', '100'])

    assert code == EXIT_NO_INPUT

# pytest==7.4.2, pytest-mock==3.11.1
# pytest tests/sectflow/cli_test.py --verbose
