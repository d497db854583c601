"""Tests for the workbench commands and the command line"""

import json

import pytest

from src import commands
from src.cli import build_parser, main, render
from src.config import configure
from src.errors import InvalidInputError


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


class TestRangeSpecs:
    """Test chain lists and range specifications"""

    def test_parse_chain_list(self):
        assert commands.parse_chain_list("3, 5") == [3, 5]
        with pytest.raises(InvalidInputError):
            commands.parse_chain_list("3,x")
        with pytest.raises(InvalidInputError):
            commands.parse_chain_list(" , ")

    def test_diagonal(self, c3_squared):
        assert commands.range_subset(c3_squared, [3, 3], 'diagonal') == [0, 4, 8]

    def test_bounds_and_indices(self, c3_squared):
        assert commands.range_subset(c3_squared, [3, 3], 'bounds') == [0, 8]
        assert commands.range_subset(c3_squared, [3, 3], 'indices:0,4,8') == [0, 4, 8]

    def test_bad_specs(self, c3_squared):
        with pytest.raises(InvalidInputError):
            commands.range_subset(c3_squared, [3, 4], 'diagonal')
        with pytest.raises(InvalidInputError):
            commands.range_subset(c3_squared, [3, 3], 'indices:a')
        with pytest.raises(InvalidInputError):
            commands.range_subset(c3_squared, [3, 3], 'middle')


class TestCommands:
    """Test the shared command layer"""

    def test_build_diagonal(self):
        code, payload = commands.build([3, 3])
        assert code == 0
        assert payload['summary'] == {
            'size': 9,
            'fixed_point': '(d,d)',
            'range': ['(0,0)', '(d,d)', '(1,1)'],
            'validated': True,
        }
        assert payload['algebra']['exists'][5] == 8

    def test_build_functional_and_power(self):
        code, functional = commands.build([3], functional=2)
        assert code == 0
        code, power = commands.build([3], 'indices:0,1,2', power=2)
        assert code == 0
        assert functional['algebra'] == power['algebra']

    def test_build_range_not_subalgebra(self):
        code, payload = commands.build([3, 2], 'indices:0,3,5')
        assert code == 2
        assert 'message' in payload

    def test_classify(self, diagonal_algebra):
        code, payload = commands.classify(diagonal_algebra)
        assert code == 0
        assert payload['si'] and payload['simple']
        assert payload['cmg_criterion'] is True
        assert payload['chains'] == [3, 3]
        assert payload['congruence_count'] == 2

    def test_classify_ignores_enumeration_cap(self, diagonal_algebra):
        configure(max_enumeration_size=4)
        code, payload = commands.classify(diagonal_algebra)
        assert code == 0
        assert payload['congruence_count'] == 2
        assert payload['si'] is True

    def test_classify_needs_quantifiers(self, c3):
        code, payload = commands.classify(c3.to_dict())
        assert code == 2
        assert payload['error'] == 'invalid-input'

    def test_load_rejects_broken_quantifiers(self, c3):
        data = c3.to_dict()
        data.update(exists=[0, 1, 2], forall=[0, 0, 0])
        code, payload = commands.classify(data)
        assert code == 2
        assert payload['error'] == 'structural-error'
        assert 'family' in payload and 'law' in payload

    def test_prove_countermodel(self):
        code, payload = commands.prove('p | ~p', max_size=9)
        assert code == 1
        assert payload['verdict'] == 'countermodel'
        assert payload['query'] == {'premises': [], 'goal': 'p | ~p'}

    def test_prove_both(self):
        code, payload = commands.prove('[](p | q) -> ([]p | <>q)', max_size=9, semantics='both',
                                       kripke_worlds=2, kripke_chain=4)
        assert code == 0
        assert payload['agree']
        assert payload['algebra']['semantics'] == 'algebra'
        assert payload['kripke']['semantics'] == 'kripke'

    def test_prove_query_text(self):
        code, payload = commands.prove(query_text="[]p\n|- p", max_size=5)
        assert code == 0
        assert payload['query']['premises'] == ['[]p']

    def test_prove_input_errors(self):
        assert commands.prove()[0] == 2
        assert commands.prove('p', query_text="|- p")[0] == 2
        assert commands.prove('p', semantics='modal')[0] == 2
        code, payload = commands.prove('p &')
        assert code == 2
        assert payload['error'] == 'syntax-error'

    def test_embed_fixed_point(self, c4_full):
        code, payload = commands.embed(c4_full)
        assert code == 0
        assert payload['fixed_point'] == '(d)'
        assert payload['size'] == 5
        assert payload['algebra']['size'] == 5

    def test_embed_functional(self, diagonal_algebra, bounds_algebra):
        code, payload = commands.embed(diagonal_algebra, 'functional', sample=5)
        assert code == 0
        assert payload['verified']
        code, payload = commands.embed(bounds_algebra, 'functional')
        assert code == 2
        assert payload['clause'] == 'C'

    def test_embed_unknown_mode(self, diagonal_algebra):
        assert commands.embed(diagonal_algebra, 'sideways')[0] == 2

    def test_soundness(self, diagonal_algebra, bounds_algebra):
        assert commands.soundness(diagonal_algebra)[0] == 0
        code, payload = commands.soundness(bounds_algebra)
        assert code == 1
        assert 'diamond-2' in payload['failing']

    def test_bridge(self):
        code, payload = commands.bridge(samples=15, seed=2)
        assert code == 0
        assert payload['seed'] == 2


class TestCommandLine:
    """Test argument parsing, output and exit codes"""

    def test_parser_requires_command(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_build_then_classify(self, capsys, tmp_path):
        path = str(tmp_path / "diag.json")
        code, payload = run_json(capsys, 'build', '--chains', '3,3', '--output', path)
        assert code == 0
        assert payload['output'] == path
        code, payload = run_json(capsys, 'classify', path)
        assert code == 0
        assert payload['fixed_point'] == '(d,d)'
        assert payload['cmg_criterion'] is True

    def test_bounds_soundness_exit_code(self, capsys, algebra_file, bounds_algebra):
        code, payload = run_json(capsys, 'soundness', algebra_file(bounds_algebra))
        assert code == 1
        assert not payload['passed']

    def test_prove_from_file(self, capsys, tmp_path):
        query = tmp_path / "query.txt"
        query.write_text("# box elimination\n[]p\n|- p\n")
        code, payload = run_json(capsys, 'prove', str(query), '--max-size', '5')
        assert code == 0
        assert payload['verdict'] == 'valid'
        assert payload['bound'] == 5

    def test_prove_with_flags(self, capsys):
        code, payload = run_json(capsys, 'prove', '--goal', 'q', '--premises', 'p', '--premises', 'p -> q',
                                 '--max-size', '3')
        assert code == 0
        assert payload['query']['premises'] == ['p', 'p -> q']

    def test_prove_kripke(self, capsys):
        code, payload = run_json(capsys, 'prove', '--goal', 'p | ~p', '--semantics', 'kripke')
        assert code == 1
        assert payload['world'] == 'w1'

    def test_missing_query_file(self, capsys, tmp_path):
        code, payload = run_json(capsys, 'prove', str(tmp_path / "none.txt"))
        assert code == 2
        assert payload['error'] == 'invalid-input'

    def test_embed_output(self, capsys, tmp_path, algebra_file, c4_full):
        target = tmp_path / "ext.json"
        code, payload = run_json(capsys, 'embed', algebra_file(c4_full), '--output', str(target))
        assert code == 0
        assert payload == {'verified': True, 'output': str(target)}
        assert json.loads(target.read_text())['verified']

    def test_bad_chains(self, capsys):
        code, payload = run_json(capsys, 'build', '--chains', '3,x')
        assert code == 2
        assert payload['error'] == 'invalid-input'

    def test_bridge_seed(self, capsys):
        code, payload = run_json(capsys, '--seed', '5', 'bridge', '--samples', '10')
        assert code == 0
        assert payload['seed'] == 5

    def test_text_format(self, capsys):
        code, out = run(capsys, '--format', 'text', 'prove', '--goal', 'p -> p', '--max-size', '3')
        assert code == 0
        assert 'verdict: valid' in out.splitlines()

    def test_config_file(self, capsys, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({'output_format': 'text', 'search_max_size': 3}))
        code, out = run(capsys, '--config', str(config), 'prove', '--goal', 'p -> p')
        assert code == 0
        assert 'bound: 3' in out.splitlines()

    def test_bad_config_file(self, capsys, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({'colour': 'blue'}))
        code, payload = run_json(capsys, '--config', str(config), 'bridge', '--samples', '1')
        assert code == 2
        assert payload['error'] == 'invalid-input'

    def test_render(self):
        assert render({'b': 1, 'a': [1]}, 'text') == "a: [1]\nb: 1"
        assert json.loads(render({'a': 1}, 'json')) == {'a': 1}
