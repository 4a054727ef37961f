"""Tests for the laysem command line, expressions and run configuration."""

import argparse
from fractions import Fraction
from pathlib import Path

import pytest
import yaml

from laysem.cli import build_parser, main
from laysem.config import SEED_ENV_VAR, InstanceDescription, RunConfig
from laysem.core import ConstructedSemiring, LayeredElement, build_layered
from laysem.errors import ConfigError, ParseError
from laysem.expressions import evaluate, parse_element, parse_map_table
from laysem.extensions import adjoin_zero
from laysem.monoids import make_qmax
from laysem.reports import DEFAULT_SEED
from laysem.sorting import SortingKind, make_sorting
from tests.fixtures.instance_loader import InstanceLoader

R21_FLAGS = ["--sorting", "trunc:4", "--monoid", "trunc-nat:5"]
R5_FLAGS = ["--sorting", "trunc:2", "--monoid", "trunc-nat:2"]


def _namespace(**overrides) -> argparse.Namespace:
    """Parsed check-axioms flags with selected fields replaced."""
    args = build_parser().parse_args(["check-axioms"])
    for key, value in overrides.items():
        setattr(args, key, value)
    return args


@pytest.mark.cli
class TestCheckAxiomsCommand:
    """Test `laysem check-axioms`."""

    def test_golden_report(self, loader: InstanceLoader, seed_env, capsys):
        """Test the full report for R(trunc:4, trunc-nat:5) line by line."""
        code = main(["check-axioms", *R21_FLAGS])
        captured = capsys.readouterr()

        assert code == 0, captured.err
        assert captured.out.splitlines() == loader.golden("check_axioms_trunc4_truncnat5.txt")
        assert "✅ 36 checks passed" in captured.err

    def test_forced_empty_ideal_fails(self, seed_env, capsys):
        """Test that the naive instance breaks distributivity."""
        code = main(["check-axioms", *R21_FLAGS, "--force-empty-ideal"])
        captured = capsys.readouterr()

        assert code == 1
        assert any(
            line.startswith("CHECK distributivity FAIL") for line in captured.out.splitlines()
        ), captured.out
        assert "❌" in captured.err

    def test_lines_are_sorted(self, seed_env, capsys):
        main(["check-axioms", *R5_FLAGS])
        lines = capsys.readouterr().out.splitlines()

        laws = [line.split()[1] for line in lines]
        assert laws == sorted(laws)

    def test_unknown_sorting(self, seed_env, capsys):
        code = main(["check-axioms", "--sorting", "bogus"])

        assert code == 2
        assert "❌ Error" in capsys.readouterr().err

    def test_missing_subcommand(self, capsys):
        assert main([]) == 2


@pytest.mark.cli
class TestCheckMapCommand:
    """Test `laysem check-map` with builtin and tabulated maps."""

    def test_builtin_truncation(self, seed_env, capsys):
        code = main(["check-map", "--kind", "layered", "--map", "trunc-nu:5", "--budget", "200"])
        captured = capsys.readouterr()

        assert code == 0, captured.out
        assert "[sampled]" in captured.out

    @pytest.mark.parametrize("table,expected", [("identity_trunc2.map", 0), ("swap_trunc2.map", 1)])
    def test_table_maps(self, loader: InstanceLoader, seed_env, capsys, table: str, expected: int):
        """Test map tables over R(trunc:2, trunc-nat:2).

        Args:
            loader: InstanceLoader
            seed_env: Cleared seed environment
            capsys: Pytest capture fixture
            table: File under data/maps/
            expected: Exit code
        """
        path = loader.path(f"maps/{table}")
        code = main(["check-map", *R5_FLAGS, "--kind", "layered", "--map", str(path)])
        captured = capsys.readouterr()

        assert code == expected, captured.out
        if expected:
            assert "CHECK hom_multiplicative FAIL" in captured.out

    def test_supervaluation(self, seed_env, capsys):
        code = main(
            ["check-map", "--kind", "supervaluation", "--map", "psi:1", "--budget", "200"]
        )
        captured = capsys.readouterr()

        assert code == 0, captured.out
        assert "CHECK ZO_range PASS" in captured.out

    def test_psi_needs_supervaluation_kind(self, seed_env, capsys):
        code = main(["check-map", "--kind", "layered", "--map", "psi:1"])

        assert code == 2
        assert "supervaluation" in capsys.readouterr().err

    def test_unknown_map(self, seed_env, capsys):
        code = main(["check-map", *R21_FLAGS, "--kind", "hom", "--map", "no-such-map"])

        assert code == 2
        assert "unknown map" in capsys.readouterr().err

    def test_frobenius_as_surpassing(self, seed_env, capsys):
        code = main(["check-map", *R21_FLAGS, "--kind", "surpassing", "--map", "frobenius:2"])

        assert code == 0, capsys.readouterr().out


@pytest.mark.cli
class TestTropicalizeCommand:
    """Test `laysem tropicalize`."""

    def test_quadratic_with_roots(self, loader: InstanceLoader, seed_env, capsys):
        code = main(
            [
                "tropicalize",
                str(loader.path("quadratic.poly")),
                "--roots",
                str(loader.path("quadratic.roots")),
            ]
        )
        lines = capsys.readouterr().out.splitlines()

        assert code == 0
        assert lines[:2] == ["lambda^2 : 0@1", "lambda^0 : 2@1"]
        assert len([line for line in lines if line.startswith("CHECK corner_root_")]) == 2

    def test_polynomial_only(self, loader: InstanceLoader, seed_env, capsys):
        assert main(["tropicalize", str(loader.path("quadratic.poly"))]) == 0
        assert capsys.readouterr().out.splitlines() == ["lambda^2 : 0@1", "lambda^0 : 2@1"]

    def test_bad_root(self, loader: InstanceLoader, seed_env, capsys):
        code = main(
            [
                "tropicalize",
                str(loader.path("quadratic.poly")),
                "--roots",
                str(loader.path("bad.roots")),
            ]
        )

        assert code == 1
        assert "not a root" in capsys.readouterr().err

    def test_duplicate_monomial(self, loader: InstanceLoader, seed_env, capsys):
        assert main(["tropicalize", str(loader.path("duplicate.poly"))]) == 2
        assert "line 2" in capsys.readouterr().err

    def test_zero_root(self, tmp_path: Path, seed_env, capsys):
        """Test that a zero root of lambda^2 - t*lambda is reported by position."""
        poly = tmp_path / "linear_times_lambda.poly"
        poly.write_text("lambda^2 : 1*t^(0)\nlambda^1 : -1*t^(1)\n")
        roots = tmp_path / "with_zero.roots"
        roots.write_text("1*t^(1)\n0\n")

        code = main(["tropicalize", str(poly), "--roots", str(roots)])

        assert code == 2
        assert "root 1 is the zero series" in capsys.readouterr().err

    def test_missing_file(self, tmp_path: Path, seed_env, capsys):
        assert main(["tropicalize", str(tmp_path / "absent.poly")]) == 2


@pytest.mark.cli
class TestTruncateCommand:
    """Test `laysem truncate`."""

    def test_needs_a_threshold(self, seed_env, capsys):
        assert main(["truncate", *R21_FLAGS]) == 2
        assert "--nu" in capsys.readouterr().err

    def test_writes_reloadable_yaml(self, tmp_path: Path, seed_env):
        """Test that the written instance rebuilds to the same 13 elements."""
        output = tmp_path / "r13.yaml"

        code = main(["truncate", *R21_FLAGS, "--nu", "3", "--output", str(output)])
        document = yaml.safe_load(output.read_text())

        assert code == 0
        assert set(document) == {"instance", "name", "elements"}
        assert len(document["elements"]) == 13
        assert document["elements"][-1] == "3@0"
        reloaded = InstanceDescription.load(output)
        assert [str(x) for x in reloaded.build().elements()] == document["elements"]

    def test_infinite_instance_has_no_element_list(self, seed_env, capsys):
        code = main(["truncate", "--sorting", "nat-inf", "--monoid", "qmax", "--nu", "4", "--sort", "3"])
        document = yaml.safe_load(capsys.readouterr().out)

        assert code == 0
        assert document["name"] == "R(nat-inf|3, qmax+|4)"
        assert "elements" not in document

    def test_invalid_threshold(self, seed_env, capsys):
        assert main(["truncate", *R21_FLAGS, "--sort", "1"]) == 2


@pytest.mark.cli
class TestEvalCommand:
    """Test `laysem eval` and the expression grammar behind it."""

    def test_eval_default_instance(self, seed_env, capsys):
        assert main(["eval", "(3@1 + 3@1) * 2@1"]) == 0
        assert capsys.readouterr().out.strip() == "5@2"

    def test_mixed_operators(self, seed_env, capsys):
        assert main(["eval", "1@1 + 2@1 * 3@1"]) == 2
        assert "❌ Error" in capsys.readouterr().err

    def test_rational_values(self, natinf_qmax: ConstructedSemiring):
        assert evaluate("1/2@1 * 1/2@1", natinf_qmax) == LayeredElement(Fraction(1), 1)
        assert evaluate("((1@1 + 1@1) + 1@2)", natinf_qmax) == LayeredElement(Fraction(1), 4)

    @pytest.mark.parametrize("text", ["6@1", "5@1", "2@0", "2@5", "x@1", "2"])
    def test_elements_outside_r21(self, r21: ConstructedSemiring, text: str):
        with pytest.raises(ParseError):
            parse_element(text, r21)

    @pytest.mark.parametrize("text", ["", "(1@1", "1@1 +", "1@1 2@1", ")"])
    def test_malformed_expressions(self, natinf_qmax: ConstructedSemiring, text: str):
        with pytest.raises(ParseError):
            evaluate(text, natinf_qmax)

    def test_zero_sentinel(self):
        """Test that -inf@0 names the adjoined zero."""
        P = adjoin_zero(build_layered(make_sorting(SortingKind.NAT_INF), make_qmax()))

        assert parse_element("-inf@0", P) == P.zero
        assert evaluate("-inf@0 + 2@3", P) == LayeredElement(Fraction(2), 3)


@pytest.mark.cli
class TestMapTables:
    """Test the map-table format."""

    def test_duplicate_entry(self, r5: ConstructedSemiring):
        text = "0@1 -> 0@1\n0@1 -> 0@2\n"

        with pytest.raises(ParseError) as exc_info:
            parse_map_table(text, r5, r5)

        assert exc_info.value.line == 2

    def test_missing_coverage(self, r5: ConstructedSemiring):
        with pytest.raises(ParseError, match="does not cover"):
            parse_map_table("0@1 -> 0@1\n", r5, r5)

    def test_sort_lines_define_rho(self, r5: ConstructedSemiring, loader: InstanceLoader):
        f = parse_map_table(loader.path("maps/swap_trunc2.map").read_text(), r5, r5)

        assert f.rho is not None
        assert f.rho(2) == 2
        assert f(LayeredElement(1, 1)) == LayeredElement(1, 2)


@pytest.mark.cli
class TestRunConfig:
    """Test flag, environment and file configuration."""

    def test_default_seed(self):
        assert RunConfig.from_args(_namespace(), environ={}).seed == DEFAULT_SEED

    def test_environment_seed(self):
        config = RunConfig.from_args(_namespace(), environ={SEED_ENV_VAR: "42"})

        assert config.seed == 42

    def test_flag_beats_environment(self):
        config = RunConfig.from_args(_namespace(seed=7), environ={SEED_ENV_VAR: "42"})

        assert config.seed == 7

    @pytest.mark.parametrize("overrides,environ", [({}, {SEED_ENV_VAR: "abc"}), ({"seed": -1}, {})])
    def test_invalid_seeds(self, overrides: dict, environ: dict):
        with pytest.raises(ConfigError):
            RunConfig.from_args(_namespace(**overrides), environ=environ)

    def test_invalid_budget(self):
        with pytest.raises(ConfigError, match="budget"):
            RunConfig.from_args(_namespace(budget=0), environ={})

    def test_instance_file(self, tmp_path: Path):
        path = tmp_path / "instance.yaml"
        path.write_text("sorting: trunc:4\nmonoid: trunc-nat:5\nnu_trunc: 3\n")

        config = RunConfig.from_args(_namespace(instance=path), environ={})

        assert config.instance.nu_threshold() == 3
        assert len(config.instance.build().elements()) == 13

    @pytest.mark.parametrize(
        "text",
        ["sorting: trunc:4\ncolour: red\n", "monoid: zmax\n", "- not\n- a mapping\n", "sorting: ["],
    )
    def test_bad_instance_files(self, tmp_path: Path, text: str):
        path = tmp_path / "bad.yaml"
        path.write_text(text)

        with pytest.raises(ConfigError):
            InstanceDescription.load(path)

    def test_missing_instance_file(self, tmp_path: Path):
        with pytest.raises(ConfigError, match="cannot read"):
            InstanceDescription.load(tmp_path / "absent.yaml")
