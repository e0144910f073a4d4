"""Tests for the command-line layer."""

import io
import json

import pytest

from main import main
from src.cli.commands import RunConfig, cmd_list, cmd_verify, load_run_config, parse_params
from src.errors import ConfigError


class TestRunConfig:
    """Test cases for configuration resolution."""

    def test_defaults(self):
        """Empty overrides give the built-in defaults."""
        config = load_run_config({})
        assert config.model == "hopf_s3"
        assert config.tolerance == 1e-8
        assert config.points == 100
        assert config.ids is None

    def test_flags_win_over_file(self, tmp_path):
        """Flags override the YAML file, which overrides defaults."""
        path = tmp_path / "run.yaml"
        path.write_text(
            "model: horosphere\npoints: 7\ntolerance: 1e-6\nparams:\n  p: 3\nids: MAIN_113,RUMMLER\n",
            encoding="utf-8",
        )
        config = load_run_config({"points": 5, "params": {}}, str(path))
        assert config.model == "horosphere"
        assert config.points == 5
        assert config.tolerance == 1e-6
        assert config.params == {"p": 3}
        assert config.ids == ["MAIN_113", "RUMMLER"]

    def test_unknown_file_key(self, tmp_path):
        """Keys outside RunConfig are rejected."""
        path = tmp_path / "run.yaml"
        path.write_text("colour: red\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_run_config({}, str(path))

    @pytest.mark.parametrize("overrides", [{"tolerance": 0.0}, {"points": 0}, {"format": "xml"}])
    def test_invalid_values(self, overrides):
        """Non-positive tolerance, empty samples and unknown formats are config errors."""
        with pytest.raises(ConfigError):
            load_run_config(overrides)

    def test_parse_params(self):
        """--param values become int, float or str."""
        assert parse_params(["p=2", "amplitude=0.5", "label=x"]) == {"p": 2, "amplitude": 0.5, "label": "x"}
        with pytest.raises(ConfigError):
            parse_params(["novalue"])


class TestVerify:
    """Test cases for cmd_verify."""

    def test_unknown_model_exits_2(self):
        """Unknown models are configuration errors."""
        assert cmd_verify(RunConfig(model="nosuch"), io.StringIO()) == 2

    def test_unknown_identity_exits_2(self):
        """Unknown identity ids are configuration errors."""
        assert cmd_verify(RunConfig(ids=["NOSUCH"]), io.StringIO()) == 2

    def test_twisted_generic_identities_json(self):
        """Generic identities pass on the twisted flow and the JSON parses."""
        stream = io.StringIO()
        config = RunConfig(
            model="twisted_flow", ids=["MAIN_113", "DKAPPA_LEAFDIV"], points=3, format="json"
        )
        assert cmd_verify(config, stream) == 0
        data = json.loads(stream.getvalue())
        rows = data["reports"]
        assert [row["identity"] for row in rows] == ["DKAPPA_LEAFDIV", "MAIN_113"]
        for row in rows:
            assert {"model", "identity", "anchor", "points", "max_residual", "tolerance", "verdict"} <= set(row)
            assert row["verdict"] == "pass"

    def test_json_is_byte_identical(self):
        """Identical configs give identical JSON text."""
        config = RunConfig(model="horosphere", ids=["COR26_VERDICT", "DIV_SPLIT"], points=3, format="json")
        first, second = io.StringIO(), io.StringIO()
        cmd_verify(config, first)
        cmd_verify(config, second)
        assert first.getvalue() == second.getvalue()

    def test_failure_exits_1(self):
        """A failing identity gives exit code 1."""
        config = RunConfig(
            model="twisted_flow", ids=["MAIN_113", "DIV_SPLIT", "KAPPA_BRACKET"], points=2, tolerance=1e-30
        )
        assert cmd_verify(config, io.StringIO()) == 1

    def test_report_written_to_file(self, tmp_path):
        """--out writes the report instead of printing it."""
        out = tmp_path / "report.md"
        config = RunConfig(model="flat_torus_flow", ids=["RUMMLER"], points=2, format="markdown", out=str(out))
        stream = io.StringIO()
        assert cmd_verify(config, stream) == 0
        assert stream.getvalue() == ""
        assert out.read_text(encoding="utf-8").startswith("# Identity Report: flat_torus_flow")

    def test_report_written_into_directory(self, tmp_path):
        """--out naming a directory writes a file named after the tool and the model."""
        config = RunConfig(model="flat_torus_flow", ids=["RUMMLER"], points=2, format="json", out=str(tmp_path))
        assert cmd_verify(config, io.StringIO()) == 0
        written = tmp_path / "foliation-verify_flat_torus_flow.json"
        assert json.loads(written.read_text(encoding="utf-8"))["model"] == "flat_torus_flow"


class TestList:
    """Test cases for cmd_list."""

    def test_lists_models_and_identities(self):
        """Every model and identity is listed with its anchor tag."""
        stream = io.StringIO()
        assert cmd_list(stream) == 0
        text = stream.getvalue()
        models, identities = text.split("Identities:\n")
        assert sum(1 for line in models.splitlines() if line.startswith("  ") and not line.startswith("    ")) >= 5
        assert len(identities.strip().splitlines()) >= 20
        assert "(1.13)" in identities

    def test_stable_output(self):
        """The listing does not change between runs."""
        first, second = io.StringIO(), io.StringIO()
        cmd_list(first)
        cmd_list(second)
        assert first.getvalue() == second.getvalue()


class TestMain:
    """Test cases for the argparse entry point."""

    def test_verify_nosuch(self):
        """`verify --model nosuch` exits 2."""
        assert main(["verify", "--model", "nosuch"]) == 2

    def test_bad_param(self):
        """A malformed --param exits 2."""
        assert main(["verify", "--param", "oops"]) == 2

    def test_verify_selected_ids(self, capsys):
        """Flags reach the run and the text report lists the ids."""
        code = main(["verify", "--model", "twisted_flow", "--ids", "MAIN_113,DKAPPA_LEAFDIV", "--points", "2"])
        assert code == 0
        out = capsys.readouterr().out
        assert "MAIN_113" in out and "(1.13)" in out
