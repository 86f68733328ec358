"""
Tests for main.py - 命令行入口、退出码与输出格式
"""
import json

import pytest

from core.config import reset_config
from main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, build_parser, run


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """每个测试使用独立的缓存目录与默认配置"""
    monkeypatch.setenv("BESSEL_LAB_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.delenv("BESSEL_LAB_DIGITS", raising=False)
    reset_config()
    yield
    reset_config()


class TestExitCodes:
    """Test the exit-code contract"""

    def test_no_command(self, capsys):
        """Test that a bare invocation is a usage error"""
        assert run([]) == EXIT_USAGE
        assert "[错误]" in capsys.readouterr().err

    def test_unknown_command(self):
        """Test that an unknown subcommand is a usage error"""
        assert run(["frobnicate"]) == EXIT_USAGE

    def test_help(self, capsys):
        """Test that --help exits cleanly"""
        assert run(["--help"]) == EXIT_OK
        assert "moment" in capsys.readouterr().out

    def test_low_precision(self, capsys):
        """Test that fewer than 15 digits is refused"""
        assert run(["--digits", "10", "moment", "--product", "1,4"]) == EXIT_USAGE
        assert "15" in capsys.readouterr().err

    def test_unknown_format(self):
        """Test that an unknown output format is refused"""
        assert run(["--format", "xml", "cf", "list"]) == EXIT_USAGE

    def test_unsupported_subfamily(self):
        """Test that (n-j) odd decompositions exit with a usage error"""
        assert run(["decompose", "--kappa", "4", "--n", "3", "--j", "0"]) == EXIT_USAGE

    def test_moment_without_integrand(self):
        """Test that moment needs --product or --kappa/--n/--j"""
        assert run(["moment", "--kappa", "4"]) == EXIT_USAGE

    def test_invalid_environment(self, monkeypatch):
        """Test that an invalid environment variable is reported"""
        monkeypatch.setenv("BESSEL_LAB_DIGITS", "many")
        assert run(["cf", "list"]) == EXIT_USAGE

    def test_cf_without_subcommand(self):
        """Test that cf needs a subcommand"""
        assert run(["cf"]) == EXIT_USAGE


@pytest.mark.integration
class TestCommands:
    """Test command output"""

    def test_parser_knows_all_commands(self):
        """Test the registered subcommands"""
        help_text = build_parser().format_help()
        for command in ("moment", "decompose", "cf", "pslq", "verify", "period", "limits", "serve"):
            assert command in help_text

    def test_decompose_json(self, capsys):
        """Test the decomposition report for I_{4,0}^{(4)}"""
        assert run(["decompose", "--kappa", "4", "--n", "4", "--j", "0"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data == {"command": "decompose", "index": "I[4,0]^(4)", "n": 4, "j": 0, "kappa": 4,
                        "one": "-9/512", "basis": {"m1": "7/384"}}

    def test_decompose_is_deterministic(self, capsys):
        """Test that two runs print byte-identical JSON"""
        argv = ["decompose", "--kappa", "6", "--n", "8", "--j", "2"]
        run(argv)
        first = capsys.readouterr().out
        run(argv)
        assert capsys.readouterr().out == first

    def test_cf_list_csv(self, capsys):
        """Test the catalog as CSV rows"""
        assert run(["--format", "csv", "cf", "list"]) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("name,")
        assert len(lines) == 1 + 9

    def test_cf_eval(self, capsys):
        """Test the depth-300 value of Apéry's ζ(3) continued fraction"""
        assert run(["--digits", "30", "cf", "eval", "zeta3_apery"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["agree_digits"] >= 25
        assert data["provenance"] == "proved"

    def test_cf_convergents_text(self, capsys):
        """Test the convergent table in text format"""
        argv = ["--format", "text", "--digits", "20", "cf", "convergents", "zeta3_apery", "--k-max", "5",
                "--p-init", "0,6", "--q-init", "1,5"]
        assert run(argv) == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("# cf convergents")
        assert "702" in out and "584" in out

    def test_cf_unknown_entry(self):
        """Test that an unknown catalog name is a usage error"""
        assert run(["cf", "eval", "nope"]) == EXIT_USAGE

    def test_pslq(self, capsys):
        """Test finding 7·ζ(3) - 8·(7/8·ζ(3)) = 0"""
        assert run(["--digits", "40", "pslq", "zeta(3)", "7/8*zeta(3)"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["found"] is True
        assert data["coefficients"] == ["7", "-8"]

    def test_moment_cache(self, tmp_path, capsys):
        """Test that a cached moment reproduces the computed report"""
        cache_dir = tmp_path / "moments"
        argv = ["--digits", "20", "--cache-dir", str(cache_dir), "moment", "--product", "1,4"]
        assert run(argv) == EXIT_OK
        first = json.loads(capsys.readouterr().out)
        assert list(cache_dir.glob("moment-*.json"))
        assert run(argv) == EXIT_OK
        second = json.loads(capsys.readouterr().out)
        assert first == second
        assert first["closed_form"] == "7/8*zeta(3)"
        assert first["residual"] == "<1e-18"

    def test_no_cache(self, tmp_path, capsys):
        """Test that --no-cache leaves the directory untouched"""
        cache_dir = tmp_path / "unused"
        argv = ["--digits", "20", "--cache-dir", str(cache_dir), "--no-cache", "moment", "--product", "1,1"]
        assert run(argv) == EXIT_OK
        assert not cache_dir.exists()

    def test_output_file(self, tmp_path, capsys):
        """Test writing the report to a file"""
        target = tmp_path / "catalog.json"
        assert run(["--output", str(target), "cf", "list"]) == EXIT_OK
        assert capsys.readouterr().out == ""
        assert json.loads(target.read_text(encoding="utf-8"))["count"] == 9

    def test_period_log_kernel(self, capsys):
        """Test the one-dimensional period compared with direct quadrature"""
        argv = ["--digits", "20", "period", "--n", "3", "--form", "log_kernel", "--compare"]
        assert run(argv) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["agrees"] is True
        assert data["seed"] == 0

    def test_limits(self, capsys):
        """Test the large-n limit report"""
        assert run(["--digits", "20", "limits", "--n-values", "1,2"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert [row["n"] for row in data["rows"]] == [1, 2]
        assert data["moment_limit"].startswith("0.3152")

    @pytest.mark.parametrize("argv", [
        ["--digits", "20", "--no-cache", "moment", "--product", "1,3"],
        ["--digits", "25", "--no-cache", "cf", "eval", "zeta3_apery", "--depth", "120"],
        ["--digits", "20", "--no-cache", "period", "--n", "4", "--form", "log_kernel", "--mode", "qmc",
         "--log2-samples", "8", "--randomizations", "4", "--seed", "3"],
    ], ids=["moment", "cf_eval", "period_qmc"])
    def test_numeric_report_is_deterministic(self, argv, capsys):
        """Test that two uncached runs of a numeric command print byte-identical JSON"""
        assert run(argv) == EXIT_OK
        first = capsys.readouterr().out
        assert run(argv) == EXIT_OK
        assert capsys.readouterr().out == first

    @pytest.mark.parametrize("command,argv", [
        ("cf_eval", ["cf", "eval", "zeta2_apery", "--depth", "100"]),
        ("limits", ["limits", "--n-values", "1,2"]),
        ("verify", ["verify", "--suite", "recurrences"]),
        ("period", ["period", "--n", "3", "--form", "log_kernel"]),
    ])
    def test_report_cache(self, command, argv, tmp_path, capsys):
        """Test that expensive commands store their report and reuse it on the next run"""
        cache_dir = tmp_path / "reports"
        full = ["--digits", "20", "--cache-dir", str(cache_dir)] + argv
        first_code = run(full)
        first = capsys.readouterr().out
        assert list(cache_dir.glob(f"{command}-*.json"))
        assert run(full) == first_code
        assert capsys.readouterr().out == first
