#!/usr/bin/env python3
"""
测试命令行：子命令、退出码与输出文件
"""

import csv
import json

import pytest

from core.config import get_config, reset_config
from services.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, SCHEMA, build_parser, main


@pytest.fixture(autouse=True)
def fresh_config():
    reset_config()
    yield
    reset_config()


def _run(tmp_path, *argv):
    return main([*argv, "--output-dir", str(tmp_path)])


def _load(path):
    return json.loads(path.read_text(encoding="utf-8"))


class TestParser:
    """参数解析"""

    def test_command_required(self):
        assert main([]) == EXIT_USAGE

    def test_unknown_suite(self):
        assert main(["check", "gauge"]) == EXIT_USAGE

    def test_help(self, capsys):
        assert main(["--help"]) == EXIT_OK
        assert "pqft-rg" in capsys.readouterr().out

    def test_common_options_after_subcommand(self):
        args = build_parser().parse_args(["extend", "--dim", "4", "--power", "2", "--tol", "1e-6"])
        assert args.tolerance == 1e-6
        assert args.sig is None


class TestExtend:
    """extend 子命令"""

    def test_quadratic_d6(self, tmp_path, capsys):
        assert _run(tmp_path, "extend", "--dim", "6", "--sig", "5", "--power", "4") == EXIT_OK
        document = _load(tmp_path / "extend_d6_s5_p4.json")
        assert document["schema"] == SCHEMA
        assert document["command"] == "extend"
        assert document["result"]["passed"] is True
        assert document["result"]["record"]["omega"] == "2"
        assert "1" in document["result"]["violation"]
        assert "extend_d6_s5_p4.json" in capsys.readouterr().out

    def test_unique_extension_has_no_checks(self, tmp_path):
        assert _run(tmp_path, "extend", "--dim", "4", "--power", "1") == EXIT_OK
        document = _load(tmp_path / "extend_d4_s3_p1.json")
        assert document["result"]["record"]["unique"] is True
        assert document["result"]["checks"] == []

    def test_oracle(self, tmp_path):
        assert _run(tmp_path, "extend", "--dim", "4", "--power", "2", "--oracle") == EXIT_OK
        names = [c["name"] for c in _load(tmp_path / "extend_d4_s3_p2.json")["result"]["checks"]]
        assert names == ["c_0", "euclidean_oracle"]

    def test_oracle_needs_log_divergence(self, tmp_path):
        assert _run(tmp_path, "extend", "--dim", "4", "--power", "3", "--oracle") == EXIT_USAGE

    def test_csv_output(self, tmp_path):
        assert _run(tmp_path, "extend", "--dim", "4", "--power", "2", "--format", "csv") == EXIT_OK
        assert not (tmp_path / "extend_d4_s3_p2.json").exists()
        with (tmp_path / "extend_d4_s3_p2.csv").open(encoding="utf-8") as handle:
            rows = list(csv.DictReader(handle))
        assert rows[0]["section"] == "violation"
        assert rows[0]["basis"] == "box^0"

    def test_deterministic_output(self, tmp_path):
        first, second = tmp_path / "a", tmp_path / "b"
        main(["extend", "--dim", "4", "--power", "2", "--output-dir", str(first)])
        main(["extend", "--dim", "4", "--power", "2", "--output-dir", str(second)])
        left, right = _load(first / "extend_d4_s3_p2.json"), _load(second / "extend_d4_s3_p2.json")
        left.pop("generated_at")
        right.pop("generated_at")
        left["config"].pop("output_dir")
        right["config"].pop("output_dir")
        assert left == right


class TestBeta:
    """beta 子命令"""

    def test_unknown_model(self, tmp_path):
        assert _run(tmp_path, "beta", "phi6_d3") == EXIT_USAGE
        assert not list(tmp_path.iterdir())

    def test_phi2_example(self, tmp_path):
        assert _run(tmp_path, "beta", "phi2_d4_example", "--format", "both") == EXIT_OK
        document = _load(tmp_path / "beta_phi2_d4_example.json")
        assert document["result"]["model"] == "phi2_d4_example"
        assert all(c["status"] == "pass" for c in document["result"]["checks"])
        assert (tmp_path / "beta_phi2_d4_example.csv").exists()

    def test_phi3(self, tmp_path):
        assert _run(tmp_path, "beta", "phi3_d6") == EXIT_OK
        beta = _load(tmp_path / "beta_phi3_d6.json")["result"]["beta"]
        assert {row["basis"] for row in beta} == {"phi3"}


class TestCheck:
    """check 子命令"""

    def test_feynman_suite(self, tmp_path):
        assert _run(tmp_path, "check", "feynmanI") == EXIT_OK
        document = _load(tmp_path / "check_feynmanI.json")
        assert document["result"]["suite"] == "feynmanI"
        assert document["result"]["passed"] is True

    def test_hadamard_suite(self, tmp_path):
        assert _run(tmp_path, "check", "hadamard", "--dim", "3,4") == EXIT_OK
        names = [c["name"] for c in _load(tmp_path / "check_hadamard.json")["result"]["checks"]]
        assert "F0_resolved" in names
        assert not any(name.startswith("d2_") for name in names)

    def test_cocycle_suite(self, tmp_path):
        assert _run(tmp_path, "check", "cocycle") == EXIT_OK


class TestHadamard:
    """hadamard 子命令"""

    def test_d3(self, tmp_path):
        assert _run(tmp_path, "hadamard", "--dim", "3", "--m2", "1.0", "--x2", "-1.0") == EXIT_OK
        document = _load(tmp_path / "hadamard_d3_m2=1_x2=-1.json")
        assert document["result"]["checks"][0]["name"] == "bessel_closed_form"

    def test_d4_coincidence(self, tmp_path):
        assert _run(tmp_path, "hadamard", "--dim", "4", "--m2", "2.0", "--mu", "1.0", "--x2", "-0.5") == EXIT_OK
        document = _load(tmp_path / "hadamard_d4_m2=2_x2=-0.5.json")
        assert document["result"]["v_coincidence"]["value"] == pytest.approx(2.0 / (16 * 3.141592653589793 ** 2))

    def test_timelike_point(self, tmp_path):
        assert _run(tmp_path, "hadamard", "--dim", "4", "--m2", "1.0", "--mu", "1.0", "--x2", "0.5") == EXIT_USAGE


class TestConfiguration:
    """配置文件与命令行覆盖"""

    def test_config_file(self, tmp_path):
        config_path = tmp_path / "run.conf"
        config_path.write_text("# 输出\noutput_format = both\ndecimal_digits = 12\n", encoding="utf-8")
        assert main(["extend", "--dim", "4", "--power", "2", "--config", str(config_path),
                     "--output-dir", str(tmp_path / "out")]) == EXIT_OK
        assert (tmp_path / "out" / "extend_d4_s3_p2.csv").exists()
        assert get_config().decimal_digits == 12

    def test_missing_config_file(self, tmp_path):
        assert _run(tmp_path, "extend", "--dim", "4", "--power", "2", "--config",
                    str(tmp_path / "absent.conf")) == EXIT_USAGE

    def test_invalid_tolerance(self, tmp_path):
        assert _run(tmp_path, "check", "feynmanI", "--tol", "-1") == EXIT_USAGE

    def test_invalid_family(self, tmp_path):
        assert _run(tmp_path, "flow", "--families", "lattice") == EXIT_USAGE

    def test_fit_failure_exit_code(self, tmp_path):
        # 小 Λ 处配对仍有幂次修正，不是纯对数
        code = _run(tmp_path, "flow", "--families", "shifted", "--lambda-grid", "1,2,4", "--fit-tol", "1e-14")
        assert code == EXIT_FAILED
        assert _load(tmp_path / "flow_counterterms.json")["result"]["passed"] is False


if __name__ == "__main__":
    pytest.main([__file__])
