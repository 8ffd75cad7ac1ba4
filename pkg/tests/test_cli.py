"""Exit-code contract, report content and determinism of the command line."""

import json

import numpy as np
import pytest

from zakfiber.cli import main
from zakfiber import jsonio


@pytest.fixture
def f1_spec(tmp_path):
    path = tmp_path / "f1.json"
    path.write_text(json.dumps({"orders": [4], "gamma_generators": [[2]]}))
    return str(path)


def write_operator(tmp_path, name, matrix):
    path = tmp_path / name
    path.write_text(json.dumps(jsonio.operator_to_json(np.asarray(matrix, dtype=complex))))
    return str(path)


def read_report(capsys):
    return json.loads(capsys.readouterr().out)


class TestAnalyze:
    def test_identity_passes(self, tmp_path, f1_spec, capsys):
        op = write_operator(tmp_path, "ident.json", np.eye(4))
        code = main(["analyze", f1_spec, op, "--json"])
        report = read_report(capsys)
        assert code == 0
        assert report["passed"] is True
        assert report["norm_identity"]["values"]["operator_norm"] == pytest.approx(1.0)

    def test_multiplier_fails_with_witness(self, tmp_path, f1_spec, capsys):
        op = write_operator(tmp_path, "diag.json", np.diag([1.0, 0.0, 0.0, 0.0]))
        code = main(["analyze", f1_spec, op, "--json"])
        report = read_report(capsys)
        assert code == 1
        assert report["translation_preserving"]["passed"] is False
        assert report["translation_preserving"]["witness_gamma"] == [2]

    def test_shape_mismatch_is_input_error(self, tmp_path, f1_spec):
        op = write_operator(tmp_path, "small.json", np.eye(3))
        assert main(["analyze", f1_spec, op]) == 2

    def test_malformed_json_is_input_error(self, tmp_path, f1_spec):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["analyze", str(bad), str(bad)]) == 2

    def test_missing_file_is_input_error(self, f1_spec):
        assert main(["analyze", f1_spec, "/nonexistent/op.json"]) == 2


class TestDemoDiffop:
    def test_z8_step2_symbols(self, capsys):
        code = main(["demo-diffop", "8", "2", "--json"])
        report = read_report(capsys)
        assert code == 0
        by_parts = lambda z: (z.real, z.imag)
        symbols = sorted((complex(re, im) for re, im in report["fiber_symbols"]), key=by_parts)
        expected = sorted([0.0, 1 - 1j, 2.0, 1 + 1j], key=by_parts)
        for got, want in zip(symbols, expected):
            assert abs(got - want) <= 1e-10
        assert report["operator_norm"] == pytest.approx(2.0, abs=1e-10)

    def test_z4_step2_symbols(self, capsys):
        code = main(["demo-diffop", "4", "2", "--json"])
        report = read_report(capsys)
        assert code == 0
        symbols = {round(complex(re, im).real, 9) for re, im in report["fiber_symbols"]}
        assert symbols == {0.0, 2.0}

    def test_step_equal_modulus_gives_zero_operator(self, capsys):
        code = main(["demo-diffop", "6", "6", "--json"])
        report = read_report(capsys)
        assert code == 0
        assert all(abs(complex(re, im)) <= 1e-12 for re, im in report["fiber_symbols"])
        assert report["operator_norm"] == pytest.approx(0.0, abs=1e-12)

    def test_small_modulus_is_input_error(self):
        assert main(["demo-diffop", "1", "1"]) == 2

    def test_negative_step_is_input_error(self):
        assert main(["demo-diffop", "8", "-3"]) == 2


class TestCheck:
    def test_f1_passes(self, f1_spec, capsys):
        code = main(["check", f1_spec, "--json"])
        report = read_report(capsys)
        assert code == 0
        assert report["suites"]["zak_isometry"]["residual"] < 1e-10

    def test_z12_with_index_three_subgroup(self, tmp_path, capsys):
        spec = tmp_path / "z12.json"
        spec.write_text(json.dumps({"orders": [12], "gamma_generators": [[3]]}))
        assert main(["check", str(spec), "--json"]) == 0
        assert read_report(capsys)["passed"] is True

    def test_tolerance_gate_below_machine_epsilon(self, f1_spec):
        # float limits make every suite fail at 1e-20
        assert main(["check", f1_spec, "--tol-abs", "1e-20", "--tol-rel", "1e-20"]) == 1

    def test_nonpositive_tolerance_is_usage_error(self, f1_spec):
        assert main(["check", f1_spec, "--tol-abs", "-1"]) == 2


class TestContract:
    def test_usage_error_exit_code(self):
        assert main([]) == 2
        assert main(["frobnicate"]) == 2

    def test_reports_are_byte_deterministic(self, tmp_path, f1_spec):
        out1 = tmp_path / "a.json"
        out2 = tmp_path / "b.json"
        assert main(["check", f1_spec, "--seed", "5", "--out", str(out1)]) == 0
        assert main(["check", f1_spec, "--seed", "5", "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_seed_changes_sampled_residuals(self, tmp_path, f1_spec):
        out1 = tmp_path / "a.json"
        out2 = tmp_path / "b.json"
        main(["check", f1_spec, "--seed", "1", "--out", str(out1)])
        main(["check", f1_spec, "--seed", "2", "--out", str(out2)])
        r1 = json.loads(out1.read_text())["suites"]["zak_isometry"]["residual"]
        r2 = json.loads(out2.read_text())["suites"]["zak_isometry"]["residual"]
        assert r1 != r2

    def test_out_file_matches_json_stdout(self, tmp_path, f1_spec, capsys):
        out = tmp_path / "r.json"
        main(["check", f1_spec, "--json", "--out", str(out)])
        printed = capsys.readouterr().out
        assert out.read_text().strip() == printed.strip()
