import csv
import io
import json

import numpy as np
import pytest

from multiport_ghz import cli, linalg


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestRun:
    def test_odd3_json(self, capsys):
        code, out, _ = run_cli(capsys, "run", "--scheme", "odd", "--n", "3")
        assert code == 0
        report = json.loads(out)
        assert report["success_probability"] == pytest.approx(1 / 12, abs=1e-10)
        assert report["ghz_fidelity"] > 1 - 1e-10
        assert len(report["amplitudes"]) == 8
        assert report["closed_form_reference"] is None

    def test_json_round_trip(self, capsys):
        _, out, _ = run_cli(capsys, "run", "--scheme", "even", "--n", "6")
        report = json.loads(out)
        recomputed = sum(re * re + im * im for _, re, im in report["amplitudes"])
        assert recomputed == pytest.approx(report["success_probability"], abs=1e-12)

    def test_pbs4(self, capsys):
        _, out, _ = run_cli(capsys, "run", "--scheme", "pbs", "--n", "4")
        report = json.loads(out)
        assert report["success_probability"] == pytest.approx(0.125, abs=1e-12)
        assert report["closed_form_reference"] == 0.125

    def test_odd6_suppressed(self, capsys):
        code, out, err = run_cli(capsys, "run", "--scheme", "odd", "--n", "6")
        assert code == 0
        assert json.loads(out)["success_probability"] < 1e-10
        assert "suppressed" in err

    def test_odd4_needs_flag(self, capsys):
        code, _, err = run_cli(capsys, "run", "--scheme", "odd", "--n", "4")
        assert code == 2
        assert json.loads(err)["exit_code"] == 2
        code, out, _ = run_cli(capsys, "run", "--scheme", "odd", "--n", "4", "--allow-special-n4")
        assert code == 0
        assert json.loads(out)["success_probability"] == pytest.approx(0.125, abs=1e-10)

    def test_constraint_violation(self, capsys):
        code, _, err = run_cli(capsys, "run", "--scheme", "even", "--n", "3")
        assert code == 2
        assert "error" in json.loads(err)

    def test_csv(self, capsys):
        _, out, _ = run_cli(capsys, "run", "--scheme", "2n", "--n", "2", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert list(rows[0]) == cli.RUN_CSV_HEADER
        assert [r["assignment"] for r in rows] == ["mm", "mh", "hm", "hh"]
        assert float(rows[0]["success_probability"]) == pytest.approx(0.125, abs=1e-12)
        assert float(rows[0]["re"]) == float(f"{float(rows[0]['re']):.17g}")

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "r.json"
        code, out, _ = run_cli(capsys, "run", "--scheme", "single_mode", "--n", "2", "--out", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["success_probability"] == pytest.approx(0.25, abs=1e-12)


class TestTable:
    def test_rows(self, capsys):
        code, out, _ = run_cli(capsys, "table", "--n-max", "6")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert list(rows[0]) == cli.TABLE_CSV_HEADER
        by_key = {(r["scheme"], int(r["n"])): r for r in rows}
        assert float(by_key["2n", 2]["simulated_probability"]) == pytest.approx(0.125, abs=1e-12)
        assert float(by_key["even", 2]["simulated_probability"]) == pytest.approx(0.5, abs=1e-12)
        assert float(by_key["odd", 6]["simulated_probability"]) < 1e-10
        assert by_key["odd", 1]["P_PBS"] == ""

    def test_odd10_row_suppressed(self):
        rows = cli.cmd_table(10)
        assert [r[2] for r in rows if r[0] == "odd" and r[1] == 10][0] < 1e-10

    def test_bit_identical(self, capsys):
        _, first, _ = run_cli(capsys, "table", "--n-max", "5")
        _, second, _ = run_cli(capsys, "table", "--n-max", "5", "--threads", "3")
        assert first == second

    def test_size_guard(self, capsys):
        code, _, _ = run_cli(capsys, "table", "--n-max", "13")
        assert code == 2


class TestSuppression:
    def test_n3(self, capsys):
        code, out, _ = run_cli(capsys, "suppression", "--n", "3")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 10
        assert sum(r["ztl_allowed"] == "true" for r in rows) == 4
        assert all(r["agrees"] == "true" for r in rows)

    def test_n2_hom(self, capsys):
        _, out, _ = run_cli(capsys, "suppression", "--n", "2")
        rows = {r["pattern"]: r for r in csv.DictReader(io.StringIO(out))}
        assert rows["(1,1)"]["ztl_allowed"] == "false"

    def test_mismatch_exit_code(self, capsys):
        code, _, err = run_cli(capsys, "suppression", "--n", "6")
        assert code == 3
        assert "suppressed beyond ZTL" in err

    def test_uncertified_listing(self):
        rows, mismatches = cli.cmd_suppression(8)
        assert not mismatches
        assert all(p is None for _, _, _, p, _ in rows)


class TestBench:
    def test_dim1(self, capsys):
        code, out, _ = run_cli(capsys, "bench", "--dims", "1,4")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert list(rows[0]) == cli.BENCH_CSV_HEADER
        assert float(rows[0]["perm_re"]) == pytest.approx(1.0)

    def test_dim12_under_a_millisecond(self):
        (_, seconds, _, _), = cli.cmd_bench([12])
        assert seconds < 1e-3

    def test_exponential_scaling(self):
        rows = cli.cmd_bench([14, 16, 18, 20], min_time=0.02)
        slope = np.polyfit([d for d, *_ in rows], np.log([s for _, s, _, _ in rows]), 1)[0]
        # 2^n * n work: ln 2 per dimension plus a small polynomial correction
        assert 0.5 < slope < 1.0

    def test_size_guard(self, capsys):
        code, _, _ = run_cli(capsys, "bench", "--dims", "31")
        assert code == 2


class TestVerify:
    def test_quick_passes(self, capsys):
        code, _, err = run_cli(capsys, "verify", "quick")
        assert code == 0
        assert err.count("[PASS]") == 10

    def test_tampered_dft_fails(self, capsys, monkeypatch):
        original = linalg.build_dft

        def tampered(n):
            m = original(n).copy()
            if n > 1:
                m[1, 1] *= np.exp(0.05j)
            return m

        monkeypatch.setattr(linalg, "build_dft", tampered)
        code, _, err = run_cli(capsys, "verify", "quick")
        assert code == 1
        assert "[FAIL]" in err
