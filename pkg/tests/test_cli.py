import csv
import io
import json
import math

import numpy as np
import pytest

from kusuoka import cli, dynamics
from kusuoka.estimates import closed_form_n0


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def table(out):
    lines = [ln for ln in out.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_measure_word(capsys):
    code, out = run(capsys, "measure", "--word", "1", "--full-precision")
    assert code == 0
    row = table(out)[0]
    assert float(row["mass"]) == pytest.approx(1 / 3, rel=1e-15)
    np.testing.assert_allclose([float(row[c]) for c in ("c1", "c2", "c3")], np.array([41, 17, 17]) / 75, atol=1e-15)


def test_measure_depths(capsys):
    _, out = run(capsys, "measure", "--depth", "0")
    rows = table(out)
    assert len(rows) == 2 and float(rows[0]["mass"]) == 1.0
    _, out = run(capsys, "measure", "--depth", "2", "--full-precision")
    rows = table(out)
    assert len(rows) == 10
    assert math.fsum(float(r["mass"]) for r in rows[:-1]) == pytest.approx(1.0, abs=1e-14)
    assert rows[-1]["word"] == "total"
    assert [r["word"] for r in rows[:-1]] == sorted(r["word"] for r in rows[:-1])


def test_measure_invalid_word_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["measure", "--word", "14"])
    assert exc.value.code == 2


def test_header_and_footer(capsys):
    _, out = run(capsys, "measure", "--depth", "1")
    lines = out.splitlines()
    assert lines[0] == "word,mass,c1,c2,c3,r,theta"
    assert lines[-2].startswith("# schema=kusuoka.measure/1 version=")
    params = json.loads(lines[-1][len("# params="):])
    assert params["depth"] == 1 and params["format"] == "csv"


def test_json_format(capsys):
    _, out = run(capsys, "rho", "--m", "2", "--format", "json")
    doc = json.loads(out)
    assert doc["schema"] == "kusuoka.rho/1"
    assert doc["params"]["m"] == 2
    assert doc["rows"][0]["rho"] == pytest.approx(-math.log(3), abs=1e-6)


def test_rho_rows(capsys):
    _, out = run(capsys, "rho", "--m", "1", "--full-precision")
    assert float(table(out)[0]["rho"]) == pytest.approx(-math.log(3), rel=1e-15)
    _, out = run(capsys, "rho", "--m", "8", "--method", "both")
    rows = table(out)
    assert len(rows) == 8
    assert max(float(r["discrepancy"]) for r in rows) < 1e-10
    _, out = run(capsys, "rho", "--m", "6", "--method", "cesaro", "--shifted")
    assert "d_shifted" in table(out)[0]


def test_rho_cap_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["rho", "--m", "19"])
    assert exc.value.code == 2


def test_bounds_rows(capsys):
    _, out = run(capsys, "bounds", "--n", "4", "--full-precision")
    rows = table(out)
    assert len(rows) == 5
    g_lo, g_hi, _, _ = closed_form_n0()
    assert abs(float(rows[0]["rho_lower"]) - g_lo) < 1e-9
    assert abs(float(rows[0]["rho_upper"]) - g_hi) < 1e-9
    assert float(rows[2]["rho_lower"]) == pytest.approx(-0.9320224, abs=1e-7)
    assert float(rows[2]["rho_upper"]) == pytest.approx(-0.9287450, abs=1e-7)
    assert float(rows[4]["d_lower"]) == pytest.approx(1.290947, abs=1e-6)
    assert float(rows[4]["d_upper"]) == pytest.approx(1.291071, abs=1e-6)


def test_bounds_seven_digits(capsys):
    _, out = run(capsys, "bounds", "--n", "0")
    row = table(out)[0]
    assert row["rho_lower"] == "-0.9502705"
    assert row["d_lower"] == "1.271650"


def test_curve(capsys):
    _, out = run(capsys, "curve", "--n", "0", "--samples", "360", "--full-precision")
    rows = table(out)
    assert len(rows) == 360
    theta = np.array([float(r["theta"]) for r in rows])
    vals = np.array([float(r["value"]) for r in rows])
    assert theta.min() > -math.pi and theta[-1] == math.pi
    zero = int(np.argmin(np.abs(theta)))
    assert theta[zero] == pytest.approx(0.0, abs=1e-15)
    assert vals[zero] == pytest.approx(0.6 * math.log(3) - math.log(5), abs=1e-12)
    # 360 samples: a shift of 120 rows is a rotation by 2 pi / 3
    np.testing.assert_allclose(np.roll(vals, 120), vals, atol=1e-10)
    assert vals.min() >= closed_form_n0()[0] - 1e-9


def test_curve_n3_above_scan_min(capsys, bound_rows):
    _, out = run(capsys, "curve", "--n", "3", "--samples", "500", "--full-precision")
    vals = [float(r["value"]) for r in table(out)]
    assert min(vals) >= bound_rows[3].g_min - 1e-9
    assert max(vals) <= bound_rows[3].g_max + 1e-9


def test_simulate_zero_steps(capsys):
    _, out = run(capsys, "simulate", "--steps", "0", "--paths", "10")
    rows = table(out)
    assert len(rows) == 10 and all(float(r["r"]) == 0.0 for r in rows)


def test_simulate_uniform_one_step(capsys):
    _, out = run(capsys, "simulate", "--steps", "1", "--law", "uniform", "--full-precision")
    rows = table(out)
    assert len(rows) == 3
    assert len({r["theta"] for r in rows}) == 3
    _, out = run(capsys, "simulate", "--steps", "1", "--law", "uniform", "--hist-bins", "3")
    rows = [r for r in table(out) if r["quantity"] == "theta"]
    assert [int(r["count"]) for r in rows] == [1, 1, 1]


def test_simulate_histogram_totals(capsys):
    _, out = run(capsys, "simulate", "--steps", "20", "--paths", "300", "--hist-bins", "12", "--seed", "4")
    rows = table(out)
    for q in ("r", "theta"):
        assert sum(int(r["count"]) for r in rows if r["quantity"] == q) == 300


def test_simulate_byte_identical(capsys):
    argv = ["simulate", "--steps", "15", "--paths", "50", "--seed", "9"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    assert a == b


def test_out_file(tmp_path, capsys):
    target = tmp_path / "rows.csv"
    code, out = run(capsys, "measure", "--depth", "1", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("word,mass")


def test_verify_passes(capsys):
    code, out = run(capsys, "verify")
    assert code == 0
    rows = table(out)
    assert all(r["status"] == "pass" for r in rows)
    totals = [r for r in rows if r["check"] == "total"]
    assert {r["suite"] for r in totals} == {"gasket", "disk", "dynamics", "estimates", "chain"}


def test_verify_detects_perturbed_psi(capsys, monkeypatch):
    real = dynamics.psi_all

    def perturbed(x):
        y = real(x)
        return y + np.array([1e-6, -1e-6, 0.0])

    monkeypatch.setattr(dynamics, "psi_all", perturbed)
    code, out = run(capsys, "verify")
    assert code == 1
    failed = {r["check"] for r in table(out) if r["status"] == "FAIL"}
    assert "psi consistency" in failed
