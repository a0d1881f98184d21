import subprocess
import sys

import pytest

from cfstats import analytic, cli


def run(args, tmp_path, name="out.csv"):
    out = tmp_path / name
    code = cli.main(args + ["--out", str(out)])
    return code, out.read_bytes().decode() if out.exists() else None


def _check_csv(text, header):
    assert "\r" not in text and text.endswith("\n")
    lines = text.splitlines()
    assert lines[0] == ",".join(header)
    width = len(header)
    assert all(len(line.split(",")) == width for line in lines)
    return [line.split(",") for line in lines[1:]]


def test_tabulate(tmp_path):
    code, text = run(["tabulate", "--x", "100"], tmp_path)
    assert code == 0
    rows = _check_csv(text, ["d", "T", "g"])
    assert len(rows) == 100
    assert rows[9] == ["10", "1", "4"]


def test_tabulate_deterministic_across_shards(tmp_path):
    outs = set()
    for shards, chunk in ((1, 1 << 20), (2, 777), (8, 100)):
        code, text = run(["tabulate", "--x", "3000", "--shards", str(shards),
                          "--chunk-size", str(chunk)], tmp_path, f"t{shards}.csv")
        assert code == 0
        outs.add(text)
    assert len(outs) == 1


def test_constants(tmp_path):
    code, text = run(["constants"], tmp_path)
    assert code == 0
    rows = {r[0]: r for r in _check_csv(text, ["name", "closed_form", "value"])}
    assert rows["c1"][2].startswith("0.9241")
    assert rows["c2"][2].startswith("1.6898")
    assert rows["F2"][2].startswith("2.090")
    for k in "ABC":
        assert abs(float(rows[k][2]) - float(rows[k + "_numeric"][2])) <= 1e-6


def test_verify(tmp_path):
    code, text = run(["verify", "--x", "1000"], tmp_path)
    assert code == 0
    rows = {r[0]: r for r in _check_csv(text, ["check", "x", "measured", "lower", "upper", "pass"])}
    theta = float(rows["eq2A_theta"][2])
    assert 0 <= theta <= 1
    assert all(r[5] == "true" for r in rows.values())


def test_verify_violation_exit_code(tmp_path, monkeypatch):
    monkeypatch.setattr(analytic, "rhs_eq3A", lambda x: 0.0)
    code, text = run(["verify", "--x", "100"], tmp_path)
    assert code == 3
    assert "eq3A_sum_g2,100" in text and ",false" in text


def test_moments(tmp_path):
    code, text = run(["moments", "--x", "10", "--rs", "1,2"], tmp_path)
    assert code == 0
    rows = _check_csv(text, ["x_lo", "x_hi", "r", "sum_T_r", "sum_g_r", "prime_count",
                             "prime_sum_T_r", "prime_sum_g_r"])
    assert rows[0][:5] == ["0", "10", "1", "13", "18"]
    assert rows[1][:5] == ["0", "10", "2", "31", "54"]
    code, text = run(["moments", "--x", "10", "--primes-only"], tmp_path)
    rows = _check_csv(text, ["x_lo", "x_hi", "r", "sum_T_r", "sum_g_r", "prime_count",
                             "prime_sum_T_r", "prime_sum_g_r"])
    # primes 2,3,5,7: T = 1,2,1,4 and g = 1,2,2,4
    assert rows[0][5:] == ["4", "8", "9"]


def test_deviations(tmp_path):
    code, text = run(["deviations", "--x", "10000", "--alpha", "2", "--alpha", "1/1000000"], tmp_path)
    assert code == 0
    rows = _check_csv(text, ["x", "alpha", "count", "bound_first", "bound_second"])
    assert rows[0][:3] == ["10000", "2", "42"]
    assert rows[1][1] == "1/1000000"


def test_figures(tmp_path):
    code, text = run(["figures", "--x", "1000", "--which", "fig2", "--step", "500"], tmp_path)
    assert code == 0
    rows = _check_csv(text, ["x", "ratio_mean", "ratio_second"])
    assert [r[0] for r in rows] == ["500", "1000"]
    code, text = run(["figures", "--x", "1000"], tmp_path)
    assert len(_check_csv(text, ["x", "ratio_mean", "ratio_second"])) <= 64


@pytest.mark.parametrize("args, code", [
    (["deviations", "--x", "100", "--alpha", "1.5"], 2),
    (["moments", "--x", "100", "--rs", "5"], 2),
    (["tabulate", "--x", str(2**41)], 2),
    (["tabulate", "--x", "0"], 2),
    (["tabulate", "--x", "100", "--chunk-size", str(1 << 30)], 4),
])
def test_error_codes(args, code, capsys):
    assert cli.main(args) == code
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1 and err[0].startswith("cfstats: error=")


def test_argparse_error_code(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["nonsense"])
    assert exc.value.code == 2
    assert "error=invalid_argument" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cfstats", "tabulate", "--x", "5"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == "d,T,g\n1,0,0\n2,1,1\n3,2,2\n4,0,0\n5,1,2\n"
