import csv
import io
import json
import math
import subprocess
import sys

import pytest

from clonebell import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_fig1_default_grid(tmp_path, capsys):
    out = tmp_path / "fig1.csv"
    code, _, _ = run(capsys, "fig1", "--out", str(out))
    assert code == 0
    rows = read_csv(out)
    assert rows[0] == ["xi", "visibility", "chsh_value"]
    assert len(rows) == 1 + 101 * 101
    data = [tuple(map(float, r)) for r in rows[1:]]
    peak = [v for xi, V, v in data if abs(xi - math.pi / 2) < 1e-15 and V == 1.0]
    assert abs(peak[0] - math.sqrt(2)) < 1e-12
    assert [v for xi, V, v in data if xi == 0.0 and V == 0.7] == [1.0]
    # xi is the outer index
    assert data[0][0] == data[100][0] == 0.0 and data[101][0] > 0


def test_fig1_env_out_dir(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(cli.OUT_DIR_ENV, str(tmp_path))
    code, _, _ = run(capsys, "fig1", "--grid-xi", "3", "--grid-v", "2")
    assert code == 0
    assert len(read_csv(tmp_path / "fig1.csv")) == 7


def test_fig1_json_stdout(capsys):
    code, out, _ = run(capsys, "fig1", "--grid-xi", "2", "--grid-v", "2", "--format", "json")
    assert code == 0
    assert len(json.loads(out)) == 4


def test_fig1_unwritable(tmp_path, capsys):
    code, _, err = run(capsys, "fig1", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code != 0
    assert "clonebell:" in err


def test_csv_round_trip_precision(tmp_path, capsys):
    out = tmp_path / "f.csv"
    run(capsys, "fig1", "--grid-xi", "7", "--grid-v", "5", "--out", str(out))
    from clonebell.certify import fig1_surface
    rows = [tuple(map(float, r)) for r in read_csv(out)[1:]]
    assert rows == fig1_surface(7, 5)


def test_certify_violated(capsys):
    code, out, _ = run(capsys, "certify", "--n", "4", "--visibility", "0.8", "--xi", "1.0")
    doc = json.loads(out)
    assert code == 0 and doc["violated"] is True
    assert doc["inequality_kind"] == "EvenN"


def test_certify_not_violated_exit3(capsys):
    code, out, _ = run(capsys, "certify", "--n", "3", "--visibility", "0", "--xi", "1.0")
    assert code == 3
    assert json.loads(out)["violated"] is False


def test_certify_chsh_value(capsys):
    code, out, _ = run(capsys, "certify", "--n", "2", "--visibility", "1", "--xi", "1.5708", "--oracle")
    doc = json.loads(out)
    assert code == 0
    assert abs(doc["value"] - math.sqrt(2)) < 1e-9
    assert abs(doc["oracle_value"] - doc["value"]) < 1e-10


def test_certify_degrees(capsys):
    _, out_deg, _ = run(capsys, "certify", "--n", "5", "--visibility", "0.5", "--xi", "45", "--degrees")
    _, out_rad, _ = run(capsys, "certify", "--n", "5", "--visibility", "0.5", "--xi", str(math.pi / 4))
    assert json.loads(out_deg)["value"] == pytest.approx(json.loads(out_rad)["value"], abs=1e-15)


@pytest.mark.parametrize("argv", [
    ["certify", "--n", "4", "--visibility", "1.5", "--xi", "1.0"],
    ["certify", "--n", "4", "--visibility", "0.5", "--xi", "-1"],
    ["certify", "--n", "1", "--visibility", "0.5", "--xi", "1"],
    ["certify", "--n", "4"],
    ["certify", "--bogus"],
])
def test_certify_invalid_exit2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["lhv-bound", "--family", "even", "--n", "4"],
    ["lhv-bound", "--family", "odd", "--n", "5"],
    ["lhv-bound", "--family", "chsh"],
])
def test_lhv_bound(capsys, argv):
    code, out, _ = run(capsys, *argv)
    doc = json.loads(out)
    assert code == 0
    assert doc["bound"] == "1" and doc["holds"] is True


def test_lhv_bound_spec_file(tmp_path, capsys):
    # CHSH with the (2,2) weight doubled: classical maximum 3/2, e.g. a1 = b1 = b2 = +1, a2 = -1
    doc = {"n": 2, "labels": [[1, 2], [1, 2]],
           "terms": [{"idx": [1, 1], "num": 1, "den_pow2": 1}, {"idx": [1, 2], "num": 1, "den_pow2": 1},
                     {"idx": [2, 1], "num": 1, "den_pow2": 1}, {"idx": [2, 2], "num": -1, "den_pow2": 0}],
           "bound": 1}
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "lhv-bound", "--spec", str(path))
    res = json.loads(out)
    assert code == 0
    assert res["bound"] == "3/2"
    assert res["holds"] is False


def test_lhv_bound_cap_exit4(tmp_path, capsys):
    from clonebell.bell import even_spec
    path = tmp_path / "big.json"
    path.write_text(json.dumps(even_spec(14).to_document()))
    code, _, err = run(capsys, "lhv-bound", "--spec", str(path))
    assert code == 4
    assert "cap" in err


def test_lhv_bound_bad_spec_exit2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 2, "labels": [[1], [1]], "terms": [{"idx": [1, 3], "num": 1}]}))
    code, _, _ = run(capsys, "lhv-bound", "--spec", str(path))
    assert code == 2


def test_sweep_rows_and_predicate(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "--ns", "2..6", "--grid-v", "11", "--grid-xi", "11", "--out", str(out))
    assert code == 0
    rows = read_csv(out)
    assert rows[0] == cli.SWEEP_HEADER
    assert len(rows) == 1 + 605
    for n, V, xi, kind, value, thr, violated in rows[1:]:
        V, xi, value = float(V), float(xi), float(value)
        interior = V > 0 and 0 < xi < math.pi
        assert (violated == "true") == interior
        if not interior:
            assert value <= 1 + 1e-9


def test_sweep_jobs_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "sweep", "--grid-v", "6", "--grid-xi", "6", "--seed", "42", "--jobs", "1", "--out", str(a))
    run(capsys, "sweep", "--grid-v", "6", "--grid-xi", "6", "--seed", "42", "--jobs", "3", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_optimize(capsys):
    code, out, _ = run(capsys, "optimize", "--n", "2", "--visibility", "1", "--xi", str(math.pi / 2), "--full",
                       "--restarts", "2")
    doc = json.loads(out)
    assert code == 0
    assert doc["value"] >= math.sqrt(2) - 1e-6


def test_module_entry_point_exit_codes():
    ok = subprocess.run([sys.executable, "-m", "clonebell", "certify", "--n", "3", "--visibility", "0",
                         "--xi", "1.0"], capture_output=True, text=True)
    assert ok.returncode == 3
    assert json.loads(ok.stdout)["violated"] is False
    bad = subprocess.run([sys.executable, "-m", "clonebell", "certify", "--n", "3", "--visibility", "2",
                          "--xi", "1.0"], capture_output=True, text=True)
    assert bad.returncode == 2 and bad.stderr


def test_certify_phase_with_oracle(capsys):
    code, out, _ = run(capsys, "certify", "--n", "4", "--visibility", "0.9", "--xi", "1.2",
                       "--phi", "1.7", "--oracle")
    doc = json.loads(out)
    assert code == 0
    assert doc["phi_cat"] == 1.7
    assert abs(doc["oracle_value"] - doc["value"]) < 1e-10


def test_certify_oracle_above_cap_exit4(capsys, monkeypatch):
    monkeypatch.setenv("CLONEBELL_ORACLE_CAP", "3")
    code, _, err = run(capsys, "certify", "--n", "4", "--visibility", "0.9", "--xi", "1.2", "--oracle")
    assert code == 4 and "cap" in err
