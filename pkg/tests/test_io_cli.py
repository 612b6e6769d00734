import io as stdio
import json
import math

import numpy as np
import pytest
from scipy.stats import unitary_group

from siclab import io
from siclab.bounds import BoundReport
from siclab.cli import main
from siclab.sic import depolarize_sic, rank_one_sic, unitary_rotate

from .conftest import DATA


def test_povm_json_round_trip(tmp_path):
    sic = depolarize_sic(rank_one_sic(3), 0.4)
    path = tmp_path / "p.json"
    io.write_povm(path, sic)
    data = json.loads(path.read_text())
    assert data["dim"] == 3 and len(data["elements"]) == 9 and len(data["elements"][0]) == 9
    np.testing.assert_array_equal(io.read_povm(path), sic.elements)


def test_povm_json_row_major():
    m = np.array([[1, 2j], [-2j, 3]])
    assert io.povm_to_dict([m])["elements"][0] == [[1, 0], [0, 2], [0, -2], [3, 0]]


@pytest.mark.parametrize("payload", [{"dim": 2}, {"dim": 2, "elements": [[[1, 0]]]}, [1, 2], {"dim": "x", "elements": []}])
def test_povm_schema_errors(payload):
    with pytest.raises((io.FormatError, ValueError)):
        io.povm_from_dict(payload)


def test_probability_csv_round_trip():
    p = np.array([0.1, 0.2, 0.7]) / 1.0
    buf = stdio.StringIO()
    io.write_probabilities_csv(buf, p)
    buf.seek(0)
    np.testing.assert_array_equal(io.read_probabilities_csv(buf), p)


def test_fmt_round_trips():
    x = 0.1 + 0.2
    assert float(io.fmt(x)) == x
    assert io.fmt(True) == "true" and io.fmt(None) == "" and io.fmt(math.inf) == "inf"


def test_report_csv_and_jsonl():
    reps = [BoundReport.make("tsallis", 1.0, 0.5, d=2, a=0.25, purity=1.0, alpha=2.0, state=0)]
    text = io.reports_to_string(reps, "csv")
    lines = text.splitlines()
    assert lines[0] == ",".join(io.REPORT_COLUMNS)
    assert lines[1].split(",")[-1] == "true" and lines[1].split(",")[5] == ""
    row = json.loads(io.reports_to_string(reps, "json"))
    assert row["bound_name"] == "tsallis" and row["slack"] == 0.5 and row["context"]["state"] == 0


# -- CLI ------------------------------------------------------------------

def _build(tmp_path, d, lam, name="p.json", extra=()):
    out = tmp_path / name
    assert main(["build", "--dim", str(d), "--lambda", str(lam), "--out", str(out), *extra]) == 0
    return out


@pytest.mark.parametrize("d,lam,a", [(2, 1.0, 0.25), (2, 0.5, 5 / 32), (3, 1.0, 1 / 9)])
def test_build_reports_a(tmp_path, capsys, d, lam, a):
    _build(tmp_path, d, lam)
    out = capsys.readouterr().out
    assert float(out.split("a = ")[1]) == pytest.approx(a, abs=1e-12)


def test_build_with_external_fiducial(tmp_path, capsys):
    _build(tmp_path, 4, 1.0, extra=["--fiducial", str(DATA / "fiducial_d4.json")])
    assert float(capsys.readouterr().out.split("a = ")[1]) == pytest.approx(1 / 16, abs=1e-12)


def test_build_unsupported_dimension(tmp_path):
    assert main(["build", "--dim", "5", "--out", str(tmp_path / "x.json")]) == 1


def test_validate_exit_codes(tmp_path, capsys):
    good = _build(tmp_path, 2, 1.0)
    capsys.readouterr()
    assert main(["validate", str(good)]) == 0
    out = capsys.readouterr().out
    assert "a: 0.25" in out

    data = json.loads(good.read_text())
    data["elements"][0] = [[0, 0]] * 4
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps(data))
    assert main(["validate", str(broken)]) == 1
    out = capsys.readouterr().out
    resid = float(out.split("completeness_residual: ")[1].split()[0])
    assert resid > 0.1

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["validate", str(bad)]) == 2
    assert main(["validate", str(tmp_path / "missing.json")]) == 2


def test_sweep_deterministic_and_clean(tmp_path, capsys):
    args = ["sweep", "--dim", "2,3", "--lambda", "0.5,1.0", "--samples", "15", "--seed", "11"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main([*args, "--out", str(a)]) == 0
    assert main([*args, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    err = capsys.readouterr().err
    assert "violations=0" in err
    rows = a.read_text().splitlines()
    assert rows[0].startswith("bound_name,d,a,purity")
    names = {r.split(",")[0] for r in rows[1:]}
    assert {"tsallis", "tsallis_eta", "renyi", "renyi_collision", "min_entropy"} <= names


def test_sweep_reports_violation_exit(tmp_path, monkeypatch):
    monkeypatch.setenv("SICLAB_TOL", "-1")  # every report now counts as a violation
    assert main(["sweep", "--dim", "2", "--lambda", "1", "--samples", "2", "--out", str(tmp_path / "v.csv")]) == 1


def test_sweep_json_format(tmp_path):
    out = tmp_path / "s.jsonl"
    assert main(["sweep", "--dim", "2", "--lambda", "1", "--samples", "3", "--orders", "2,inf",
                 "--etas", "", "--format", "json", "--out", str(out)]) == 0
    rows = [json.loads(x) for x in out.read_text().splitlines()]
    assert {r["bound_name"] for r in rows} == {"tsallis", "renyi", "min_entropy", "renyi_limit"}


def test_pair_command(tmp_path, capsys):
    m = _build(tmp_path, 2, 1.0, "m.json")
    u = unitary_group.rvs(2, random_state=5)
    rotated = unitary_rotate(rank_one_sic(2), u)
    n = tmp_path / "n.json"
    io.write_povm(n, rotated)
    out = tmp_path / "pair.csv"
    assert main(["pair", str(m), str(n), "--samples", "10", "--s-values", "0,0.5", "--out", str(out)]) == 0
    rows = [r.split(",") for r in out.read_text().splitlines()[1:]]
    param = [float(r[7]) for r in rows if r[0] == "pair_renyi_param"]
    assert param and all(abs(x - 2 * math.log(2)) < 1e-12 for x in param)


def test_pair_dimension_mismatch(tmp_path):
    m = _build(tmp_path, 2, 1.0, "m.json")
    n = _build(tmp_path, 3, 1.0, "n.json")
    assert main(["pair", str(m), str(n), "--samples", "2", "--out", str(tmp_path / "x.csv")]) == 1


def test_tomo_command(tmp_path, capsys):
    p = _build(tmp_path, 3, 1.0)
    out = tmp_path / "t.csv"
    assert main(["tomo", str(p), "--samples", "100", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()[1:]
    errs = [float(r.split(",")[2]) for r in rows]
    assert len(errs) == 100 and max(errs) < 1e-9
    assert errs[0] < 1e-10  # first sampled state is I/d


def test_tomo_condition_grows_near_trivial_family(tmp_path, capsys):
    conds = []
    for lam in (1.0, 0.01):
        p = _build(tmp_path, 2, lam, f"t{lam}.json")
        capsys.readouterr()
        assert main(["tomo", str(p), "--samples", "5", "--out", str(tmp_path / "t.csv")]) == 0
        err = capsys.readouterr().err
        conds.append(float(err.split("condition_number=")[1].split()[0]))
    assert conds[1] > 50 * conds[0]


def test_bad_arguments_exit_two():
    assert main(["sweep", "--samples", "notanumber"]) == 2
    assert main([]) == 2
