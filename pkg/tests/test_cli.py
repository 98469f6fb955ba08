import csv
import io
import json
import subprocess
import sys

import pytest

from rumor_locus.cli import main
from rumor_locus.tree_sim import InfectedTree


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_analytic_delta3_csv():
    code, text = run("analytic", "--delta", "3", "--dmax", "3", "--m", "40")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == ["delta", "d", "m", "lower", "upper", "exact", "empirical", "se", "z"]
    assert [int(r["d"]) for r in rows] == [0, 1, 2, 3]
    assert abs(float(rows[-1]["exact"]) - 0.968) <= 1e-3
    assert rows[-1]["empirical"] == ""


def test_analytic_delta6():
    code, text = run("analytic", "--delta", "6", "--dmax", "3", "--m", "40")
    assert code == 0
    last = list(csv.DictReader(io.StringIO(text)))[-1]
    assert abs(float(last["lower"]) - 0.985) <= 1e-3
    assert last["exact"] == ""


def test_analytic_json_has_epsilon():
    code, text = run("analytic", "--delta", "4", "--format", "json")
    assert code == 0
    rows = json.loads(text)
    assert all(abs(r["epsilon"] - 9.72e-8) < 1e-9 for r in rows)


def test_csv_bit_stable():
    first = run("analytic", "--delta", "5", "--dmax", "4", "--m", "30")[1]
    second = run("analytic", "--delta", "5", "--dmax", "4", "--m", "30")[1]
    assert first == second
    assert "\r" not in first and first.endswith("\n")
    # 15 significant digits
    lower = next(csv.DictReader(io.StringIO(first)))["lower"]
    assert lower == format(float(lower), ".15g")


@pytest.mark.parametrize("argv", [
    ["analytic", "--delta", "2"],
    ["analytic", "--delta", "x"],
    ["analytic", "--delta", "3", "--dmax", "5", "--m", "4"],
    ["simulate", "--delta", "3", "--n", "5"],
    ["validate", "--delta", "3", "--n", "11", "--trials", "10"],
    ["validate", "--delta", "4", "--n", "11", "--trials", "10", "--seed", "1"],
    ["validate", "--delta", "3", "--n", "1", "--trials", "10", "--seed", "1"],
    ["exact", "--n", "1"],
    ["oracle", "--delta", "3", "--n", "12"],
    ["simulate", "--delta", "3", "--n", "0", "--seed", "1"],
    [],
    ["bogus"],
])
def test_usage_errors_exit_2(argv):
    assert run(*argv)[0] == 2


def test_oracle_output():
    assert run("oracle", "--delta", "3", "--n", "3") == (0, '{"0":"1/2","1":"1/2"}\n')
    code, text = run("oracle", "--delta", "3", "--n", "6")
    assert json.loads(text) == {"0": "5/14", "1": "17/35", "2": "1/7", "3": "1/70"}


def test_exact_table():
    code, text = run("exact", "--n", "9", "--format", "json")
    rows = json.loads(text)
    assert code == 0
    assert abs(sum(r["probability"] for r in rows) - 1) < 1e-12
    code, text = run("exact", "--n", "7", "--dmax", "5")
    assert code == 0 and text.splitlines()[0] == "n,d,probability"
    assert len(text.splitlines()) == 7


def test_simulate_then_estimate(tmp_path):
    path = tmp_path / "t.json"
    assert run("simulate", "--delta", "3", "--n", "5", "--seed", "7", "--out", str(path)) == (0, "")
    tree = InfectedTree.from_json(path.read_text())
    assert tree.n == 5
    # stdout variant writes the same tree
    assert run("simulate", "--delta", "3", "--n", "5", "--seed", "7")[1] == path.read_text()
    code, first = run("estimate", "--tree", str(path))
    assert code == 0
    assert run("estimate", "--tree", str(path))[1] == first
    result = json.loads(first)
    assert set(result) == {"estimate", "distance_to_source", "classification", "exact", "centrality"}
    assert result["classification"] in ("strict-center", "tie-center")
    assert set(result["centrality"]) == {".".join(map(str, v)) for v in tree.order}


def test_estimate_chain_file(tmp_path):
    path = tmp_path / "chain.json"
    path.write_text(json.dumps({"delta": 3, "order": ["", "1", "1.0"], "source": ""}))
    result = json.loads(run("estimate", "--tree", str(path))[1])
    assert result["estimate"] == "1"
    assert result["distance_to_source"] == 1
    assert result["centrality"] == {"": "1", "1": "2", "1.0": "1"}


def test_estimate_malformed_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"delta": 3,\n "order": [""  "0"]}\n')
    assert run("estimate", "--tree", str(path))[0] == 2
    assert f"{path}:2:" in capsys.readouterr().err
    path.write_text('{"delta": 3, "order": ["", "0.0"]}')
    assert run("estimate", "--tree", str(path))[0] == 2
    assert run("estimate", "--tree", str(tmp_path / "missing.json"))[0] == 2


def test_validate_pass_and_fail(capsys):
    code, text = run("validate", "--delta", "3", "--n", "7", "--trials", "20000", "--seed", "3")
    assert code == 0
    report = json.loads(text)
    assert report["verdict"] == "pass"
    # limit target is far off at n = 4 with this many trials
    code, text = run("validate", "--delta", "3", "--n", "4", "--trials", "20000", "--seed", "3",
                     "--target", "limit", "--format", "csv")
    assert code == 1
    assert text.splitlines()[0] == "delta,d,m,lower,upper,exact,empirical,se,z"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rumor_locus", "oracle", "--delta", "3", "--n", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout == '{"0":"1/2","1":"1/2"}\n'
