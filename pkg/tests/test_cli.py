import json
import subprocess
import sys

from strengthlab import parse
from strengthlab.cli import run
from strengthlab.experiments import empirical_C, records_to_csv, scan, verify_identities
from strengthlab.rank import rank


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_rank_example(capsys):
    code, out, _ = call(capsys, "rank", "--poly", "x1*x2*x3", "-p", "5", "-n", "3", "-d", "3")
    assert code == 0
    obj = json.loads(out)
    assert obj["rank"] == 1 and obj["certificate"]
    # thin adapter: byte-identical to serializing the library result
    assert out == json.dumps(rank(parse("x1*x2*x3", 5, 3), d=3).to_json_obj(), ensure_ascii=False) + "\n"


def test_gowers_example(capsys):
    code, out, _ = call(capsys, "gowers", "--poly", "x1^2", "-p", "5", "-n", "1", "-m", "2")
    assert code == 0
    obj = json.loads(out)
    assert obj["value"] == 0.2 and obj["counts"] == [45, 20, 20, 20, 20]
    code, out2, _ = call(capsys, "gowers", "--poly", "x1^2", "-p", "5", "-n", "1", "-m", "2", "--route", "recursive")
    assert json.loads(out2)["counts"] == obj["counts"]


def test_degree_one_rank_is_usage_error(capsys):
    code, out, err = call(capsys, "rank", "--poly", "x1", "-p", "5", "-n", "1", "-d", "1")
    assert code == 2 and out == ""
    assert "rank undefined for degree ≤ 1" in err


def test_exit_codes(capsys):
    assert call(capsys, "rank", "--poly", "x1 + *", "-p", "5", "-n", "1")[0] == 2
    assert call(capsys, "rank", "-p", "5", "-n", "1")[0] == 2
    assert call(capsys, "bogus")[0] == 2
    assert call(capsys, "rank", "--poly", "x1^2", "-p", "6", "-n", "1")[0] == 2
    code, _, err = call(capsys, "gowers", "--poly", "x1^3", "-p", "5", "-n", "3", "-m", "3", "--budget", "1000")
    assert code == 3 and "budget" in err
    assert call(capsys, "scan", "-p", "5", "-n", "3", "-d", "3")[0] == 3


def test_seed_required_for_sampling(capsys):
    assert call(capsys, "scan", "-p", "5", "-n", "2", "-d", "3", "--mode", "sample")[0] == 2
    assert call(capsys, "verify", "-p", "5", "-n", "1", "-d", "3")[0] == 2


def test_simple_subcommands(capsys):
    assert json.loads(call(capsys, "eval", "--poly", "x1^2 + x2^2", "-p", "5", "-n", "2", "--point", "1,2")[1]) == {"value": 0}
    out = json.loads(call(capsys, "delta", "--poly", "x1^2", "-p", "5", "-n", "1", "-t", "1")[1])
    assert out["terms"] == [{"exps": [1], "coeff": 2}, {"exps": [0], "coeff": 1}]
    out = json.loads(call(capsys, "deriv", "--poly", "x1*x2*x3", "-p", "5", "-n", "3", "-t", "1,0,0")[1])
    assert out["terms"] == [{"exps": [0, 1, 1], "coeff": 1}]
    out = json.loads(call(capsys, "homog", "--poly", "x1^3 + x1", "-p", "5", "-n", "1", "-d", "3")[1])
    assert out["terms"] == [{"exps": [3], "coeff": 1}]
    out = json.loads(call(capsys, "multilin", "--poly", "x1^3", "-p", "5", "-n", "1")[1])
    assert out["coeffs"] == [{"idx": [0, 0, 0], "coeff": 1}]
    out = json.loads(call(capsys, "bias", "--poly", "x1", "-p", "5", "-n", "1")[1])
    assert out["counts"] == [1, 1, 1, 1, 1]
    assert json.loads(call(capsys, "gowers-exact", "--poly", "x1^3", "-p", "5", "-n", "1")[1]) == {"num": 9, "den": 25}
    out = json.loads(call(capsys, "profile", "--poly", "x1*x2*x3", "-p", "5", "-n", "3")[1])
    assert out["max"] == 2
    out = json.loads(call(capsys, "rank-ext", "--poly", "x1^2 + x2^2", "-p", "3", "-n", "2", "--ext", "2")[1])
    assert out["rank"] == 1 and out["field"] == {"p": 3, "s": 2}


def test_json_and_file_inputs(capsys, tmp_path):
    poly = {"p": 5, "s": 1, "n": 2, "d": 3, "terms": []}
    path = tmp_path / "zero.json"
    path.write_text(json.dumps(poly))
    code, out, _ = call(capsys, "rank", "--file", str(path))
    assert code == 0 and json.loads(out)["rank"] == 0
    path.write_text("x1^2*x2")
    code, out, _ = call(capsys, "rank", "--file", str(path), "-p", "5", "-n", "2")
    assert json.loads(out)["rank"] == 1
    assert call(capsys, "rank", "--file", str(tmp_path / "missing"), "-p", "5", "-n", "2")[0] == 2


def test_scan_verify_table_are_adapters(capsys, tmp_path):
    code, out, _ = call(capsys, "scan", "-p", "5", "-n", "1", "-d", "3", "--csv")
    assert code == 0 and out == records_to_csv(scan(5, 1, 3))
    (tmp_path / "recs.csv").write_text(out)
    code, table, _ = call(capsys, "table", "--file", str(tmp_path / "recs.csv"))
    assert json.loads(table) == empirical_C(scan(5, 1, 3)).to_json_obj()
    code, fresh, _ = call(capsys, "table", "-p", "5", "-n", "1", "-d", "3")
    assert fresh == table
    code, out, _ = call(capsys, "verify", "-p", "5", "-n", "1", "-d", "3", "--trials", "3", "--seed", "1")
    assert out == json.dumps(verify_identities(5, 1, 3, 3, 1), ensure_ascii=False) + "\n"
    a = call(capsys, "scan", "-p", "5", "-n", "2", "-d", "3", "--mode", "sample", "--samples", "20", "--seed", "3")[1]
    b = call(capsys, "scan", "-p", "5", "-n", "2", "-d", "3", "--mode", "sample", "--samples", "20", "--seed", "3",
             "--threads", "2")[1]
    assert a == b and json.loads(a)["params"]["seed"] == 3


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "strengthlab.cli", "gowers-exact", "--poly", "x1^2", "-p", "5", "-n", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout) == {"num": 1, "den": 5}
