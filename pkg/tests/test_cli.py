import io
import json
import subprocess
import sys

import pytest

from easyq.cli import run


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), buf)
    return code, buf.getvalue()


def test_count_csv():
    code, out = call("count", "--cat", "nc", "--upto", "5")
    assert code == 0
    assert out == "k,count\n0,1\n1,1\n2,2\n3,5\n4,14\n"


def test_count_json_and_pretty():
    code, out = call("count", "--cat", "nc2", "--upto", "5", "--format", "json")
    assert json.loads(out)[4] == {"count": 2, "k": 4}
    code, out = call("count", "--cat", "p", "--upto", "3", "--format", "pretty")
    assert out.splitlines()[0].split() == ["k", "count"]


def test_counts_weighted_column():
    code, out = call("counts", "--cat", "nc-bullet", "--upto", "4")
    assert code == 0
    assert out.splitlines()[1:] == ["1,1,1", "2,3,3", "3,11,11", "4,45,45"]


def test_enumerate_round_trips():
    code, out = call("enumerate", "--cat", "nc", "--k", "0", "--l", "3")
    data = json.loads(out)
    assert len(data) == 5 and data[0]["k"] == 0


def test_closure_compare():
    gen = '{"k":0,"l":2,"blocks":[[1,2]]}'
    code, out = call("closure", "--gen", gen, "--max-points", "4", "--compare", "nc2")
    assert code == 0
    assert "0,4,2" in out.splitlines()
    code, _ = call("closure", "--gen", gen, "--max-points", "4", "--compare", "nc")
    assert code == 1


def test_equal():
    code, out = call("equal", "--a", "nc2", "--b", "nc12&nc-even", "--max-points", "6")
    assert code == 0 and json.loads(out)["equal"] is True
    code, out = call("equal", "--a", "p", "--b", "nc", "--max-points", "4")
    rep = json.loads(out)
    assert code == 1 and rep["counterexample"]["blocks"] == [[1, 3], [2, 4]] and rep["onlyIn"] == "p"


def test_gram_and_fixdim():
    assert call("gram", "--cat", "nc2", "--k", "0", "--l", "4", "--n", "3") == (0, "2\n")
    assert call("fixdim", "--cat", "nc2", "--k", "2", "--p", "1", "--q", "1") == (0, "1\n")
    assert call("fixdim", "--cat", "nc-bullet", "--k", "2", "--p", "3", "--q", "0") == (0, "3\n")


def test_tmatrix():
    code, out = call("tmatrix", "--partition", '{"k":0,"l":2,"blocks":[[1,2]]}', "--p", "1", "--q", "0")
    assert json.loads(out)["entries"] == [[0], [1], [1], [0]]
    code, out = call("tmatrix", "--partition", '{"k":0,"l":2,"blocks":[[1,2]]}', "--n", "2", "--format", "csv")
    assert out == "1\n0\n0\n1\n"


def test_sample_and_verify(tmp_path):
    code, out = call("sample", "--group", "torus-h", "--p", "1", "--q", "1", "--seed", "4")
    assert code == 0
    f = tmp_path / "model.json"
    f.write_text(out)
    code, out = call("verify", "--preset", "hpq", "--file", str(f), "--p", "1", "--q", "1")
    assert code == 0 and json.loads(out)["pass"] is True
    code, out = call("verify", "--preset", "spq", "--file", str(f), "--p", "1", "--q", "1")
    rep = json.loads(out)
    assert code == 1 and rep["pass"] is False and rep["residuals"]["projections"] > 1e-3
    code, out = call("quotient", "--file", str(f), "--p", "1", "--q", "1")
    assert code == 0 and json.loads(out)["n"] == 3


def test_verify_from_sampler_and_quotient_precondition():
    assert call("verify", "--preset", "opq", "--sample", "O", "--p", "2", "--q", "1")[0] == 0
    code, out = call("quotient", "--sample", "O", "--p", "1", "--q", "1")
    assert code == 1 and json.loads(out)["pass"] is False


def test_moments():
    code, out = call("moments", "--law", "free-poisson", "--t", "1/2", "--k", "3")
    assert out.splitlines()[1:] == ["1,1/2,1/2", "2,3/4,1/2", "3,11/8,1/2"]
    code, out = call("moments", "--law", "cumulants", "--values", "1,1,1", "--k", "3")
    assert [r.split(",")[1] for r in out.splitlines()[1:]] == ["1", "2", "5"]


@pytest.mark.parametrize("identity, upto", [("poissoncount", 5), ("catfree", 4), ("freep", 4), ("ncjoin", 4)])
def test_identity_tables_pass(identity, upto):
    code, out = call("table", "--identity", identity, "--upto", str(upto))
    assert code == 0
    assert all(line.endswith("pass") for line in out.splitlines()[1:])


def test_besselcount_reports_printed_column():
    code, out = call("table", "--identity", "besselcount", "--upto", "3", "--format", "json")
    rows = json.loads(out)
    assert code == 0
    assert [r["count"] for r in rows] == [2, 16, 168]
    assert [r["printed"] for r in rows] == [1, 4, 21]
    assert {r["printedMatches"] for r in rows} == {"no"}


def test_witness_search_commutative():
    code, out = call("witness-search", "--p", "1", "--q", "1", "--d", "1", "--budget", "2")
    assert code == 0 and json.loads(out) == {"found": False}


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--cat", "bogus", "--upto", "3"],
        ["count", "--cat", "nc"],
        ["frobnicate"],
        ["gram", "--cat", "nc", "--k", "2", "--n", "2", "--p", "1"],
        ["tmatrix", "--partition", "{not json", "--n", "2"],
        ["count", "--cat", "nc", "--upto", "30"],
        ["sample", "--group", "nope"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    code, _ = call(*argv)
    assert code == 2
    assert capsys.readouterr().err


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "easyq", "count", "--cat", "nc12", "--upto", "4"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "3,4"
