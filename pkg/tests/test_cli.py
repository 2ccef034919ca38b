import json
import subprocess
import sys

from hypothesis import given, settings, strategies as st

from toeplitz_ball.bhsuite import construct_bh_example
from toeplitz_ball.cli import run_command
from toeplitz_ball.report import loads
from toeplitz_ball.symbolic import BiPolynomial


def run(capsys, *argv):
    code = run_command(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return str(p)


def test_identities_json(capsys):
    code, out, _ = run(capsys, "identities", "--n", "2", "--d", "6", "--samples", "20", "--seed", "7",
                       "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["passed"]
    names = [c["name"] for r in data["reports"] for c in r["checks"]]
    for ident in ("E_Delta_a", "E_Delta_b", "E_s_Delta(s=4)", "marvelous(m=2)"):
        assert ident in names
    assert any(n.startswith("mobius(") for n in names)
    assert sum(n.startswith("do_identity(") for n in names) == 3
    labels = {c["label"] for r in data["reports"] for c in r["checks"]}
    assert "verified-at-20-points" in labels and "exact-proof" in labels and "verified-at-degree-6" in labels


def test_construct_in_range(capsys):
    code, out, _ = run(capsys, "construct", "--target", "z^(1)*zbar^(1)", "--n", "1")
    assert code == 0
    first, rest = out.split("\n", 1)
    assert first == "1 + log(t)"
    data = json.loads(rest)
    detail = data["reports"][0]["checks"][0]["detail"]
    assert detail["pretty"] == "1 + log(t)" and detail["symbol"]


def test_construct_out_of_range(capsys):
    code, out, _ = run(capsys, "construct", "--target", "z^(2)*zbar^(2)", "--n", "1")
    assert code == 1
    c = json.loads(out)["reports"][0]["checks"][0]
    assert c["verdict"] == "fail"
    assert "degree 2 > 2N-1 = 1" in c["witness"]


def test_usage_errors(capsys):
    assert run(capsys, "construct", "--target", "w^(1)", "--n", "1")[0] == 2
    assert run(capsys, "suite", "--n", "4")[0] == 2
    assert run(capsys, "operators", "--d", "-1")[0] == 2
    assert run(capsys, "identities", "--samples", "0")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    code, _, err = run(capsys, "verify-bh", "--scenario", "/nonexistent/x.json")
    assert code == 2 and "bad scenario" in err


def test_operators(capsys):
    code, out, _ = run(capsys, "operators", "--n", "1", "--d", "5")
    assert code == 0
    names = [c["name"] for c in json.loads(out)["reports"][0]["checks"]]
    assert "T_z T_zbar = T_(1+log t)" in names


def test_verify_bh_pass_and_fail(capsys, tmp_path):
    one = BiPolynomial.constant(1, 1)
    sc = construct_bh_example([one], [one])
    good = _write(tmp_path, "good.json", sc.to_json())
    code, out, _ = run(capsys, "verify-bh", "--scenario", good)
    assert code == 0
    det = json.loads(out)["reports"][0]["checks"][0]["detail"]
    assert det["A"] and det["B"] and det["C"] and det["degree"] == 8

    # forced failure: h claims T_z T_zbar is Toeplitz with symbol |z|^2
    bad = {"dimension": 1,
           "pairs": [{"f": [{"coeff": "1/1", "alpha": [1], "beta": [0]}], "g": [], "u": [],
                      "v": [{"coeff": "1/1", "alpha": [1], "beta": [0]}]}],
           "h": [{"coeff": "1/1", "alpha": [1], "beta": [1]}],
           "rank_one": []}
    # (A) and (B) both fail here, so the biconditional holds and the run passes
    code, out, _ = run(capsys, "verify-bh", "--scenario", _write(tmp_path, "tbar.json", bad))
    assert code == 0
    assert not json.loads(out)["reports"][0]["checks"][0]["detail"]["A"]

    broken = json.loads(json.dumps(sc.to_json()))
    broken["pairs"][0]["f"] = []   # operator side no longer matches, conditions unchanged in h
    code, out, _ = run(capsys, "verify-bh", "--scenario", _write(tmp_path, "broken.json", broken), "--d", "4")
    det = json.loads(out)["reports"][0]["checks"][0]["detail"]
    assert det["A"] == (det["B"] and det["C"])
    assert code == 0

    assert run(capsys, "verify-bh", "--scenario", _write(tmp_path, "junk.json", "{not json"))[0] == 2
    assert run(capsys, "verify-bh", "--scenario", _write(tmp_path, "nokey.json", {"pairs": []}))[0] == 2


def test_exit_one_on_refutation(capsys, tmp_path):
    # a hand-made report with a refutation re-renders with exit 1
    rep = {"reports": [{"suite": "x", "passed": False, "checks": [
        {"name": "c", "verdict": "fail", "label": "refuted-with-witness", "witness": "w|1"},
        {"name": "s", "verdict": "skip", "label": "skipped", "witness": None}]}], "passed": False}
    path = _write(tmp_path, "r.json", rep)
    code, out, _ = run(capsys, "report", "--input", path)
    assert code == 1
    assert "| c | fail | refuted-with-witness | w\\|1 |" in out
    skip_only = {"reports": [{"suite": "x", "passed": True, "checks": [
        {"name": "s", "verdict": "skip", "label": "skipped", "witness": None}]}]}
    assert run(capsys, "report", "--input", _write(tmp_path, "s.json", skip_only))[0] == 0
    assert run(capsys, "report", "--input", _write(tmp_path, "bad.json", "[]"))[0] == 2


def test_suite_and_report_roundtrip(capsys, tmp_path):
    out_path = tmp_path / "suite.json"
    code, out, _ = run(capsys, "suite", "--n", "1", "--d", "4", "--seed", "3", "--output", str(out_path))
    assert code == 0 and out == ""
    reports = loads(out_path.read_text())
    assert reports[0].suite == "builtin:N=1:D=4:seed=3"
    code, md, _ = run(capsys, "report", "--input", str(out_path))
    assert code == 0
    assert "| check | verdict | label | witness |" in md
    assert "skipped" in md


def test_markdown_format(capsys):
    code, out, _ = run(capsys, "operators", "--n", "2", "--d", "3", "--format", "markdown")
    assert code == 0 and out.startswith("#") and "| check |" in out


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 2))
def test_determinism(seed, n):
    outs = []
    for _ in range(2):
        proc = subprocess.run([sys.executable, "-m", "toeplitz_ball", "identities", "--n", str(n), "--d", "3",
                               "--samples", "3", "--seed", str(seed)], capture_output=True)
        outs.append(proc.stdout)
        assert proc.returncode == 0
    assert outs[0] == outs[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "toeplitz_ball", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "construct" in proc.stdout
