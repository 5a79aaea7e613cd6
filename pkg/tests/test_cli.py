import json
import subprocess
import sys

import pytest

from fairdiv.cli import run


def call(*argv):
    code, out, err = run(list(argv))
    return code, (json.loads(out) if out.startswith("{") else out), err


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    return write


def generate(tmp_path, *argv):
    path = tmp_path / "instance.json"
    code, _, _ = call("generate", *argv, "--out", str(path))
    assert code == 0
    return str(path)


def test_generate_then_price_mnw(tmp_path):
    inst = generate(tmp_path, "--family", "mnw-2", "--eps", "1/14")
    code, doc, _ = call("price", "--property", "mnw", "--instance", inst)
    assert code == 0
    assert doc["price"] == doc["strong_price"] == "54/49"
    assert doc["config"]["property"] == "mnw"


def test_price_efx(tmp_path):
    inst = generate(tmp_path, "--family", "efx-2", "--eps", "1/10")
    code, doc, _ = call("price", "--property", "efx", "--instance", inst)
    assert doc["price"] == "7/5"


def test_solve_single_agent(files):
    inst = files("one.json", {"n": 1, "m": 2, "utilities": [[1, 3]]})
    code, doc, _ = call("solve", "--objective", "opt", "--instance", inst)
    assert code == 0 and doc["value"] == 1 and doc["set_size"] == 1


def test_solve_objectives(tmp_path):
    inst = generate(tmp_path, "--family", "welfare-linear", "--n", "3", "--eps", "1/10")
    _, doc, _ = call("solve", "--objective", "mnw", "--instance", inst)
    assert doc["witness"] == [1, 2, 3] and doc["set_size"] == 1
    assert doc["value"] == {"positive_count": 3, "product": "1/100"}
    _, doc, _ = call("solve", "--objective", "leximin", "--instance", inst)
    assert doc["value"] == ["1/10", "1/10", 1]
    _, doc, _ = call("solve", "--objective", "mew", "--instance", inst)
    assert doc["value"] == "1/10" and doc["social_welfare"] == "6/5"
    _, doc, _ = call("solve", "--objective", "opt", "--instance", inst)
    assert doc["value"] == 2


def test_check(tmp_path, files):
    inst = generate(tmp_path, "--family", "ef1-2", "--eps", "1/12")
    bad = files("bad.json", {"owner": [1, 2, 2]})
    code, doc, _ = call("check", "--property", "ef1", "--instance", inst, "--allocation", bad)
    assert code == 0 and doc["satisfied"] is False
    assert doc["violation"] == {"type": "envy", "agent": 1, "other": 2, "removed": 2}
    _, doc, _ = call("check", "--property", "po", "--instance", inst, "--allocation", bad)
    assert doc["satisfied"] is True


@pytest.mark.parametrize("alg", ["rr", "ef1-2", "efx-2", "bal-2", "bal-n", "bucketed-rr"])
def test_construct(tmp_path, alg):
    inst = generate(tmp_path, "--family", "ef1-2", "--eps", "1/12")
    code, doc, _ = call("construct", "--alg", alg, "--instance", inst)
    assert code == 0
    assert doc["guarantee"]["holds"] is True
    assert doc["certificates"]["EF1"]["satisfied"] or alg in ("bal-2", "bal-n")


def test_construct_rr_order_and_ties(tmp_path):
    inst = generate(tmp_path, "--family", "rr-strong", "--n", "2", "--m", "4")
    _, doc, _ = call("construct", "--alg", "rr", "--order", "2,1", "--instance", inst)
    assert doc["social_welfare"] == "3/2"
    _, doc, _ = call("construct", "--alg", "rr", "--order", "1,2", "--ties", "adversarial", "--instance", inst)
    assert doc["social_welfare"] == "1/2"
    code, _, err = call("construct", "--alg", "rr", "--order", "1,1", "--instance", inst)
    assert code == 2 and "permutation" in err


def test_search_is_deterministic():
    argv = ["search", "--property", "efx", "--n", "2", "--m", "3", "--seed", "3", "--iters", "40"]
    one = run(argv)
    many = run(argv + ["--workers", "3"])
    assert one == many and one[0] == 0


def test_error_exit_codes(tmp_path, files):
    code, _, err = call("price", "--property", "ef1", "--instance", str(tmp_path / "missing.json"))
    assert code == 4 and json.loads(err)["error"]["type"] == "file_error"
    broken = files("broken.json", {"utilities": [[0, 0]]})
    code, _, err = call("price", "--property", "ef1", "--instance", broken)
    assert code == 2 and json.loads(err)["error"]["type"] == "bad_input"
    big = files("big.json", {"utilities": [[1] * 8] * 3})
    code, _, err = call("price", "--property", "ef1", "--instance", big, "--budget", "100")
    assert code == 3 and json.loads(err)["error"]["type"] == "budget_exceeded"
    code, _, _ = call("generate", "--family", "ef1-2", "--eps", "1/5")
    assert code == 2
    code, _, _ = call("price", "--property", "nope", "--instance", big)
    assert code == 2
    code, _, _ = call("frobnicate")
    assert code == 2


def test_budget_from_environment(monkeypatch, files):
    big = files("big.json", {"utilities": [[1] * 8] * 3})
    monkeypatch.setenv("FAIRDIV_BUDGET", "100")
    code, _, _ = call("price", "--property", "ef1", "--instance", big)
    assert code == 3


def test_table_output(tmp_path):
    inst = generate(tmp_path, "--family", "efx-2", "--eps", "1/10")
    code, out, _ = call("price", "--property", "efx", "--instance", inst, "--format", "table")
    assert code == 0 and "7/5 (~1.4)" in out


def test_reproduce_default_passes():
    code, doc, _ = call("reproduce")
    assert code == 0 and doc["failed_rows"] == []
    props = {row["property"] for row in doc["rows"]}
    assert props == {"EF1", "EFX", "RR", "BAL", "MNW", "MEW", "LEX", "PO"}
    rr = next(r for r in doc["rows"] if r["fixture"] == {"family": "rr-price", "n": 3, "x": 6})
    assert rr["price"] == "8/3"
    po = next(r for r in doc["rows"] if r["fixture"].get("family") == "po-quadratic" and r["fixture"]["n"] == 2)
    assert po["expected"]["strong_price"] == po["strong_price"]
    assert any(r.get("note") for r in doc["rows"])


def test_reproduce_csv_and_failures():
    code, out, _ = call("reproduce", "--format", "csv", "--sizes", "2", "--count", "10")
    assert code == 0 and out.splitlines()[0].startswith("property,bound,fixture")
    code, _, _ = call("solve", "--objective", "opt", "--format", "csv", "--instance", "x")
    assert code in (2, 4)


def test_console_script_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "fairdiv.cli", "generate", "--family", "identity-match", "--n", "2"],
        capture_output=True, text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["utilities"] == [[1, 0], [0, 1]]
