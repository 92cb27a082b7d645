import json
import math
import subprocess
import sys

import pytest

from chainforge.chain import Chain
from chainforge.cli import emit_fidelity_table, run
from chainforge.pte import E1, F1
from chainforge.sampling import random_chain


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_json(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


@pytest.fixture
def example_file(tmp_path, example_chain):
    return write_json(tmp_path, "chain.json", example_chain.to_json())


def test_repro_example(capsys):
    code, out, err = call(capsys, "repro", "example-6-1")
    assert code == 0
    obj = json.loads(out)
    assert all(obj["checks"].values())
    assert obj["build"]["chain"]["lambda_sq"] == ["5/2", "9/10", "8/5"]
    assert obj["pst"]["fidelity"] >= 1 - 1e-9
    assert err.strip()


def test_repro_seven_chain(capsys):
    code, out, _ = call(capsys, "repro", "sec-6-1-seven-chain")
    assert code == 0
    obj = json.loads(out)
    assert obj["chain"]["spectrum"] == ["5", "4", "3", "1", "0", "-2", "-3", "-4"]
    assert obj["p_5"]["coeffs"] == ["-315/4", "144", "40", "-25", "-5/2", "1"]


def test_repro_six_chain(capsys):
    code, out, _ = call(capsys, "repro", "sec-6-1-six-chain")
    assert code == 0
    assert json.loads(out)["spectrum"] == ["5", "4", "3", "1", "0", "-3", "-4"]


def test_repro_pte5(capsys):
    code, out, _ = call(capsys, "repro", "pte5-list")
    assert code == 0
    rows = json.loads(out)["solutions"]
    assert [r["kleiman"]["difference"] % 24 for r in rows] == [0, 0]
    assert rows[0]["kleiman"]["difference"] == 5040
    assert "chain" in rows[0]["pst_chain"]
    assert rows[1]["pst_chain"]["error"] == "InfeasibleSpectrum"


def test_build(capsys, tmp_path):
    qm = write_json(tmp_path, "qm.json", {"coeffs": ["-5/2", 0, 1]})
    qtop = write_json(tmp_path, "qtop.json", {"roots": [2, 1, -1, -2]})
    out_path = tmp_path / "out.json"
    code, out, _ = call(capsys, "-o", str(out_path), "build", "--qm", qm, "--qtop", qtop)
    assert code == 0 and out == ""
    obj = json.loads(out_path.read_text())
    assert obj["tau"] == ["1/10", "2/5", "2/5", "1/10"]


def test_build_rejects(capsys, tmp_path):
    qm = write_json(tmp_path, "qm.json", {"roots": [3]})
    qtop = write_json(tmp_path, "qtop.json", {"roots": [1, 2]})
    code, out, err = call(capsys, "build", "--qm", qm, "--qtop", qtop)
    assert code == 1 and "InterlacingViolation" in err


def test_chain_subcommands(capsys, example_file):
    code, out, _ = call(capsys, "chain", "eigen", "--chain", example_file)
    assert code == 0 and json.loads(out)["exact"] == ["2", "1", "-1", "-2"]
    code, out, _ = call(capsys, "chain", "ops", "--chain", example_file)
    assert json.loads(out)["ops"][2]["text"] == "x^2 - 5/2"
    code, out, _ = call(capsys, "chain", "alpha", "--chain", example_file, "--vertex", "0")
    assert code == 0
    code, out, _ = call(capsys, "chain", "amplitude", "--chain", example_file, "--t", str(math.pi), "--from", "0", "--to", "2")
    assert code == 0 and json.loads(out)["abs"] == pytest.approx(1, abs=1e-9)
    code, _, err = call(capsys, "chain", "amplitude", "--chain", example_file)
    assert code == 1 and "needs" in err


def test_cospec(capsys, example_file, tmp_path):
    code, out, _ = call(capsys, "cospec", "check", "--chain", example_file, "--pair", "0", "2", "--exact")
    assert code == 0 and json.loads(out)["C_exact"] == "3/2"
    code, out, _ = call(capsys, "cospec", "check", "--chain", example_file, "--pair", "0", "1")
    assert code == 2 and json.loads(out)["cospectral"] is False
    code, out, _ = call(capsys, "cospec", "construct", "--l", "1", "--m", "3", "--d", "4")
    assert code == 0
    code, _, err = call(capsys, "cospec", "construct", "--l", "0", "--m", "1", "--d", "2")
    assert code == 1 and "InfeasiblePosition" in err
    path3 = write_json(tmp_path, "p3.json", Chain.path(3).to_json())
    code, out, _ = call(capsys, "cospec", "extend", "--chain", path3, "--pair", "0", "2", "--k", "2", "--exact")
    assert code == 0 and json.loads(out)["certificate"]["pair"] == [2, 4]


def test_pst(capsys, example_file):
    code, out, _ = call(capsys, "pst", "check", "--chain", example_file, "--pair", "0", "2")
    assert code == 0 and json.loads(out)["C"] == "2/3"
    code, out, _ = call(capsys, "pst", "check", "--chain", example_file, "--pair", "0", "1")
    assert code == 2
    code, out, _ = call(capsys, "pst", "check", "--chain", example_file, "--pair", "0", "2", "--numeric")
    assert code == 0 and json.loads(out)["fidelity"] == pytest.approx(1, abs=1e-9)
    code, out, _ = call(capsys, "pst", "build", "--spectrum", "2,1,-1,-2", "--m", "2")
    assert code == 0 and json.loads(out)["chain"]["lambda_sq"] == ["5/2", "9/10", "8/5"]
    code, out, _ = call(capsys, "pst", "shrink", "--spectrum", "5,4,3,1,0,-2,-3,-4", "--m", "5", "--d-target", "6", "--certify")
    assert code == 0 and json.loads(out)["certificate"]["fidelity"] >= 1 - 1e-9


def test_pst_scan_exit_codes(capsys):
    code, out, _ = call(capsys, "pst", "scan", "--d", "4", "--bound", "6")
    assert code == 2
    lines = [json.loads(s) for s in out.splitlines()]
    assert lines == [{"summary": True, "d": 4, "bound": 6, "examined": 495, "found": 0}]
    code, out, _ = call(capsys, "pst", "scan", "--d", "3", "--bound", "2")
    assert code == 0
    assert json.loads(out.splitlines()[0]) == {"spectrum": [2, 1, -1, -2]}


def test_pte(capsys, tmp_path):
    bad = write_json(tmp_path, "bad.json", {"E": [0, 1], "F": [0, 2]})
    code, out, _ = call(capsys, "pte", "verify", "--file", bad)
    assert code == 2 and json.loads(out)["valid"] is False
    good = write_json(tmp_path, "good.json", {"E": list(E1), "F": list(F1)})
    code, out, _ = call(capsys, "pte", "verify", "--file", good)
    obj = json.loads(out)
    assert code == 0 and obj["gap"] == 5040 and obj["kleiman"]["divides"]
    code, out, _ = call(capsys, "pte", "search", "--n", "3", "--lo", "0", "--hi", "7", "--literal")
    sols = [json.loads(s) for s in out.splitlines()[:-1]]
    assert {"E": [1, 5, 6], "F": [2, 3, 7]} in [{"E": s["E"], "F": s["F"]} for s in sols]
    code, out, _ = call(capsys, "pte", "to-pst-chain", "--file", good)
    assert code == 0 and json.loads(out)["certificate"]["pair"] == [0, 5]
    code, out, _ = call(capsys, "pte", "to-chain", "--E", "2,-2", "--F", "1,-1")
    assert code == 0
    chain_path = write_json(tmp_path, "c.json", json.loads(out)["chain"])
    code, out, _ = call(capsys, "pte", "from-chain", "--chain", chain_path, "--m", "2")
    assert code == 0 and sorted(json.loads(out)["E"]) in ([-2, 2], [-1, 1])


def test_usage_errors(capsys):
    assert call(capsys, "bogus")[0] == 1
    assert call(capsys, "pst", "scan", "--d", "4")[0] == 1
    assert call(capsys, "chain", "eigen", "--chain", "/nonexistent.json")[0] == 1


def test_fidelity_csv(capsys, example_file):
    code, out, _ = call(capsys, "fidelity", "--chain", example_file, "--from", "0", "--to", "2", "--steps", "11")
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[0] == "t,fidelity" and len(rows) == 12
    t, f = map(float, rows[-1].split(","))
    assert t == pytest.approx(math.pi) and f == pytest.approx(1, abs=1e-9)


def test_emit_fidelity_table(example_chain):
    rows = emit_fidelity_table(example_chain, 1, 1, 2.0, 5)
    assert rows[0] == (0.0, pytest.approx(1.0))
    ts = [t for t, _ in rows]
    assert ts == sorted(ts)
    with pytest.raises(ValueError):
        emit_fidelity_table(example_chain, 0, 2, 1.0, 1)


def test_fidelity_bounded_random():
    import random

    rng = random.Random(2)
    for _ in range(10):
        c = random_chain(rng, rng.randint(1, 6))
        for _, f in emit_fidelity_table(c, 0, c.d, 10.0, 50):
            assert 0 <= f <= 1 + 1e-9


def test_manifest_determinism(capsys, tmp_path):
    m1, m2 = tmp_path / "m1.json", tmp_path / "m2.json"
    code1, out1, _ = call(capsys, "--manifest", str(m1), "--workers", "2", "pst", "scan", "--d", "3", "--bound", "4")
    code2, out2, _ = call(capsys, "--manifest", str(m2), "--workers", "1", "pst", "scan", "--d", "3", "--bound", "4")
    assert out1 == out2
    a, b = json.loads(m1.read_text()), json.loads(m2.read_text())
    assert a["outputs"] == b["outputs"]
    assert a["version"] == "0.1.0" and a["options"]["workers"] == 2
    first = m1.read_bytes()
    call(capsys, "--manifest", str(m1), "--workers", "2", "pst", "scan", "--d", "3", "--bound", "4")
    assert m1.read_bytes() == first


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "chainforge.cli", "repro", "example-6-1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["checks"]
    proc = subprocess.run([sys.executable, "-m", "chainforge.cli", "pst", "scan", "--d", "4", "--bound", "6"], capture_output=True, text=True)
    assert proc.returncode == 2

