import json
import subprocess
import sys

import jsonschema
import pytest

from ffgeom.cli import main
from ffgeom.schema import AUDIT_SCHEMA, CERTIFICATE_SCHEMA

TREE = "vertices=3 edges=1-2,2-3 pin=1"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_and_stats(tmp_path, capsys):
    path = tmp_path / "e.txt"
    assert run(capsys, "gen", "--p", "3", "--kind", "grid", "--side", "3", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "stats", "--input", str(path), "--statistic", "T*")
    assert code == 0 and json.loads(out)["value"] == "216"
    code, out, _ = run(capsys, "stats", "--input", str(path), "--statistic", "pinned", "--pin", "0,0")
    assert json.loads(out)["distances"] == [1, 2]
    code, out, _ = run(capsys, "stats", "--input", str(path), "--statistic", "histogram", "--pin", "0,0")
    assert json.loads(out)["counts"] == {"0": 1, "1": 4, "2": 4}
    code, out, _ = run(capsys, "stats", "--p", "5", "--kind", "random", "--size", "3", "--statistic", "Q",
                       "--mode", "symmetric", "--format", "csv")
    assert out.splitlines()[0].startswith("statistic,")


def test_audit_and_certify(capsys):
    code, out, _ = run(capsys, "audit", "--p", "7", "--size", "10", "--seed", "4", "--which", "incidence")
    assert code == 0
    jsonschema.validate(json.loads(out), AUDIT_SCHEMA)
    code, out, _ = run(capsys, "audit", "--p", "5", "--kind", "isotropic_line", "--size", "5", "--which", "M",
                       "--tree", "vertices=2 edges=1-2 pin=1")
    assert code == 2 and json.loads(out)["holds"] is False
    code, out, _ = run(capsys, "certify", "--p", "5", "--size", "8", "--tree", TREE, "--regime", "arbitrary")
    assert code == 0
    jsonschema.validate(json.loads(out), CERTIFICATE_SCHEMA)


def test_trees(capsys):
    code, out, _ = run(capsys, "trees", "--p", "3", "--kind", "grid", "--side", "3", "--tree", TREE,
                       "--pin", "0,0")
    rec = json.loads(out)
    assert code == 0 and rec["count"] == "4" and int(rec["lower_bound"]) <= 4


def test_errors_exit_one(capsys):
    assert run(capsys, "gen", "--p", "4")[0] == 1
    assert run(capsys, "gen", "--p", "3", "--kind", "isotropic_line")[0] == 1
    assert run(capsys, "trees", "--p", "3", "--tree", "vertices=3 edges=1-2 pin=1", "--size", "3")[0] == 1
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_sweep_and_entry_point(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"p": 3, "E": {"kind": "grid", "params": {"side": 3}}, "select": ["T*"]}))
    out = tmp_path / "r.csv"
    proc = subprocess.run([sys.executable, "-m", "ffgeom.cli", "sweep", str(cfg), "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert out.read_text().splitlines()[1].split(",")[8] == "216"
