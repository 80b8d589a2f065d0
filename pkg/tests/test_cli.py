import io
import json
import os
import subprocess
import sys
from pathlib import Path

from newtonbkk.cli import parse_family, parse_field, run, system_from_json
from newtonbkk.polysys import GF, QQ

DATA = Path(__file__).parent / "data"


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def call_json(*argv):
    code, text = call(*argv, "--output", "json")
    return code, json.loads(text) if text else None


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data) if not isinstance(data, str) else data, encoding="utf-8")
    return str(path)


def test_parse_field_and_family():
    assert parse_field("Q") == QQ and parse_field("32003") == GF(32003)
    assert parse_field({"Fp": 7}) == GF(7) and parse_field("GF(5)") == GF(5)
    fam = parse_family("1,2;3", 3)
    assert sorted(sorted(s) for s in fam) == [[1, 2], [3]]
    assert frozenset() in parse_family("[[]]", 2)


def test_mult0_on_ex0():
    code, report = call_json("mult0", str(DATA / "ex0_supports.json"))
    assert code == 0 and report["value"] == 6
    assert [entry["I"] for entry in report["ledger"]] == [[3], [1, 2, 3]]


def test_text_report_lists_ledger_lines():
    code, text = call("mult0", str(DATA / "ex0_supports.json"))
    lines = text.strip().splitlines()
    assert lines[0] == "value: 6" and sum(line.startswith("  {") for line in lines) == 2


def test_bkk_and_mixed_volume_on_ex0():
    assert call_json("bkk", str(DATA / "ex0_supports.json"))[1]["value"] == 9
    assert call_json("mixed-volume", str(DATA / "ex0_supports.json"))[1]["value"] == 3
    # removing the origin leaves the torus roots
    code, report = call_json("bkk", str(DATA / "ex0_supports.json"), "--S", "[[1,2]]")
    assert report["value"] == 3


def test_generic_coefficients_are_deterministic():
    a = call("check-affine", str(DATA / "ex0_generic.json"), "--seed", "7", "--output", "json")
    b = call("check-affine", str(DATA / "ex0_generic.json"), "--seed", "7", "--output", "json")
    assert a == b and a[0] == 0
    s1 = system_from_json(json.loads((DATA / "ex0_generic.json").read_text()), seed=7)
    s2 = system_from_json(json.loads((DATA / "ex0_generic.json").read_text()), seed=8)
    assert [f.terms for f in s1.polynomials] != [f.terms for f in s2.polynomials]


def test_check_local_and_degenerate_exit(tmp_path):
    assert call("check-local", str(DATA / "ex0_generic.json"))[0] == 0
    path = write(tmp_path, "pair.txt", "x1^2 - x2^2\nx1^2 + x1*x2 - 2*x2^2 + x1^3\n")
    code, report = call_json("check-local", path, "--format", "expr", "--field", "32003")
    assert code == 3 and report["witness"]["kind"] == "origin"


def test_milnor_commands():
    path = str(DATA / "milnor_not_newton.txt")
    assert call_json("milnor", path, "--format", "expr")[1]["value"] == 0
    code, report = call_json("check-newton", path, "--format", "expr")
    assert code == 3
    assert call_json("kushnirenko", path, "--format", "expr")[1]["value"] == 0


def test_check_inner(tmp_path):
    path = write(tmp_path, "f.txt", "x3^3 + x1^3 + 2*x1^2*x2 + x1*x2^2 + x2^6 + x2^4*x3\n")
    code, report = call_json("check-inner", path, "--format", "expr")
    assert code == 3 and report["witness"]["I"] == [1, 2]


def test_error_exit_codes(tmp_path):
    assert call("mult0", write(tmp_path, "a.json", '{"n": 2,'))[0] == 1
    bad = {"n": 2, "supports": [[[1, -1]], [[1, 0]]]}
    assert call("mult0", write(tmp_path, "b.json", bad))[0] == 2
    wrong = {"n": 3, "supports": [[[1, 0, 0]]]}
    assert call("mult0", write(tmp_path, "c.json", wrong))[0] == 2
    assert call("mult0", write(tmp_path, "d.txt", "x1 + ^"), "--format", "expr")[0] == 1
    assert call("milnor", str(DATA / "ex0_supports.json"))[0] == 2
    assert call("mult0", str(DATA / "ex0_supports.json"), "--max-n", "2")[0] == 2


def test_budget_exit(tmp_path):
    path = write(tmp_path, "f.txt", "x1^4 + x2^5 + x1^2*x2^2 + x1^3*x2\n")
    assert call("milnor", path, "--format", "expr", "--oracle-budget", "0")[0] == 4


def test_oracle_compare_prints_agree_lines():
    code, text = call("oracle-compare", "mult0", "--seeds", "1..5")
    lines = text.strip().splitlines()
    assert code == 0 and len(lines) == 5
    assert all(line.startswith(("AGREE", "DEGENERATE")) for line in lines)
    assert sum(line.startswith("AGREE") for line in lines) >= 3


def test_oracle_compare_with_input_file():
    code, text = call("oracle-compare", "bkk", str(DATA / "ex0_supports.json"), "--seeds", "1,2")
    assert code == 0 and text.count("AGREE") == 2


def test_corpus_has_no_unexpected_failures():
    code, report = call_json("corpus")
    assert code == 0
    statuses = {row["case"]: row["status"] for row in report["rows"]}
    assert "FAIL" not in statuses.values()
    assert statuses["x1+(x2+x3)^3 minimal Milnor number"] == "KNOWN-DEVIATION"


def test_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("NEWTONBKK_OUTPUT", "json")
    code, text = call("mixed-volume", str(DATA / "ex0_supports.json"))
    assert json.loads(text)["value"] == 3


def test_console_entry_point_runs():
    env = dict(os.environ)
    proc = subprocess.run([sys.executable, "-m", "newtonbkk", "mult0", str(DATA / "ex0_supports.json")],
                          capture_output=True, text=True, env=env, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("value: 6")
