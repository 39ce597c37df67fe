"""CLI surface: exit codes, report schema, emission formats, determinism."""

import csv
import io
import json
from importlib import resources

import jsonschema
import pytest

from moduli_sep import cli


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def load_schema():
    with resources.files("moduli_sep").joinpath("schema/check_report.schema.json").open() as fh:
        return json.load(fh)


def test_constants_pass_and_json_schema(capsys):
    code, out = run(["--emit", "json", "constants"], capsys)
    assert code == 0
    schema = load_schema()
    records = [json.loads(line) for line in out.splitlines() if line.strip()]
    assert len(records) == 8
    for rec in records:
        jsonschema.validate(rec, schema)
        assert rec["passed"] is True
        assert rec["schema_version"] == "1"


def test_table1_k1_pass(capsys):
    code, out = run(["--emit", "json", "table1", "--k", "1"], capsys)
    assert code == 0
    recs = [json.loads(line) for line in out.splitlines() if line.strip()]
    assert {r["params"]["mode"] for r in recs} == {"all", "equal"}
    for rec in recs:
        jsonschema.validate(rec, load_schema())
        assert rec["passed"]
        assert rec["min_value"]["value"]
        assert rec["witness"]["distance"]["radius"]


def test_table1_k4_requires_long_run(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["table1", "--k", "4"])
    assert exc.value.code == 64


def test_usage_error_unknown_subcommand():
    with pytest.raises(SystemExit) as exc:
        cli.main(["definitely-not-a-command"])
    assert exc.value.code == 64


def test_separation_negative_control_exit_code(capsys):
    code, out = run(["--emit", "json", "separation", "--X", "100",
                     "--bound-scale", "1000000"], capsys)
    assert code == 1
    rec = json.loads(out.splitlines()[0])
    assert rec["passed"] is False
    assert rec["witness"] is not None


def test_unclassified_pair_exit_code(capsys):
    code = cli.main(["cross-pairs", "--pair=-3,-4"])
    assert code == 65


def test_classify_cli(capsys):
    code, out = run(["--emit", "json", "classify", "--dx", "-15", "--dy", "-20",
                     "--alpha", "3/2"], capsys)
    assert code == 0
    rec = json.loads(out.splitlines()[0])
    assert rec["witness"]["kind"] == "generates"
    code, out = run(["--emit", "json", "classify", "--dx", "-15", "--dy", "-20",
                     "--alpha=-1323/8704"], capsys)
    rec = json.loads(out.splitlines()[0])
    assert rec["witness"]["kind"] == "exception-quadratic"


def test_orbit_dump(capsys):
    code, out = run(["--emit", "json", "orbit", "--d", "-23"], capsys)
    assert code == 0
    rec = json.loads(out.splitlines()[0])
    orbs = rec["witness"]["orbit"]
    assert len(orbs) == 3
    assert rec["witness"]["class_polynomial"] == [
        "12771880859375", "-5151296875", "3491750", "1"]
    assert orbs[0]["dominance"] == "dominant"


def test_invalid_discriminant_usage_exit(capsys):
    code = cli.main(["orbit", "--d", "-5"])
    assert code == 64


def test_csv_emission(tmp_path, capsys):
    out_file = tmp_path / "report.csv"
    code, _ = run(["--emit", "csv", "--out", str(out_file), "cderiv", "--X", "50"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out_file.read_text())))
    assert rows[0] == ["check_id", "item", "passed", "margin", "witness", "prec_bits", "wall_ms"]
    assert len(rows) > 1


def test_out_file_and_determinism(tmp_path, capsys):
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["--emit", "json", "--out", str(f1), "bad-list"]) == 0
    assert cli.main(["--emit", "json", "--out", str(f2), "bad-list"]) == 0
    capsys.readouterr()
    a = json.loads(f1.read_text())
    b = json.loads(f2.read_text())
    a.pop("wall_ms"), b.pop("wall_ms")
    assert a == b
    assert "complete assuming" in " ".join(a["notes"])


def test_workers_flag_results_identical(capsys):
    code1, out1 = run(["--emit", "json", "--workers", "1", "cderiv", "--X", "60"], capsys)
    code2, out2 = run(["--emit", "json", "--workers", "2", "cderiv", "--X", "60"], capsys)
    assert code1 == code2 == 0
    r1, r2 = json.loads(out1.splitlines()[0]), json.loads(out2.splitlines()[0])
    r1.pop("wall_ms"), r2.pop("wall_ms")
    assert r1 == r2
