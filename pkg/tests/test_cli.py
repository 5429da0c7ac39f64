import csv
import io
import json

import pytest

from frac_ostrowski import cli

CONFIG = """\
theorem = t1
function = expdecay:lambda=1
function = linear
x_frac = 0.25
x_frac = 0.5
x_frac = 0.75
mu = 0.5
mu = 1
mu = 2
M = 0.8
"""


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_holds(capsys):
    code, out, _ = run(["verify", "--theorem", "c3", "--family", "expdecay:M=0.8,lambda=1", "--a", "0", "--b", "1", "--x", "0.25"], capsys)
    assert code == 0
    assert "holds    true" in out


def test_verify_classical_json(capsys):
    code, out, _ = run(["verify", "--theorem", "classical", "--f", "x^2", "--M", "2", "--a", "0", "--b", "1", "--x", "0.5",
                        "--format", "json", "--deterministic"], capsys)
    assert code == 0
    doc = json.loads(out)
    row = doc["rows"][0]
    assert row["lhs"] == pytest.approx(1.0 / 12.0)
    assert row["rhs"] == pytest.approx(0.5)
    assert doc["schema_version"] == 1 and "timestamp" not in doc
    assert doc["input"]["scenario"]["M"] == 2.0


def test_verify_text_has_twelve_digits(capsys):
    _, out, _ = run(["verify", "--theorem", "c3", "--f", "exp(x)/3", "--M", "1", "--a", "0", "--b", "1", "--x", "0.3"], capsys)
    lhs_line = next(line for line in out.splitlines() if line.startswith("lhs"))
    assert len(lhs_line.split()[1].replace(".", "").lstrip("0")) == 12


@pytest.mark.parametrize(
    "argv, needle",
    [
        (["--theorem", "t1", "--f", "exp(-x)", "--M", "1.5"], "M must lie in (0,1]"),
        (["--theorem", "t1", "--f", "exp(", "--M", "1"], "position 4"),
        (["--theorem", "t1", "--f", "foo(x)", "--M", "1"], "foo"),
        (["--theorem", "t1", "--f", "x"], "--M is required"),
        (["--theorem", "t1", "--f", "x", "--M", "1", "--x", "3"], "x must lie"),
    ],
)
def test_verify_usage_errors(argv, needle, capsys):
    code, _, err = run(["verify", *argv, "--a", "0", "--b", "1"], capsys)
    assert code == 2
    assert needle in err


def test_unknown_theorem_exits_2(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["verify", "--theorem", "t9", "--f", "x", "--a", "0", "--b", "1"])
    assert info.value.code == 2


def test_verify_failure_exit_1(capsys):
    # |f'| = 3 far exceeds M = 0.1, so the classical bound is violated
    code, _, _ = run(["verify", "--theorem", "classical", "--f", "3*x", "--M", "0.1", "--a", "0", "--b", "1", "--x", "0.1"], capsys)
    assert code == 1


def test_verify_accuracy_exit_3(capsys):
    code, out, _ = run(["verify", "--theorem", "t1", "--f", "sin(1/(x+0.01))", "--M", "1",
                        "--a", "0", "--b", "1", "--x", "0.5", "--mu", "0.3", "--max-depth", "2"], capsys)
    assert code == 3
    assert "warning" in out


def test_sign_flag(capsys):
    _, out, _ = run(["verify", "--theorem", "t1", "--f", "x^2", "--M", "1", "--a", "0", "--b", "1", "--x", "0.5",
                     "--sign", "paper", "--format", "json", "--deterministic"], capsys)
    row = json.loads(out)["rows"][0]
    assert row["sign_convention"] == "paper_plus"
    assert row["identity_rhs"] == pytest.approx(0.25)


def test_parse_config():
    spec = cli.parse_config(CONFIG)
    assert spec.functions == ("expdecay:lambda=1", "linear")
    assert spec.mu == (0.5, 1.0, 2.0)
    for bad in ("mu = 1", "theorem = t1\nbogus = 1", "theorem = t1\ntheorem = t2", "theorem = t1\nmu = x", "theorem = t1\njunk"):
        with pytest.raises(cli.UsageError):
            cli.parse_config(bad)


def test_sweep_csv_and_determinism(tmp_path, capsys):
    cfg = tmp_path / "s.cfg"
    cfg.write_text(CONFIG)
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.csv"
        code, _, _ = run(["sweep", "--config", str(cfg), "--out", str(out), "--format", "csv", "--deterministic"], capsys)
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    text = outs[0].decode()
    body = [line for line in text.splitlines() if not line.startswith("#")]
    rows = list(csv.DictReader(io.StringIO("\n".join(body))))
    assert len(rows) == 18
    assert "# holds=18" in text


def test_sweep_json_round_trip(tmp_path, capsys):
    cfg = tmp_path / "s.cfg"
    cfg.write_text(CONFIG)
    code, out, _ = run(["sweep", "--config", str(cfg), "--deterministic"], capsys)
    doc = json.loads(out)
    assert json.loads(json.dumps(doc)) == doc
    assert doc["input"]["theorem_id"] == "t1" and len(doc["rows"]) == 18


def test_sweep_strict_and_unreadable(tmp_path, capsys):
    code, _, err = run(["sweep", "--config", str(tmp_path / "missing.cfg")], capsys)
    assert code == 2 and "cannot read" in err
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(CONFIG + "M = 1.5\n")
    code, out, _ = run(["sweep", "--config", str(cfg), "--deterministic"], capsys)
    assert code == 0 and json.loads(out)["summary"]["errors"] == 18
    code, _, _ = run(["sweep", "--config", str(cfg), "--strict"], capsys)
    assert code == 1


def test_sharpness_and_findings(capsys):
    code, out, _ = run(["sharpness", "--theorem", "c6", "--family", "linear:M=0.5", "--a", "0", "--b", "1",
                        "--format", "csv", "--deterministic"], capsys)
    assert code == 0
    assert out.splitlines()[0].startswith("theorem_id,function")
    code, out, _ = run(["findings", "--format", "json", "--deterministic"], capsys)
    assert [r["id"] for r in json.loads(out)["rows"]][:2] == ["lemma1_sign", "corollary4_form"]
    code, out, _ = run(["findings", "--no-findings"], capsys)
    assert out == "no findings\n"


def test_timestamp_present_by_default(capsys):
    _, out, _ = run(["findings", "--format", "json"], capsys)
    assert "timestamp" in json.loads(out)


def test_family_takes_M_from_flag(capsys):
    base = ["verify", "--theorem", "t1", "--a", "0", "--b", "1", "--mu", "0.5", "--format", "json", "--deterministic"]
    code, out, _ = run(base + ["--family", "expdecay:lambda=1", "--M", "0.8"], capsys)
    assert code == 0
    assert json.loads(out)["input"]["function"] == "expdecay:M=0.8,lambda=1.0"
    code, _, err = run(base + ["--family", "expdecay:lambda=1"], capsys)
    assert code == 2 and "--M is required" in err
