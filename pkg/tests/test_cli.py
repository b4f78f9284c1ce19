import csv
import io
import json

import numpy as np
import pytest

from bcfeedback.cli import EXIT_INCONSISTENT, EXIT_OK, EXIT_USAGE, main, parse_config
from bcfeedback.info import JointPmf
from bcfeedback.instances import original_dueck_noise

FAST = ["--grid", "4", "--starts", "1", "--iters", "20"]


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_awgn_sum_rate_csv(capsys):
    code, out, _ = run(capsys, ["awgn-sum-rate", "--snr", "10"] + FAST)
    assert code == EXIT_OK
    header, values = rows(out)
    rec = dict(zip(header, values))
    assert float(rec["sum_rate"]) > float(rec["no_feedback"])
    assert rec["reference"] == "1.842"


def test_awgn_sum_rate_json_and_output_file(capsys, tmp_path):
    path = tmp_path / "out.json"
    code, out, _ = run(capsys, ["awgn-sum-rate", "--snr", "3", "--format", "json",
                                "--output", str(path)] + FAST)
    assert code == EXIT_OK and out == ""
    rec = json.loads(path.read_text())
    assert "reference" not in rec
    assert rec["no_feedback"] == pytest.approx(0.5 * np.log2(4))


def test_usage_errors(capsys):
    assert run(capsys, ["awgn-sum-rate"])[0] == EXIT_USAGE
    assert run(capsys, ["awgn-sum-rate", "--snr", "-1"])[0] == EXIT_USAGE
    assert run(capsys, ["awgn-sum-rate", "--snr", "10", "--grid", "2"])[0] == EXIT_USAGE
    assert run(capsys, ["awgn-sum-rate", "--snr", "10", "--threads", "0"])[0] == EXIT_USAGE
    assert run(capsys, ["no-such-command"])[0] == EXIT_USAGE
    code, _, err = run(capsys, ["blackwell", "--p", "0.7", "--alpha", "0.1", "--beta", "0.1"])
    assert code == EXIT_USAGE and "error" in err


def test_sweep_csv_with_bad_value(capsys):
    code, out, err = run(capsys, ["sweep", "--axis", "rho", "--values", "0,abc,1"] + FAST)
    assert code == EXIT_OK
    table = rows(out)
    assert table[0] == ["axis_value", "sum_rate", "alpha", "beta", "D", "P1"]
    assert [r[0] for r in table[1:]] == ["0", "", "1"]
    assert table[2][1] == ""
    assert "warning" in err


def test_sweep_default_snr():
    cfg = parse_config(["sweep", "--axis", "sigmaf2", "--values", "0,1"])
    assert cfg.args["snr"] == 10.0
    assert cfg.format == "csv" and cfg.seed == 0 and cfg.threads == 1


def test_dueck_original_slice(capsys):
    code, out, _ = run(capsys, ["dueck", "--original"])
    assert code == EXIT_OK
    table = rows(out)
    assert table[0] == ["R1", "R2"]
    assert table[1:] == [["0", "0"], ["1", "0"], ["1", "1"], ["0", "1"]]


def test_dueck_json_and_dump_then_region_eval(capsys, tmp_path):
    pn = tmp_path / "pn.json"
    pn.write_text(original_dueck_noise().to_json())
    code, out, _ = run(capsys, ["dueck", "--pn", str(pn), "--format", "json",
                                "--dump-model", str(tmp_path / "m")])
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["max_bound_diff"] < 1e-9
    assert rep["sum_rate"]["closed_form"] == 2.0
    code, out, _ = run(capsys, ["region", "eval", "--dist", str(tmp_path / "m" / "dist.json"),
                                "--kernel", str(tmp_path / "m" / "kernel.json")])
    assert code == EXIT_OK
    pts = [tuple(map(float, r)) for r in rows(out)[1:]]
    assert max(a + b for a, b in pts) == pytest.approx(2.0, abs=1e-9)


def test_region_eval_inconsistent(capsys, tmp_path):
    P = JointPmf.from_flat((("C", 2), ("U", 2)), np.array([[0.4, 0.1], [0.1, 0.4]]))
    (tmp_path / "d.json").write_text(P.to_json())
    kernel = {"inputs": [{"name": "C~", "card": 2}], "outputs": [{"name": "C", "card": 2}],
              "table": [1, 0, 1, 0]}
    (tmp_path / "k.json").write_text(json.dumps(kernel))
    code, _, err = run(capsys, ["region", "eval", "--dist", str(tmp_path / "d.json"),
                                "--kernel", str(tmp_path / "k.json")])
    assert code == EXIT_INCONSISTENT
    assert "error" in err


def test_region_eval_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, ["region", "eval", "--dist", str(tmp_path / "nope.json"),
                              "--kernel", str(tmp_path / "nope.json")])
    assert code == EXIT_USAGE


def test_blackwell_json(capsys):
    code, out, _ = run(capsys, ["blackwell", "--p", "0.1", "--alpha", "0.4", "--beta", "0.4",
                                "--complete", "--format", "json"])
    assert code == EXIT_OK
    assert json.loads(out)["max_bound_diff"] < 1e-9


def test_fme_derive_json(capsys):
    code, out, _ = run(capsys, ["fme", "derive", "--emit", "json"])
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["vars"] == ["R0", "R1", "R2"]
    assert {k for q in d["inequalities"] for k in q["var_coeffs"]} <= {"R0", "R1", "R2"}


def test_fme_derive_bad_order(capsys):
    assert run(capsys, ["fme", "derive", "--order", "rho1,rho2"])[0] == EXIT_USAGE


def test_fme_compare_small(capsys):
    code, out, _ = run(capsys, ["fme", "compare", "--instances", "2", "--format", "json"])
    assert code == EXIT_OK
    study = json.loads(out)
    assert study["compared"] == 2
    assert study["derived_inside_stated"]


def test_compare_against_references(capsys):
    code, out, _ = run(capsys, ["compare", "--against", "no-feedback", "--snr", "10"] + FAST)
    assert code == EXIT_OK
    rec = dict(zip(*rows(out)))
    assert rec["ordering"] == "ours > reference"
    code, _, _ = run(capsys, ["compare", "--against", "bhaskaran-ref", "--snr", "7"] + FAST)
    assert code == EXIT_USAGE
