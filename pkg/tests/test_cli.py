import io
import json

import pytest

from germantank import regression as reg
from germantank.cli import main
from germantank.simulator import SimulationConfig, run_trials


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_estimate_known_min(capsys):
    code, out, _ = run(capsys, "estimate", "--method", "known-min", "--serials", "3,7,19")
    assert code == 0
    data = json.loads(out)
    assert data["estimate_rational"] == "73/3"
    assert data["estimate_float"] == pytest.approx(24.333, abs=1e-3)
    assert (data["method"], data["k"], data["statistic"]) == ("known-min", 3, 19)


def test_estimate_rounding_and_file(capsys, tmp_path):
    path = tmp_path / "serials.txt"
    path.write_text("3\n7\n19\n")
    _, out, _ = run(capsys, "estimate", "--file", str(path), "--round", "nearest")
    assert json.loads(out)["estimate_rounded"] == 24
    _, out, _ = run(capsys, "estimate", "--file", str(path), "--round", "ceil", "--method", "unknown-min")
    assert json.loads(out)["estimate_rounded"] == 31


def test_estimate_from_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("3, 7, 19"))
    _, out, _ = run(capsys, "estimate", "--method", "unknown-min")
    assert json.loads(out)["estimate_rational"] == "31"


def test_runtime_error_is_machine_readable(capsys):
    code, _, err = run(capsys, "estimate", "--method", "unknown-min", "--serials", "5")
    assert code == 1
    assert json.loads(err)["error"] == "InvalidParameter"


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["estimate", "--method", "sideways"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["estimate", "--serials", "3,x"])
    assert exc.value.code == 2


def test_pmf_csv(capsys):
    _, out, _ = run(capsys, "pmf", "--variable", "spread", "--n", "4", "--k", "2")
    lines = out.splitlines()
    assert lines[0] == "value,numerator,denominator,float_approx"
    assert lines[1:] == ["1,1,2,0.5", "2,1,3,0.3333333333333333", "3,1,6,0.16666666666666666"]


def test_pmf_json_with_offset(capsys):
    _, out, _ = run(capsys, "--format", "json", "pmf", "--variable", "max", "--n1", "11", "--n2", "13", "--k", "2")
    data = json.loads(out)
    assert data["n"] == 3
    assert [(p["value"], p["numerator"], p["denominator"]) for p in data["probs"]] == [(2, 1, 3), (3, 2, 3)]


def test_simulate_then_regress_round_trip(capsys, tmp_path):
    args = ["--seed", "77", "--out-dir", str(tmp_path), "simulate", "--trials", "800", "--n1", "5"]
    code, out, _ = run(capsys, *args)
    assert code == 0
    header = out.splitlines()[0].split(",")
    assert header[:8] == ["trial_index", "n_true", "k", "m_min", "m_max", "spread", "est_known", "est_unknown"]
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["config"]["seed"] == 77

    in_process = reg.fit_log_model(run_trials(SimulationConfig(77, 800, (100, 2000), (10, 50), 5)).records)
    out_dir = tmp_path / "fit"
    code, out, _ = run(capsys, "--out-dir", str(out_dir), "regress", "--input", str(tmp_path / "trials.csv"), "--model", "log")
    assert code == 0
    assert json.loads(out)["fit"]["coefficients"] == in_process.coefficients
    assert (out_dir / "fitted.csv").read_text().startswith("x,y,fitted,residual\n")


@pytest.mark.parametrize("model, extra", [
    ("simple", []),
    ("simple", ["--no-intercept"]),
    ("per-k", []),
])
def test_regress_models(capsys, tmp_path, model, extra):
    run(capsys, "--seed", "3", "--out-dir", str(tmp_path), "simulate", "--trials", "600", "--k-range", "2:6")
    code, out, _ = run(capsys, "regress", "--input", str(tmp_path / "trials.csv"), "--model", model, *extra)
    assert code == 0
    assert "coefficients" in json.loads(out)["fit"]


def test_regress_power(capsys, tmp_path):
    csv_path = tmp_path / "pts.csv"
    csv_path.write_text("d,mean_people\n1,3.0\n2,12.0\n4,48.0\n")
    _, out, _ = run(capsys, "regress", "--input", str(csv_path), "--model", "power")
    fit = json.loads(out)["fit"]
    assert fit["coefficients"]["a"] == pytest.approx(2)
    assert fit["derived"]["B"] == pytest.approx(3)


SEEDED = [
    ["simulate", "--trials", "300"],
    ["pmf", "--variable", "max", "--n", "12", "--k", "4"],
    ["estimate", "--serials", "4,9,30"],
    ["experiment", "birthday", "--set", "points=100", "--set", "d_lo=50", "--set", "d_hi=900"],
    ["experiment", "sniff-k", "--set", "k_hi=5", "--set", "trials_per_k=100"],
]


@pytest.mark.parametrize("argv", SEEDED, ids=lambda a: a[0] + (a[1] if a[0] == "experiment" else ""))
def test_byte_identical_outputs(capsys, tmp_path, argv):
    outputs = []
    for run_id in ("one", "two"):
        out_dir = tmp_path / run_id
        code, out, _ = run(capsys, "--seed", "123", "--out-dir", str(out_dir), *argv)
        assert code == 0
        files = {p.name: p.read_bytes() for p in sorted(out_dir.iterdir())}
        assert files
        outputs.append((out, files))
    assert outputs[0] == outputs[1]


def test_unknown_experiment_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["experiment", "spies"])
    assert exc.value.code == 2


def test_selfcheck_small(capsys):
    code, out, _ = run(capsys, "selfcheck", "--max-n", "8", "--identity-limit", "30")
    assert code == 0
    assert out.count("PASS") == 4
