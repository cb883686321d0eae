import json
import math
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from entlab import cli, io
from entlab import channels as chn


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def load_checked(path):
    obj = json.loads(path.read_text())
    kind = obj["schema"].split("/", 1)[1]
    jsonschema.validate(obj, io.load_schema(kind))
    return obj


def test_diagram_default_grid_csv(capsys):
    code, out, _ = run(["diagram", "--channel", "depolarizing", "--p", 0.5, "--measure", "concurrence",
                        "--families", "werner,pure", "--grid", 200], capsys)
    assert code == 0
    rows = io.read_diagram_csv(out)
    assert len(rows) == 400
    assert {r["family"] for r in rows} == {"werner", "pure"}
    werner_end = [r for r in rows if r["family"] == "werner" and r["param"] == 1.0]
    assert werner_end[0]["e_in"] == pytest.approx(1.0, abs=1e-9)
    assert werner_end[0]["e_out"] == pytest.approx(0.25, abs=1e-9)


def test_diagram_identity_on_diagonal(capsys):
    code, out, _ = run(["diagram", "--channel", "identity", "--grid", 30], capsys)
    assert code == 0
    for r in io.read_diagram_csv(out):
        assert r["e_out"] == pytest.approx(r["e_in"], abs=1e-12)


def test_diagram_grid_one(capsys):
    code, out, _ = run(["diagram", "--grid", 1], capsys)
    rows = io.read_diagram_csv(out)
    assert code == 0 and len(rows) == 2
    assert [r["param"] for r in rows] == [0.0, 0.0]


def test_diagram_svg_and_csv(tmp_path, capsys):
    target = tmp_path / "plot.svg"
    code, out, _ = run(["diagram", "--grid", 50, "--out", target], capsys)
    assert code == 0 and "100 diagram points" in out
    svg = target.read_text()
    assert svg.startswith("<svg") and svg.count("<circle") == 100
    assert 'stroke-dasharray' in svg  # the E_out = E_in reference line
    assert len(io.read_diagram_csv((tmp_path / "plot.csv").read_text())) == 100


def test_diagram_errors(tmp_path, capsys):
    assert run(["diagram", "--channel", "nonsense"], capsys)[0] == 2
    assert run(["diagram", "--grid", 0], capsys)[0] == 2
    qutrit = tmp_path / "qutrit.json"
    qutrit.write_text(io.dumps(io.channel_to_json(chn.identity_channel(3))))
    assert run(["diagram", "--channel", qutrit], capsys)[0] == 3


def test_violations_found(tmp_path, capsys):
    target = tmp_path / "cert.json"
    code, out, _ = run(["violations", "--channel", "depolarizing", "--p", 0.5, "--out", target], capsys)
    assert code == 0 and "ordering violated" in out
    cert = load_checked(target)
    assert cert["found"] and cert["verified"]
    assert cert["rho1"]["e_in"] > cert["rho2"]["e_in"] + cert["margin"]
    assert cert["rho1"]["e_out"] < cert["rho2"]["e_out"] - cert["margin"]


def test_violations_not_found(tmp_path, capsys):
    target = tmp_path / "none.json"
    code, _, _ = run(["violations", "--channel", "unitary", "--budget", 500, "--out", target], capsys)
    assert code == 1
    assert load_checked(target)["found"] is False


def test_violations_malformed_channel(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"d_in": 2, "d_out": 2, "kraus": [[1, 2]')
    code, _, err = run(["violations", "--channel", bad], capsys)
    assert code == 2 and "invalid JSON" in err
    missing = tmp_path / "missing.json"
    missing.write_text('{"d_in": 2}')
    assert run(["violations", "--channel", missing], capsys)[0] == 2


def test_argparse_errors_are_input_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["violations", "--budget", "many"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["counterexample", "three-qubit"])
    assert exc.value.code == 2


def test_check_channel_eb(tmp_path, capsys):
    target = tmp_path / "eb.json"
    code, out, _ = run(["check-channel", "--channel", "depolarizing", "--p", 0.2, "--test", "eb", "--out", target], capsys)
    assert code == 0 and "entanglement-breaking: true" in out
    rep = load_checked(target)
    assert rep["entanglement_breaking"] is True and rep["verdict"] == "exact"
    code, out, _ = run(["check-channel", "--p", 0.5, "--test", "eb"], capsys)
    assert "entanglement-breaking: false" in out


def test_check_channel_cptp(tmp_path, capsys):
    good = tmp_path / "good.json"
    assert run(["check-channel", "--channel", "selective-check", "--test", "cptp", "--out", good], capsys)[0] == 0
    assert load_checked(good)["passed"] is True
    broken = tmp_path / "broken.json"
    broken.write_text(io.dumps({"d_in": 2, "d_out": 2, "kraus": [io.encode_matrix(1.01 * np.eye(2))]}))
    report = tmp_path / "rep.json"
    code, out, _ = run(["check-channel", "--channel", broken, "--test", "cptp", "--out", report], capsys)
    assert code == 1 and "CPTP: FAIL" in out
    rep = load_checked(report)
    # Frobenius norm of (1.01^2 - 1) I_2
    assert rep["tp_residual"] == pytest.approx((1.01**2 - 1) * math.sqrt(2), rel=1e-9)
    # the EB test needs a valid channel
    assert run(["check-channel", "--channel", broken, "--test", "eb"], capsys)[0] == 3


def test_tsep_analytic_prints_t_ln3(capsys):
    code, out, _ = run(["tsep", "--T", 1, "--mode", "analytic"], capsys)
    assert code == 0
    assert out.strip().startswith("1.0986122886")
    assert float(out) == math.log(3.0)


def test_tsep_numeric(tmp_path, capsys):
    target = tmp_path / "t.json"
    code, out, _ = run(["tsep", "--T", 2, "--mode", "numeric", "--initial", "werner:0.5", "--out", target], capsys)
    assert code == 0
    assert float(out) == pytest.approx(2 * math.log(1.5), abs=1e-6)
    assert load_checked(target)["initial"] == "werner:0.5"


@pytest.mark.parametrize(
    "argv, code",
    [(["--initial", "werner:0.2"], 2), (["--initial", "werner:x"], 2), (["--initial", "ghz:1"], 2),
     (["--initial", "nope.json"], 2), (["--T", "-1"], 2)],
)
def test_tsep_errors(argv, code, capsys):
    assert run(["tsep", "--mode", "numeric", *argv], capsys)[0] == code


def test_tsep_state_file(tmp_path, capsys):
    from entlab import states

    path = tmp_path / "state.json"
    path.write_text(io.dumps(io.state_to_json(states.p_plus())))
    code, out, _ = run(["tsep", "--mode", "numeric", "--initial", path], capsys)
    assert code == 0 and float(out) == pytest.approx(math.log(3.0), abs=1e-6)


def test_trajectory_command(tmp_path, capsys):
    code, out, _ = run(["trajectory", "--steps", 5, "--t-max", 1], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "t,measure_kind,value" and len(lines) == 6
    target = tmp_path / "traj.csv"
    assert run(["trajectory", "--with-state", "--out", target], capsys)[0] == 0
    assert target.read_text().splitlines()[0].endswith(",state")


def test_counterexample(tmp_path, capsys):
    target = tmp_path / "ce.json"
    code, out, _ = run(["counterexample", "four-qubit", "--out", target], capsys)
    assert code == 0
    rep = load_checked(target)
    assert rep["negativity"]["rho1_out"] == pytest.approx(1.0, abs=1e-12)
    assert rep["negativity"]["rho2_out"] == pytest.approx(0.5, abs=1e-12)


def test_ghz(tmp_path, capsys):
    target = tmp_path / "ghz.json"
    code, _, _ = run(["ghz", "--assist-samples", 10, "--out", target], capsys)
    rep = load_checked(target)
    assert code == 0 and rep["passed"]
    assert 0.0 <= rep["assistance_lower_bound"] <= 1.0 + 1e-12


def test_axioms_and_maxent(tmp_path, capsys):
    ax = tmp_path / "ax.json"
    assert run(["axioms", "--trials", 40, "--out", ax], capsys)[0] == 0
    rep = load_checked(ax)
    assert [r["measure"] for r in rep["reports"]] == ["concurrence", "tangle", "eof", "negativity"]
    me = tmp_path / "me.json"
    assert run(["maxent", "--p", 0.7, "--trials", 30, "--out", me], capsys)[0] == 0
    assert load_checked(me)["measures"]["concurrence"]["mean"] == pytest.approx(0.55, abs=1e-12)


def test_outputs_byte_identical(tmp_path, capsys, monkeypatch):
    commands = [
        ["diagram", "--families", "werner,pure,random", "--n-random", 20, "--grid", 40, "--out", "{}.csv"],
        ["violations", "--strategy", "random", "--budget", 2000, "--seed", 9, "--out", "{}.json"],
        ["axioms", "--trials", 30, "--seed", 4, "--out", "{}.json"],
        ["maxent", "--trials", 25, "--seed", 4, "--out", "{}.json"],
    ]
    for i, cmd in enumerate(commands):
        blobs = []
        for run_id, threads in enumerate(("1", "3")):
            monkeypatch.setenv("ENTLAB_THREADS", threads)
            path = tmp_path / f"c{i}_{run_id}"
            argv = [str(a).format(path) for a in cmd]
            cli.main(argv)
            capsys.readouterr()
            blobs.append(next(tmp_path.glob(f"c{i}_{run_id}.*")).read_bytes())
        assert blobs[0] == blobs[1], cmd[0]


def test_bad_thread_env(monkeypatch, capsys):
    monkeypatch.setenv("ENTLAB_THREADS", "zero")
    assert run(["tsep"], capsys)[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "entlab", "tsep"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.strip() == repr(math.log(3.0))
