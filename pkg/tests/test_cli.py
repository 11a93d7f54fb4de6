import json
import math

import numpy as np
import pytest

from pulseforge.cli import (
    EXIT_INVALID, EXIT_OK, EXIT_UNREACHABLE, RunManifest, main, parse_complex, parse_frequency,
    parse_time, verify_manifest,
)
from pulseforge.model import TWO_PI, ValidationError, read_csv
from pulseforge.pulses import pulse_from_dict

from conftest import KAPPA, OMEGA_R, VARTHETA


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


class TestValueParsing:
    @pytest.mark.parametrize("text,seconds", [
        ("10us", 1e-5), ("10 μs", 1e-5), ("2.5ms", 2.5e-3), ("100ns", 1e-7), ("1e-5", 1e-5),
        ("3s", 3.0),
    ])
    def test_time(self, text, seconds):
        assert parse_time(text) == pytest.approx(seconds, rel=1e-15)

    @pytest.mark.parametrize("bad", ["ten us", "10 weeks", ""])
    def test_bad_time(self, bad):
        with pytest.raises(ValidationError):
            parse_time(bad)

    def test_frequency(self):
        assert parse_frequency("0.3MHz") == pytest.approx(OMEGA_R, rel=1e-15)
        assert parse_frequency("1e6") == 1e6
        assert parse_frequency("5 rad/s") == 5.0
        with pytest.raises(ValidationError):
            parse_frequency("3 parsecs")

    def test_complex(self):
        assert parse_complex("0,0") == 0
        assert parse_complex("1.5,-2") == 1.5 - 2j
        assert parse_complex("10@1.587461rad") == pytest.approx(10 * np.exp(1.587461j), rel=1e-15)
        assert parse_complex("2@90deg") == pytest.approx(2j, abs=1e-15)
        assert parse_complex("3@steady", steady=0.5) == pytest.approx(3 * np.exp(0.5j))
        assert parse_complex("-4") == -4
        for bad in ("x,y", "1@abc", "3@steady"):
            with pytest.raises(ValidationError):
                parse_complex(bad)


def test_synth_energy_writes_pulse_and_manifest(workdir):
    code = main(["synth", "energy", "--alpha0", "0,0", "--alphaf", "10@1.587461rad",
                 "--tf", "10us", "--out", "pulse.json"])
    assert code == EXIT_OK
    data = json.loads((workdir / "pulse.json").read_text())
    assert data["variant"] == "EnergyOptimal"
    assert data["report"]["j_e"] == pytest.approx(1.3468e7, rel=1e-4)
    pulse = pulse_from_dict(data)
    assert abs(pulse(1e-5)) == pytest.approx(1.3468e6, rel=1e-4)
    man = RunManifest.read(workdir / "pulse.json.manifest.json")
    assert man.argv[0] == "synth" and "pulse.json" in man.outputs


def test_config_file_is_honoured(workdir):
    (workdir / "c.json").write_text(json.dumps({"omega_r": 0.3e6, "kappa": 1e4, "unit": "cyclic"}))
    assert main(["synth", "energy", "--config", "c.json", "--alphaf", "1,0", "--tf", "5us",
                 "--out", "p.json"]) == EXIT_OK
    params = json.loads((workdir / "p.json").read_text())["parameters"]
    assert params["kappa"] == pytest.approx(KAPPA)
    assert params["rotation_rate"] == pytest.approx(OMEGA_R)


def test_global_flags_before_subcommand(workdir):
    assert main(["--out", "p.json", "synth", "energy", "--alphaf", "1,0", "--tf", "5us"]) == EXIT_OK
    assert (workdir / "p.json").exists()


def test_synth_time_report(workdir, capsys):
    code = main(["synth", "time", "--eps-max", "1e7", "--eps-max-unit", "angular",
                 "--alphaf", "10@steady", "--out", "t.json"])
    assert code == EXIT_OK
    rep = json.loads((workdir / "t.json").read_text())["report"]
    assert rep["reachable"] is True
    assert rep["t_f_min"] == pytest.approx(1.016e-6, rel=1e-4)
    assert rep["theta"] == pytest.approx((VARTHETA + math.pi + OMEGA_R * rep["t_f_min"]) % TWO_PI)


def test_synth_time_cyclic_unit_scales_bound(workdir):
    main(["synth", "time", "--eps-max", "1e7", "--eps-max-unit", "cyclic", "--alphaf", "10,0",
          "--out", "t.json"])
    assert json.loads((workdir / "t.json").read_text())["report"]["eps_max"] == pytest.approx(TWO_PI * 1e7)


def test_unreachable_exit_code(workdir, capsys):
    code = main(["synth", "time", "--eps-max", "3e5", "--eps-max-unit", "angular", "--alphaf", "10,0"])
    assert code == EXIT_UNREACHABLE
    out = json.loads(capsys.readouterr().out)
    assert out["report"]["reachable"] is False


@pytest.mark.parametrize("argv", [
    ["synth", "energy", "--alphaf", "1,0", "--tf", "-3us"],
    ["synth", "energy", "--alphaf", "nonsense", "--tf", "3us"],
    ["synth", "time", "--eps-max", "1e7", "--alphaf", "1,0"],
    ["simulate", "--pulse", "missing.json", "--out", "x.csv"],
    ["reproduce", "fig9z"],
    ["synth", "energy", "--config", "nope.json", "--alphaf", "1,0", "--tf", "1us"],
    ["readout", "--ncrit", "0", "--out", "x.csv"],
    ["robustness", "--axis", "qubit", "--grid", "-0.5:0.5:3", "--out", "x.csv"],
])
def test_validation_exit_code(workdir, argv):
    assert main(argv) == EXIT_INVALID


def test_argparse_errors_exit_two(workdir):
    with pytest.raises(SystemExit) as exc:
        main(["synth", "warp"])
    assert exc.value.code == 2


def test_hahn_and_cd(workdir):
    assert main(["synth", "hahn", "--alphaf", "10@steady", "--tf", "10us", "--out", "h.json"]) == EXIT_OK
    assert main(["synth", "cd", "--alphaf", "10@steady", "--tf", "10us", "--out", "cd.json"]) == EXIT_OK
    cd = json.loads((workdir / "cd.json").read_text())
    quad = cd["report"]["quadratures"]
    assert len(quad["in_phase"]) == len(quad["quadrature"]) == len(quad["t_s"]) == 201
    assert max(abs(v) for v in quad["quadrature"]) > 0
    assert main(["simulate", "--pulse", "cd.json", "--out", "traj.csv"]) == EXIT_OK
    cols = read_csv(workdir / "traj.csv")
    assert list(cols) == ["t_s", "re_alpha", "im_alpha", "photon"]
    assert cols["photon"][-1] == pytest.approx(100, rel=1e-6)
    assert main(["simulate", "--pulse", "h.json", "--out", "h.csv"]) == EXIT_OK
    assert read_csv(workdir / "h.csv")["photon"][-1] == pytest.approx(100, rel=1e-9)


def test_simulate_fock_override(workdir, capsys):
    main(["synth", "energy", "--alphaf", "2,1", "--tf", "1us", "--out", "p.json"])
    capsys.readouterr()
    assert main(["simulate", "--pulse", "p.json", "--fock-dim", "30", "--n-out", "11",
                 "--dt", "1ns", "--out", "f.csv"]) == EXIT_OK
    diag = json.loads(capsys.readouterr().out)
    assert diag["trace_dev"] < 1e-8
    cols = read_csv(workdir / "f.csv")
    assert cols["re_alpha"][-1] + 1j * cols["im_alpha"][-1] == pytest.approx(2 + 1j, abs=1e-3)


def test_analyze_report(workdir, capsys):
    main(["synth", "cd", "--alphaf", "10@steady", "--tf", "10us", "--out", "cd.json"])
    capsys.readouterr()
    assert main(["analyze", "--pulse", "cd.json", "--target", "10@steady"]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert rep["eta"] == pytest.approx(0.1570796, abs=1e-6)
    assert rep["target_residual"] < 1e-6


def test_readout_outputs(workdir):
    assert main(["readout", "--ncrit", "100", "--tf", "10us", "--phi", "0", "--out", "snr.csv",
                 "--iq-out", "iq.csv"]) == EXIT_OK
    snr = read_csv(workdir / "snr.csv")
    assert list(snr) == ["tau_s", "snr"]
    assert snr["snr"][0] == 0
    iq = read_csv(workdir / "iq.csv")
    assert list(iq) == ["t_s", "i_norm_e", "q_norm_e", "i_norm_g", "q_norm_g"]


def test_robustness_output_and_determinism(workdir):
    argv = ["robustness", "--axis", "resonator", "--grid", "-0.2:0.2:41", "--samples", "1000",
            "--seed", "42", "--out", "rob.csv"]
    assert main(argv) == EXIT_OK
    first = (workdir / "rob.csv").read_bytes()
    cols = read_csv(workdir / "rob.csv")
    assert list(cols) == ["mismatch", "mean_snr", "var_snr"]
    assert len(cols["mismatch"]) == 41
    assert verify_manifest(workdir / "rob.csv.manifest.json")
    assert (workdir / "rob.csv").read_bytes() == first
    assert main(argv[:-2] + ["--workers", "4", "--out", "rob4.csv"]) == EXIT_OK
    assert (workdir / "rob4.csv").read_bytes() == first


def test_manifest_detects_tampering(workdir):
    main(["readout", "--ncrit", "10", "--out", "snr.csv"])
    man = RunManifest.read(workdir / "snr.csv.manifest.json")
    man.outputs["snr.csv"] = "0" * 64
    man.write(workdir / "bad.json")
    assert not verify_manifest(workdir / "bad.json")
