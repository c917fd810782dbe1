"""File formats and the command-line surface."""

import csv
import math
import os

import numpy as np
import pytest

from gaussep.cli import main
from gaussep.ensembles import tmsv_sigma
from gaussep.errors import StateFileError
from gaussep.serialize import (
    ORDERING_TAG,
    dumps,
    format_float,
    load,
    load_state_file,
    parse_state_dict,
    save,
    state_to_dict,
)
from gaussep.states import Partition


# -- serialization ------------------------------------------------------------


def test_format_float_round_trips():
    for x in (1.0 / 3.0, math.pi, 1e-300, -2.5e17, 0.1 + 0.2):
        assert float(format_float(x)) == x


def test_format_float_rejects_nonfinite():
    with pytest.raises(StateFileError):
        format_float(float("nan"))


def test_state_round_trip_bit_exact(tmp_path, rng):
    part = Partition(1, 2)
    sigma = rng.standard_normal((6, 6))
    sigma = 0.5 * (sigma + sigma.T) + 4.0 * np.eye(6)
    path = tmp_path / "state.json"
    save(path, state_to_dict(sigma, part, 1.0, label="round trip"))
    sigma2, mean2, hbar2, part2, label2 = load_state_file(path)
    assert np.array_equal(sigma, sigma2)
    assert np.array_equal(mean2, np.zeros(6))
    assert hbar2 == 1.0 and part2 == part and label2 == "round trip"
    # byte-identical re-serialization
    assert dumps(state_to_dict(sigma2, part2, hbar2, label=label2)) == path.read_text()


def test_parse_state_rejections():
    part = Partition(1, 1)
    good = state_to_dict(0.5 * np.eye(4), part, 1.0)
    bad = dict(good)
    bad["ordering"] = "interleaved"
    with pytest.raises(StateFileError, match="ordering"):
        parse_state_dict(bad)
    bad = dict(good)
    del bad["sigma"]
    with pytest.raises(StateFileError, match="sigma"):
        parse_state_dict(bad)
    bad = dict(good)
    asym = 0.5 * np.eye(4)
    asym[0, 1] = 1e-6
    bad["sigma"] = asym
    with pytest.raises(StateFileError, match="symmetric"):
        parse_state_dict(bad)
    bad = dict(good)
    bad["mean"] = [0.0, 0.0]
    with pytest.raises(StateFileError, match="mean"):
        parse_state_dict(bad)
    bad = dict(good)
    bad["hbar"] = -2.0
    with pytest.raises(StateFileError, match="hbar"):
        parse_state_dict(bad)
    bad = dict(good)
    bad["n_A"] = 0
    with pytest.raises(StateFileError, match="n_A"):
        parse_state_dict(bad)
    assert good["ordering"] == ORDERING_TAG


# -- CLI: check ----------------------------------------------------------------


def _write_state(path, sigma, part=Partition(1, 1), hbar=1.0):
    save(path, state_to_dict(sigma, part, hbar))


def test_check_vacuum_exit_zero(tmp_path, capsys):
    f = tmp_path / "vac.json"
    _write_state(f, 0.5 * np.eye(4))
    assert main(["check", str(f)]) == 0
    out = capsys.readouterr().out
    assert '"verdict": "separable"' in out
    assert '"tool_version"' in out and '"config_echo"' in out


def test_check_tmsv_exit_one_and_witness(tmp_path):
    f = tmp_path / "tmsv.json"
    _write_state(f, tmsv_sigma(0.5))
    rep = tmp_path / "rep.json"
    assert main(["check", str(f), "--report", str(rep)]) == 1
    report = load(rep)
    assert report["verdict"] == "entangled"
    assert abs(report["witness"]["nu_tilde_min"] - 0.5 * math.exp(-1.0)) < 1e-10
    assert "certificate" not in report


def test_check_not_bona_fide_exit_64(tmp_path, capsys):
    f = tmp_path / "bad.json"
    _write_state(f, 0.4 * np.eye(4))
    assert main(["check", str(f)]) == 64
    assert "0.4" in capsys.readouterr().err


def test_check_truncated_file_exit_64(tmp_path, capsys):
    f = tmp_path / "trunc.json"
    f.write_text('{"hbar": 1.0, "n_A": 1')
    assert main(["check", str(f)]) == 64
    assert "line" in capsys.readouterr().err


def test_check_missing_file_exit_64(tmp_path):
    assert main(["check", str(tmp_path / "nope.json")]) == 64


def test_check_undetermined_exit_two(tmp_path, monkeypatch):
    import gaussep.cli as cli_mod
    from gaussep.separability import Undetermined

    f = tmp_path / "vac.json"
    _write_state(f, 0.5 * np.eye(4))
    monkeypatch.setattr(
        cli_mod, "decide_separability", lambda state, cfg: Undetermined(0.1, 7)
    )
    assert main(["check", str(f)]) == 2


def test_check_hbar_flag_overrides_file(tmp_path):
    # sigma = 0.4 I is unphysical at hbar = 1 but fine at hbar = 0.5
    f = tmp_path / "s.json"
    _write_state(f, 0.4 * np.eye(4), hbar=1.0)
    assert main(["check", str(f)]) == 64
    assert main(["check", str(f), "--hbar", "0.5"]) == 0


def test_check_exit_code_is_deterministic(tmp_path):
    f = tmp_path / "t.json"
    _write_state(f, tmsv_sigma(0.3))
    assert main(["check", str(f)]) == main(["check", str(f)]) == 1


# -- CLI: random ------------------------------------------------------------------


def test_random_deterministic_files(tmp_path):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    for d in (d1, d2):
        assert (
            main(
                ["random", "--kind", "random_bonafide", "--modes", "2+1",
                 "--seed", "42", "--count", "2", "--out", str(d)]
            )
            == 0
        )
    for name in ("random_bonafide_000.json", "random_bonafide_001.json"):
        assert (d1 / name).read_bytes() == (d2 / name).read_bytes()


def test_random_outputs_are_bona_fide(tmp_path):
    from gaussep.states import make_state

    d = tmp_path / "out"
    assert (
        main(
            ["random", "--kind", "random_bonafide", "--modes", "1+1",
             "--seed", "5", "--count", "3", "--spread", "1.0", "--out", str(d)]
        )
        == 0
    )
    for name in sorted(os.listdir(d)):
        sigma, mean, hbar, part, _ = load_state_file(d / name)
        make_state(sigma, mean, hbar, part)  # must not raise


def test_random_tmsv_r0_is_vacuum(tmp_path):
    d = tmp_path / "out"
    assert main(["random", "--kind", "tmsv", "--r", "0", "--seed", "1", "--out", str(d)]) == 0
    sigma, _, _, _, _ = load_state_file(d / "tmsv_000.json")
    np.testing.assert_array_equal(sigma, 0.5 * np.eye(4))


def test_random_env_seed_override(tmp_path, monkeypatch):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    main(["random", "--kind", "random_bonafide", "--seed", "1", "--out", str(d1)])
    monkeypatch.setenv("GAUSSEP_SEED", "1")
    main(["random", "--kind", "random_bonafide", "--seed", "999", "--out", str(d2)])
    assert (d1 / "random_bonafide_000.json").read_bytes() == (
        d2 / "random_bonafide_000.json"
    ).read_bytes()


def test_random_invalid_ranges_exit_64(tmp_path):
    assert main(["random", "--kind", "tmsv", "--r", "-1", "--out", str(tmp_path)]) == 64
    assert (
        main(["random", "--kind", "thermal_product", "--nu", "0.2,0.7", "--out", str(tmp_path)])
        == 64
    )


# -- CLI: sweep -------------------------------------------------------------------


def test_sweep_r0_all_separable(tmp_path):
    out = tmp_path / "sweep.csv"
    assert (
        main(
            ["sweep", "--kind", "tmsv_noisy", "--r", "0", "--t-min", "0",
             "--t-max", "0.5", "--steps", "6", "--out", str(out)]
        )
        == 0
    )
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 6
    assert all(r["verdict"] == "separable" for r in rows)
    assert all(r["ppt_pass"] == "true" for r in rows)


def test_sweep_single_step(tmp_path):
    out = tmp_path / "one.csv"
    assert (
        main(
            ["sweep", "--kind", "tmsv_noisy", "--r", "0.5", "--t-min", "0.2",
             "--t-max", "0.2", "--steps", "1", "--out", str(out)]
        )
        == 0
    )
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 1 and rows[0]["verdict"] == "entangled"


def test_sweep_transition_brackets_ppt(tmp_path):
    out = tmp_path / "sweep.csv"
    assert (
        main(
            ["sweep", "--kind", "tmsv_noisy", "--r", "0.5", "--t-min", "0",
             "--t-max", "1", "--steps", "21", "--out", str(out)]
        )
        == 0
    )
    rows = list(csv.DictReader(out.open()))
    nu = [float(r["nu_tilde_min"]) for r in rows]
    assert all(b >= a - 1e-12 for a, b in zip(nu, nu[1:]))  # nondecreasing
    verdicts = [r["verdict"] for r in rows]
    flip = verdicts.index("separable")
    ts = [float(r["t"]) for r in rows]
    t_star = 0.5 - 0.5 * math.exp(-1.0)
    assert ts[flip - 1] < t_star <= ts[flip] + 1e-12
    # once separable, never entangled again
    assert "entangled" not in verdicts[flip:]


def test_sweep_rejects_bad_kind(tmp_path):
    assert (
        main(
            ["sweep", "--kind", "tmsv", "--r", "0.1", "--t-min", "0", "--t-max", "1",
             "--steps", "2", "--out", str(tmp_path / "x.csv")]
        )
        == 64
    )


# -- CLI: certify ------------------------------------------------------------------


def test_certify_round_trip(tmp_path):
    f = tmp_path / "thermal.json"
    _write_state(f, 0.9 * np.eye(4))
    rep = tmp_path / "rep.json"
    assert main(["check", str(f), "--report", str(rep)]) == 0
    assert main(["certify", str(f), str(rep)]) == 0


def test_certify_tampered_fails(tmp_path):
    f = tmp_path / "thermal.json"
    _write_state(f, 0.9 * np.eye(4))
    rep = tmp_path / "rep.json"
    assert main(["check", str(f), "--report", str(rep)]) == 0
    obj = load(rep)
    obj["certificate"]["P_A"][0][1] += 0.1
    save(rep, obj)
    assert main(["certify", str(f), str(rep)]) == 1


def test_certify_identity_P_on_tmsv_fails(tmp_path):
    f = tmp_path / "tmsv.json"
    _write_state(f, tmsv_sigma(0.5))
    cert = tmp_path / "cert.json"
    save(cert, {"P_A": np.eye(2), "P_B": np.eye(2)})
    assert main(["certify", str(f), str(cert)]) == 1


def test_certify_parse_error_exit_64(tmp_path):
    f = tmp_path / "s.json"
    _write_state(f, 0.5 * np.eye(4))
    cert = tmp_path / "c.json"
    cert.write_text("{}")
    assert main(["certify", str(f), str(cert)]) == 64


# -- CLI: wigner-compare --------------------------------------------------------------


def test_wigner_compare_identity(tmp_path, capsys):
    sfile = tmp_path / "S.json"
    save(sfile, {"hbar": 1.0, "S": np.eye(2)})
    assert main(["wigner-compare", "--S", str(sfile), "--grid=-1:1:3,-1:1:3"]) == 0
    assert "max_abs_err" in capsys.readouterr().out


def test_wigner_compare_squeeze(tmp_path):
    sfile = tmp_path / "S.json"
    save(sfile, {"hbar": 1.0, "S": np.diag([2.0, 0.5])})
    assert main(["wigner-compare", "--S", str(sfile), "--grid=-1:1:3,-1:1:3"]) == 0


def test_wigner_compare_rejects_nonsymplectic(tmp_path):
    sfile = tmp_path / "S.json"
    save(sfile, {"hbar": 1.0, "S": np.diag([2.0, 1.0])})
    assert main(["wigner-compare", "--S", str(sfile), "--grid=0:1:2,0:1:2"]) == 64


def test_wigner_compare_rejects_bad_grid(tmp_path):
    sfile = tmp_path / "S.json"
    save(sfile, {"hbar": 1.0, "S": np.eye(2)})
    assert main(["wigner-compare", "--S", str(sfile), "--grid=zap"]) == 64


# -- CLI: misc ---------------------------------------------------------------------


def test_usage_error_maps_to_64():
    assert main(["no-such-command"]) == 64
