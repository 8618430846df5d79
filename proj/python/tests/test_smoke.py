import math
import os
import subprocess

import pytest

import optocool as oc


def test_thermometry_round_trip():
    n = oc.bose_einstein_occupation(7.38e9, 293.0)
    assert n == pytest.approx(826.7534078996932, rel=1e-13)
    assert oc.effective_temperature(n, 7.38e9) == pytest.approx(293.0, rel=1e-12)


def test_closed_forms_and_linear_solve_agree():
    p = oc.SystemParams()
    g = oc.coupling_strength(p, 0.1)
    closed = oc.phonon_occupation_phase_matched(p, g)
    assert closed == pytest.approx(292.10168542869, rel=1e-12)
    assert oc.settle(p, g)["n_b"] == pytest.approx(closed, rel=1e-12)
    assert p.gamma_m / oc.effective_linewidth(p, g) == pytest.approx(closed / oc.thermal_occupation(p), rel=1e-12)
    assert oc.occupation_floor(p) < closed < oc.thermal_occupation(p)
    assert oc.coupling_strength(p, oc.pump_power_for_occupation(p, 212.0)) > g


def test_angular_convention_scales_rates():
    a = oc.SystemParams(convention="angular")
    assert a.gamma_m == pytest.approx(2 * math.pi * 46.8e6)
    assert a.rate_factor() == pytest.approx(2 * math.pi)
    with pytest.raises(ValueError):
        oc.SystemParams(convention="radians")
    with pytest.raises(ValueError):
        oc.SystemParams(gamma_m_hz=-1.0)


def test_integration_reaches_the_steady_state():
    p = oc.SystemParams()
    g = oc.coupling_strength(p, 0.05)
    traj = oc.integrate(p, g, t_end=50.0 / p.gamma_m)
    assert traj["n_b"][0] == pytest.approx(oc.thermal_occupation(p))
    assert traj["final"]["n_b"] == pytest.approx(oc.phonon_occupation_phase_matched(p, g), rel=1e-9)


def test_small_ensemble_is_deterministic():
    p = oc.SystemParams()
    g = oc.coupling_strength(p, 0.1)
    n_th = oc.thermal_occupation(p)
    args = dict(params=p, g_om=g, det=oc.Detuning(), n_th=n_th, t_end=oc.min_langevin_duration(p),
                dt=oc.max_langevin_step(p, g), count=200, base_seed=1)
    a = oc.run_ensemble(**args)
    b = oc.run_ensemble(**args, threads=2)
    assert a == b
    assert abs(a["mean"] - oc.phonon_occupation_phase_matched(p, g)) < 4 * a["standard_error"]


def test_uncoupled_spectrum_fit():
    p = oc.SystemParams()
    offsets, psd = oc.acoustic_psd(p, 0.0)
    fit = oc.fit_lorentzian(offsets, psd)
    assert fit["fwhm"] == pytest.approx(p.gamma_m, rel=1e-3)
    # The even-sized grid straddles the peak, so the sampled maximum sits just below it.
    assert max(psd) == pytest.approx(oc.anti_stokes_peak_height(p, 0.0), rel=1e-2)
    assert max(psd) <= oc.anti_stokes_peak_height(p, 0.0)


def test_depletion_threshold_band():
    p = oc.SystemParams()
    seed = oc.seed_for_threshold_exponent(p, 20.0, 0.01)
    threshold = oc.depletion_threshold(p, seed, 0.01, 5.0)
    assert 0.23 <= threshold <= 0.26
    prof = oc.propagate(p, threshold, seed)
    drift = [pp - ps for pp, ps in zip(prof["pump"], prof["stokes"])]
    assert max(drift) - min(drift) <= 1e-9 * drift[0]
    with pytest.raises(RuntimeError):
        oc.depletion_threshold(p, 1e-9, 0.1, 0.01)


def test_cli_in_process(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("sweep_count = 5\n")
    code, out, _ = oc.run_cli(["sweep", "--config", str(cfg), "--out", str(tmp_path)])
    assert code == 0
    lines = [l for l in (tmp_path / "sweep.csv").read_text().splitlines() if not l.startswith("#")]
    assert lines[0] == "power_w,g_om,n_b_ss,t_eff_k,gamma_eff_hz,cooling_rate"
    assert len(lines) == 6
    cfg.write_text("sweep_count = 5\nsweep_count = 6\n")
    assert oc.run_cli(["sweep", "--config", str(cfg)])[0] == 2


@pytest.mark.skipif("OPTOCOOL_CLI" not in os.environ, reason="command-line tool not built")
def test_cli_executable(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\n")
    done = subprocess.run([os.environ["OPTOCOOL_CLI"], "report", "--config", str(cfg), "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert done.returncode == 0
    assert "FAIL" not in done.stdout
