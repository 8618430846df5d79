#include <cmath>
#include <cstdio>
#include <sstream>

#include "optocool/cli.hpp"
#include "optocool/errors.hpp"
#include "optocool/langevin.hpp"
#include "optocool/moments.hpp"
#include "optocool/steady.hpp"

namespace optocool {

namespace {

std::vector<double> observable_row(const SystemParams& params, const SweepRow& r) {
    return {r.power, r.g_om, r.observables.n_b_ss, r.observables.t_eff,
            params.to_hz(r.observables.gamma_eff), r.observables.cooling_rate};
}

Table sweep_table(std::string name, const SystemParams& params, const SweepResult& sweep) {
    Table t;
    t.name = std::move(name);
    t.columns = {"power_w", "g_om", "n_b_ss", "t_eff_k", "gamma_eff_hz", "cooling_rate"};
    for (const auto& row : sweep.rows) t.rows.push_back(observable_row(params, row));
    t.metadata = {{"n_th", format_number(thermal_occupation(params))},
                  {"occupation_floor", format_number(occupation_floor(params))}};
    t.svg_x = 0;
    t.svg_y = 2;
    return t;
}

}  // namespace

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::vector<Table> cmd_steady(const RunConfig& config) {
    const SystemParams params = config.params();
    const double power = config.pump_power_w;
    const SweepResult sweep = power_sweep(params, std::span<const double>(&power, 1), config.detuning());
    return {sweep_table("steady", params, sweep)};
}

std::vector<Table> cmd_sweep(const RunConfig& config) {
    const SystemParams params = config.params();
    const std::vector<double> powers =
        power_grid(config.sweep_start_w, config.sweep_stop_w, config.sweep_count, config.sweep_log);
    return {sweep_table("sweep", params, power_sweep(params, powers, config.detuning()))};
}

std::vector<Table> cmd_dynamics(const RunConfig& config) {
    const SystemParams params = config.params();
    const double g = coupling_strength(params, config.drive());
    const Detuning det = config.detuning();
    const double t_end = config.dynamics_t_end_factor / params.gamma_m;
    const Trajectory traj = integrate(thermal_state(params), params, g, det, t_end, config.dynamics_tol);
    const MomentState fixed = settle(params, g, det);

    Table t;
    t.name = "dynamics";
    t.columns = {"t_s", "n_a", "n_b", "re_coherence", "im_coherence"};
    for (const auto& s : traj.samples) {
        t.rows.push_back({s.t, s.state.n_a, s.state.n_b, s.state.coherence.real(),
                          s.state.coherence.imag()});
    }
    t.metadata = {{"method", traj.method},
                  {"g_om", format_number(g)},
                  {"max_step_s", format_number(traj.max_step)},
                  {"settled_n_a", format_number(fixed.n_a)},
                  {"settled_n_b", format_number(fixed.n_b)},
                  {"closed_form_n_b", format_number(phonon_occupation_detuned(params, g, det))}};
    t.svg_x = 0;
    t.svg_y = 2;
    return {t};
}

std::vector<Table> cmd_langevin(const RunConfig& config) {
    const SystemParams params = config.params();
    const double g = coupling_strength(params, config.drive());
    const Detuning det = config.detuning();
    const double dt = config.langevin_dt_factor * max_langevin_step(params, g, det) / 0.05;
    const double t_end = config.langevin_t_end_factor / params.gamma_m;
    const TrajectoryEnsemble ens = run_ensemble(params, g, det, NoiseSpec::thermal(params), t_end, dt,
                                                config.langevin_count, config.langevin_base_seed);
    Table t;
    t.name = "langevin";
    t.columns = {"power_w", "n_b_mean", "n_b_stderr", "count"};
    t.rows.push_back({config.pump_power_w, ens.phonons.mean, ens.phonons.standard_error,
                      static_cast<double>(ens.count)});
    t.metadata = {{"g_om", format_number(g)},
                  {"dt_s", format_number(dt)},
                  {"t_end_s", format_number(t_end)},
                  {"seed_rule", "splitmix64(base_seed ^ splitmix64(index))"},
                  {"n_a_mean", format_number(ens.photons.mean)},
                  {"closed_form_n_b", format_number(phonon_occupation_detuned(params, g, det))}};
    return {t};
}

std::vector<Table> cmd_spectrum(const RunConfig& config) {
    const SystemParams params = config.params();
    const double g = coupling_strength(params, config.drive());
    const Detuning det = config.detuning();
    const SpectrumTrace trace = acoustic_psd(params, g, det, default_grid(params, det, config.grid_options()));
    const LorentzianFit fit = fit_lorentzian(trace);

    Table spectrum;
    spectrum.name = "spectrum";
    spectrum.columns = {"offset_hz", "psd"};
    // Rescaled so that integral(psd d offset_hz) / 2 pi is the occupation in either convention.
    for (std::size_t i = 0; i < trace.offsets.size(); ++i) {
        spectrum.rows.push_back({params.to_hz(trace.offsets[i]), trace.psd[i] * params.rate_factor()});
    }
    spectrum.metadata = {
        {"normalization", "one-sided; integral(psd d offset_hz) / 2pi = phonon occupation"},
        {"g_om", format_number(g)},
        {"fitted_fwhm_hz", format_number(params.to_hz(fit.fwhm))},
        {"fitted_center_hz", format_number(params.to_hz(fit.center))},
        {"fitted_height", format_number(fit.height * params.rate_factor())},
        {"fit_residual_norm", format_number(fit.residual_norm)},
        {"closed_form_gamma_eff_hz",
         format_number(params.to_hz(steady_observables(params, g, det).gamma_eff))},
        {"psd_occupation", format_number(integrate_psd(trace))},
        {"closed_form_n_b", format_number(phonon_occupation_detuned(params, g, det))}};

    Table widths;
    widths.name = "linewidth";
    widths.columns = {"power_w", "fitted_fwhm_hz", "closed_form_hz", "residual_norm"};
    const std::vector<double> powers =
        power_grid(config.sweep_start_w, config.sweep_stop_w, config.sweep_count, config.sweep_log);
    for (const auto& row : linewidth_vs_power(params, powers, config.grid_options())) {
        widths.rows.push_back({row.power, params.to_hz(row.fitted_fwhm), params.to_hz(row.closed_form),
                               row.residual_norm});
    }
    widths.svg_x = 0;
    widths.svg_y = 2;
    return {spectrum, widths};
}

std::vector<Table> cmd_depletion(const RunConfig& config) {
    const SystemParams params = config.params();
    const PropagationOptions options = config.propagation_options();
    const double power = config.pump_power_w;
    if (!(power > 0.0)) {
        throw DomainError("depletion: pump_power_w must be > 0 for a propagation profile");
    }
    const PropagationProfile profile = propagate(params, power, config.depletion_seed_w, options);
    const double threshold = depletion_threshold(params, config.depletion_seed_w, config.depletion_fraction,
                                                 config.depletion_max_power_w, options);
    const double mean_pump = profile.mean_pump();

    Table t;
    t.name = "depletion";
    t.columns = {"z_m", "pump_w", "stokes_w"};
    for (std::size_t i = 0; i < profile.z.size(); ++i) {
        t.rows.push_back({profile.z[i], profile.pump[i], profile.stokes[i]});
    }
    const Detuning det = config.detuning();
    t.metadata = {
        {"model", "lossless steady-state backward SBS, Stokes seeded at z = L"},
        {"small_signal_gain", format_number(small_signal_gain(params, power))},
        {"depletion_fraction", format_number(profile.depletion_fraction())},
        {"shooting_iterations", std::to_string(profile.iterations)},
        {"shooting_residual", format_number(profile.residual)},
        {"threshold_power_w", format_number(threshold)},
        {"threshold_gain", format_number(small_signal_gain(params, threshold))},
        {"mean_pump_w", format_number(mean_pump)},
        {"n_b_input_pump", format_number(phonon_occupation_detuned(params, coupling_strength(params, power), det))},
        {"n_b_mean_pump", format_number(phonon_occupation_detuned(params, coupling_strength(params, mean_pump), det))}};
    t.svg_x = 0;
    t.svg_y = 1;
    return {t};
}

}  // namespace optocool
