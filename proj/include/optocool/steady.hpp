#pragma once

#include <span>
#include <vector>

#include "optocool/model.hpp"

namespace optocool {

/// Steady state of the cooled acoustic mode.
struct SteadyObservables {
    double n_b_ss = 0.0;
    double gamma_eff = 0.0;     // rate units
    double cooling_rate = 1.0;  // n_b_ss / n_th
    double t_eff = 0.0;         // K
};

struct SweepRow {
    double power = 0.0;  // W
    double g_om = 0.0;
    SteadyObservables observables;
};

/// Rows ordered by strictly increasing pump power.
struct SweepResult {
    std::vector<SweepRow> rows;
};

/// Phase-matched steady phonon number
///   [4g^2 + go(go+Gm)] / [4g^2 + go Gm] * Gm/(go+Gm) * n_th.
double phonon_occupation_phase_matched(const SystemParams& params, double g_om);

/// Steady phonon number with phase mismatch d = delta1 - delta2:
///   [4g^2 S + go S^2 + 4 go d^2] / [4g^2 S + go Gm S + 4 go Gm d^2 / S] * Gm/S * n_th,
/// with S = Gm + go.
double phonon_occupation_detuned(const SystemParams& params, double g_om, const Detuning& det);

/// Optically enhanced damping Gm + 4g^2 go / (4g^2 + go (Gm + go)).
double effective_linewidth(const SystemParams& params, double g_om);

/// R = Gm / Gamma_eff.
double cooling_rate(const SystemParams& params, double g_om);

// g -> infinity asymptotes, evaluated analytically.
double occupation_floor(const SystemParams& params);
double cooling_rate_floor(const SystemParams& params);
double linewidth_limit(const SystemParams& params);

/// Occupation, linewidth, cooling rate and temperature at one coupling. Off phase
/// matching the linewidth is the one implied by Gm n_th / n_b_ss.
SteadyObservables steady_observables(const SystemParams& params, double g_om,
                                     const Detuning& det = {});

/// Pump power at which the phase-matched occupation equals target_occupation.
/// target must lie in (occupation_floor, n_th].
double pump_power_for_occupation(const SystemParams& params, double target_occupation);

/// One row per power; powers must be non-empty, non-negative and strictly increasing.
SweepResult power_sweep(const SystemParams& params, std::span<const double> powers,
                        const Detuning& det = {});

/// Evenly spaced (linear) or geometrically spaced (log) power grid.
std::vector<double> power_grid(double start, double stop, int count, bool logarithmic);

}  // namespace optocool
