#include "optocool/steady.hpp"

#include <cmath>
#include <string>

#include "optocool/errors.hpp"

namespace optocool {

namespace {

void require_coupling(double g_om) {
    if (!(g_om >= 0.0) || !std::isfinite(g_om)) {
        throw DomainError("coupling strength must be finite and >= 0");
    }
}

// Below this occupation ln(1 + 1/n) overflows usefulness; report zero temperature.
constexpr double kColdestOccupation = 1e-12;

}  // namespace

double phonon_occupation_phase_matched(const SystemParams& params, double g_om) {
    require_coupling(g_om);
    const double gm = params.gamma_m;
    const double go = params.gamma_o;
    const double four_g2 = 4.0 * g_om * g_om;
    return (four_g2 + go * (go + gm)) / (four_g2 + go * gm) * gm / (go + gm) *
           thermal_occupation(params);
}

double phonon_occupation_detuned(const SystemParams& params, double g_om, const Detuning& det) {
    require_coupling(g_om);
    const double gm = params.gamma_m;
    const double go = params.gamma_o;
    const double s = gm + go;
    const double four_g2 = 4.0 * g_om * g_om;
    const double d2 = det.mismatch() * det.mismatch();
    const double num = four_g2 * s + go * s * s + 4.0 * go * d2;
    const double den = four_g2 * s + go * gm * s + 4.0 * go * gm * d2 / s;
    return num / den * gm / s * thermal_occupation(params);
}

double effective_linewidth(const SystemParams& params, double g_om) {
    require_coupling(g_om);
    const double gm = params.gamma_m;
    const double go = params.gamma_o;
    const double four_g2 = 4.0 * g_om * g_om;
    return gm + four_g2 * go / (four_g2 + go * (gm + go));
}

double cooling_rate(const SystemParams& params, double g_om) {
    return params.gamma_m / effective_linewidth(params, g_om);
}

double occupation_floor(const SystemParams& params) {
    return cooling_rate_floor(params) * thermal_occupation(params);
}

double cooling_rate_floor(const SystemParams& params) {
    return params.gamma_m / (params.gamma_m + params.gamma_o);
}

double linewidth_limit(const SystemParams& params) { return params.gamma_m + params.gamma_o; }

SteadyObservables steady_observables(const SystemParams& params, double g_om,
                                     const Detuning& det) {
    SteadyObservables out;
    const double n_th = thermal_occupation(params);
    if (det.mismatch() == 0.0) {
        out.n_b_ss = phonon_occupation_phase_matched(params, g_om);
        out.gamma_eff = effective_linewidth(params, g_om);
    } else {
        out.n_b_ss = phonon_occupation_detuned(params, g_om, det);
        out.gamma_eff = params.gamma_m * n_th / out.n_b_ss;
    }
    out.cooling_rate = out.n_b_ss / n_th;
    out.t_eff = out.n_b_ss < kColdestOccupation
                    ? 0.0
                    : effective_temperature(out.n_b_ss, params.omega_b_hz);
    return out;
}

double pump_power_for_occupation(const SystemParams& params, double target_occupation) {
    const double n_th = thermal_occupation(params);
    const double ratio = target_occupation / n_th;
    if (!(ratio > cooling_rate_floor(params)) || ratio > 1.0) {
        throw DomainError("pump_power_for_occupation: target must lie between the cooling "
                          "floor and the thermal occupation");
    }
    const double gm = params.gamma_m;
    const double go = params.gamma_o;
    const double optical = gm / ratio - gm;
    const double four_g2 = optical * go * (gm + go) / (go - optical);
    return pump_power_for_coupling(params, std::sqrt(0.25 * four_g2));
}

SweepResult power_sweep(const SystemParams& params, std::span<const double> powers,
                        const Detuning& det) {
    if (powers.empty()) throw ConfigError("power sweep needs at least one power", "powers");
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (!(powers[i] >= 0.0) || !std::isfinite(powers[i])) {
            throw ConfigError("power sweep: powers must be finite and non-negative", "powers");
        }
        if (i > 0 && !(powers[i] > powers[i - 1])) {
            throw ConfigError("power sweep: powers must be strictly increasing", "powers");
        }
    }
    SweepResult result;
    result.rows.reserve(powers.size());
    for (double p : powers) {
        const double g = coupling_strength(params, p);
        result.rows.push_back(SweepRow{p, g, steady_observables(params, g, det)});
    }
    return result;
}

std::vector<double> power_grid(double start, double stop, int count, bool logarithmic) {
    if (count < 1) throw ConfigError("power grid: count must be >= 1", "sweep_count");
    if (!(start >= 0.0) || !(stop >= start)) {
        throw ConfigError("power grid: need 0 <= start <= stop", "sweep_start_w");
    }
    if (logarithmic && !(start > 0.0)) {
        throw ConfigError("power grid: log spacing needs start > 0", "sweep_start_w");
    }
    if (count == 1) return {start};
    if (!(stop > start)) throw ConfigError("power grid: need start < stop for count > 1", "sweep_stop_w");
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / (count - 1);
        grid[static_cast<std::size_t>(i)] =
            logarithmic ? start * std::pow(stop / start, t) : start + (stop - start) * t;
    }
    grid.back() = stop;
    return grid;
}

}  // namespace optocool
