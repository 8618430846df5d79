#include "optocool/model.hpp"

#include <cmath>
#include <string>

#include "optocool/errors.hpp"

namespace optocool {

namespace {

void require_positive(double value, const char* name) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw DomainError(std::string(name) + " must be finite and strictly positive");
    }
}

// h f / k_B in kelvin for an ordinary frequency f.
double quantum_temperature(double omega_hz) {
    return constants::hbar * constants::two_pi * omega_hz / constants::boltzmann;
}

}  // namespace

std::string_view to_string(RatesConvention convention) {
    return convention == RatesConvention::angular ? "angular" : "as_given";
}

std::optional<RatesConvention> parse_rates_convention(std::string_view text) {
    if (text == "as_given") return RatesConvention::as_given;
    if (text == "angular") return RatesConvention::angular;
    return std::nullopt;
}

double SystemParams::rate_factor() const noexcept {
    return convention == RatesConvention::angular ? constants::two_pi : 1.0;
}

void SystemParams::validate() const {
    require_positive(omega_b_hz, "omega_b");
    require_positive(gamma_m, "gamma_m");
    require_positive(gamma_o, "gamma_o");
    require_positive(gain_total, "gain_total");
    if (gain_intrinsic) require_positive(*gain_intrinsic, "gain_intrinsic");
    require_positive(length, "length");
    require_positive(temperature, "temperature");
    if (!std::isfinite(refractive_index) || refractive_index < 1.0) {
        throw DomainError("refractive_index must be >= 1");
    }
}

SystemParams make_system_params(const SystemSpec& spec) {
    SystemParams p;
    p.convention = spec.convention;
    p.omega_b_hz = spec.omega_b_hz;
    p.gamma_m = p.to_rate(spec.gamma_m_hz);
    p.gamma_o = p.to_rate(spec.gamma_o_hz);
    p.gain_total = spec.gain_total;
    p.gain_intrinsic = spec.gain_intrinsic;
    p.length = spec.length;
    p.refractive_index = spec.refractive_index;
    p.temperature = spec.temperature;
    p.validate();
    return p;
}

SystemParams default_system_params(RatesConvention convention) {
    SystemSpec spec;
    spec.convention = convention;
    return make_system_params(spec);
}

Drive Drive::phase_matched(const SystemParams& params, double power) {
    return Drive{power, -params.omega_b_rate()};
}

Detuning rotating_frame_detuning(const SystemParams& params, const Drive& drive,
                                 const Detuning& det) {
    // In the frame rotating at Omega_B the anti-Stokes mode keeps -(delta_l + Omega_B).
    return Detuning{det.delta1 - (drive.delta_l + params.omega_b_rate()), det.delta2};
}

double bose_einstein_occupation(double omega_hz, double temperature) {
    if (!(omega_hz > 0.0) || !std::isfinite(omega_hz)) {
        throw DomainError("bose_einstein_occupation: frequency must be > 0");
    }
    if (!(temperature >= 0.0)) {
        throw DomainError("bose_einstein_occupation: temperature must be >= 0");
    }
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(quantum_temperature(omega_hz) / temperature);
}

double effective_temperature(double occupation, double omega_hz) {
    if (!(occupation > 0.0)) {
        throw DomainError("effective_temperature: occupation must be > 0");
    }
    if (!(omega_hz > 0.0) || !std::isfinite(omega_hz)) {
        throw DomainError("effective_temperature: frequency must be > 0");
    }
    return quantum_temperature(omega_hz) / std::log1p(1.0 / occupation);
}

double thermal_occupation(const SystemParams& params) {
    return bose_einstein_occupation(params.omega_b_hz, params.temperature);
}

double coupling_strength(const SystemParams& params, double power) {
    if (!(power >= 0.0)) throw DomainError("coupling_strength: pump power must be >= 0");
    return std::sqrt(params.gain_total * params.gamma_m * power * params.length *
                     constants::speed_of_light / (4.0 * params.refractive_index));
}

double coupling_strength(const SystemParams& params, const Drive& drive) {
    return coupling_strength(params, drive.power);
}

double pump_power_for_coupling(const SystemParams& params, double g_om) {
    if (!(g_om >= 0.0)) throw DomainError("pump_power_for_coupling: g_om must be >= 0");
    return g_om * g_om * 4.0 * params.refractive_index /
           (params.gain_total * params.gamma_m * params.length * constants::speed_of_light);
}

double gain_profile(double omega_hz, const SystemParams& params, double gamma_eff) {
    if (!params.gain_intrinsic) {
        throw DomainError("gain_profile: gain_intrinsic is not set");
    }
    if (!(gamma_eff > 0.0)) throw DomainError("gain_profile: gamma_eff must be > 0");
    const double half_width = 0.5 * params.to_hz(gamma_eff);
    const double offset = params.omega_b_hz - omega_hz;
    return *params.gain_intrinsic * half_width * half_width /
           (offset * offset + half_width * half_width);
}

}  // namespace optocool
