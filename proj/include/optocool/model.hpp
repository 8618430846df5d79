#pragma once

#include <optional>
#include <string_view>

namespace optocool {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double boltzmann = 1.380649e-23;      // J / K
inline constexpr double speed_of_light = 299792458.0;  // m / s
inline constexpr double two_pi = 6.283185307179586476925;
}  // namespace constants

/// How quoted linewidths (in Hz) become rates. as_given uses the numbers directly,
/// angular multiplies by 2 pi.
enum class RatesConvention { as_given, angular };

std::string_view to_string(RatesConvention convention);
std::optional<RatesConvention> parse_rates_convention(std::string_view text);

/// Physical inputs as quoted, frequencies in Hz. Converted once into SystemParams.
struct SystemSpec {
    double omega_b_hz = 7.38e9;
    double gamma_m_hz = 46.8e6;
    double gamma_o_hz = 364e6;
    double gain_total = 164.0;                     // G_B, 1/(m W)
    std::optional<double> gain_intrinsic = 1.32e-9;  // g_B, m/W
    double length = 0.5;                           // m
    double refractive_index = 2.5;
    double temperature = 293.0;                    // K
    RatesConvention convention = RatesConvention::as_given;
};

/// Waveguide, optical and acoustic constants with linewidths already in rate units.
///
/// omega_b_hz stays an ordinary frequency because thermometry needs it in Hz;
/// omega_b_rate() gives the same quantity in rate units.
struct SystemParams {
    double omega_b_hz = 0.0;
    double gamma_m = 0.0;  // intrinsic acoustic damping, rate units
    double gamma_o = 0.0;  // anti-Stokes optical loss, rate units
    double gain_total = 0.0;
    std::optional<double> gain_intrinsic;
    double length = 0.0;
    double refractive_index = 1.0;
    double temperature = 0.0;
    RatesConvention convention = RatesConvention::as_given;

    /// 1 for as_given, 2 pi for angular.
    double rate_factor() const noexcept;
    double to_rate(double hz) const noexcept { return hz * rate_factor(); }
    double to_hz(double rate) const noexcept { return rate / rate_factor(); }
    double omega_b_rate() const noexcept { return to_rate(omega_b_hz); }

    /// Throws DomainError naming the first violated field.
    void validate() const;
};

/// Validates the spec and converts Hz linewidths to rates.
SystemParams make_system_params(const SystemSpec& spec);

/// Parameters measured on the tapered chalcogenide fiber sample.
SystemParams default_system_params(RatesConvention convention = RatesConvention::as_given);

/// Wavenumber-induced frequency shifts of the anti-Stokes (delta1) and acoustic
/// (delta2) modes, rate units. (0, 0) is phase matched.
struct Detuning {
    double delta1 = 0.0;
    double delta2 = 0.0;

    double mismatch() const noexcept { return delta1 - delta2; }
};

/// Pump drive. delta_l is the pump/anti-Stokes detuning in rate units; phase
/// matching corresponds to delta_l = -omega_b.
struct Drive {
    double power = 0.0;  // W
    double delta_l = 0.0;

    static Drive phase_matched(const SystemParams& params, double power);
};

/// Folds a pump detuning away from -omega_b into the anti-Stokes shift so that the
/// rotating-frame equations only see (delta1, delta2).
Detuning rotating_frame_detuning(const SystemParams& params, const Drive& drive,
                                 const Detuning& det);

/// Mean occupation 1/(exp(h f / k_B T) - 1) of a bosonic mode at frequency f (Hz).
double bose_einstein_occupation(double omega_hz, double temperature);

/// Inverse of bose_einstein_occupation in T.
double effective_temperature(double occupation, double omega_hz);

/// Thermal phonon number of the Brillouin mode at the bath temperature.
double thermal_occupation(const SystemParams& params);

/// Pump-enhanced optoacoustic coupling g_om = sqrt(G_B Gamma_m P L c / (4 n)).
///
/// The L factor makes the expression dimensionally irregular when G_B is in
/// 1/(m W); it is kept as the sample's calibration.
double coupling_strength(const SystemParams& params, const Drive& drive);
double coupling_strength(const SystemParams& params, double power);

/// Inverse of coupling_strength in P.
double pump_power_for_coupling(const SystemParams& params, double g_om);

/// Lorentzian Brillouin gain g_B (G/2)^2 / ((Omega_B - f)^2 + (G/2)^2) at optical
/// frequency offset f (Hz) with FWHM gamma_eff (rate units). Requires gain_intrinsic.
double gain_profile(double omega_hz, const SystemParams& params, double gamma_eff);

}  // namespace optocool
