#pragma once

#include <array>
#include <span>
#include <vector>

#include "optocool/errors.hpp"
#include "optocool/model.hpp"

namespace optocool {

enum class SpectrumKind { acoustic, optical };

/// Sampled power spectral density in the rotating frame.
///
/// Offsets are in rate units. The PSD is one-sided with the normalization
/// integral(psd d offset) / 2 pi = occupation of the mode.
struct SpectrumTrace {
    std::vector<double> offsets;
    std::vector<double> psd;
    SpectrumKind kind = SpectrumKind::acoustic;
    SystemParams params;
    double g_om = 0.0;
    Detuning detuning;
};

struct LorentzianFit {
    double center = 0.0;  // rate units
    double fwhm = 0.0;    // rate units
    double height = 0.0;
    /// ||psd - model||_2 / ||psd||_2 over the trace.
    double residual_norm = 0.0;
    /// Parameter covariance, order (center, fwhm, height).
    std::array<std::array<double, 3>, 3> covariance{};
    int iterations = 0;
};

/// Thrown when the fit does not converge; best() holds the lowest-cost parameters.
class FitError : public NumericalError {
public:
    FitError(const std::string& what, LorentzianFit best)
        : NumericalError("spectral-response", what), best_(best) {}
    const LorentzianFit& best() const noexcept { return best_; }

private:
    LorentzianFit best_;
};

struct GridOptions {
    int points = 4096;
    double span_factor = 20.0;  // half span in units of (Gm + go)
};

/// Evenly spaced grid symmetric about center.
std::vector<double> frequency_grid(double center, double half_span, int points);

/// GridOptions grid centered on the acoustic resonance, -delta2.
std::vector<double> default_grid(const SystemParams& params, const Detuning& det = {},
                                 const GridOptions& options = {});

/// Acoustic PSD Gm n_th |i(w + d1) - go/2|^2 / |D(w)|^2 with
/// D(w) = g^2 + go Gm/4 - (w + d1)(w + d2) - i [go/2 (w + d2) + Gm/2 (w + d1)].
///
/// The grid must be strictly increasing, symmetric about its center, hold at least
/// 1000 points and cover -delta2 +/- 10 (Gm + go).
SpectrumTrace acoustic_psd(const SystemParams& params, double g_om, const Detuning& det,
                           std::span<const double> grid);

/// Anti-Stokes photon PSD g^2 Gm n_th / |D(w)|^2, same grid rules.
SpectrumTrace optical_psd(const SystemParams& params, double g_om, const Detuning& det,
                          std::span<const double> grid);

/// Trapezoid integral of the trace divided by 2 pi.
double integrate_psd(const SpectrumTrace& trace);

/// Levenberg-Marquardt fit of h (f/2)^2 / ((w - c)^2 + (f/2)^2), seeded from the
/// discrete maximum and its half-maximum crossings. Stops when the relative
/// parameter change drops below 1e-10; gives up after 200 iterations.
LorentzianFit fit_lorentzian(const SpectrumTrace& trace);

struct LinewidthRow {
    double power = 0.0;
    double g_om = 0.0;
    double fitted_fwhm = 0.0;  // rate units
    double closed_form = 0.0;  // effective_linewidth, rate units
    double residual_norm = 0.0;
};

/// Phase-matched acoustic PSD at each power, fitted and paired with the closed-form
/// linewidth. Powers follow power_sweep rules.
std::vector<LinewidthRow> linewidth_vs_power(const SystemParams& params,
                                             std::span<const double> powers,
                                             const GridOptions& grid = {});

/// Maximum over w of the phase-matched acoustic PSD, evaluated in closed form.
double anti_stokes_peak_height(const SystemParams& params, double g_om);

}  // namespace optocool
