#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "optocool/model.hpp"

namespace optocool {

/// Second-order moments: anti-Stokes photon number, phonon number and <a^dag b>.
struct MomentState {
    double n_a = 0.0;
    double n_b = 0.0;
    std::complex<double> coherence{};

    std::array<double, 4> to_array() const {
        return {n_a, n_b, coherence.real(), coherence.imag()};
    }
    static MomentState from_array(const std::array<double, 4>& v) {
        return MomentState{v[0], v[1], {v[2], v[3]}};
    }
};

/// (0, n_th, 0): no anti-Stokes photons, acoustic mode thermalized with the bath.
MomentState thermal_state(const SystemParams& params);

struct MomentSample {
    double t = 0.0;  // s
    MomentState state;
};

struct Trajectory {
    std::vector<MomentSample> samples;  // strictly increasing t
    double max_step = 0.0;              // s
    double last_step = 0.0;             // s
    std::string method = "rk4-step-halving";
    bool converged = false;

    const MomentState& final_state() const { return samples.back().state; }
};

/// Right-hand side of the noise-averaged moment equations:
///   N_a' = -go N_a - i g (c - c*)
///   N_b' = -Gm N_b + i g (c - c*) + Gm n_th
///   c'   = -(i (delta1 - delta2) + (go + Gm)/2) c - i g N_a + i g N_b
MomentState moment_derivative(const MomentState& state, const SystemParams& params, double g_om,
                              const Detuning& det);

/// Classical RK4 with step-halving error control.
///
/// The step never exceeds 0.1 / (Gm + go + 4 g). Each step is compared against two
/// half steps; the pair is accepted when the difference (scaled by |y| + n_th + 1)
/// is below 15 tol. Throws NumericalError when the step underflows or a sample
/// leaves the physical region (negative populations, Cauchy-Schwarz violation).
Trajectory integrate(const MomentState& initial, const SystemParams& params, double g_om,
                     const Detuning& det, double t_end, double tol);

/// Stationary point of moment_derivative from the 4x4 real linear system in
/// (N_a, N_b, Re c, Im c).
MomentState settle(const SystemParams& params, double g_om, const Detuning& det = {});

}  // namespace optocool
