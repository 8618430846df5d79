#pragma once

#include <vector>

#include "optocool/model.hpp"

namespace optocool {

/// Steady-state pump and backward Stokes powers along the waveguide.
///
/// The model is the lossless backward-SBS intensity pair with equal photon energies:
///   dP_p/dz = -G_B P_p P_s - alpha P_p,   dP_s/dz = -G_B P_p P_s + alpha P_s,
/// pump entering at z = 0 and the Stokes seeded at z = L. With alpha = 0,
/// P_p - P_s is constant along z.
struct PropagationProfile {
    std::vector<double> z;       // m, increasing from 0 to L
    std::vector<double> pump;    // W
    std::vector<double> stokes;  // W
    double pump_in = 0.0;        // P_p(0)
    double stokes_seed = 0.0;    // P_s(L)
    int iterations = 0;          // bisection steps
    double residual = 0.0;       // |P_s(L) - seed| / seed

    double stokes_out() const { return stokes.front(); }
    double pump_out() const { return pump.back(); }
    /// Fraction of the input pump converted to Stokes, (P_s(0) - seed) / P_p(0).
    double depletion_fraction() const;
    /// z-averaged pump power (trapezoid).
    double mean_pump() const;
};

struct PropagationOptions {
    int steps = 2000;            // RK4 steps over [0, L]
    double loss_per_m = 0.0;     // alpha, 1/m
    int max_iterations = 200;    // bisection cap
    double tolerance = 1e-10;    // relative residual at z = L
};

/// Log-gain G_B P L of a backward Stokes seed under an undepleted pump.
double small_signal_gain(const SystemParams& params, double pump_in);

/// Two-point boundary value solve by shooting on the Stokes output P_s(0).
/// Throws NumericalError with the final bracket if bisection does not converge.
PropagationProfile propagate(const SystemParams& params, double pump_in, double stokes_seed,
                             const PropagationOptions& options = {});

/// Pump power at which the converted fraction reaches depletion_fraction.
///
/// The fraction is increasing in power and tends to seed G_B L as P -> 0; targets at
/// or below that limit are already exceeded by any pump and return 0. Throws
/// NumericalError when the target is not reached at max_power.
double depletion_threshold(const SystemParams& params, double stokes_seed,
                           double depletion_fraction, double max_power,
                           const PropagationOptions& options = {});

/// Seed that puts the undepleted threshold estimate at log-gain `exponent`:
/// seed = fraction P / (exp(exponent) - 1), P = exponent / (G_B L).
double seed_for_threshold_exponent(const SystemParams& params, double exponent,
                                   double depletion_fraction);

}  // namespace optocool
