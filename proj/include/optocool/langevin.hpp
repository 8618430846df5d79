#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "optocool/model.hpp"

namespace optocool {

/// Bath occupations driving the Langevin noises. The optical noise is vacuum, which
/// contributes nothing to normally ordered moments, so only n_th is free.
struct NoiseSpec {
    double n_th = 0.0;
    static constexpr double optical_noise_occupation = 0.0;

    static NoiseSpec thermal(const SystemParams& params);
};

struct TrajectoryOptions {
    /// Each Euler-Maruyama step sums this many independent increments of size
    /// dt/substeps. A run with (dt, 2) consumes the random stream exactly like a run
    /// with (dt/2, 1), which couples the two for step-size convergence checks.
    int noise_substeps = 1;
    /// Overrides the thermal draw of b(0).
    std::optional<std::complex<double>> initial_b;
};

struct TrajectoryOutcome {
    std::complex<double> a;
    std::complex<double> b;
    double mean_phonons = 0.0;  // time average of |b|^2 over the second half
    double mean_photons = 0.0;  // time average of |a|^2 over the second half
};

struct EstimatorSummary {
    double mean = 0.0;
    double standard_error = 0.0;  // sample std / sqrt(count)
};

struct TrajectoryEnsemble {
    int count = 0;
    std::uint64_t base_seed = 0;
    std::vector<std::complex<double>> final_a;
    std::vector<std::complex<double>> final_b;
    std::vector<double> mean_phonons;  // per trajectory
    std::vector<double> mean_photons;  // per trajectory
    EstimatorSummary phonons;
    EstimatorSummary photons;
};

struct EnsembleOptions {
    TrajectoryOptions trajectory;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Largest admissible step, 0.05 / (Gm + go + 4 g + |delta1| + |delta2|).
double max_langevin_step(const SystemParams& params, double g_om, const Detuning& det);

/// Shortest admissible run, 20 / Gm.
double min_langevin_duration(const SystemParams& params);

/// Stream seed of trajectory `index`: splitmix64(base_seed ^ splitmix64(index)).
std::uint64_t trajectory_seed(std::uint64_t base_seed, std::uint64_t index);

/// One Euler-Maruyama path of the rotating-frame equations
///   da = (-i delta1 - go/2) a dt - i g b dt
///   db = (-i delta2 - Gm/2) b dt - i g a dt + sqrt(Gm) dW_b,  <|dW_b|^2> = n_th dt
/// from a = 0 and a thermal b. Throws NumericalError when an amplitude exceeds
/// 1e6 sqrt(n_th + 1).
TrajectoryOutcome simulate_trajectory(const SystemParams& params, double g_om,
                                      const Detuning& det, const NoiseSpec& noise, double t_end,
                                      double dt, std::uint64_t seed,
                                      const TrajectoryOptions& options = {});

/// Independent trajectories seeded by trajectory_seed(base_seed, i). Summaries are
/// reduced in index order, so the result does not depend on the thread count.
TrajectoryEnsemble run_ensemble(const SystemParams& params, double g_om, const Detuning& det,
                                const NoiseSpec& noise, double t_end, double dt, int count,
                                std::uint64_t base_seed, const EnsembleOptions& options = {});

/// Mean and standard error with pairwise summation.
EstimatorSummary summarize(const std::vector<double>& values);

}  // namespace optocool
