#include "optocool/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

#include <boost/random/normal_distribution.hpp>
#include <sstream>
#include <thread>

#include "optocool/errors.hpp"

namespace optocool {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double pairwise_sum(const double* first, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += first[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(first, half) + pairwise_sum(first + half, n - half);
}

}  // namespace

NoiseSpec NoiseSpec::thermal(const SystemParams& params) {
    return NoiseSpec{thermal_occupation(params)};
}

double max_langevin_step(const SystemParams& params, double g_om, const Detuning& det) {
    return 0.05 / (params.gamma_m + params.gamma_o + 4.0 * g_om + std::abs(det.delta1) +
                   std::abs(det.delta2));
}

double min_langevin_duration(const SystemParams& params) { return 20.0 / params.gamma_m; }

std::uint64_t trajectory_seed(std::uint64_t base_seed, std::uint64_t index) {
    return splitmix64(base_seed ^ splitmix64(index));
}

TrajectoryOutcome simulate_trajectory(const SystemParams& params, double g_om,
                                      const Detuning& det, const NoiseSpec& noise, double t_end,
                                      double dt, std::uint64_t seed,
                                      const TrajectoryOptions& options) {
    if (!(noise.n_th >= 0.0)) throw DomainError("simulate_trajectory: n_th must be >= 0");
    if (!(g_om >= 0.0)) throw DomainError("simulate_trajectory: g_om must be >= 0");
    // Small relative slack so that dt computed as factor / rates passes at factor 0.05.
    if (!(dt > 0.0) || dt > max_langevin_step(params, g_om, det) * (1.0 + 1e-12)) {
        throw DomainError("simulate_trajectory: dt exceeds 0.05 / (Gm + go + 4g + |d1| + |d2|)");
    }
    if (t_end < min_langevin_duration(params) * (1.0 - 1e-12)) {
        throw DomainError("simulate_trajectory: t_end must be >= 20 / Gm");
    }
    if (options.noise_substeps < 1) {
        throw DomainError("simulate_trajectory: noise_substeps must be >= 1");
    }

    std::mt19937_64 rng(seed);
    // Ziggurat sampler; the stdlib polar method is several times slower per draw.
    boost::random::normal_distribution<double> normal(0.0, 1.0);

    std::complex<double> a = 0.0;
    std::complex<double> b;
    if (options.initial_b) {
        b = *options.initial_b;
    } else {
        const double sigma0 = std::sqrt(0.5 * noise.n_th);
        const double re = normal(rng);
        const double im = normal(rng);
        b = sigma0 * std::complex<double>(re, im);
    }

    const auto steps = static_cast<std::int64_t>(std::ceil(t_end / dt - 1e-9));
    const std::int64_t burn_in = steps / 2;
    // Real-arithmetic form of a' = a + ((-i d1 - go/2) a - i g b) dt and likewise for b.
    const double decay_a = 1.0 - 0.5 * params.gamma_o * dt;
    const double decay_b = 1.0 - 0.5 * params.gamma_m * dt;
    const double rot_a = det.delta1 * dt;
    const double rot_b = det.delta2 * dt;
    const double mix = g_om * dt;
    // Each real component of sqrt(Gm) dW_b has variance Gm n_th dt_sub / 2.
    const double sigma =
        std::sqrt(0.5 * params.gamma_m * noise.n_th * dt / options.noise_substeps);
    const double guard2 = 1e12 * (noise.n_th + 1.0);

    double ar = 0.0, ai = 0.0;
    double br = b.real(), bi = b.imag();
    double sum_b2 = 0.0;
    double sum_a2 = 0.0;
    for (std::int64_t k = 1; k <= steps; ++k) {
        double kick_r = 0.0;
        double kick_i = 0.0;
        if (sigma > 0.0) {
            for (int s = 0; s < options.noise_substeps; ++s) {
                kick_r += normal(rng);
                kick_i += normal(rng);
            }
            kick_r *= sigma;
            kick_i *= sigma;
        }
        // (-i x) z = x (Im z) - i x (Re z)
        const double ar_next = decay_a * ar + rot_a * ai + mix * bi;
        const double ai_next = decay_a * ai - rot_a * ar - mix * br;
        const double br_next = decay_b * br + rot_b * bi + mix * ai + kick_r;
        const double bi_next = decay_b * bi - rot_b * br - mix * ar + kick_i;
        ar = ar_next;
        ai = ai_next;
        br = br_next;
        bi = bi_next;
        const double a2 = ar * ar + ai * ai;
        const double b2 = br * br + bi * bi;
        if (!(a2 <= guard2) || !(b2 <= guard2)) {
            std::ostringstream msg;
            msg << "trajectory diverged at step " << k << " (|a| = " << std::sqrt(a2)
                << ", |b| = " << std::sqrt(b2) << ")";
            throw NumericalError("langevin-oracle", msg.str());
        }
        if (k > burn_in) {
            sum_b2 += b2;
            sum_a2 += a2;
        }
    }
    a = {ar, ai};
    b = {br, bi};
    const double samples = static_cast<double>(steps - burn_in);
    return TrajectoryOutcome{a, b, sum_b2 / samples, sum_a2 / samples};
}

EstimatorSummary summarize(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 2) throw DomainError("summarize: need at least two values");
    const double mean = pairwise_sum(values.data(), n) / static_cast<double>(n);
    std::vector<double> sq(n);
    std::transform(values.begin(), values.end(), sq.begin(),
                   [mean](double v) { return (v - mean) * (v - mean); });
    const double var = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
    return EstimatorSummary{mean, std::sqrt(var / static_cast<double>(n))};
}

TrajectoryEnsemble run_ensemble(const SystemParams& params, double g_om, const Detuning& det,
                                const NoiseSpec& noise, double t_end, double dt, int count,
                                std::uint64_t base_seed, const EnsembleOptions& options) {
    if (count < 2) throw DomainError("run_ensemble: count must be >= 2");
    TrajectoryEnsemble ens;
    ens.count = count;
    ens.base_seed = base_seed;
    const auto n = static_cast<std::size_t>(count);
    ens.final_a.resize(n);
    ens.final_b.resize(n);
    ens.mean_phonons.resize(n);
    ens.mean_photons.resize(n);

    unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
    threads = std::clamp(threads, 1u, static_cast<unsigned>(count));

    std::vector<std::exception_ptr> failures(threads);
    std::vector<std::size_t> failed_index(threads, n);
    auto worker = [&](unsigned tid) {
        for (std::size_t i = tid; i < n; i += threads) {
            try {
                const TrajectoryOutcome out =
                    simulate_trajectory(params, g_om, det, noise, t_end, dt,
                                        trajectory_seed(base_seed, i), options.trajectory);
                ens.final_a[i] = out.a;
                ens.final_b[i] = out.b;
                ens.mean_phonons[i] = out.mean_phonons;
                ens.mean_photons[i] = out.mean_photons;
            } catch (...) {
                failures[tid] = std::current_exception();
                failed_index[tid] = i;
                return;
            }
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    const auto first = std::min_element(failed_index.begin(), failed_index.end());
    if (*first != n) {
        const auto tid = static_cast<std::size_t>(first - failed_index.begin());
        try {
            std::rethrow_exception(failures[tid]);
        } catch (const std::exception& e) {
            throw NumericalError("langevin-oracle",
                                 "trajectory " + std::to_string(*first) + " failed: " + e.what());
        }
    }

    ens.phonons = summarize(ens.mean_phonons);
    ens.photons = summarize(ens.mean_photons);
    return ens;
}

}  // namespace optocool
