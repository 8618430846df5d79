#include "optocool/depletion.hpp"

#include <cmath>
#include <sstream>

#include "optocool/errors.hpp"

namespace optocool {

namespace {

struct Powers {
    double pump;
    double stokes;
};

struct Coupled {
    double gain;
    double loss;

    Powers operator()(const Powers& p) const {
        const double exchange = gain * p.pump * p.stokes;
        return {-exchange - loss * p.pump, -exchange + loss * p.stokes};
    }
};

Powers shift(const Powers& p, double h, const Powers& k) {
    return {p.pump + h * k.pump, p.stokes + h * k.stokes};
}

// Integrates from z = 0 with P_s(0) = stokes_out. Optionally records the profile.
Powers shoot(const Coupled& rhs, double pump_in, double stokes_out, double length, int steps,
             PropagationProfile* record) {
    const double h = length / steps;
    Powers p{pump_in, stokes_out};
    if (record) {
        record->z.assign(1, 0.0);
        record->pump.assign(1, p.pump);
        record->stokes.assign(1, p.stokes);
    }
    for (int i = 0; i < steps; ++i) {
        const Powers k1 = rhs(p);
        const Powers k2 = rhs(shift(p, 0.5 * h, k1));
        const Powers k3 = rhs(shift(p, 0.5 * h, k2));
        const Powers k4 = rhs(shift(p, h, k3));
        p.pump += h / 6.0 * (k1.pump + 2.0 * k2.pump + 2.0 * k3.pump + k4.pump);
        p.stokes += h / 6.0 * (k1.stokes + 2.0 * k2.stokes + 2.0 * k3.stokes + k4.stokes);
        if (record) {
            record->z.push_back(i + 1 == steps ? length : h * (i + 1));
            record->pump.push_back(p.pump);
            record->stokes.push_back(p.stokes);
        }
    }
    return p;
}

}  // namespace

double PropagationProfile::depletion_fraction() const {
    return (stokes_out() - stokes_seed) / pump_in;
}

double PropagationProfile::mean_pump() const {
    double sum = 0.0;
    for (std::size_t i = 1; i < z.size(); ++i) {
        sum += 0.5 * (pump[i] + pump[i - 1]) * (z[i] - z[i - 1]);
    }
    return sum / (z.back() - z.front());
}

double small_signal_gain(const SystemParams& params, double pump_in) {
    if (!(pump_in >= 0.0)) throw DomainError("small_signal_gain: pump power must be >= 0");
    return params.gain_total * pump_in * params.length;
}

PropagationProfile propagate(const SystemParams& params, double pump_in, double stokes_seed,
                             const PropagationOptions& options) {
    if (!(pump_in > 0.0) || !std::isfinite(pump_in)) {
        throw DomainError("propagate: pump power must be > 0");
    }
    if (!(stokes_seed > 0.0) || !std::isfinite(stokes_seed)) {
        throw DomainError("propagate: Stokes seed must be > 0");
    }
    if (options.steps < 1) throw DomainError("propagate: steps must be >= 1");
    if (!(options.loss_per_m >= 0.0)) throw DomainError("propagate: loss must be >= 0");

    const Coupled rhs{params.gain_total, options.loss_per_m};
    const double length = params.length;
    auto mismatch = [&](double stokes_out) {
        return shoot(rhs, pump_in, stokes_out, length, options.steps, nullptr).stokes - stokes_seed;
    };

    // P_s(L) grows with P_s(0). At P_s(0) = seed the Stokes only decays towards z = L;
    // at P_s(0) = P_p(0) + seed (lossless) the pump is exhausted and P_s(L) stays above
    // the seed. Loss attenuates the Stokes further, so widen the upper end by exp(alpha L).
    double lo = stokes_seed;
    double hi = (pump_in + stokes_seed) * std::exp(options.loss_per_m * length);
    if (mismatch(lo) > 0.0 || mismatch(hi) < 0.0) {
        std::ostringstream msg;
        msg << "shooting bracket [" << lo << ", " << hi << "] W does not enclose the Stokes output";
        throw NumericalError("depletion", msg.str());
    }

    int iter = 0;
    double mid = 0.5 * (lo + hi);
    double residual = std::abs(mismatch(mid)) / stokes_seed;
    while (residual >= options.tolerance) {
        if (iter >= options.max_iterations) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "shooting did not converge after " << iter << " bisection steps; bracket ["
                << lo << ", " << hi << "] W, residual " << residual;
            throw NumericalError("depletion", msg.str());
        }
        if (mismatch(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        ++iter;
        const double next = 0.5 * (lo + hi);
        if (next == mid) {
            // Bracket collapsed to adjacent doubles; keep the better end.
            break;
        }
        mid = next;
        residual = std::abs(mismatch(mid)) / stokes_seed;
    }

    PropagationProfile profile;
    profile.pump_in = pump_in;
    profile.stokes_seed = stokes_seed;
    profile.iterations = iter;
    const Powers end = shoot(rhs, pump_in, mid, length, options.steps, &profile);
    profile.residual = std::abs(end.stokes - stokes_seed) / stokes_seed;
    if (profile.residual >= options.tolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "shooting stalled at residual " << profile.residual << " with bracket [" << lo
            << ", " << hi << "] W";
        throw NumericalError("depletion", msg.str());
    }
    return profile;
}

double depletion_threshold(const SystemParams& params, double stokes_seed,
                           double depletion_fraction, double max_power,
                           const PropagationOptions& options) {
    if (!(depletion_fraction > 0.0 && depletion_fraction < 0.5)) {
        throw DomainError("depletion_threshold: fraction must lie in (0, 0.5)");
    }
    if (!(max_power > 0.0)) throw DomainError("depletion_threshold: max power must be > 0");
    if (options.loss_per_m == 0.0 &&
        depletion_fraction <= stokes_seed * params.gain_total * params.length) {
        return 0.0;
    }
    auto excess = [&](double power) {
        return propagate(params, power, stokes_seed, options).depletion_fraction() -
               depletion_fraction;
    };
    if (excess(max_power) < 0.0) {
        std::ostringstream msg;
        msg << "depletion fraction " << depletion_fraction << " not reached below max power "
            << max_power << " W (bracket [0, " << max_power << "] W)";
        throw NumericalError("depletion", msg.str());
    }
    double lo = 0.0;
    double hi = max_power;
    for (int i = 0; i < options.max_iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-12 * hi) break;
        if (excess(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double seed_for_threshold_exponent(const SystemParams& params, double exponent,
                                   double depletion_fraction) {
    if (!(exponent > 0.0)) throw DomainError("seed_for_threshold_exponent: exponent must be > 0");
    const double power = exponent / (params.gain_total * params.length);
    return depletion_fraction * power / std::expm1(exponent);
}

}  // namespace optocool
