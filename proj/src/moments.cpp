#include "optocool/moments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "optocool/errors.hpp"

namespace optocool {

namespace {

using State = std::array<double, 4>;

// Real form of the moment equations in time scaled by 1/(Gm + go):
// y' = A y + b with y = (N_a, N_b, X, Y), c = X + iY.
struct LinearSystem {
    Eigen::Matrix4d a;
    Eigen::Vector4d b;
};

LinearSystem moment_system(const SystemParams& params, double g, const Detuning& det,
                           double time_scale) {
    const double go = params.gamma_o;
    const double gm = params.gamma_m;
    const double half_sum = 0.5 * (go + gm);
    const double mismatch = det.mismatch();
    // -i g (c - c*) = 2 g Y
    LinearSystem sys;
    sys.a << -go, 0.0, 0.0, 2.0 * g,
             0.0, -gm, 0.0, -2.0 * g,
             0.0, 0.0, -half_sum, mismatch,
             -g, g, -mismatch, -half_sum;
    sys.b << 0.0, gm * thermal_occupation(params), 0.0, 0.0;
    sys.a *= time_scale;
    sys.b *= time_scale;
    return sys;
}

State evaluate(const LinearSystem& sys, const State& y) {
    const Eigen::Vector4d v = sys.a * Eigen::Map<const Eigen::Vector4d>(y.data()) + sys.b;
    return {v[0], v[1], v[2], v[3]};
}

State axpy(const State& y, double h, const State& k) {
    return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]};
}

State rk4_step(const LinearSystem& sys, const State& y, double h) {
    const State k1 = evaluate(sys, y);
    const State k2 = evaluate(sys, axpy(y, 0.5 * h, k1));
    const State k3 = evaluate(sys, axpy(y, 0.5 * h, k2));
    const State k4 = evaluate(sys, axpy(y, h, k3));
    State out;
    for (int i = 0; i < 4; ++i) {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

void check_physical(const State& y, double tol, double scale, double t) {
    const double floor = -tol * scale;
    const double coherence2 = y[2] * y[2] + y[3] * y[3];
    const double bound = y[0] * (y[1] + 1.0);
    if (y[0] < floor || y[1] < floor || coherence2 - bound > tol * (scale * scale + bound)) {
        std::ostringstream msg;
        msg << "moment state left the physical region at t = " << t << " s (N_a = " << y[0]
            << ", N_b = " << y[1] << ", |c|^2 = " << coherence2 << ")";
        throw NumericalError("moment-dynamics", msg.str());
    }
}

}  // namespace

MomentState thermal_state(const SystemParams& params) {
    return MomentState{0.0, thermal_occupation(params), {}};
}

MomentState moment_derivative(const MomentState& state, const SystemParams& params, double g_om,
                              const Detuning& det) {
    using namespace std::complex_literals;
    const double go = params.gamma_o;
    const double gm = params.gamma_m;
    const std::complex<double> c = state.coherence;
    const std::complex<double> exchange = -1i * g_om * (c - std::conj(c));
    MomentState d;
    d.n_a = -go * state.n_a + exchange.real();
    d.n_b = -gm * state.n_b - exchange.real() + gm * thermal_occupation(params);
    d.coherence = -(1i * det.mismatch() + 0.5 * (go + gm)) * c - 1i * g_om * state.n_a +
                  1i * g_om * state.n_b;
    return d;
}

Trajectory integrate(const MomentState& initial, const SystemParams& params, double g_om,
                     const Detuning& det, double t_end, double tol) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw DomainError("integrate: t_end must be > 0");
    }
    if (!(tol > 1e-14 && tol < 1e-2)) {
        throw DomainError("integrate: tol must lie in (1e-14, 1e-2)");
    }
    if (!(g_om >= 0.0)) throw DomainError("integrate: g_om must be >= 0");

    const double rate_scale = params.gamma_m + params.gamma_o;
    const LinearSystem sys = moment_system(params, g_om, det, 1.0 / rate_scale);
    const double tau_end = t_end * rate_scale;
    const double h_max = 0.1 * rate_scale / (rate_scale + 4.0 * g_om);
    const double h_min = 1e-13 * std::max(tau_end, 1.0);
    const double scale = thermal_occupation(params) + 1.0;

    Trajectory traj;
    traj.max_step = h_max / rate_scale;
    traj.samples.push_back({0.0, initial});

    State y = initial.to_array();
    double tau = 0.0;
    double h = h_max;
    while (tau < tau_end) {
        const bool last = tau + h >= tau_end;
        const double step = last ? tau_end - tau : h;
        const State full = rk4_step(sys, y, step);
        const State half = rk4_step(sys, rk4_step(sys, y, 0.5 * step), 0.5 * step);
        double err = 0.0;
        for (int i = 0; i < 4; ++i) {
            err = std::max(err, std::abs(half[i] - full[i]) / (15.0 * (std::abs(half[i]) + scale)));
        }
        if (err > tol) {
            h = 0.5 * step;
            if (h < h_min) {
                throw NumericalError("moment-dynamics", "step size underflow");
            }
            continue;
        }
        y = half;
        tau = last ? tau_end : tau + step;
        check_physical(y, std::max(tol, 1e-12), scale, tau / rate_scale);
        traj.samples.push_back({tau / rate_scale, MomentState::from_array(y)});
        traj.last_step = step / rate_scale;
        if (err < tol / 32.0) h = std::min(2.0 * h, h_max);
    }
    traj.converged = true;
    return traj;
}

MomentState settle(const SystemParams& params, double g_om, const Detuning& det) {
    if (!(params.gamma_m > 0.0) || !(params.gamma_o > 0.0)) {
        throw NumericalError("moment-dynamics", "singular steady-state system (zero damping)");
    }
    const LinearSystem sys = moment_system(params, g_om, det, 1.0 / (params.gamma_m + params.gamma_o));
    const Eigen::FullPivLU<Eigen::Matrix4d> lu(sys.a);
    if (!lu.isInvertible()) {
        throw NumericalError("moment-dynamics", "singular steady-state system");
    }
    const Eigen::Vector4d y = lu.solve(-sys.b);
    return MomentState{y[0], y[1], {y[2], y[3]}};
}

}  // namespace optocool
