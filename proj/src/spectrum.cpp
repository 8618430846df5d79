#include "optocool/spectrum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "optocool/steady.hpp"

namespace optocool {

namespace {

constexpr int kMaxFitIterations = 200;
constexpr double kFitTolerance = 1e-10;

std::complex<double> response_denominator(const SystemParams& p, double g, const Detuning& det,
                                          double w) {
    const double x = w + det.delta1;
    const double y = w + det.delta2;
    return {g * g + 0.25 * p.gamma_o * p.gamma_m - x * y,
            -(0.5 * p.gamma_o * y + 0.5 * p.gamma_m * x)};
}

void check_grid(const SystemParams& params, const Detuning& det, std::span<const double> grid) {
    if (grid.size() < 1000) throw DomainError("spectrum grid needs at least 1000 points");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw DomainError("spectrum grid must be strictly increasing");
        }
    }
    const double lo = grid.front();
    const double hi = grid.back();
    const double span = hi - lo;
    const double mid = 0.5 * (lo + hi);
    const std::size_t n = grid.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        if (std::abs((grid[i] - mid) + (grid[n - 1 - i] - mid)) > 1e-9 * span) {
            throw DomainError("spectrum grid must be symmetric about its center");
        }
    }
    const double peak = -det.delta2;
    const double need = 10.0 * (params.gamma_m + params.gamma_o);
    if (lo > peak - need || hi < peak + need) {
        throw DomainError("spectrum grid must cover the resonance +/- 10 (Gm + go)");
    }
}

struct FitStart {
    double center;
    double fwhm;
    double height;
};

FitStart initial_guess(const SpectrumTrace& trace) {
    const auto& x = trace.offsets;
    const auto& y = trace.psd;
    const auto peak_it = std::max_element(y.begin(), y.end());
    const auto imax = static_cast<std::size_t>(peak_it - y.begin());
    if (imax == 0 || imax + 1 == y.size() || !(*peak_it > 0.0)) {
        throw DomainError("fit_lorentzian: trace peak is not interior to the grid");
    }
    const double half = 0.5 * *peak_it;
    std::size_t left = imax;
    while (left > 0 && y[left] > half) --left;
    std::size_t right = imax;
    while (right + 1 < y.size() && y[right] > half) ++right;
    if (y[left] > half || y[right] > half) {
        throw DomainError("fit_lorentzian: half-maximum crossings are outside the grid");
    }
    auto cross = [&](std::size_t below, std::size_t above) {
        return x[below] + (half - y[below]) * (x[above] - x[below]) / (y[above] - y[below]);
    };
    const double x_left = cross(left, left + 1);
    const double x_right = cross(right, right - 1);
    return FitStart{x[imax], std::max(x_right - x_left, x[imax + 1] - x[imax]), *peak_it};
}

}  // namespace

std::vector<double> frequency_grid(double center, double half_span, int points) {
    if (points < 2) throw DomainError("frequency_grid: need at least two points");
    if (!(half_span > 0.0)) throw DomainError("frequency_grid: half span must be > 0");
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double step = 2.0 * half_span / (points - 1);
    for (int i = 0; i < points; ++i) {
        // Index from both ends so mirrored points are exact negatives of each other.
        const int j = points - 1 - i;
        const double offset = i <= j ? -half_span + step * i : half_span - step * j;
        grid[static_cast<std::size_t>(i)] = center + offset;
    }
    return grid;
}

std::vector<double> default_grid(const SystemParams& params, const Detuning& det,
                                 const GridOptions& options) {
    return frequency_grid(-det.delta2, options.span_factor * (params.gamma_m + params.gamma_o),
                          options.points);
}

SpectrumTrace acoustic_psd(const SystemParams& params, double g_om, const Detuning& det,
                           std::span<const double> grid) {
    if (!(g_om >= 0.0)) throw DomainError("acoustic_psd: g_om must be >= 0");
    check_grid(params, det, grid);
    SpectrumTrace trace;
    trace.kind = SpectrumKind::acoustic;
    trace.params = params;
    trace.g_om = g_om;
    trace.detuning = det;
    trace.offsets.assign(grid.begin(), grid.end());
    trace.psd.resize(grid.size());
    const double source = params.gamma_m * thermal_occupation(params);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = grid[i];
        const std::complex<double> optical{-0.5 * params.gamma_o, w + det.delta1};
        trace.psd[i] = source * std::norm(optical) / std::norm(response_denominator(params, g_om, det, w));
    }
    return trace;
}

SpectrumTrace optical_psd(const SystemParams& params, double g_om, const Detuning& det,
                          std::span<const double> grid) {
    if (!(g_om >= 0.0)) throw DomainError("optical_psd: g_om must be >= 0");
    check_grid(params, det, grid);
    SpectrumTrace trace;
    trace.kind = SpectrumKind::optical;
    trace.params = params;
    trace.g_om = g_om;
    trace.detuning = det;
    trace.offsets.assign(grid.begin(), grid.end());
    trace.psd.resize(grid.size());
    const double source = g_om * g_om * params.gamma_m * thermal_occupation(params);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        trace.psd[i] = source / std::norm(response_denominator(params, g_om, det, grid[i]));
    }
    return trace;
}

double integrate_psd(const SpectrumTrace& trace) {
    double sum = 0.0;
    for (std::size_t i = 1; i < trace.offsets.size(); ++i) {
        sum += 0.5 * (trace.psd[i] + trace.psd[i - 1]) * (trace.offsets[i] - trace.offsets[i - 1]);
    }
    return sum / constants::two_pi;
}

LorentzianFit fit_lorentzian(const SpectrumTrace& trace) {
    if (trace.offsets.size() != trace.psd.size() || trace.offsets.size() < 4) {
        throw DomainError("fit_lorentzian: malformed trace");
    }
    const FitStart start = initial_guess(trace);

    // Work in coordinates where the seed is (0, 1, 1).
    const double x_ref = start.center;
    const double x_scale = start.fwhm;
    const double y_scale = start.height;
    const auto n = static_cast<Eigen::Index>(trace.offsets.size());
    Eigen::VectorXd xs(n), ys(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        xs[i] = (trace.offsets[static_cast<std::size_t>(i)] - x_ref) / x_scale;
        ys[i] = trace.psd[static_cast<std::size_t>(i)] / y_scale;
    }

    auto residuals = [&](const Eigen::Vector3d& q, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
        r.resize(n);
        if (jac) jac->resize(n, 3);
        const double hw = 0.5 * q[1];
        for (Eigen::Index i = 0; i < n; ++i) {
            const double u = xs[i] - q[0];
            const double d = u * u + hw * hw;
            const double shape = hw * hw / d;
            r[i] = ys[i] - q[2] * shape;
            if (jac) {
                // Derivatives of the model, order (center, fwhm, height).
                (*jac)(i, 0) = q[2] * hw * hw * 2.0 * u / (d * d);
                (*jac)(i, 1) = q[2] * hw * u * u / (d * d);
                (*jac)(i, 2) = shape;
            }
        }
    };

    Eigen::Vector3d q(0.0, 1.0, 1.0);
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    residuals(q, r, &jac);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    bool converged = false;
    int iter = 0;
    Eigen::VectorXd r_try;

    auto snapshot = [&](const Eigen::Vector3d& params, double final_cost, int iterations) {
        LorentzianFit fit;
        fit.center = x_ref + x_scale * params[0];
        fit.fwhm = std::abs(x_scale * params[1]);
        fit.height = y_scale * params[2];
        fit.residual_norm = std::sqrt(final_cost / ys.squaredNorm());
        fit.iterations = iterations;
        const Eigen::Matrix3d normal = jac.transpose() * jac;
        const double dof = static_cast<double>(std::max<Eigen::Index>(n - 3, 1));
        const Eigen::Matrix3d cov = normal.inverse() * (final_cost / dof);
        const std::array<double, 3> scale{x_scale, x_scale, y_scale};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) fit.covariance[i][j] = cov(i, j) * scale[i] * scale[j];
        }
        return fit;
    };

    while (iter < kMaxFitIterations && !converged) {
        ++iter;
        const Eigen::Matrix3d normal = jac.transpose() * jac;
        // Jacobian of the model; residual = data - model.
        const Eigen::Vector3d grad = jac.transpose() * r;
        bool accepted = false;
        while (!accepted) {
            Eigen::Matrix3d damped = normal;
            damped.diagonal() *= 1.0 + lambda;
            const Eigen::Vector3d step = damped.ldlt().solve(grad);
            const Eigen::Vector3d trial = q + step;
            residuals(trial, r_try, nullptr);
            const double trial_cost = r_try.squaredNorm();
            if (std::isfinite(trial_cost) && trial_cost <= cost) {
                // The center sits near zero in scaled coordinates, so its change is
                // measured against the width.
                const double width = std::max(std::abs(trial[1]), 1e-300);
                const double change =
                    std::max({std::abs(step[0]) / width, std::abs(step[1]) / width,
                              std::abs(step[2]) / std::max(std::abs(trial[2]), 1e-300)});
                q = trial;
                cost = trial_cost;
                lambda = std::max(lambda / 10.0, 1e-15);
                accepted = true;
                if (change < kFitTolerance) converged = true;
            } else {
                lambda *= 10.0;
                if (lambda > 1e20) {
                    // No downhill direction left: at a minimum to rounding.
                    converged = true;
                    break;
                }
            }
        }
        residuals(q, r, &jac);
        cost = r.squaredNorm();
    }

    const LorentzianFit fit = snapshot(q, cost, iter);
    if (!converged) {
        std::ostringstream msg;
        msg << "Lorentzian fit did not converge in " << kMaxFitIterations << " iterations";
        throw FitError(msg.str(), fit);
    }
    if (!(fit.fwhm > 0.0)) throw FitError("Lorentzian fit collapsed to zero width", fit);
    return fit;
}

std::vector<LinewidthRow> linewidth_vs_power(const SystemParams& params,
                                             std::span<const double> powers,
                                             const GridOptions& grid_options) {
    // Same ordering and sign rules as the steady-state sweep.
    const SweepResult sweep = power_sweep(params, powers);
    const std::vector<double> grid = default_grid(params, {}, grid_options);
    std::vector<LinewidthRow> rows;
    rows.reserve(sweep.rows.size());
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        const SweepRow& s = sweep.rows[i];
        const SpectrumTrace trace = acoustic_psd(params, s.g_om, {}, grid);
        LorentzianFit fit;
        try {
            fit = fit_lorentzian(trace);
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "linewidth row " << i << " (P = " << s.power << " W): " << e.what();
            throw NumericalError("spectral-response", msg.str());
        }
        rows.push_back(LinewidthRow{s.power, s.g_om, fit.fwhm, s.observables.gamma_eff,
                                    fit.residual_norm});
    }
    return rows;
}

double anti_stokes_peak_height(const SystemParams& params, double g_om) {
    if (!(g_om >= 0.0)) throw DomainError("anti_stokes_peak_height: g_om must be >= 0");
    // With u = w^2 the PSD is Gm n_th (u + q) / ((a - u)^2 + s^2 u); its stationary
    // point solves u^2 + 2 q u + q s^2 - 2 a q - a^2 = 0.
    const double go = params.gamma_o;
    const double gm = params.gamma_m;
    const double q = 0.25 * go * go;
    const double a = g_om * g_om + 0.25 * go * gm;
    const double s2 = 0.25 * (go + gm) * (go + gm);
    const double disc = (a + q) * (a + q) - q * s2;
    double u = 0.0;
    if (disc > 0.0) u = std::max(0.0, -q + std::sqrt(disc));
    const double source = gm * thermal_occupation(params);
    return source * (u + q) / ((a - u) * (a - u) + s2 * u);
}

}  // namespace optocool
