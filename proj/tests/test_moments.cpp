#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "optocool/errors.hpp"
#include "optocool/moments.hpp"
#include "optocool/steady.hpp"

using namespace optocool;
using namespace std::complex_literals;

namespace {

// Stationary moments assembled from the closed-form occupation: the optical channel
// carries the phonon deficit (go N_a = Gm (n_th - N_b)) and the coherence follows
// c = -i g (N_a - N_b) / ((Gm + go)/2 + i d).
MomentState closed_form_state(const SystemParams& p, double g, const Detuning& det) {
    const double n_b = det.mismatch() == 0.0 ? phonon_occupation_phase_matched(p, g)
                                             : phonon_occupation_detuned(p, g, det);
    const double n_a = p.gamma_m / p.gamma_o * (thermal_occupation(p) - n_b);
    const std::complex<double> c =
        -1i * g * (n_a - n_b) / (0.5 * (p.gamma_m + p.gamma_o) + 1i * det.mismatch());
    return MomentState{n_a, n_b, c};
}

SystemParams frozen_bath() {
    SystemSpec spec;
    spec.temperature = 1e-4;  // exp(h f / k T) overflows: n_th is exactly 0
    return make_system_params(spec);
}

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("derivative vanishes at the closed-form steady state") {
    const SystemParams p = default_system_params();
    const double flux_scale = (p.gamma_m + p.gamma_o) * thermal_occupation(p);
    for (double power : {0.0, 0.01, 0.1, 1.0}) {
        for (double mismatch : {0.0, 46.8e6, 468e6}) {
            const double g = coupling_strength(p, power);
            const Detuning det{mismatch, 0.0};
            const MomentState d = moment_derivative(closed_form_state(p, g, det), p, g, det);
            CHECK(std::abs(d.n_a) / flux_scale < 1e-10);
            CHECK(std::abs(d.n_b) / flux_scale < 1e-10);
            CHECK(std::abs(d.coherence) / flux_scale < 1e-10);
        }
    }
}

TEST_CASE("uncoupled thermal state is stationary") {
    const SystemParams p = default_system_params();
    const MomentState d = moment_derivative(thermal_state(p), p, 0.0, {});
    CHECK(d.n_a == 0.0);
    CHECK(d.n_b == 0.0);
    CHECK(d.coherence == std::complex<double>{});
}

TEST_CASE("uncoupled decay without a bath") {
    const SystemParams p = frozen_bath();
    REQUIRE(thermal_occupation(p) == 0.0);
    const MomentState s{3.0, 5.0, {0.2, -0.4}};
    const MomentState d = moment_derivative(s, p, 0.0, {});
    CHECK(d.n_a == doctest::Approx(-p.gamma_o * 3.0));
    CHECK(d.n_b == doctest::Approx(-p.gamma_m * 5.0));
    CHECK(d.coherence.real() == doctest::Approx(-0.5 * (p.gamma_m + p.gamma_o) * 0.2));
}

TEST_CASE("settle reproduces the closed forms") {
    const SystemParams p = default_system_params();
    const MomentState cold = settle(p, 0.0);
    CHECK(cold.n_a == doctest::Approx(0.0));
    CHECK(cold.n_b == doctest::Approx(thermal_occupation(p)).epsilon(1e-13));
    CHECK(std::abs(cold.coherence) < 1e-9);

    const double g = coupling_strength(p, 0.1);
    CHECK(relative(settle(p, g).n_b, phonon_occupation_phase_matched(p, g)) < 1e-12);
    const Detuning det{2.0 * p.gamma_m, -0.5 * p.gamma_m};
    CHECK(relative(settle(p, g, det).n_b, phonon_occupation_detuned(p, g, det)) < 1e-12);
    const MomentState expected = closed_form_state(p, g, det);
    const MomentState solved = settle(p, g, det);
    CHECK(relative(solved.n_a, expected.n_a) < 1e-11);
    CHECK(std::abs(solved.coherence - expected.coherence) / std::abs(expected.coherence) < 1e-11);
}

TEST_CASE("integration is flat at thermal equilibrium") {
    const SystemParams p = default_system_params();
    const Trajectory traj = integrate(thermal_state(p), p, 0.0, {}, 5.0 / p.gamma_m, 1e-10);
    CHECK(traj.converged);
    for (const auto& s : traj.samples) {
        CHECK(s.state.n_b == doctest::Approx(thermal_occupation(p)).epsilon(1e-14));
        CHECK(s.state.n_a == 0.0);
    }
}

TEST_CASE("integration converges to the closed form at 0.1 W") {
    const SystemParams p = default_system_params();
    const double g = coupling_strength(p, 0.1);
    const Trajectory traj = integrate(thermal_state(p), p, g, {}, 50.0 / p.gamma_m, 1e-10);
    CHECK(relative(traj.final_state().n_b, phonon_occupation_phase_matched(p, g)) < 1e-9);
    CHECK(traj.max_step <= 0.1 / (p.gamma_m + p.gamma_o + 4.0 * g) * (1.0 + 1e-12));
    CHECK(traj.samples.back().t == doctest::Approx(50.0 / p.gamma_m).epsilon(1e-14));
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        REQUIRE(traj.samples[i].t > traj.samples[i - 1].t);
        CHECK(traj.samples[i].state.n_a >= -1e-10);
        CHECK(traj.samples[i].state.n_b >= -1e-10);
    }
}

TEST_CASE("without a bath everything decays to vacuum") {
    const SystemParams p = frozen_bath();
    const double g = coupling_strength(p, 0.3);
    const MomentState start{2.0, 40.0, {1.0, 0.5}};
    const Trajectory traj = integrate(start, p, g, {p.gamma_m, 0.0}, 60.0 / p.gamma_m, 1e-10);
    const MomentState& end = traj.final_state();
    CHECK(std::abs(end.n_a) < 1e-12);
    CHECK(std::abs(end.n_b) < 1e-12);
    CHECK(std::abs(end.coherence) < 1e-12);
}

TEST_CASE("three-way agreement over the parameter grid") {
    const SystemParams p = default_system_params();
    for (double g_ratio : {0.0, 0.1, 1.0, 10.0}) {
        for (double d_ratio : {0.0, 1.0, 10.0}) {
            const double g = g_ratio * p.gamma_m;
            const Detuning det{d_ratio * p.gamma_m, 0.0};
            const double closed = phonon_occupation_detuned(p, g, det);
            const double solved = settle(p, g, det).n_b;
            const double integrated =
                integrate(thermal_state(p), p, g, det, 50.0 / p.gamma_m, 1e-10).final_state().n_b;
            CAPTURE(g_ratio);
            CAPTURE(d_ratio);
            CHECK(relative(solved, closed) < 1e-9);
            CHECK(relative(integrated, closed) < 1e-9);
            CHECK(relative(integrated, solved) < 1e-9);
        }
    }
}

TEST_CASE("uncoupled relaxation rate is Gm") {
    const SystemParams p = default_system_params();
    const double n_th = thermal_occupation(p);
    const Trajectory traj =
        integrate(MomentState{0.0, 2.0 * n_th, {}}, p, 0.0, {}, 10.0 / p.gamma_m, 1e-12);
    // Least-squares slope of log(n_b - n_th) against t.
    double st = 0, sy = 0, stt = 0, sty = 0;
    double count = 0;
    for (const auto& s : traj.samples) {
        const double y = std::log(s.state.n_b - n_th);
        st += s.t;
        sy += y;
        stt += s.t * s.t;
        sty += s.t * y;
        count += 1;
    }
    const double slope = (count * sty - st * sy) / (count * stt - st * st);
    CHECK(-slope == doctest::Approx(p.gamma_m).epsilon(1e-3));
}

TEST_CASE("phonon flux balance at the steady state") {
    const SystemParams p = default_system_params();
    for (double power : {0.02, 0.1, 0.5}) {
        const double g = coupling_strength(p, power);
        const Detuning det{3.0 * p.gamma_m, p.gamma_m};
        const MomentState s = settle(p, g, det);
        // -i g (c - c*) = 2 g Im c
        const double exchange = 2.0 * g * s.coherence.imag();
        const double influx = p.gamma_m * (thermal_occupation(p) - s.n_b);
        CHECK(relative(influx, exchange) < 1e-9);
        CHECK(relative(p.gamma_o * s.n_a, exchange) < 1e-9);
    }
}

TEST_CASE("Cauchy-Schwarz holds along trajectories") {
    const SystemParams p = default_system_params();
    const double g = coupling_strength(p, 1.0);
    const Trajectory traj = integrate(thermal_state(p), p, g, {p.gamma_m, 0.0}, 20.0 / p.gamma_m, 1e-10);
    for (const auto& s : traj.samples) {
        CHECK(std::norm(s.state.coherence) <= s.state.n_a * (s.state.n_b + 1.0) * (1.0 + 1e-9) + 1e-12);
    }
}

TEST_CASE("integration errors") {
    const SystemParams p = default_system_params();
    CHECK_THROWS_AS(integrate(thermal_state(p), p, 0.0, {}, 0.0, 1e-10), DomainError);
    CHECK_THROWS_AS(integrate(thermal_state(p), p, 0.0, {}, 1e-6, 1e-15), DomainError);
    CHECK_THROWS_AS(integrate(thermal_state(p), p, 0.0, {}, 1e-6, 0.1), DomainError);
    // An unphysical start is reported as a numerical failure.
    const MomentState bad{0.0, 1.0, {5.0, 0.0}};
    CHECK_THROWS_AS(integrate(bad, p, 0.0, {}, 1e-8, 1e-10), NumericalError);
    const MomentState negative{-5.0, 1.0, {}};
    CHECK_THROWS_AS(integrate(negative, p, 0.0, {}, 1e-8, 1e-10), NumericalError);
}
