#include <doctest.h>

#include <cmath>
#include <string>

#include "optocool/depletion.hpp"
#include "optocool/errors.hpp"

using namespace optocool;

namespace {

// Lossless closed form. With C = P_p - P_s constant, v = 1/P_s obeys v' = G (C v + 1),
// so 1/P_s(z) = (1/seed + 1/C) exp(G C (z - L)) - 1/C.
double analytic_stokes(double gain, double length, double seed, double c, double z) {
    return 1.0 / ((1.0 / seed + 1.0 / c) * std::exp(gain * c * (z - length)) - 1.0 / c);
}

SystemParams with_gain(double gain_total) {
    SystemSpec spec;
    spec.gain_total = gain_total;
    return make_system_params(spec);
}

}  // namespace

TEST_CASE("small-signal gain") {
    const SystemParams p = default_system_params();
    CHECK(small_signal_gain(p, 0.24) == doctest::Approx(19.68).epsilon(1e-14));
    CHECK(small_signal_gain(p, 0.48) == doctest::Approx(2.0 * small_signal_gain(p, 0.24)));
    CHECK(small_signal_gain(p, 0.0) == 0.0);
}

TEST_CASE("vanishing gain leaves both powers unchanged") {
    const SystemParams p = with_gain(1e-12);
    const auto prof = propagate(p, 0.1, 1e-9);
    for (std::size_t i = 0; i < prof.z.size(); ++i) {
        CHECK(prof.pump[i] == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(prof.stokes[i] == doctest::Approx(1e-9).epsilon(1e-10));
    }
}

TEST_CASE("profiles conserve the power difference") {
    const SystemParams p = default_system_params();
    for (double power : {0.05, 0.1, 0.24, 0.3, 1.0}) {
        CAPTURE(power);
        const auto prof = propagate(p, power, 1e-9);
        const double c0 = prof.pump.front() - prof.stokes.front();
        for (std::size_t i = 0; i < prof.z.size(); ++i) {
            CHECK(std::abs(prof.pump[i] - prof.stokes[i] - c0) <= 1e-9 * c0);
        }
        CHECK(prof.residual <= 1e-10);
        CHECK(prof.z.front() == 0.0);
        CHECK(prof.z.back() == doctest::Approx(p.length));
        CHECK(prof.stokes.back() == doctest::Approx(1e-9).epsilon(1e-9));
    }
}

TEST_CASE("profile matches the lossless closed form") {
    const SystemParams p = default_system_params();
    for (double power : {0.1, 0.3, 1.0}) {
        CAPTURE(power);
        const double seed = 1e-6;
        const auto prof = propagate(p, power, seed);
        const double c = prof.pump_in - prof.stokes_out();
        for (std::size_t i = 0; i < prof.z.size(); i += 50) {
            CHECK(prof.stokes[i] ==
                  doctest::Approx(analytic_stokes(p.gain_total, p.length, seed, c, prof.z[i])).epsilon(1e-7));
        }
    }
}

TEST_CASE("0.1 W stays undepleted with the default seed") {
    const SystemParams p = default_system_params();
    const auto prof = propagate(p, 0.1, 1e-9);
    CHECK(prof.depletion_fraction() < 0.01);
    CHECK(prof.mean_pump() == doctest::Approx(0.1).epsilon(1e-4));
}

TEST_CASE("undepleted limit reproduces exponential gain") {
    const SystemParams p = default_system_params();
    for (double power : {0.05, 0.1, 0.13}) {
        CAPTURE(power);
        const auto prof = propagate(p, power, 1e-9);
        REQUIRE(prof.depletion_fraction() < 1e-3);
        CHECK(prof.stokes_out() / prof.stokes.back() ==
              doctest::Approx(std::exp(small_signal_gain(p, power))).epsilon(5e-3));
    }
}

TEST_CASE("shooting solution is resolution independent") {
    const SystemParams p = default_system_params();
    PropagationOptions coarse;
    PropagationOptions fine;
    fine.steps = 2 * coarse.steps;
    for (double power : {0.24, 0.5}) {
        CAPTURE(power);
        const double a = propagate(p, power, 1e-9, coarse).stokes_out();
        const double b = propagate(p, power, 1e-9, fine).stokes_out();
        CHECK(std::abs(a - b) <= 1e-6 * b);
    }
}

TEST_CASE("loss breaks conservation but keeps the boundary values") {
    const SystemParams p = default_system_params();
    PropagationOptions lossy;
    lossy.loss_per_m = 0.5;
    const auto prof = propagate(p, 0.2, 1e-9, lossy);
    CHECK(prof.pump_out() < prof.pump_in * std::exp(-0.5 * p.length) * (1.0 + 1e-9));
    CHECK(prof.stokes.back() == doctest::Approx(1e-9).epsilon(1e-9));
}

TEST_CASE("depletion threshold") {
    const SystemParams p = default_system_params();
    const double fraction = 0.01;
    const double seed = seed_for_threshold_exponent(p, 20.0, fraction);
    const double threshold = depletion_threshold(p, seed, fraction, 5.0);
    CHECK(threshold >= 0.23);
    CHECK(threshold <= 0.26);
    const double exponent = small_signal_gain(p, threshold);
    CHECK(exponent >= 19.0);
    CHECK(exponent <= 21.0);
    CHECK(propagate(p, threshold, seed).depletion_fraction() == doctest::Approx(fraction).epsilon(1e-6));

    // Larger seeds deplete the pump sooner.
    CHECK(depletion_threshold(p, 10.0 * seed, fraction, 5.0) < threshold);
    CHECK(depletion_threshold(p, 0.1 * seed, fraction, 5.0) > threshold);
    // Smaller targets are reached sooner.
    CHECK(depletion_threshold(p, 1e-9, 1e-4, 5.0) < depletion_threshold(p, 1e-9, 1e-2, 5.0));
}

TEST_CASE("threshold vanishes as the target approaches the seed limit") {
    const SystemParams p = default_system_params();
    const double seed = 1e-6;
    const double floor = seed * p.gain_total * p.length;
    CHECK(depletion_threshold(p, seed, floor, 5.0) == 0.0);
    CHECK(depletion_threshold(p, seed, 0.5 * floor, 5.0) == 0.0);
    const double near = depletion_threshold(p, seed, 1.01 * floor, 5.0);
    const double far = depletion_threshold(p, seed, 2.0 * floor, 5.0);
    CHECK(near > 0.0);
    CHECK(near < far);
    CHECK(near < 0.05);
}

TEST_CASE("depletion preconditions and failures") {
    const SystemParams p = default_system_params();
    CHECK_THROWS_AS(propagate(p, 0.1, 0.0), DomainError);
    CHECK_THROWS_AS(propagate(p, -0.1, 1e-9), DomainError);
    PropagationOptions few;
    few.steps = 0;
    CHECK_THROWS_AS(propagate(p, 0.1, 1e-9, few), DomainError);
    // Unreachable target within the allowed power.
    CHECK_THROWS_AS(depletion_threshold(p, 1e-9, 0.1, 0.01), NumericalError);
    // Bisection starved of iterations reports its bracket.
    PropagationOptions starved;
    starved.max_iterations = 3;
    try {
        propagate(p, 0.5, 1e-9, starved);
        FAIL("expected a numerical failure");
    } catch (const NumericalError& e) {
        CHECK(e.module() == "depletion");
        CHECK(std::string(e.what()).find("bracket") != std::string::npos);
    }
    CHECK_THROWS_AS(seed_for_threshold_exponent(p, 0.0, 0.01), DomainError);
}
