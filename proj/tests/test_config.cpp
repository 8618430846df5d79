#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "optocool/config.hpp"
#include "optocool/errors.hpp"

using namespace optocool;

namespace {

ConfigError config_error(const std::string& text) {
    try {
        parse_config_text(text, "run.cfg");
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("config was accepted: " << text);
    return ConfigError("unreachable");
}

}  // namespace

TEST_CASE("minimal file takes measured defaults") {
    const RunConfig c = parse_config_text("pump_power_w = 0.25\n");
    CHECK(c.pump_power_w == 0.25);
    CHECK(c.system.omega_b_hz == 7.38e9);
    CHECK(c.system.gamma_m_hz == 46.8e6);
    CHECK(c.system.gamma_o_hz == 364e6);
    CHECK(c.system.gain_total == 164.0);
    CHECK(c.system.length == 0.5);
    CHECK(c.system.refractive_index == 2.5);
    CHECK(c.system.temperature == 293.0);
    CHECK(c.params().convention == RatesConvention::as_given);
    CHECK(c.sweep_count == 31);
    CHECK(c.langevin_count == 10000);
    CHECK_FALSE(c.svg);
    // No pump offset means the drive sits exactly on the anti-Stokes resonance.
    const Detuning det = c.detuning();
    CHECK(det.delta1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(det.delta2 == 0.0);
}

TEST_CASE("empty file and comments") {
    const RunConfig c = parse_config_text("# only comments\n\n   \n# svg = true\n");
    CHECK(c.pump_power_w == 0.1);
    const RunConfig d = parse_config_text("svg = true   # trailing comment\r\noutput_dir = out\n");
    CHECK(d.svg);
    CHECK(d.output_dir == "out");
}

TEST_CASE("every setting round-trips through the resolved listing") {
    const std::string text =
        "rates_convention = angular\n"
        "temperature_k = 77\n"
        "gamma_o_hz = 2.5e8\n"
        "sweep_scale = log\n"
        "sweep_start_w = 0.001\n"
        "sweep_stop_w = 1\n"
        "sweep_count = 5\n"
        "langevin_base_seed = 18446744073709551615\n"
        "delta1_hz = 1e6\n"
        "delta_l_hz = -7.381e9\n"
        "gain_intrinsic_m_per_w = 2e-9\n";
    const RunConfig c = parse_config_text(text);
    CHECK(c.params().convention == RatesConvention::angular);
    CHECK(c.sweep_log);
    CHECK(c.langevin_base_seed == 18446744073709551615ULL);
    REQUIRE(c.system.gain_intrinsic);
    CHECK(*c.system.gain_intrinsic == 2e-9);

    std::string echoed;
    for (const auto& [key, value] : resolved_entries(c)) {
        if (value != "unset") echoed += key + " = " + value + "\n";
    }
    const RunConfig back = parse_config_text(echoed);
    CHECK(resolved_entries(back) == resolved_entries(c));
}

TEST_CASE("negative linewidth is rejected with its position") {
    const ConfigError e = config_error("pump_power_w = 0.1\n  gamma_m_hz = -4.68e7\n");
    CHECK(e.key() == "gamma_m_hz");
    CHECK(e.line() == 2);
    CHECK(e.column() == 16);
    const std::string what = e.what();
    CHECK(what.find("run.cfg:2:16") != std::string::npos);
    CHECK(what.find("gamma_m_hz") != std::string::npos);
}

TEST_CASE("strict grammar") {
    SUBCASE("duplicate key") {
        const ConfigError e = config_error("pump_power_w = 0.1\npump_power_w = 0.2\n");
        CHECK(e.key() == "pump_power_w");
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    }
    SUBCASE("unknown key") {
        const ConfigError e = config_error("pump_power = 0.1\n");
        CHECK(e.key() == "pump_power");
        CHECK(std::string(e.what()).find("unknown") != std::string::npos);
    }
    SUBCASE("uppercase key") {
        CHECK(config_error("Pump_power_w = 0.1\n").line() == 1);
    }
    SUBCASE("missing equals sign") {
        CHECK(config_error("\n\npump_power_w 0.1\n").line() == 3);
    }
    SUBCASE("missing value") {
        CHECK(config_error("pump_power_w =\n").key() == "pump_power_w");
    }
    SUBCASE("trailing garbage in a number") {
        const ConfigError e = config_error("pump_power_w = 0.1W\n");
        CHECK(e.column() == 16);
    }
    SUBCASE("non-finite number") {
        config_error("temperature_k = nan\n");
        config_error("temperature_k = inf\n");
    }
    SUBCASE("fractional integer") {
        CHECK(config_error("sweep_count = 3.5\n").key() == "sweep_count");
    }
    SUBCASE("bad boolean") {
        CHECK(config_error("svg = yes\n").key() == "svg");
    }
    SUBCASE("bad enumeration") {
        CHECK(config_error("rates_convention = radians\n").key() == "rates_convention");
        CHECK(config_error("sweep_scale = cubic\n").key() == "sweep_scale");
    }
}

TEST_CASE("module preconditions are enforced at load time") {
    CHECK(config_error("langevin_dt_factor = 0.06\n").key() == "langevin_dt_factor");
    CHECK(config_error("langevin_count = 1\n").key() == "langevin_count");
    CHECK(config_error("langevin_t_end_factor = 10\n").key() == "langevin_t_end_factor");
    CHECK(config_error("spectrum_points = 999\n").key() == "spectrum_points");
    CHECK(config_error("sweep_start_w = 0.2\nsweep_stop_w = 0.1\n").key() == "sweep_stop_w");
    CHECK(config_error("sweep_scale = log\n").key() == "sweep_start_w");
    CHECK(config_error("depletion_fraction = 0.7\n").key() == "depletion_fraction");
    CHECK(config_error("depletion_seed_w = 0\n").key() == "depletion_seed_w");
    CHECK(config_error("refractive_index = 0.5\n").key() == "refractive_index");
    CHECK(config_error("pump_power_w = -1\n").line() == 1);
}

TEST_CASE("config files") {
    const auto dir = std::filesystem::temp_directory_path() / "optocool_config_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "ok.cfg";
    {
        std::ofstream out(path);
        out << "pump_power_w = 0.05\n";
    }
    CHECK(parse_config(path).pump_power_w == 0.05);
    CHECK_THROWS_AS(parse_config(dir / "missing.cfg"), ConfigError);
    std::filesystem::remove_all(dir);
}
