#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "optocool/depletion.hpp"
#include "optocool/model.hpp"
#include "optocool/spectrum.hpp"

namespace optocool {

/// Everything a CLI run needs. Defaults are the measured sample parameters.
///
/// Grammar: UTF-8 text, one `key = value` per line, `#` starts a comment, keys are
/// lowercase snake case, booleans are `true|false`, no sections. Unknown and
/// duplicate keys are errors.
struct RunConfig {
    SystemSpec system;

    double pump_power_w = 0.1;
    std::optional<double> delta_l_hz;  // unset means phase matched, -omega_b
    double delta1_hz = 0.0;
    double delta2_hz = 0.0;

    double sweep_start_w = 0.0;
    double sweep_stop_w = 0.3;
    int sweep_count = 31;
    bool sweep_log = false;

    int langevin_count = 10000;
    double langevin_dt_factor = 0.02;     // dt = factor / (Gm + go + 4g + |d1| + |d2|)
    double langevin_t_end_factor = 20.0;  // t_end = factor / Gm
    std::uint64_t langevin_base_seed = 20240101;

    int spectrum_points = 4096;
    double spectrum_span_factor = 20.0;  // half span in units of (Gm + go)

    double dynamics_t_end_factor = 50.0;  // t_end = factor / Gm
    double dynamics_tol = 1e-10;

    double depletion_seed_w = 1e-9;
    double depletion_fraction = 0.01;
    double depletion_max_power_w = 5.0;
    double depletion_loss_per_m = 0.0;
    int depletion_steps = 2000;

    std::string output_dir = ".";
    bool svg = false;

    SystemParams params() const { return make_system_params(system); }
    Drive drive() const;
    /// Detuning seen by the rotating-frame equations (includes any pump offset).
    Detuning detuning() const;
    GridOptions grid_options() const { return {spectrum_points, spectrum_span_factor}; }
    PropagationOptions propagation_options() const;

    /// Checks every module precondition reachable from the config.
    void validate() const;
};

/// Parses and validates config text. `origin` names the source in error messages.
RunConfig parse_config_text(std::string_view text, const std::string& origin = "<config>");

/// Reads and parses a config file.
RunConfig parse_config(const std::filesystem::path& path);

/// Fully resolved (key, value) pairs in a stable order, values as they would be written.
std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& config);

}  // namespace optocool
