#include "optocool/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "optocool/errors.hpp"

namespace optocool {

namespace {

struct Position {
    int line;
    int column;  // column of the value
};

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(std::string_view text, const std::string& key, Position pos) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw ConfigError("expected a finite number for '" + key + "', got '" + std::string(text) + "'",
                          key, pos.line, pos.column);
    }
    return value;
}

long long parse_integer(std::string_view text, const std::string& key, Position pos) {
    long long value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("expected an integer for '" + key + "', got '" + std::string(text) + "'",
                          key, pos.line, pos.column);
    }
    return value;
}

bool parse_bool(std::string_view text, const std::string& key, Position pos) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw ConfigError("expected true or false for '" + key + "'", key, pos.line, pos.column);
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

using Setter = std::function<void(RunConfig&, std::string_view, const std::string&, Position)>;

Setter number(double RunConfig::*field) {
    return [field](RunConfig& c, std::string_view v, const std::string& k, Position p) {
        c.*field = parse_double(v, k, p);
    };
}

Setter system_number(double SystemSpec::*field) {
    return [field](RunConfig& c, std::string_view v, const std::string& k, Position p) {
        c.system.*field = parse_double(v, k, p);
    };
}

Setter integer(int RunConfig::*field) {
    return [field](RunConfig& c, std::string_view v, const std::string& k, Position p) {
        const long long n = parse_integer(v, k, p);
        if (n < 0 || n > 1'000'000'000) {
            throw ConfigError("'" + k + "' is out of range", k, p.line, p.column);
        }
        c.*field = static_cast<int>(n);
    };
}

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"omega_b_hz", system_number(&SystemSpec::omega_b_hz)},
        {"gamma_m_hz", system_number(&SystemSpec::gamma_m_hz)},
        {"gamma_o_hz", system_number(&SystemSpec::gamma_o_hz)},
        {"gain_total_per_m_w", system_number(&SystemSpec::gain_total)},
        {"gain_intrinsic_m_per_w",
         [](RunConfig& c, std::string_view v, const std::string& k, Position p) {
             c.system.gain_intrinsic = parse_double(v, k, p);
         }},
        {"length_m", system_number(&SystemSpec::length)},
        {"refractive_index", system_number(&SystemSpec::refractive_index)},
        {"temperature_k", system_number(&SystemSpec::temperature)},
        {"rates_convention",
         [](RunConfig& c, std::string_view v, const std::string& k, Position p) {
             const auto conv = parse_rates_convention(v);
             if (!conv) {
                 throw ConfigError("rates_convention must be as_given or angular", k, p.line, p.column);
             }
             c.system.convention = *conv;
         }},
        {"pump_power_w", number(&RunConfig::pump_power_w)},
        {"delta_l_hz",
         [](RunConfig& c, std::string_view v, const std::string& k, Position p) {
             c.delta_l_hz = parse_double(v, k, p);
         }},
        {"delta1_hz", number(&RunConfig::delta1_hz)},
        {"delta2_hz", number(&RunConfig::delta2_hz)},
        {"sweep_start_w", number(&RunConfig::sweep_start_w)},
        {"sweep_stop_w", number(&RunConfig::sweep_stop_w)},
        {"sweep_count", integer(&RunConfig::sweep_count)},
        {"sweep_scale",
         [](RunConfig& c, std::string_view v, const std::string& k, Position p) {
             if (v == "linear") {
                 c.sweep_log = false;
             } else if (v == "log") {
                 c.sweep_log = true;
             } else {
                 throw ConfigError("sweep_scale must be linear or log", k, p.line, p.column);
             }
         }},
        {"langevin_count", integer(&RunConfig::langevin_count)},
        {"langevin_dt_factor", number(&RunConfig::langevin_dt_factor)},
        {"langevin_t_end_factor", number(&RunConfig::langevin_t_end_factor)},
        {"langevin_base_seed",
         [](RunConfig& c, std::string_view v, const std::string& k, Position p) {
             std::uint64_t seed = 0;
             const auto* end = v.data() + v.size();
             const auto [ptr, ec] = std::from_chars(v.data(), end, seed);
             if (ec != std::errc{} || ptr != end) {
                 throw ConfigError("expected an unsigned 64-bit seed for '" + k + "'", k, p.line,
                                   p.column);
             }
             c.langevin_base_seed = seed;
         }},
        {"spectrum_points", integer(&RunConfig::spectrum_points)},
        {"spectrum_span_factor", number(&RunConfig::spectrum_span_factor)},
        {"dynamics_t_end_factor", number(&RunConfig::dynamics_t_end_factor)},
        {"dynamics_tol", number(&RunConfig::dynamics_tol)},
        {"depletion_seed_w", number(&RunConfig::depletion_seed_w)},
        {"depletion_fraction", number(&RunConfig::depletion_fraction)},
        {"depletion_max_power_w", number(&RunConfig::depletion_max_power_w)},
        {"depletion_loss_per_m", number(&RunConfig::depletion_loss_per_m)},
        {"depletion_steps", integer(&RunConfig::depletion_steps)},
        {"output_dir",
         [](RunConfig& c, std::string_view v, const std::string&, Position) {
             c.output_dir = std::string(v);
         }},
        {"svg",
         [](RunConfig& c, std::string_view v, const std::string& k, Position p) {
             c.svg = parse_bool(v, k, p);
         }},
    };
    return table;
}

bool valid_key(std::string_view key) {
    if (key.empty()) return false;
    for (char ch : key) {
        if (!((ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '_')) return false;
    }
    return key.front() >= 'a' && key.front() <= 'z';
}

void require(bool ok, const char* key, const std::string& what) {
    if (!ok) throw ConfigError(std::string(key) + ": " + what, key);
}

}  // namespace

Drive RunConfig::drive() const {
    const SystemParams p = params();
    Drive d = Drive::phase_matched(p, pump_power_w);
    if (delta_l_hz) d.delta_l = p.to_rate(*delta_l_hz);
    return d;
}

Detuning RunConfig::detuning() const {
    const SystemParams p = params();
    return rotating_frame_detuning(p, drive(), Detuning{p.to_rate(delta1_hz), p.to_rate(delta2_hz)});
}

PropagationOptions RunConfig::propagation_options() const {
    PropagationOptions o;
    o.steps = depletion_steps;
    o.loss_per_m = depletion_loss_per_m;
    return o;
}

void RunConfig::validate() const {
    require(system.omega_b_hz > 0.0, "omega_b_hz", "must be > 0");
    require(system.gamma_m_hz > 0.0, "gamma_m_hz", "must be > 0");
    require(system.gamma_o_hz > 0.0, "gamma_o_hz", "must be > 0");
    require(system.gain_total > 0.0, "gain_total_per_m_w", "must be > 0");
    require(!system.gain_intrinsic || *system.gain_intrinsic > 0.0, "gain_intrinsic_m_per_w",
            "must be > 0");
    require(system.length > 0.0, "length_m", "must be > 0");
    require(system.refractive_index >= 1.0, "refractive_index", "must be >= 1");
    require(system.temperature > 0.0, "temperature_k", "must be > 0");
    require(pump_power_w >= 0.0, "pump_power_w", "must be >= 0");
    require(sweep_start_w >= 0.0, "sweep_start_w", "must be >= 0");
    require(sweep_stop_w >= sweep_start_w, "sweep_stop_w", "must be >= sweep_start_w");
    require(sweep_count >= 1, "sweep_count", "must be >= 1");
    require(sweep_count == 1 || sweep_stop_w > sweep_start_w, "sweep_stop_w",
            "must exceed sweep_start_w when sweep_count > 1");
    require(!sweep_log || sweep_start_w > 0.0, "sweep_start_w", "must be > 0 for log spacing");
    require(langevin_count >= 2, "langevin_count", "must be >= 2");
    require(langevin_dt_factor > 0.0 && langevin_dt_factor <= 0.05, "langevin_dt_factor",
            "must lie in (0, 0.05]");
    require(langevin_t_end_factor >= 20.0, "langevin_t_end_factor", "must be >= 20");
    require(spectrum_points >= 1000, "spectrum_points", "must be >= 1000");
    require(spectrum_span_factor >= 10.0, "spectrum_span_factor", "must be >= 10");
    require(dynamics_t_end_factor > 0.0, "dynamics_t_end_factor", "must be > 0");
    require(dynamics_tol > 1e-14 && dynamics_tol < 1e-2, "dynamics_tol", "must lie in (1e-14, 1e-2)");
    require(depletion_seed_w > 0.0, "depletion_seed_w", "must be > 0");
    require(depletion_fraction > 0.0 && depletion_fraction < 0.5, "depletion_fraction",
            "must lie in (0, 0.5)");
    require(depletion_max_power_w > 0.0, "depletion_max_power_w", "must be > 0");
    require(depletion_loss_per_m >= 0.0, "depletion_loss_per_m", "must be >= 0");
    require(depletion_steps >= 1, "depletion_steps", "must be >= 1");
    require(!output_dir.empty(), "output_dir", "must not be empty");
    try {
        params();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

RunConfig parse_config_text(std::string_view text, const std::string& origin) {
    RunConfig config;
    std::map<std::string, Position, std::less<>> seen;
    int line_no = 0;
    std::size_t pos = 0;
    auto fail = [&](const std::string& what, const std::string& key, int column) -> ConfigError {
        std::ostringstream msg;
        msg << origin << ":" << line_no << ":" << column << ": " << what;
        return ConfigError(msg.str(), key, line_no, column);
    };
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view raw =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        if (trim(line).empty()) continue;

        const auto eq = line.find('=');
        const int key_col = static_cast<int>(line.find_first_not_of(" \t")) + 1;
        if (eq == std::string_view::npos) {
            throw fail("expected 'key = value'", {}, key_col);
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto value_offset = line.substr(eq + 1).find_first_not_of(" \t");
        const int value_col = static_cast<int>(eq + 1 +
                                               (value_offset == std::string_view::npos ? 0 : value_offset)) + 1;
        if (!valid_key(key)) {
            throw fail("malformed key '" + key + "'", key, key_col);
        }
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw fail("unknown key '" + key + "'", key, key_col);
        }
        if (!seen.emplace(key, Position{line_no, value_col}).second) {
            throw fail("duplicate key '" + key + "'", key, key_col);
        }
        if (value.empty()) {
            throw fail("missing value for '" + key + "'", key, value_col);
        }
        try {
            it->second(config, value, key, Position{line_no, value_col});
        } catch (const ConfigError& e) {
            throw fail(e.what(), key, value_col);
        }
    }
    try {
        config.validate();
    } catch (const ConfigError& e) {
        std::ostringstream msg;
        msg << origin;
        int line = 0;
        int column = 0;
        if (const auto it = seen.find(e.key()); it != seen.end()) {
            line = it->second.line;
            column = it->second.column;
            msg << ":" << line << ":" << column;
        }
        msg << ": " << e.what();
        throw ConfigError(msg.str(), e.key(), line, column);
    }
    return config;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.string());
}

std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& c) {
    const SystemParams p = c.params();
    const double delta_l = c.delta_l_hz ? *c.delta_l_hz : -c.system.omega_b_hz;
    return {
        {"omega_b_hz", format_double(c.system.omega_b_hz)},
        {"gamma_m_hz", format_double(c.system.gamma_m_hz)},
        {"gamma_o_hz", format_double(c.system.gamma_o_hz)},
        {"gain_total_per_m_w", format_double(c.system.gain_total)},
        {"gain_intrinsic_m_per_w",
         c.system.gain_intrinsic ? format_double(*c.system.gain_intrinsic) : "unset"},
        {"length_m", format_double(c.system.length)},
        {"refractive_index", format_double(c.system.refractive_index)},
        {"temperature_k", format_double(c.system.temperature)},
        {"rates_convention", std::string(to_string(p.convention))},
        {"pump_power_w", format_double(c.pump_power_w)},
        {"delta_l_hz", format_double(delta_l)},
        {"delta1_hz", format_double(c.delta1_hz)},
        {"delta2_hz", format_double(c.delta2_hz)},
        {"sweep_start_w", format_double(c.sweep_start_w)},
        {"sweep_stop_w", format_double(c.sweep_stop_w)},
        {"sweep_count", std::to_string(c.sweep_count)},
        {"sweep_scale", c.sweep_log ? "log" : "linear"},
        {"langevin_count", std::to_string(c.langevin_count)},
        {"langevin_dt_factor", format_double(c.langevin_dt_factor)},
        {"langevin_t_end_factor", format_double(c.langevin_t_end_factor)},
        {"langevin_base_seed", std::to_string(c.langevin_base_seed)},
        {"spectrum_points", std::to_string(c.spectrum_points)},
        {"spectrum_span_factor", format_double(c.spectrum_span_factor)},
        {"dynamics_t_end_factor", format_double(c.dynamics_t_end_factor)},
        {"dynamics_tol", format_double(c.dynamics_tol)},
        {"depletion_seed_w", format_double(c.depletion_seed_w)},
        {"depletion_fraction", format_double(c.depletion_fraction)},
        {"depletion_max_power_w", format_double(c.depletion_max_power_w)},
        {"depletion_loss_per_m", format_double(c.depletion_loss_per_m)},
        {"depletion_steps", std::to_string(c.depletion_steps)},
        {"output_dir", c.output_dir},
        {"svg", c.svg ? "true" : "false"},
    };
}

}  // namespace optocool
