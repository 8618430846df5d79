#include "optocool/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "optocool/depletion.hpp"
#include "optocool/errors.hpp"
#include "optocool/steady.hpp"

namespace optocool {

namespace {

// Reference values of the measured sample and the bands that absorb their rounding.
constexpr double kFinalOccupation = 212.0;

ReportRow band_row(std::string quantity, std::string unit, double value, double low, double high) {
    return ReportRow{std::move(quantity), std::move(unit), value, low, high,
                     value >= low && value <= high};
}

ReportRow exact_row(std::string quantity, std::string unit, double value, double expected) {
    const double slack = 1e-9 * std::abs(expected);
    return band_row(std::move(quantity), std::move(unit), value, expected - slack, expected + slack);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write output file '" + path.string() + "'", "output_dir");
    out << text;
    if (!out) throw ConfigError("failed writing output file '" + path.string() + "'", "output_dir");
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += ch;
        }
    }
    return out;
}

}  // namespace

std::string render_csv(const Table& table, const RunConfig& config, std::string_view command) {
    std::ostringstream out;
    out << "# optocool " << kVersion << "\n";
    out << "# command = " << command << "\n";
    for (const auto& [key, value] : resolved_entries(config)) {
        out << "# config." << key << " = " << value << "\n";
    }
    for (const auto& [key, value] : table.metadata) out << "# " << key << " = " << value << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << table.columns[i];
    }
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << "\n";
    }
    return out.str();
}

std::string render_svg(const Table& table) {
    constexpr double width = 640.0;
    constexpr double height = 400.0;
    constexpr double margin = 60.0;
    const auto xi = static_cast<std::size_t>(table.svg_x);
    const auto yi = static_cast<std::size_t>(table.svg_y);
    double x_min = INFINITY, x_max = -INFINITY, y_min = INFINITY, y_max = -INFINITY;
    for (const auto& row : table.rows) {
        x_min = std::min(x_min, row[xi]);
        x_max = std::max(x_max, row[xi]);
        y_min = std::min(y_min, row[yi]);
        y_max = std::max(y_max, row[yi]);
    }
    if (!(x_max > x_min)) x_max = x_min + 1.0;
    if (!(y_max > y_min)) y_max = y_min + 1.0;
    auto px = [&](double x) { return margin + (x - x_min) / (x_max - x_min) * (width - 2 * margin); };
    auto py = [&](double y) {
        return height - margin - (y - y_min) / (y_max - y_min) * (height - 2 * margin);
    };

    std::ostringstream out;
    out << std::setprecision(6);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
        << height - margin << "\" stroke=\"black\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (const auto& row : table.rows) out << px(row[xi]) << "," << py(row[yi]) << " ";
    out << "\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">"
        << escape_xml(table.columns[xi]) << "</text>\n";
    out << "<text x=\"15\" y=\"" << height / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
        << height / 2 << ")\">" << escape_xml(table.columns[yi]) << "</text>\n";
    out << "<text x=\"" << margin << "\" y=\"" << height - margin + 15 << "\">" << x_min << "</text>\n";
    out << "<text x=\"" << width - margin << "\" y=\"" << height - margin + 15
        << "\" text-anchor=\"end\">" << x_max << "</text>\n";
    out << "<text x=\"" << margin - 5 << "\" y=\"" << height - margin << "\" text-anchor=\"end\">" << y_min
        << "</text>\n";
    out << "<text x=\"" << margin - 5 << "\" y=\"" << margin << "\" text-anchor=\"end\">" << y_max
        << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

std::vector<ReportRow> build_report(const RunConfig& config) {
    const SystemParams params = config.params();
    const double omega = params.omega_b_hz;
    const double n_th = thermal_occupation(params);
    const double t_final = effective_temperature(kFinalOccupation, omega);
    const double floor_n = occupation_floor(params);
    const double power_212 = pump_power_for_occupation(params, kFinalOccupation);
    const double fraction = config.depletion_fraction;
    const double seed = seed_for_threshold_exponent(params, 20.0, fraction);
    const double threshold = depletion_threshold(params, seed, fraction, config.depletion_max_power_w,
                                                 config.propagation_options());

    std::vector<ReportRow> rows;
    rows.push_back(band_row("thermal occupation n_th", "phonons", n_th, 821.7, 838.3));
    rows.push_back(band_row("temperature at 212 phonons", "K", t_final, 73.0, 77.0));
    rows.push_back(band_row("cooling depth", "K", params.temperature - t_final, 216.0, 220.0));
    rows.push_back(band_row("occupation floor", "phonons", floor_n, 90.0, 105.0));
    rows.push_back(band_row("floor temperature", "K", effective_temperature(floor_n, omega), 33.0, 37.0));
    rows.push_back(band_row("cooling rate floor R", "", cooling_rate_floor(params), 0.110, 0.118));
    rows.push_back(exact_row("linewidth without pump", "Hz", params.to_hz(effective_linewidth(params, 0.0)),
                             46.8e6));
    rows.push_back(exact_row("linewidth limit", "Hz", params.to_hz(linewidth_limit(params)), 410.8e6));
    rows.push_back(band_row("pump power for 212 phonons", "W", power_212, 0.19, 0.20));
    rows.push_back(band_row("linewidth at 212 phonons", "Hz",
                            params.to_hz(effective_linewidth(params, coupling_strength(params, power_212))),
                            182e6, 184e6));
    rows.push_back(band_row("depletion threshold gain", "", small_signal_gain(params, threshold), 19.0, 21.0));
    rows.push_back(band_row("depletion threshold power", "W", threshold, 0.23, 0.26));
    return rows;
}

std::string render_report(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    out << std::left << std::setw(30) << "quantity" << std::right << std::setw(16) << "value"
        << std::setw(30) << "expected band" << "  unit     status\n";
    for (const auto& r : rows) {
        std::ostringstream band;
        band << std::setprecision(6) << "[" << r.low << ", " << r.high << "]";
        out << std::left << std::setw(30) << r.quantity << std::right << std::setw(16)
            << std::setprecision(8) << r.value << std::setw(30) << band.str() << "  " << std::left
            << std::setw(9) << r.unit << (r.pass ? "PASS" : "FAIL") << "\n";
    }
    return out.str();
}

std::string render_report_csv(const std::vector<ReportRow>& rows, const RunConfig& config) {
    std::ostringstream out;
    out << "# optocool " << kVersion << "\n# command = report\n";
    for (const auto& [key, value] : resolved_entries(config)) {
        out << "# config." << key << " = " << value << "\n";
    }
    out << "quantity,unit,value,band_low,band_high,status\n";
    for (const auto& r : rows) {
        out << r.quantity << "," << r.unit << "," << format_number(r.value) << ","
            << format_number(r.low) << "," << format_number(r.high) << ","
            << (r.pass ? "PASS" : "FAIL") << "\n";
    }
    return out.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optoacoustic cooling of traveling phonons: steady states, dynamics, "
                 "Langevin ensembles, spectra and pump depletion",
                 "optocool"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    std::string config_path;
    std::string out_dir;
    bool svg = false;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"steady", "steady-state observables at the configured pump power"},
        {"sweep", "steady-state observables over the pump-power grid"},
        {"dynamics", "moment equations integrated from the thermal state"},
        {"langevin", "stochastic ensemble estimate of the phonon number"},
        {"spectrum", "acoustic PSD, Lorentzian fit, and linewidth versus power"},
        {"depletion", "pump and Stokes profiles and the depletion threshold"},
        {"report", "scoreboard of the reference cooling numbers"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "config file (key = value lines)")->required();
        sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
        sub->add_flag("--svg", svg, "also write an SVG plot per CSV");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        RunConfig config = parse_config(config_path);
        if (!out_dir.empty()) config.output_dir = out_dir;
        config.svg = config.svg || svg;
        const std::filesystem::path dir(config.output_dir);

        std::vector<std::pair<std::filesystem::path, std::string>> files;
        if (command == "report") {
            const auto rows = build_report(config);
            out << render_report(rows);
            files.emplace_back(dir / "report.csv", render_report_csv(rows, config));
        } else {
            std::vector<Table> tables;
            if (command == "steady") tables = cmd_steady(config);
            else if (command == "sweep") tables = cmd_sweep(config);
            else if (command == "dynamics") tables = cmd_dynamics(config);
            else if (command == "langevin") tables = cmd_langevin(config);
            else if (command == "spectrum") tables = cmd_spectrum(config);
            else tables = cmd_depletion(config);
            for (const auto& t : tables) {
                files.emplace_back(dir / (t.name + ".csv"), render_csv(t, config, command));
                if (config.svg) files.emplace_back(dir / (t.name + ".svg"), render_svg(t));
            }
        }

        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "'", "output_dir");
        for (const auto& [path, text] : files) {
            write_file(path, text);
            out << "wrote " << path.string() << "\n";
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what();
        if (!e.key().empty()) err << " [key: " << e.key() << "]";
        err << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        err << "numerical failure in " << e.module() << " during '" << command << "': " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "numerical failure during '" << command << "': " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace optocool
