#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "optocool/config.hpp"

namespace optocool {

inline constexpr std::string_view kVersion = "1.0.0";

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3 };

/// A CSV file to be written: comment metadata, header row, numeric rows.
struct Table {
    std::string name;  // file stem
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
    int svg_x = 0;  // columns plotted by --svg
    int svg_y = 1;
};

/// CSV text: version and resolved-config comment block, metadata, header, rows
/// with 17 significant digits.
std::string render_csv(const Table& table, const RunConfig& config, std::string_view command);

/// Single-polyline SVG plot of two table columns.
std::string render_svg(const Table& table);

std::string format_number(double value);

// Each command computes its tables without touching the filesystem.
std::vector<Table> cmd_steady(const RunConfig& config);
std::vector<Table> cmd_sweep(const RunConfig& config);
std::vector<Table> cmd_dynamics(const RunConfig& config);
std::vector<Table> cmd_langevin(const RunConfig& config);
std::vector<Table> cmd_spectrum(const RunConfig& config);
std::vector<Table> cmd_depletion(const RunConfig& config);

struct ReportRow {
    std::string quantity;
    std::string unit;
    double value = 0.0;
    double low = 0.0;
    double high = 0.0;
    bool pass = false;
};

/// Scoreboard of the reference numbers of the cooling experiment.
std::vector<ReportRow> build_report(const RunConfig& config);
std::string render_report(const std::vector<ReportRow>& rows);
std::string render_report_csv(const std::vector<ReportRow>& rows, const RunConfig& config);

/// Entry point of the tool: `<subcommand> --config <path> [--out <dir>] [--svg]`.
/// args excludes the program name. Returns one of ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace optocool
