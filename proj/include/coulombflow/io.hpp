#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace coulombflow {

// 17 significant digits, so every value round-trips exactly.
std::string format_double(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    // Index of a named column; throws std::invalid_argument if absent.
    std::size_t column(const std::string& name) const;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
// Throws std::runtime_error on unreadable, empty or malformed input.
CsvTable read_csv(const std::filesystem::path& path);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Deterministic SVG line chart with axes, ticks and a legend.
std::string render_svg(const std::vector<PlotSeries>& series, const std::string& x_label, const std::string& title);
void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace coulombflow
