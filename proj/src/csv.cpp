#include "coulombflow/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coulombflow {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::invalid_argument("no column named '" + name + "'");
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::ostringstream os;
    for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
        os << '\n';
    }
    write_text(path, os.str());
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    return out;
}

bool parse_number(const std::string& s, double& x) {
    if (s.empty()) return false;
    char* end = nullptr;
    x = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

} // namespace

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path.string());
    CsvTable t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split(line);
        std::vector<double> row(cells.size());
        bool numeric = true;
        for (std::size_t i = 0; i < cells.size(); ++i) numeric = numeric && parse_number(cells[i], row[i]);
        if (!numeric) {
            if (t.header.empty() && t.rows.empty()) {
                t.header = cells;
                continue;
            }
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": non-numeric value");
        }
        const std::size_t width = t.header.empty() ? (t.rows.empty() ? row.size() : t.rows.front().size()) : t.header.size();
        if (row.size() != width)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(width) + " columns");
        t.rows.push_back(std::move(row));
    }
    if (t.rows.empty()) throw std::runtime_error(path.string() + ": no data rows");
    return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

} // namespace coulombflow
