#include "coulombflow/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace coulombflow {

namespace {

constexpr double width = 800, height = 500;
constexpr double left = 80, right = 180, top = 40, bottom = 60;
const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '"') out += "&quot;";
        else out += c;
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void widen() {
        if (!(lo <= hi)) lo = 0, hi = 1;
        if (hi - lo < 1e-300 + 1e-12 * std::abs(hi)) {
            const double pad = std::abs(hi) > 0 ? 0.05 * std::abs(hi) : 1.0;
            lo -= pad;
            hi += pad;
        }
    }
};

std::vector<double> ticks(const Range& r) {
    const double raw = (r.hi - r.lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double f : {1.0, 2.0, 5.0, 10.0})
        if (f * mag >= raw) {
            step = f * mag;
            break;
        }
    std::vector<double> out;
    for (double t = std::ceil(r.lo / step) * step; t <= r.hi + 1e-9 * step; t += step) out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    return out;
}

} // namespace

std::string render_svg(const std::vector<PlotSeries>& series, const std::string& x_label, const std::string& title) {
    if (series.empty()) throw std::invalid_argument("nothing to plot");
    Range xr, yr;
    for (const auto& s : series) {
        for (double v : s.x) xr.add(v);
        for (double v : s.y) yr.add(v);
    }
    xr.widen();
    yr.widen();
    const double pw = width - left - right, ph = height - top - bottom;
    auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return top + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
       << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : ticks(xr)) {
        os << "<line x1=\"" << fmt(px(t)) << "\" y1=\"" << top + ph << "\" x2=\"" << fmt(px(t)) << "\" y2=\""
           << top + ph + 5 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fmt(px(t)) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << fmt(t)
           << "</text>\n";
    }
    for (double t : ticks(yr)) {
        os << "<line x1=\"" << left - 5 << "\" y1=\"" << fmt(py(t)) << "\" x2=\"" << left << "\" y2=\"" << fmt(py(t))
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << left - 8 << "\" y=\"" << fmt(py(t) + 4) << "\" text-anchor=\"end\">" << fmt(t)
           << "</text>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">" << escape(x_label)
       << "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = palette[i % std::size(palette)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
            if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
            os << (first ? "" : " ") << fmt(px(s.x[k])) << ',' << fmt(py(s.y[k]));
            first = false;
        }
        os << "\"/>\n";
        const double ly = top + 10 + 18 * double(i);
        os << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 40 << "\" y2=\"" << ly
           << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << left + pw + 46 << "\" y=\"" << ly + 4 << "\">" << escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace coulombflow
