#include "solsim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "solsim/error.hpp"

namespace solsim::plot {

namespace {

constexpr double canvas_w = 800.0;
constexpr double canvas_h = 500.0;
constexpr double margin_left = 70.0;
constexpr double margin_right = 25.0;
constexpr double margin_top = 40.0;
constexpr double margin_bottom = 55.0;

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

struct Range {
    double lo = 0.0;
    double hi = 1.0;

    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void tighten(double v) { lo = hi = v; }
};

struct Mapper {
    Range x, y;

    double px(double v) const {
        const double span = x.hi - x.lo;
        const double t = span > 0.0 ? (v - x.lo) / span : 0.5;
        return margin_left + t * (canvas_w - margin_left - margin_right);
    }
    double py(double v) const {
        const double span = y.hi - y.lo;
        const double t = span > 0.0 ? (v - y.lo) / span : 0.5;
        return canvas_h - margin_bottom - t * (canvas_h - margin_top - margin_bottom);
    }
};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::ofstream open_svg(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << canvas_w << "\" height=\""
        << canvas_h << "\" viewBox=\"0 0 " << canvas_w << ' ' << canvas_h << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return out;
}

void close_svg(std::ofstream& out, const std::filesystem::path& path) {
    out << "</svg>\n";
    if (!out) throw IoError("write failed: " + path.string());
}

void draw_frame(std::ofstream& out, const Mapper& map, const std::string& title,
                const std::string& x_label, const std::string& y_label) {
    const double x0 = margin_left, x1 = canvas_w - margin_right;
    const double y0 = canvas_h - margin_bottom, y1 = margin_top;
    out << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\""
        << y0 - y1 << "\" fill=\"none\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << canvas_w / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
    out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << canvas_h - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << (y0 + y1) / 2 << "\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 "
        << (y0 + y1) / 2 << ")\">" << y_label << "</text>\n";

    for (int k = 0; k <= 4; ++k) {
        const double t = static_cast<double>(k) / 4.0;
        const double xv = map.x.lo + t * (map.x.hi - map.x.lo);
        const double yv = map.y.lo + t * (map.y.hi - map.y.lo);
        const double xp = map.px(xv);
        const double yp = map.py(yv);
        out << "<line x1=\"" << xp << "\" y1=\"" << y0 << "\" x2=\"" << xp << "\" y2=\"" << y0 + 5
            << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << xp << "\" y=\"" << y0 + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(xv)
            << "</text>\n";
        out << "<line x1=\"" << x0 - 5 << "\" y1=\"" << yp << "\" x2=\"" << x0 << "\" y2=\"" << yp
            << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << x0 - 8 << "\" y=\"" << yp + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(yv)
            << "</text>\n";
    }
}

std::string heat_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    // Dark blue through teal to yellow.
    double r, g, b;
    if (t < 0.5) {
        const double u = t / 0.5;
        r = 0.13 + u * (0.11 - 0.13);
        g = 0.08 + u * (0.60 - 0.08);
        b = 0.35 + u * (0.42 - 0.35);
    } else {
        const double u = (t - 0.5) / 0.5;
        r = 0.11 + u * (0.96 - 0.11);
        g = 0.60 + u * (0.90 - 0.60);
        b = 0.42 + u * (0.26 - 0.42);
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(r * 255.0),
                  static_cast<int>(g * 255.0), static_cast<int>(b * 255.0));
    return buf;
}

} // namespace

void write_line_svg(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    std::span<const Series> series) {
    Mapper map;
    bool first = true;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (first) {
                map.x.tighten(s.x[i]);
                map.y.tighten(s.y[i]);
                first = false;
            } else {
                map.x.include(s.x[i]);
                map.y.include(s.y[i]);
            }
        }
    }

    auto out = open_svg(path);
    draw_frame(out, map, title, x_label, y_label);
    std::size_t color = 0;
    double legend_y = margin_top + 16.0;
    for (const auto& s : series) {
        const char* stroke = palette[color % (sizeof palette / sizeof palette[0])];
        out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << map.px(s.x[i]) << ',' << map.py(s.y[i]) << ' ';
        out << "\"/>\n";
        if (!s.label.empty()) {
            out << "<line x1=\"" << margin_left + 10 << "\" y1=\"" << legend_y << "\" x2=\""
                << margin_left + 34 << "\" y2=\"" << legend_y << "\" stroke=\"" << stroke
                << "\" stroke-width=\"1.5\"/>\n";
            out << "<text x=\"" << margin_left + 40 << "\" y=\"" << legend_y + 4
                << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
            legend_y += 16.0;
        }
        ++color;
    }
    close_svg(out, path);
}

void write_heatmap_svg(const std::filesystem::path& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       std::span<const double> x, std::span<const double> y,
                       const std::vector<std::vector<double>>& value) {
    if (x.empty() || y.empty() || value.size() != x.size())
        throw IoError("heatmap: inconsistent dimensions");

    double peak = 0.0;
    for (const auto& col : value)
        for (double v : col) peak = std::max(peak, v);
    if (peak <= 0.0) peak = 1.0;

    Mapper map;
    map.x = {x.front(), x.back()};
    map.y = {y.front(), y.back()};

    auto out = open_svg(path);
    const double cell_w = (canvas_w - margin_left - margin_right) / static_cast<double>(x.size());
    const double cell_h = (canvas_h - margin_top - margin_bottom) / static_cast<double>(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (value[i].size() != y.size()) throw IoError("heatmap: inconsistent dimensions");
        for (std::size_t k = 0; k < y.size(); ++k) {
            const double xp =
                margin_left + static_cast<double>(i) * cell_w;
            const double yp =
                canvas_h - margin_bottom - static_cast<double>(k + 1) * cell_h;
            out << "<rect x=\"" << xp << "\" y=\"" << yp << "\" width=\"" << cell_w + 0.5
                << "\" height=\"" << cell_h + 0.5 << "\" fill=\""
                << heat_color(value[i][k] / peak) << "\"/>\n";
        }
    }
    draw_frame(out, map, title, x_label, y_label);
    close_svg(out, path);
}

void write_box_svg(const std::filesystem::path& path, const std::string& title,
                   std::span<const DayChargeStats> stats, std::span<const double> measured) {
    if (stats.empty()) throw IoError("box plot: no statistics");

    Mapper map;
    map.x.tighten(static_cast<double>(stats.front().day));
    map.y.tighten(stats.front().whisker_low);
    for (const auto& s : stats) {
        map.x.include(static_cast<double>(s.day));
        map.y.include(s.whisker_low);
        map.y.include(s.whisker_high);
    }
    for (double v : measured) map.y.include(v);
    map.x.lo -= 0.5;
    map.x.hi += 0.5;
    const double pad = 0.05 * (map.y.hi - map.y.lo + 1e-12);
    map.y.lo -= pad;
    map.y.hi += pad;

    auto out = open_svg(path);
    draw_frame(out, map, title, "day", "charge (A h)");
    const double slot = (canvas_w - margin_left - margin_right) / static_cast<double>(stats.size());
    const double half = std::min(8.0, 0.35 * slot);
    for (const auto& s : stats) {
        const double cx = map.px(static_cast<double>(s.day));
        out << "<line x1=\"" << cx << "\" y1=\"" << map.py(s.whisker_low) << "\" x2=\"" << cx
            << "\" y2=\"" << map.py(s.whisker_high)
            << "\" stroke=\"#777\" stroke-dasharray=\"3,2\"/>\n";
        out << "<rect x=\"" << cx - half << "\" y=\"" << map.py(s.q3) << "\" width=\"" << 2 * half
            << "\" height=\"" << map.py(s.q1) - map.py(s.q3)
            << "\" fill=\"#aec7e8\" stroke=\"#1f77b4\"/>\n";
        out << "<line x1=\"" << cx - half << "\" y1=\"" << map.py(s.median) << "\" x2=\""
            << cx + half << "\" y2=\"" << map.py(s.median)
            << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
        for (double o : s.outliers) {
            const double oy = map.py(o);
            out << "<path d=\"M" << cx - 3 << ' ' << oy - 3 << " L" << cx + 3 << ' ' << oy + 3
                << " M" << cx - 3 << ' ' << oy + 3 << " L" << cx + 3 << ' ' << oy - 3
                << "\" stroke=\"#d62728\"/>\n";
        }
    }
    if (!measured.empty()) {
        out << "<polyline fill=\"none\" stroke=\"#222\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < measured.size() && i < stats.size(); ++i)
            out << map.px(static_cast<double>(stats[i].day)) << ',' << map.py(measured[i]) << ' ';
        out << "\"/>\n";
        for (std::size_t i = 0; i < measured.size() && i < stats.size(); ++i)
            out << "<circle cx=\"" << map.px(static_cast<double>(stats[i].day)) << "\" cy=\""
                << map.py(measured[i]) << "\" r=\"2.5\" fill=\"#222\"/>\n";
    }
    close_svg(out, path);
}

} // namespace solsim::plot
