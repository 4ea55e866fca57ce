#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "solsim/pv.hpp"

namespace solsim::plot {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Static SVG renderers; no display server involved. Each writes a single
// self-contained file.

void write_line_svg(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    std::span<const Series> series);

// value[i][k] is the cell at x[i], y[k]; values are normalized to the
// data maximum before coloring.
void write_heatmap_svg(const std::filesystem::path& path, const std::string& title,
                       const std::string& x_label, const std::string& y_label,
                       std::span<const double> x, std::span<const double> y,
                       const std::vector<std::vector<double>>& value);

// Box-and-whisker chart; `measured` (optional, aligned with stats by day)
// is drawn as a line with markers over the boxes.
void write_box_svg(const std::filesystem::path& path, const std::string& title,
                   std::span<const DayChargeStats> stats, std::span<const double> measured = {});

} // namespace solsim::plot
