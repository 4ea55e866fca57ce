#include "solsim/residual_maps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "solsim/error.hpp"
#include "solsim/numeric.hpp"

namespace solsim {

namespace {

constexpr double inv_sqrt_2pi = 0.3989422804014327;

// Sorted, deduplicated (by m*) copy of a day's residuals, ready for
// linear interpolation.
std::pair<std::vector<double>, std::vector<double>> interp_table(
    std::span<const ResidualSample> day_residuals) {
    std::vector<ResidualSample> sorted(day_residuals.begin(), day_residuals.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const ResidualSample& a, const ResidualSample& b) { return a.m_star < b.m_star; });
    std::vector<double> xs, ys;
    xs.reserve(sorted.size());
    ys.reserve(sorted.size());
    for (const auto& s : sorted) {
        if (!xs.empty() && s.m_star == xs.back()) continue;
        xs.push_back(s.m_star);
        ys.push_back(s.r_star);
    }
    return {std::move(xs), std::move(ys)};
}

} // namespace

MstarGrid build_grid(double mean_b, double m_c) {
    if (!(mean_b > 0.0)) throw GridError("build_grid: mean B must be positive");
    if (!(m_c > 0.0)) throw GridError("build_grid: m_c must be positive");
    const auto j = static_cast<std::size_t>(std::floor(m_c * mean_b / 5.0));
    if (j < 2) throw GridError("build_grid: J = " + std::to_string(j) + ", need at least 2");
    MstarGrid g;
    g.j_count = j;
    g.nodes.resize(j + 1);
    for (std::size_t k = 0; k <= j; ++k)
        g.nodes[k] = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(j);
    g.nodes.front() = -1.0;
    g.nodes.back() = 1.0;
    return g;
}

std::vector<RateSample> column_rates(std::span<const ResidualSample> day_residuals,
                                     const MstarGrid& grid) {
    std::vector<RateSample> out;
    if (day_residuals.size() < 2) return out;
    const auto [xs, ys] = interp_table(day_residuals);
    if (xs.size() < 2) return out;

    const double lo = xs.front();
    const double hi = xs.back();
    const double half_j = static_cast<double>(grid.j_count) / 2.0;

    // Covered nodes form one contiguous run; difference consecutive pairs.
    bool have_prev = false;
    double prev_r = 0.0;
    for (std::size_t j = 0; j <= grid.j_count; ++j) {
        const double node = grid.nodes[j];
        if (node < lo || node > hi) {
            have_prev = false;
            continue;
        }
        const double r_here = interp_linear(xs, ys, node);
        if (have_prev) {
            const double rate = (r_here - prev_r) * half_j;
            if (std::abs(rate) <= half_j) out.push_back({j, rate});
        }
        prev_r = r_here;
        have_prev = true;
    }
    return out;
}

std::vector<std::pair<std::size_t, double>> node_residuals(
    std::span<const ResidualSample> day_residuals, const MstarGrid& grid) {
    std::vector<std::pair<std::size_t, double>> out;
    if (day_residuals.empty()) return out;
    const auto [xs, ys] = interp_table(day_residuals);
    if (xs.size() < 2) return out;
    for (std::size_t j = 0; j <= grid.j_count; ++j) {
        const double node = grid.nodes[j];
        if (node < xs.front() || node > xs.back()) continue;
        out.emplace_back(j, interp_linear(xs, ys, node));
    }
    return out;
}

RateBinning freedman_diaconis_bins(const std::vector<std::vector<double>>& column_samples) {
    RateBinning out;
    double global_min = 0.0, global_max = 0.0;
    bool have_any = false;

    double bin_sum = 0.0;
    std::size_t used = 0;
    for (std::size_t j = 0; j < column_samples.size(); ++j) {
        const auto& col = column_samples[j];
        for (double v : col) {
            if (!have_any) {
                global_min = global_max = v;
                have_any = true;
            } else {
                global_min = std::min(global_min, v);
                global_max = std::max(global_max, v);
            }
        }
        if (col.size() < 2) {
            if (!col.empty()) out.excluded_columns.push_back(j);
            continue;
        }
        std::vector<double> sorted = col;
        std::sort(sorted.begin(), sorted.end());
        const double iqr = interquartile_range_sorted(sorted);
        if (!(iqr > 0.0)) {
            out.excluded_columns.push_back(j);
            continue;
        }
        const double width = 2.0 * iqr / std::cbrt(static_cast<double>(col.size()));
        const double range = sorted.back() - sorted.front();
        bin_sum += std::ceil(range / width);
        ++used;
    }

    if (used == 0) throw BinningError("freedman_diaconis_bins: no usable columns");
    if (!(global_max > global_min))
        throw BinningError("freedman_diaconis_bins: degenerate pooled range");

    // The rounding of the averaged count lands on the count itself; the
    // width is then exact so the edges tile the pooled range.
    out.m_r = static_cast<std::size_t>(std::ceil(bin_sum / static_cast<double>(used)));
    out.delta_r = (global_max - global_min) / static_cast<double>(out.m_r);
    out.bin_edges.resize(out.m_r + 1);
    for (std::size_t k = 0; k <= out.m_r; ++k)
        out.bin_edges[k] = global_min + static_cast<double>(k) * out.delta_r;
    out.bin_edges.back() = global_max;
    return out;
}

DiscreteProbabilityMap build_discrete_map(std::span<const RateSample> rates,
                                          const MstarGrid& grid, const RateBinning& binning) {
    if (binning.m_r == 0) throw BinningError("build_discrete_map: empty binning");
    DiscreteProbabilityMap map;
    map.grid = grid;
    map.bin_edges = binning.bin_edges;
    map.mass.assign(grid.j_count + 1, std::vector<double>(binning.m_r, 0.0));

    const double lo = binning.bin_edges.front();
    for (const auto& s : rates) {
        if (s.j > grid.j_count) throw GridError("build_discrete_map: rate column out of range");
        auto k = static_cast<std::ptrdiff_t>(std::floor((s.r_star - lo) / binning.delta_r));
        k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(binning.m_r) - 1);
        map.mass[s.j][static_cast<std::size_t>(k)] += 1.0;
    }
    for (auto& col : map.mass) {
        double total = 0.0;
        for (double v : col) total += v;
        if (total <= 0.0) continue;
        for (double& v : col) v /= total;
    }
    return map;
}

double kde_bandwidth(const std::vector<std::vector<double>>& column_samples) {
    double acc = 0.0;
    std::size_t used = 0;
    for (const auto& col : column_samples) {
        if (col.size() < 2) continue;
        const double sd = sample_stddev(col);
        if (!(sd > 0.0)) continue;
        acc += std::pow(4.0 / (3.0 * static_cast<double>(col.size())), 0.2) * sd;
        ++used;
    }
    if (used == 0) throw BinningError("kde_bandwidth: no column with usable variance");
    return acc / static_cast<double>(used);
}

double kde_density(std::span<const double> samples, double h, double r_star) {
    if (!(h > 0.0)) throw BinningError("kde_density: bandwidth must be positive");
    if (samples.empty()) return 0.0;
    double acc = 0.0;
    for (double s : samples) {
        const double u = (r_star - s) / h;
        acc += std::exp(-0.5 * u * u);
    }
    return inv_sqrt_2pi * acc / (h * static_cast<double>(samples.size()));
}

std::vector<double> kde_eval_points(std::span<const double> samples, double h, std::size_t n) {
    if (samples.empty()) throw BinningError("kde_eval_points: empty column");
    if (n < 2) throw BinningError("kde_eval_points: need at least 2 points");
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *mn - 8.0 * h;
    const double hi = *mx + 8.0 * h;
    std::vector<double> out(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + static_cast<double>(i) * step;
    out.back() = hi;
    return out;
}

std::vector<double> kde_density_grid(std::span<const double> samples, double h,
                                     std::span<const double> r_grid) {
    std::vector<double> out(r_grid.size());
    for (std::size_t i = 0; i < r_grid.size(); ++i) out[i] = kde_density(samples, h, r_grid[i]);
    return out;
}

std::vector<double> scaled_pdm_column(std::span<const double> samples, double h,
                                      std::span<const double> r_grid) {
    auto out = kde_density_grid(samples, h, r_grid);
    for (double& v : out) v *= h;
    return out;
}

std::pair<double, double> column_support(std::span<const double> samples, double h,
                                         double threshold) {
    const auto grid = kde_eval_points(samples, h);
    if (threshold <= 0.0) return {grid.front(), grid.back()};
    const auto density = kde_density_grid(samples, h, grid);
    std::size_t first = grid.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (density[i] > threshold) {
            first = std::min(first, i);
            last = i;
        }
    }
    if (first == grid.size())
        throw GridError("column_support: density nowhere above threshold");
    return {grid[first], grid[last]};
}

std::vector<std::pair<double, double>> residual_envelope(
    const std::vector<std::vector<double>>& node_residual_samples, double threshold) {
    const std::size_t n = node_residual_samples.size();
    std::vector<bool> usable(n, false);
    bool any_usable = false;
    for (std::size_t j = 0; j < n; ++j) {
        const auto& col = node_residual_samples[j];
        usable[j] = col.size() >= 2 && sample_stddev(col) > 0.0;
        any_usable = any_usable || usable[j];
    }
    if (!any_usable) throw GridError("residual_envelope: no usable node");

    const double h = kde_bandwidth(node_residual_samples);
    std::vector<std::pair<double, double>> out(n, {0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) {
        if (usable[j]) out[j] = column_support(node_residual_samples[j], h, threshold);
    }
    // Fill the gaps from the nearest usable node.
    for (std::size_t j = 0; j < n; ++j) {
        if (usable[j]) continue;
        std::size_t best = n;
        std::size_t best_dist = n + 1;
        for (std::size_t k = 0; k < n; ++k) {
            if (!usable[k]) continue;
            const std::size_t dist = j > k ? j - k : k - j;
            if (dist < best_dist) {
                best_dist = dist;
                best = k;
            }
        }
        if (best == n) throw GridError("residual_envelope: no usable node");
        out[j] = out[best];
    }
    return out;
}

} // namespace solsim
