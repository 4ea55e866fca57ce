#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "solsim/daily_fit.hpp"

namespace solsim {

// Uniform discretization of the normalized daytime [-1, 1].
struct MstarGrid {
    std::size_t j_count = 0;   // J; nodes.size() == J + 1
    std::vector<double> nodes; // m*_j = -1 + 2j/J

    double spacing() const { return 2.0 / static_cast<double>(j_count); }
};

// J = floor(m_c * mean_b / 5); endpoints are forced to exactly -1 and 1.
MstarGrid build_grid(double mean_b, double m_c);

// One observation of the residual rate of change, attached to the right
// node of the interval it was measured over.
struct RateSample {
    std::size_t j = 0;
    double r_star = 0.0;
};

// Interpolates a day's residuals R* onto the grid nodes covered by the
// day's observed m* range and differences them:
//   r*_j = (R*_j - R*_(j-1)) * J / 2.
// Rates outside the trim range [-J/2, J/2] are dropped. A day covering
// fewer than two nodes yields an empty result (callers skip it).
std::vector<RateSample> column_rates(std::span<const ResidualSample> day_residuals,
                                     const MstarGrid& grid);

// Interpolated R* value at each covered node; .first = node index.
// Feeds the per-column residual envelopes.
std::vector<std::pair<std::size_t, double>> node_residuals(
    std::span<const ResidualSample> day_residuals, const MstarGrid& grid);

// Shared histogram layout over all columns.
struct RateBinning {
    double delta_r = 0.0;                      // global bin width
    std::size_t m_r = 0;                       // global bin count
    std::vector<double> bin_edges;             // m_r + 1 ascending edges
    std::vector<std::size_t> excluded_columns; // too few samples or zero IQR
};

// Freedman-Diaconis per column, then the bin count is the (rounded-up)
// average over usable columns and a single global width spans the pooled
// sample range.
RateBinning freedman_diaconis_bins(const std::vector<std::vector<double>>& column_samples);

struct DiscreteProbabilityMap {
    int season = 0;
    MstarGrid grid;
    std::vector<double> bin_edges;
    // mass[j][k]: probability of bin k at node j; empty columns stay zero.
    std::vector<std::vector<double>> mass;
};

DiscreteProbabilityMap build_discrete_map(std::span<const RateSample> rates,
                                          const MstarGrid& grid, const RateBinning& binning);

struct KdeMap {
    int season = 0;
    MstarGrid grid;
    double bandwidth = 0.0;
    std::vector<std::vector<double>> samples; // per-node r* sample sets
};

// Rule-of-thumb bandwidth h_j = (4 / (3 l_j))^(1/5) * sigma_j per column,
// averaged over columns with at least two samples and nonzero variance.
double kde_bandwidth(const std::vector<std::vector<double>>& column_samples);

// Gaussian-kernel density estimate at a point.
double kde_density(std::span<const double> samples, double h, double r_star);

// Uniform evaluation grid covering [min - 8h, max + 8h].
std::vector<double> kde_eval_points(std::span<const double> samples, double h,
                                    std::size_t n = 1025);

std::vector<double> kde_density_grid(std::span<const double> samples, double h,
                                     std::span<const double> r_grid);

// h * density, evaluated per column on that column's evaluation grid;
// values lie in [0, 1] by the kernel-sum bound.
std::vector<double> scaled_pdm_column(std::span<const double> samples, double h,
                                      std::span<const double> r_grid);

// Smallest and largest grid point where the density exceeds the
// threshold. threshold <= 0 returns the full evaluation range.
std::pair<double, double> column_support(std::span<const double> samples, double h,
                                         double threshold = 0.001);

// Allowable R* interval per node: support of a KDE built over the
// observed node residuals with the same bandwidth rule. Nodes that
// cannot support a KDE inherit the nearest usable node's interval.
std::vector<std::pair<double, double>> residual_envelope(
    const std::vector<std::vector<double>>& node_residual_samples, double threshold = 0.001);

} // namespace solsim
