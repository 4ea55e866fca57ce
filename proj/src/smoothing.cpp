#include "solsim/smoothing.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace solsim {

GriddedDays to_grid(const Dataset& data, int cadence_min) {
    if (cadence_min <= 0 || minutes_per_day % cadence_min != 0)
        throw Error(Stage::smoothing, "cadence must divide 1440, got " + std::to_string(cadence_min));

    GriddedDays out;
    out.cadence_min = cadence_min;
    const std::size_t n_min = static_cast<std::size_t>(minutes_per_day / cadence_min);

    for (const DailySeries& series : data.days) {
        std::vector<double> row(n_min, 0.0);
        if (!series.samples.empty()) {
            const auto& s = series.samples;
            std::size_t seg = 0;
            for (std::size_t k = 0; k < n_min; ++k) {
                const double m = static_cast<double>(k * cadence_min);
                if (m < s.front().m || m > s.back().m) continue; // night: stays 0
                while (seg + 1 < s.size() && s[seg + 1].m < m) ++seg;
                if (m == s[seg].m || seg + 1 >= s.size()) {
                    row[k] = s[seg].e;
                } else {
                    const double t = (m - s[seg].m) / static_cast<double>(s[seg + 1].m - s[seg].m);
                    row[k] = s[seg].e + t * (s[seg + 1].e - s[seg].e);
                }
            }
        }
        out.day.push_back(series.day);
        out.value.push_back(std::move(row));
    }
    return out;
}

namespace {

void validate(const TmaConfig& cfg) {
    if (cfg.half_window_days < 0 || cfg.excluded_lowest < 0)
        throw Error(Stage::smoothing, "TMA parameters must be non-negative");
    if (cfg.excluded_lowest >= 2 * cfg.half_window_days + 1)
        throw Error(Stage::smoothing, "TMA requires L < 2N+1 (got N=" +
                                          std::to_string(cfg.half_window_days) +
                                          ", L=" + std::to_string(cfg.excluded_lowest) + ")");
}

} // namespace

std::vector<double> trimmed_moving_average(const GriddedDays& grid, std::size_t row,
                                           const TmaConfig& cfg) {
    validate(cfg);
    const std::size_t n_days = grid.value.size();
    if (row >= n_days) throw Error(Stage::smoothing, "day row out of range");

    const bool wrap = n_days >= static_cast<std::size_t>(days_per_year);
    std::vector<std::size_t> window;
    if (wrap) {
        window.reserve(2 * cfg.half_window_days + 1);
        for (int n = -cfg.half_window_days; n <= cfg.half_window_days; ++n) {
            const auto pos = static_cast<std::size_t>(
                ((static_cast<long>(row) + n) % static_cast<long>(n_days) +
                 static_cast<long>(n_days)) %
                static_cast<long>(n_days));
            window.push_back(pos);
        }
    } else {
        int n_eff = cfg.half_window_days;
        n_eff = std::min<int>(n_eff, static_cast<int>(row));
        n_eff = std::min<int>(n_eff, static_cast<int>(n_days - 1 - row));
        if (n_eff < cfg.half_window_days && !cfg.allow_truncation)
            throw InsufficientDataError(Stage::smoothing,
                                        "TMA window truncated at day " +
                                            std::to_string(grid.day[row]) +
                                            " and truncation is disabled");
        for (int n = -n_eff; n <= n_eff; ++n) window.push_back(row + static_cast<std::size_t>(n));
    }

    int excluded = cfg.excluded_lowest;
    if (static_cast<std::size_t>(excluded) >= window.size()) {
        if (!cfg.allow_truncation)
            throw InsufficientDataError(Stage::smoothing,
                                        "window of " + std::to_string(window.size()) +
                                            " days cannot exclude " + std::to_string(excluded));
        excluded = static_cast<int>(window.size()) - 1;
    }

    // Rank window days by daily aggregate; the L lowest form the excluded
    // set. Ties break on window position so results do not depend on the
    // sort implementation.
    std::vector<std::size_t> order(window.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> sums(window.size());
    for (std::size_t w = 0; w < window.size(); ++w) {
        const auto& v = grid.value[window[w]];
        sums[w] = std::accumulate(v.begin(), v.end(), 0.0);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (sums[a] != sums[b]) return sums[a] < sums[b];
        return a < b;
    });

    const std::size_t retained = window.size() - static_cast<std::size_t>(excluded);
    std::vector<double> avg(grid.n_minutes(), 0.0);
    for (std::size_t idx = static_cast<std::size_t>(excluded); idx < window.size(); ++idx) {
        const auto& v = grid.value[window[order[idx]]];
        for (std::size_t k = 0; k < avg.size(); ++k) avg[k] += v[k];
    }
    const double inv = 1.0 / static_cast<double>(retained);
    for (double& x : avg) x *= inv;
    return avg;
}

GriddedDays smooth_all(const GriddedDays& grid, const TmaConfig& cfg, Exec exec) {
    validate(cfg);
    GriddedDays out;
    out.cadence_min = grid.cadence_min;
    out.day = grid.day;
    out.value.resize(grid.value.size());

    const auto n = static_cast<std::ptrdiff_t>(grid.value.size());
    if (exec == Exec::openmp) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < n; ++i)
            out.value[static_cast<std::size_t>(i)] =
                trimmed_moving_average(grid, static_cast<std::size_t>(i), cfg);
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i)
            out.value[static_cast<std::size_t>(i)] =
                trimmed_moving_average(grid, static_cast<std::size_t>(i), cfg);
    }
    return out;
}

} // namespace solsim
