#pragma once

#include <cstdint>
#include <vector>

#include "solsim/exec.hpp"
#include "solsim/ingest.hpp"

namespace solsim {

// Dense day-by-minute matrix on the nominal cadence grid. Interior
// missing minutes are linearly interpolated from the day's neighbors;
// minutes outside the observed range are night and stay 0.
struct GriddedDays {
    int cadence_min = 10;
    std::vector<std::int32_t> day;           // ascending
    std::vector<std::vector<double>> value;  // [row][k], minute = k * cadence_min

    std::size_t n_minutes() const { return value.empty() ? 0 : value.front().size(); }
    std::int32_t minute(std::size_t k) const { return static_cast<std::int32_t>(k) * cadence_min; }
};

GriddedDays to_grid(const Dataset& data, int cadence_min);

struct TmaConfig {
    int half_window_days = 5;  // N
    int excluded_lowest = 4;   // L
    // When the dataset is too short for the full window, shrink the
    // window symmetrically and cap L at window-1 instead of failing.
    bool allow_truncation = true;
};

// Trimmed moving average of day `row`: the 2N+1 window days (wrapping
// modulo the dataset length when it spans a full year, truncated
// otherwise) minus the L days with the lowest daily aggregate, averaged
// minute by minute.
std::vector<double> trimmed_moving_average(const GriddedDays& grid, std::size_t row,
                                           const TmaConfig& cfg);

GriddedDays smooth_all(const GriddedDays& grid, const TmaConfig& cfg, Exec exec = Exec::openmp);

} // namespace solsim
