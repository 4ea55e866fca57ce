#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "solsim/error.hpp"

namespace solsim {

constexpr int minutes_per_day = 1440;
constexpr int days_per_year = 365;

// One raw measurement: absolute time t (minutes since the reference
// midnight) split into day index d and minute-of-day m with
// t = 1440*d + m, plus the irradiance e in W/m^2 (never negative).
struct IrradianceSample {
    std::int64_t t = 0;
    std::int32_t d = 0;
    std::int32_t m = 0;
    double e = 0.0;
};

struct MinuteSample {
    std::int32_t m = 0;
    double e = 0.0;
};

// All samples of one calendar day, strictly increasing in minute-of-day.
struct DailySeries {
    std::int32_t day = 0;
    std::vector<MinuteSample> samples;
};

// Day range [from_day, to_day] inclusive; to_day < from_day means the
// season wraps past new year (day 365 folds onto day 0).
struct Season {
    int id = 0;
    int from_day = 0;
    int to_day = 0;
};

struct Gap {
    std::int32_t day = 0;
    std::int32_t first_missing_minute = 0;
    std::int32_t last_missing_minute = 0;
};

struct RowDiagnostic {
    std::size_t row = 0; // 1-based line number in the source
    std::string message;
};

struct Dataset {
    std::vector<DailySeries> days; // ascending day index
    std::vector<Gap> gaps;
    std::vector<RowDiagnostic> rejected_rows;
    int nominal_cadence_min = 10;

    const DailySeries* find_day(std::int32_t day) const;
};

// t = 1440*d + m with 0 <= m < 1440. Negative t is rejected.
std::pair<std::int32_t, std::int32_t> decompose_time(std::int64_t t_min);

// Solstice/equinox-centered quarters used throughout; boundaries are
// configurable because equinox dates shift between sites and years.
std::vector<Season> default_seasons();

// Total over [0, 365); the input day is reduced modulo 365 first.
int season_of(std::int32_t day, std::span<const Season> seasons);

struct ParseOptions {
    int nominal_cadence_min = 10;
};

// Accepts either header `t_min,irradiance_wm2` or
// `day,minute,irradiance_wm2` (auto-detected). Bad rows (negative
// irradiance, malformed numbers, negative time) are rejected one by one
// with line numbers; parsing continues. Cadence jumps larger than 150%
// of nominal are recorded as gaps.
Dataset parse_dataset(std::istream& in, const ParseOptions& opts = {});
Dataset parse_dataset_file(const std::string& path, const ParseOptions& opts = {});

// CSV `day,first_missing_minute,last_missing_minute`.
void write_gap_report(std::ostream& out, std::span<const Gap> gaps);

} // namespace solsim
