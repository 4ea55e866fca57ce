#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "solsim/daily_fit.hpp"
#include "solsim/error.hpp"
#include "solsim/ingest.hpp"
#include "solsim/smoothing.hpp"

using namespace solsim;

namespace {

GriddedDays constant_grid(std::vector<double> day_values, int cadence = 10) {
    GriddedDays g;
    g.cadence_min = cadence;
    const std::size_t n = static_cast<std::size_t>(minutes_per_day) /
                          static_cast<std::size_t>(cadence);
    for (std::size_t i = 0; i < day_values.size(); ++i) {
        g.day.push_back(static_cast<std::int32_t>(i));
        g.value.emplace_back(n, day_values[i]);
    }
    return g;
}

std::vector<MinuteSample> parabola_samples(const FitParams& p, double m_c, int cadence = 10) {
    std::vector<MinuteSample> out;
    for (int m = 0; m < minutes_per_day; m += cadence) {
        const double ms = (static_cast<double>(m) / m_c - p.a) / p.b;
        const double e = p.c * (1.0 - ms * ms);
        out.push_back({m, e > 0.0 ? e : 0.0});
    }
    return out;
}

} // namespace

TEST_CASE("decompose_time splits absolute minutes exactly") {
    CHECK(decompose_time(0) == std::pair<std::int32_t, std::int32_t>{0, 0});
    CHECK(decompose_time(1440) == std::pair<std::int32_t, std::int32_t>{1, 0});
    CHECK(decompose_time(1440 * 90 + 700) == std::pair<std::int32_t, std::int32_t>{90, 700});
    CHECK_THROWS_AS(decompose_time(-1), ParseError);
}

TEST_CASE("decompose_time round trip") {
    for (std::int32_t d = 0; d <= 400; d += 13)
        for (std::int32_t m : {0, 1, 719, 1439})
            CHECK(decompose_time(1440LL * d + m) ==
                  std::pair<std::int32_t, std::int32_t>{d, m});
}

TEST_CASE("season_of honors the wrapped season table") {
    const auto seasons = default_seasons();
    CHECK(season_of(35, seasons) == 1);
    CHECK(season_of(124, seasons) == 1);
    CHECK(season_of(125, seasons) == 2);
    CHECK(season_of(218, seasons) == 2);
    CHECK(season_of(219, seasons) == 3);
    CHECK(season_of(309, seasons) == 3);
    CHECK(season_of(310, seasons) == 4);
    CHECK(season_of(34, seasons) == 4);
    CHECK(season_of(364, seasons) == 4);
    CHECK(season_of(400, seasons) == 1); // 400 mod 365 = 35
}

TEST_CASE("parse_dataset accepts both headers") {
    std::istringstream two("t_min,irradiance_wm2\n0,1\n10,2\n20,3\n");
    const auto d2 = parse_dataset(two);
    REQUIRE(d2.days.size() == 1);
    CHECK(d2.days[0].samples.size() == 3);
    CHECK(d2.rejected_rows.empty());

    std::istringstream three("day,minute,irradiance_wm2\n4,0,1\n4,10,2\n");
    const auto d3 = parse_dataset(three);
    REQUIRE(d3.days.size() == 1);
    CHECK(d3.days[0].day == 4);
    CHECK(d3.days[0].samples[1].e == 2.0);
}

TEST_CASE("parse_dataset rejects bad rows and keeps going") {
    std::istringstream in("t_min,irradiance_wm2\n0,1\n10,-5\nbogus,2\n20,3\n");
    const auto d = parse_dataset(in);
    REQUIRE(d.days.size() == 1);
    CHECK(d.days[0].samples.size() == 2);
    REQUIRE(d.rejected_rows.size() == 2);
    CHECK(d.rejected_rows[0].row == 3); // 1-based, header is line 1
    CHECK(d.rejected_rows[1].row == 4);
}

TEST_CASE("parse_dataset splits rows spanning midnight") {
    std::istringstream in("t_min,irradiance_wm2\n1439,5\n1441,6\n");
    const auto d = parse_dataset(in);
    REQUIRE(d.days.size() == 2);
    CHECK(d.days[0].day == 0);
    CHECK(d.days[1].day == 1);
    CHECK(d.days[1].samples[0].m == 1);
}

TEST_CASE("parse_dataset records cadence gaps") {
    std::istringstream in("t_min,irradiance_wm2\n0,1\n10,1\n40,1\n");
    const auto d = parse_dataset(in, {10});
    REQUIRE(d.gaps.size() == 1);
    CHECK(d.gaps[0].day == 0);
    CHECK(d.gaps[0].first_missing_minute == 20);
    CHECK(d.gaps[0].last_missing_minute == 30);

    std::ostringstream report;
    write_gap_report(report, d.gaps);
    CHECK(report.str() == "day,first_missing_minute,last_missing_minute\n0,20,30\n");
}

TEST_CASE("parse_dataset rejects unusable sources") {
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_dataset(empty), ParseError);
    std::istringstream header("wrong,header\n1,2\n");
    CHECK_THROWS_AS(parse_dataset(header), ParseError);
    std::istringstream no_rows("t_min,irradiance_wm2\n-5,1\n");
    CHECK_THROWS_AS(parse_dataset(no_rows), ParseError);
}

TEST_CASE("TMA of a constant field is that constant") {
    const auto grid = constant_grid({7, 7, 7, 7, 7});
    TmaConfig cfg; // N=5 shrinks to the dataset
    for (std::size_t row = 0; row < 5; ++row) {
        const auto s = trimmed_moving_average(grid, row, cfg);
        for (double v : s) CHECK(v == doctest::Approx(7.0).epsilon(1e-12));
    }
}

TEST_CASE("TMA with N=0, L=0 is the identity") {
    const auto grid = constant_grid({1, 2, 3});
    TmaConfig cfg;
    cfg.half_window_days = 0;
    cfg.excluded_lowest = 0;
    const auto s = trimmed_moving_average(grid, 1, cfg);
    for (double v : s) CHECK(v == 2.0);
}

TEST_CASE("TMA drops the lowest-aggregate day") {
    // three flat days, sums rank the first lowest: window {10, 100, 100},
    // N=1, L=1 leaves the two identical days
    const auto grid = constant_grid({10, 100, 100});
    TmaConfig cfg;
    cfg.half_window_days = 1;
    cfg.excluded_lowest = 1;
    const auto s = trimmed_moving_average(grid, 1, cfg);
    for (double v : s) CHECK(v == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("TMA exclusion is monotone on pointwise-ordered days") {
    const auto grid = constant_grid({1, 2, 3, 4, 5, 6, 7});
    TmaConfig cfg;
    cfg.half_window_days = 3;
    double prev = 0.0;
    for (int l = 0; l < 6; ++l) {
        cfg.excluded_lowest = l;
        const auto s = trimmed_moving_average(grid, 3, cfg);
        CHECK(s[0] >= prev);
        prev = s[0];
    }
}

TEST_CASE("TMA refuses short windows when truncation is off") {
    const auto grid = constant_grid({1, 2, 3});
    TmaConfig cfg;
    cfg.half_window_days = 5;
    cfg.allow_truncation = false;
    CHECK_THROWS_AS(trimmed_moving_average(grid, 1, cfg), InsufficientDataError);
}

TEST_CASE("smooth_all wraps the window over a full year") {
    std::vector<double> values(365, 100.0);
    values[0] = 10.0; // a dark new-year day; neighbors see it through the wrap
    const auto grid = constant_grid(values);
    TmaConfig cfg; // N=5, L=4
    const auto s = smooth_all(grid, cfg, Exec::serial);
    // every window contains at most one low day and L=4 removes it
    for (std::size_t row : {std::size_t{0}, std::size_t{2}, std::size_t{362}})
        CHECK(s.value[row][70] == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("fit_parabola round trip is exact on noiseless curves") {
    FitParams truth;
    truth.a = 1.9790;
    truth.b = 0.8990;
    truth.c = 913.0;
    const auto curve = parabola_samples(truth, default_m_c);
    const auto fit = fit_parabola(curve, default_m_c, 7);
    CHECK(fit.day == 7);
    CHECK(std::abs(fit.a - truth.a) <= 1e-9 * truth.a);
    CHECK(std::abs(fit.b - truth.b) <= 1e-9 * truth.b);
    CHECK(std::abs(fit.c - truth.c) <= 1e-9 * truth.c);
}

TEST_CASE("fit_parabola stays within 1% under 1% uniform noise") {
    FitParams truth;
    truth.a = 1.9790;
    truth.b = 0.8990;
    truth.c = 913.0;
    auto curve = parabola_samples(truth, default_m_c);
    std::mt19937_64 rng(2024);
    for (auto& s : curve) {
        if (s.e <= 0.0) continue;
        const double u = 2.0 * ((static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53) - 1.0;
        s.e = std::max(0.0, s.e + 0.01 * truth.c * u);
    }
    const auto fit = fit_parabola(curve, default_m_c);
    CHECK(std::abs(fit.a - truth.a) <= 0.01 * truth.a);
    CHECK(std::abs(fit.b - truth.b) <= 0.01 * truth.b);
    CHECK(std::abs(fit.c - truth.c) <= 0.01 * truth.c);
}

TEST_CASE("fit_parabola rejects degenerate days") {
    std::vector<MinuteSample> zeros;
    for (int m = 0; m < minutes_per_day; m += 10) zeros.push_back({m, 0.0});
    CHECK_THROWS_AS(fit_parabola(zeros, default_m_c), InsufficientDataError);

    std::vector<MinuteSample> ramp;
    for (int m = 0; m < minutes_per_day; m += 10)
        ramp.push_back({m, 10.0 + static_cast<double>(m)});
    CHECK_THROWS_AS(fit_parabola(ramp, default_m_c), DegenerateFitError);
}

TEST_CASE("daytime_bounds are the parabola zeros") {
    FitParams p;
    p.a = 2.0;
    p.b = 1.0;
    auto [lo, hi] = daytime_bounds(p, 360.0);
    CHECK(lo == doctest::Approx(360.0));
    CHECK(hi == doctest::Approx(1080.0));

    p.a = 1.9790;
    p.b = 0.8990;
    std::tie(lo, hi) = daytime_bounds(p, 360.0);
    CHECK(lo == doctest::Approx(388.80).epsilon(1e-9));
    CHECK(hi == doctest::Approx(1036.08).epsilon(1e-9));

    p.b = 1e-12;
    std::tie(lo, hi) = daytime_bounds(p, 360.0);
    CHECK(lo == doctest::Approx(360.0 * p.a).epsilon(1e-9));
    CHECK(hi == doctest::Approx(360.0 * p.a).epsilon(1e-9));
}

TEST_CASE("normalize maps the parabola onto the master curve") {
    // A=2, B=1, m_c=360 puts the vertex (720), the nightfall endpoint
    // (1080) and the half-width point (540) on integer minutes
    FitParams p;
    p.a = 2.0;
    p.b = 1.0;
    p.c = 913.0;
    const std::vector<MinuteSample> pts = {
        {720, p.c},         // vertex -> (0, 0)
        {1080, 0.0},        // nightfall -> (1, -1)
        {540, 0.75 * p.c},  // m_c*(A - B/2) -> (-0.5, -0.25)
    };
    const auto norm = normalize(pts, p, 360.0);
    REQUIRE(norm.size() == 3);
    CHECK(std::abs(norm[0].m_star - 0.0) <= 1e-12);
    CHECK(std::abs(norm[0].e_star - 0.0) <= 1e-12);
    CHECK(std::abs(norm[1].m_star - 1.0) <= 1e-12);
    CHECK(std::abs(norm[1].e_star - -1.0) <= 1e-12);
    CHECK(std::abs(norm[2].m_star - -0.5) <= 1e-12);
    CHECK(std::abs(norm[2].e_star - -0.25) <= 1e-12);
    CHECK(std::abs(norm[2].e_star - master_curve(norm[2].m_star)) <= 1e-12);
    for (const auto& s : norm) CHECK(s.in_daytime);
}

TEST_CASE("normalize flags daytime membership") {
    FitParams p;
    p.a = 2.0;
    p.b = 1.0;
    p.c = 900.0;
    std::vector<MinuteSample> pts = {{720, 900.0}, {100, 3.0}, {1439, 0.0}};
    const auto norm = normalize(pts, p, 360.0);
    REQUIRE(norm.size() == 3);
    CHECK(norm[0].in_daytime);
    CHECK(norm[0].m_star == doctest::Approx(0.0));
    CHECK(norm[0].e_star == doctest::Approx(0.0));
    CHECK_FALSE(norm[1].in_daytime);
    CHECK(norm[1].e_star >= -1.0);
}

TEST_CASE("master_curve matches its closed form") {
    CHECK(master_curve(0.0) == 0.0);
    CHECK(master_curve(1.0) == -1.0);
    CHECK(master_curve(-1.0) == -1.0);
    CHECK(master_curve(0.5) == -0.25);
}

TEST_CASE("residuals keep daytime samples only") {
    std::vector<NormalizedSample> in = {
        {0.5, -0.25, true},  // exactly on the master curve
        {0.0, 0.1, true},    // vertex offset
        {1.2, 0.0, false},   // outside daytime
    };
    const auto out = residuals(in);
    REQUIRE(out.size() == 2);
    CHECK(out[0].r_star == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(out[1].r_star == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("normalization collapse: exact curve lands on the master curve") {
    FitParams p;
    p.a = 1.8;
    p.b = 0.85;
    p.c = 700.0;
    const auto curve = parabola_samples(p, default_m_c);
    const auto norm = normalize(curve, p, default_m_c);
    for (const auto& s : norm) {
        if (!s.in_daytime) continue;
        CHECK(std::abs(s.e_star - master_curve(s.m_star)) <= 1e-12);
    }
}

TEST_CASE("fit_all reports degenerate days instead of failing") {
    GriddedDays grid = constant_grid({0, 0}, 10);
    FitParams p;
    p.a = 2.0;
    p.b = 1.0;
    p.c = 800.0;
    const auto good = parabola_samples(p, default_m_c);
    for (std::size_t k = 0; k < grid.value[0].size(); ++k) grid.value[0][k] = good[k].e;
    const auto fits = fit_all(grid, default_m_c, Exec::serial);
    REQUIRE(fits.size() == 2);
    CHECK(fits[0].params.has_value());
    CHECK_FALSE(fits[1].params.has_value());
    CHECK_FALSE(fits[1].diagnostic.empty());
}
