#include "solsim/daily_fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "solsim/error.hpp"
#include "solsim/numeric.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace solsim {

FitParams fit_parabola(std::span<const MinuteSample> curve, double m_c, std::int32_t day) {
    if (m_c <= 0.0) throw DegenerateFitError(Stage::daily_fit, "m_c must be positive");

    double peak = 0.0;
    for (const auto& s : curve) peak = std::max(peak, s.e);
    const double threshold = std::max(5.0, 0.01 * peak);

    std::vector<MinuteSample> daytime;
    daytime.reserve(curve.size());
    for (const auto& s : curve)
        if (s.e > threshold) daytime.push_back(s);

    if (daytime.size() < 3)
        throw InsufficientDataError(Stage::daily_fit, "day " + std::to_string(day) + ": " +
                                    std::to_string(daytime.size()) +
                                    " daytime samples, need at least 3");

    // Center and scale the abscissa before building the normal equations;
    // raw minutes (up to 1439) would put the x^4 sums near 1e13.
    double mu = 0.0;
    for (const auto& s : daytime) mu += static_cast<double>(s.m);
    mu /= static_cast<double>(daytime.size());
    double scale = 0.0;
    for (const auto& s : daytime) scale = std::max(scale, std::abs(static_cast<double>(s.m) - mu));
    if (scale <= 0.0)
        throw DegenerateFitError(Stage::daily_fit,
                                 "day " + std::to_string(day) + ": all daytime samples coincide");

    double s1 = 0, s2 = 0, s3 = 0, s4 = 0; // sums of u^k
    double t0 = 0, t1 = 0, t2 = 0;         // sums of u^k * e
    for (const auto& s : daytime) {
        const double u = (static_cast<double>(s.m) - mu) / scale;
        const double u2 = u * u;
        s1 += u;
        s2 += u2;
        s3 += u2 * u;
        s4 += u2 * u2;
        t0 += s.e;
        t1 += u * s.e;
        t2 += u2 * s.e;
    }
    const double n = static_cast<double>(daytime.size());

    std::array<std::array<double, 3>, 3> mtx = {{{n, s1, s2}, {s1, s2, s3}, {s2, s3, s4}}};
    std::array<double, 3> rhs = {t0, t1, t2};
    std::array<double, 3> p{};
    if (!solve3(mtx, rhs, p))
        throw DegenerateFitError(Stage::daily_fit,
                                 "day " + std::to_string(day) + ": singular normal equations");

    // Back to raw-minute coefficients e = c0 + c1 m + c2 m^2.
    const double c2 = p[2] / (scale * scale);
    const double c1 = p[1] / scale - 2.0 * p[2] * mu / (scale * scale);
    const double c0 = p[0] - p[1] * mu / scale + p[2] * mu * mu / (scale * scale);

    if (!(c2 < 0.0))
        throw DegenerateFitError(Stage::daily_fit,
                                 "day " + std::to_string(day) + ": fitted parabola is not concave");

    const double vertex = -c1 / (2.0 * c2);
    const double c_peak = c0 - c1 * c1 / (4.0 * c2);
    if (!(c_peak > 0.0))
        throw DegenerateFitError(Stage::daily_fit,
                                 "day " + std::to_string(day) + ": non-positive fitted peak");

    FitParams out;
    out.day = day;
    out.a = vertex / m_c;
    out.c = c_peak;
    out.b = std::sqrt(-c_peak / c2) / m_c;

    const auto [sunrise, nightfall] = daytime_bounds(out, m_c);
    if (!(sunrise > 0.0) || !(nightfall < static_cast<double>(minutes_per_day)))
        throw DegenerateFitError(Stage::daily_fit, "day " + std::to_string(day) +
                                 ": fitted daytime extends outside the day");
    return out;
}

std::pair<double, double> daytime_bounds(const FitParams& p, double m_c) {
    return {m_c * (p.a - p.b), m_c * (p.a + p.b)};
}

std::vector<NormalizedSample> normalize(std::span<const MinuteSample> raw, const FitParams& p,
                                        double m_c) {
    if (p.b <= 0.0 || p.c <= 0.0)
        throw DegenerateFitError(Stage::daily_fit, "normalize: nonpositive B or C");
    std::vector<NormalizedSample> out;
    out.reserve(raw.size());
    for (const auto& s : raw) {
        NormalizedSample n;
        n.m_star = (static_cast<double>(s.m) / m_c - p.a) / p.b;
        n.e_star = s.e / p.c - 1.0;
        n.in_daytime = std::abs(n.m_star) <= 1.0;
        out.push_back(n);
    }
    return out;
}

std::vector<ResidualSample> residuals(std::span<const NormalizedSample> samples) {
    std::vector<ResidualSample> out;
    for (const auto& s : samples) {
        if (!s.in_daytime) continue;
        out.push_back({s.m_star, s.e_star - master_curve(s.m_star)});
    }
    return out;
}

std::vector<MinuteSample> grid_row_samples(const GriddedDays& grid, std::size_t row) {
    std::vector<MinuteSample> out;
    out.reserve(grid.n_minutes());
    for (std::size_t k = 0; k < grid.n_minutes(); ++k)
        out.push_back({grid.minute(k), grid.value[row][k]});
    return out;
}

std::vector<DayFit> fit_all(const GriddedDays& smoothed, double m_c, Exec exec) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(smoothed.day.size());
    std::vector<DayFit> out(static_cast<std::size_t>(n));

    auto fit_one = [&](std::ptrdiff_t i) {
        auto& slot = out[static_cast<std::size_t>(i)];
        slot.day = smoothed.day[static_cast<std::size_t>(i)];
        const auto samples = grid_row_samples(smoothed, static_cast<std::size_t>(i));
        try {
            slot.params = fit_parabola(samples, m_c, slot.day);
        } catch (const Error& e) {
            slot.diagnostic = e.what();
        }
    };

    if (exec == Exec::openmp) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < n; ++i) fit_one(i);
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) fit_one(i);
    }
    return out;
}

} // namespace solsim
