#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "solsim/exec.hpp"
#include "solsim/smoothing.hpp"

namespace solsim {

// Per-day normalization parameters of the bell model
//   E(m) = C * (1 - ((m/m_c - A)/B)^2):
// A is the noon time and B the half-daytime, both in units of m_c,
// C the peak irradiance in W/m^2.
struct FitParams {
    std::int32_t day = 0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

struct NormalizedSample {
    double m_star = 0.0;
    double e_star = 0.0;
    bool in_daytime = false; // |m*| <= 1
};

struct ResidualSample {
    double m_star = 0.0;
    double r_star = 0.0; // E* + (m*)^2
};

constexpr double default_m_c = 360.0; // one half-daytime at the equator, minutes

// Deterministic estimator of the normalized irradiance.
constexpr double master_curve(double m_star) { return -m_star * m_star; }

// Least-squares parabola over the daytime samples (those above
// max(5 W/m^2, 1% of the curve peak)), converted to (A, B, C).
// Throws DegenerateFitError when the fit is not concave with positive
// peak, InsufficientDataError when fewer than 3 daytime samples exist.
FitParams fit_parabola(std::span<const MinuteSample> curve, double m_c, std::int32_t day = 0);

// Sunrise / nightfall: the zeros of the fitted parabola, m_c*(A -+ B).
std::pair<double, double> daytime_bounds(const FitParams& p, double m_c);

// m* = (m/m_c - A)/B, E* = E/C - 1.
std::vector<NormalizedSample> normalize(std::span<const MinuteSample> raw, const FitParams& p,
                                        double m_c);

// R* = E* - master_curve(m*); samples outside the normalized daytime
// are dropped (residuals are only meaningful for |m*| <= 1).
std::vector<ResidualSample> residuals(std::span<const NormalizedSample> samples);

struct DayFit {
    std::int32_t day = 0;
    std::optional<FitParams> params;
    std::string diagnostic; // set when the day was dropped
};

std::vector<MinuteSample> grid_row_samples(const GriddedDays& grid, std::size_t row);

// Fits every day of a smoothed grid; degenerate or data-starved days are
// reported, not fatal.
std::vector<DayFit> fit_all(const GriddedDays& smoothed, double m_c, Exec exec = Exec::openmp);

} // namespace solsim
