#pragma once

#include <cstdint>
#include <span>

#include "solsim/rng.hpp"

namespace solsim {

// Two-harmonic annual trend anchored at the June solstice (day 172):
//   y(d) = y0 + y1 cos(2 pi (d - 172) / 365) + y2 cos(4 pi (d - 172) / 365)
struct TrendCoefficients {
    double y0 = 0.0;
    double y1 = 0.0;
    double y2 = 0.0;
};

double eval_trend(const TrendCoefficients& t, std::int32_t day);

// Least squares over (day, value) pairs; needs at least 3 distinct basis
// rows or the normal equations go singular.
TrendCoefficients fit_trend(std::span<const std::int32_t> days, std::span<const double> values);

// Minimum-type Gumbel distribution.
struct GumbelParams {
    double mu = 0.0; // location
    double nu = 1.0; // scale, > 0
};

double gumbel_pdf(const GumbelParams& g, double x);
double gumbel_cdf(const GumbelParams& g, double x);
// Inverse CDF; u must lie in (0, 1).
double gumbel_quantile(const GumbelParams& g, double u);
// mu - nu * gamma (Euler-Mascheroni).
double gumbel_expected(const GumbelParams& g);

inline double sample_gumbel(const GumbelParams& g, Rng& rng) {
    return gumbel_quantile(g, uniform_open(rng));
}

// Maximum-likelihood fit of the minimum-type Gumbel. Moment-based start,
// fixed-point iteration on the scale, 1e-9 step tolerance.
GumbelParams fit_gumbel(std::span<const double> samples);

// Rice's rule: number of histogram bins for n samples, ceil(2 n^(1/3)).
std::size_t rice_bins(std::size_t n);
// Companion bin width: range / (2 n^(1/3)), the divisor left un-ceiled.
double rice_width(double range, std::size_t n);

// One normalization parameter across the year: its trend plus the
// distribution of the de-trended residual.
struct ParamModel {
    TrendCoefficients trend;
    GumbelParams residual;
};

struct TrendModel {
    ParamModel a;
    ParamModel b;
    ParamModel c;
    double mean_b = 0.0; // annual mean of the fitted half-daytime
};

// Published coefficients for the reference site.
TrendModel reference_trend_model();

} // namespace solsim
