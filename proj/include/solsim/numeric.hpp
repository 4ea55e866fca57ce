#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace solsim {

// Composite trapezoid over uniformly spaced samples; returns the integral
// with respect to the sample coordinate (step `dx`).
double trapezoid(std::span<const double> values, double dx);

// Linear-interpolation quantile (the type-7 convention): p in [0, 1],
// data must be sorted ascending.
double quantile_sorted(std::span<const double> sorted, double p);

double interquartile_range_sorted(std::span<const double> sorted);

double mean(std::span<const double> values);

// Sample standard deviation (n - 1 denominator).
double sample_stddev(std::span<const double> values);

double sample_skewness(std::span<const double> values);

// Inverse standard normal CDF (Acklam's rational approximation,
// |relative error| < 1.2e-9). Requires 0 < p < 1.
double norm_quantile(double p);

// Linear interpolation of tabulated (x, y) with x strictly increasing;
// clamps outside the table range.
double interp_linear(std::span<const double> x, std::span<const double> y, double xq);

// Gaussian elimination with partial pivoting for a 3x3 system;
// returns false when the matrix is (numerically) singular.
bool solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> b,
            std::array<double, 3>& x);

} // namespace solsim
