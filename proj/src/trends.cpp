#include "solsim/trends.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "solsim/error.hpp"
#include "solsim/numeric.hpp"

namespace solsim {

namespace {

constexpr double euler_gamma = 0.57721566490153286;
constexpr double two_pi = 2.0 * std::numbers::pi;

std::array<double, 3> basis(std::int32_t day) {
    const double phase = two_pi * (static_cast<double>(day) - 172.0) / 365.0;
    return {1.0, std::cos(phase), std::cos(2.0 * phase)};
}

} // namespace

double eval_trend(const TrendCoefficients& t, std::int32_t day) {
    const auto f = basis(day);
    return t.y0 * f[0] + t.y1 * f[1] + t.y2 * f[2];
}

TrendCoefficients fit_trend(std::span<const std::int32_t> days, std::span<const double> values) {
    if (days.size() != values.size())
        throw DegenerateFitError(Stage::trends, "fit_trend: day/value size mismatch");
    if (days.size() < 3)
        throw InsufficientDataError(Stage::trends, "fit_trend: need at least 3 days, got " +
                                                       std::to_string(days.size()));

    std::array<std::array<double, 3>, 3> m{};
    std::array<double, 3> rhs{};
    for (std::size_t i = 0; i < days.size(); ++i) {
        const auto f = basis(days[i]);
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) m[r][c] += f[r] * f[c];
            rhs[r] += f[r] * values[i];
        }
    }
    std::array<double, 3> y{};
    if (!solve3(m, rhs, y))
        throw DegenerateFitError(Stage::trends, "fit_trend: singular normal equations");
    return {y[0], y[1], y[2]};
}

double gumbel_pdf(const GumbelParams& g, double x) {
    if (g.nu <= 0.0) throw DegenerateFitError(Stage::trends, "gumbel: nonpositive scale");
    const double z = (x - g.mu) / g.nu;
    return std::exp(z - std::exp(z)) / g.nu;
}

double gumbel_cdf(const GumbelParams& g, double x) {
    if (g.nu <= 0.0) throw DegenerateFitError(Stage::trends, "gumbel: nonpositive scale");
    const double z = (x - g.mu) / g.nu;
    return 1.0 - std::exp(-std::exp(z));
}

double gumbel_quantile(const GumbelParams& g, double u) {
    if (g.nu <= 0.0) throw DegenerateFitError(Stage::trends, "gumbel: nonpositive scale");
    if (!(u > 0.0 && u < 1.0))
        throw DegenerateFitError(Stage::trends, "gumbel_quantile: u outside (0,1)");
    return g.mu + g.nu * std::log(-std::log1p(-u));
}

double gumbel_expected(const GumbelParams& g) { return g.mu - g.nu * euler_gamma; }

GumbelParams fit_gumbel(std::span<const double> samples) {
    if (samples.size() < 10)
        throw InsufficientDataError(Stage::trends, "fit_gumbel: need at least 10 samples, got " +
                                                       std::to_string(samples.size()));

    // Work on the negated data: if x is minimum-Gumbel(mu, nu) then -x is
    // maximum-Gumbel(-mu, nu), whose MLE has the classic fixed point
    //   beta <- mean(y) - sum(y e^(-y/beta)) / sum(e^(-y/beta)).
    std::vector<double> y(samples.size());
    std::transform(samples.begin(), samples.end(), y.begin(), [](double v) { return -v; });

    const double sd = sample_stddev(y);
    if (!(sd > 0.0))
        throw DegenerateFitError(Stage::trends, "fit_gumbel: zero-variance samples");
    const double y_bar = mean(y);

    // The profile likelihood reduces the problem to the unique root of
    //   g(beta) = mean(y) - sum(y w) / sum(w) - beta,   w = exp(-y/beta),
    // which is strictly decreasing on (0, inf): g(0+) = mean - min > 0 and
    // g(beta) <= mean - min - beta. Newton steps with a bisection fallback
    // stay inside a sign-changing bracket, so convergence is unconditional.
    const double y_min = *std::min_element(y.begin(), y.end());

    const auto g_and_slope = [&](double beta, double& slope) {
        // Shift the exponents so the largest is zero; the weighted moments
        // are invariant under the shift.
        double z_max = -y[0] / beta;
        for (double v : y) z_max = std::max(z_max, -v / beta);
        double s0 = 0.0, s1 = 0.0, s2 = 0.0;
        for (double v : y) {
            const double w = std::exp(-v / beta - z_max);
            s0 += w;
            s1 += v * w;
            s2 += v * v * w;
        }
        const double m1 = s1 / s0;
        const double var = std::max(0.0, s2 / s0 - m1 * m1);
        slope = -var / (beta * beta) - 1.0;
        return y_bar - m1 - beta;
    };

    double beta = sd * std::numbers::sqrt3 * std::numbers::sqrt2 / std::numbers::pi;
    double lo = 0.0;
    double hi = y_bar - y_min + beta; // g(hi) <= -beta < 0
    const int max_iter = 500;
    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
        double slope = 0.0;
        const double g = g_and_slope(beta, slope);
        if (g > 0.0) {
            lo = beta;
        } else {
            hi = beta;
        }
        double next = beta - g / slope;
        if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
        const double step = std::abs(next - beta);
        beta = next;
        if (step <= 1e-9) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError(Stage::trends, "fit_gumbel: scale iteration did not converge");

    double z_max = -y[0] / beta;
    for (double v : y) z_max = std::max(z_max, -v / beta);
    double acc = 0.0;
    for (double v : y) acc += std::exp(-v / beta - z_max);
    const double m_hat = -beta * (z_max + std::log(acc / static_cast<double>(y.size())));

    return {-m_hat, beta};
}

std::size_t rice_bins(std::size_t n) {
    if (n == 0) throw BinningError("rice_bins: empty sample");
    return static_cast<std::size_t>(std::ceil(2.0 * std::cbrt(static_cast<double>(n))));
}

double rice_width(double range, std::size_t n) {
    if (n == 0) throw BinningError("rice_width: empty sample");
    if (!(range > 0.0)) throw BinningError("rice_width: nonpositive range");
    return range / (2.0 * std::cbrt(static_cast<double>(n)));
}

TrendModel reference_trend_model() {
    TrendModel m;
    m.a.trend = {1.9790, -0.0017, 0.0005};
    m.b.trend = {0.8990, 0.0689, -0.0089};
    m.c.trend = {913.0363, 103.6416, -54.6980};
    m.a.residual = {0.0028, 0.0064};
    m.b.residual = {0.0048, 0.0111};
    m.c.residual = {26.0092, 26.0947};
    m.mean_b = 0.8990;
    return m;
}

} // namespace solsim
