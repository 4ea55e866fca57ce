#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "solsim/exec.hpp"
#include "solsim/model.hpp"
#include "solsim/rng.hpp"

namespace solsim {

struct RealizedParams {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

// Inverse-transform sampler over a season's per-column KDE densities.
// Builds each column's piecewise-linear CDF once; drawing is then a
// binary search. Columns without samples defer to the nearest usable one.
class RateSampler {
public:
    explicit RateSampler(const KdeMap& map);

    double sample(Rng& rng, std::size_t j) const;
    // Deterministic half of `sample`, exposed for tests.
    double sample_from_u(double u, std::size_t j) const;
    // Mean of the discretized column density (what `sample` converges to).
    double column_mean(std::size_t j) const;
    bool column_valid(std::size_t j) const;
    std::size_t effective_column(std::size_t j) const;

private:
    struct Column {
        std::vector<double> r;
        std::vector<double> cdf; // normalized to cdf.back() == 1
        double mean = 0.0;
        bool valid = false;
    };
    std::vector<Column> cols_;
};

struct SimulatedDay {
    std::int32_t day = 0;
    RealizedParams params;
    double cadence_min = 10.0;
    std::vector<double> minute;        // uniform grid covering [0, 1440)
    std::vector<double> irradiance;    // W/m^2
    std::vector<double> residual_path; // R*_j at the grid nodes
    double exposure = 0.0;             // W·h/m^2, quadrature of the curve
};

// Precomputes one RateSampler per season; simulation entry point.
class Simulator {
public:
    explicit Simulator(const Model& model);

    // A = trend(d) + Gumbel draw, likewise B and C; redrawn (up to 100
    // times) until the parabola parameters are physical.
    RealizedParams realize_params(Rng& rng, std::int32_t day) const;

    // R*_0 = 0, then R*_j = R*_(j-1) + (2/J) r*_j with r* redrawn (cap
    // 100, then clamped) so every node stays inside its envelope.
    std::vector<double> simulate_residual_path(Rng& rng, std::int32_t day) const;

    SimulatedDay simulate_irradiance(Rng& rng, std::int32_t day, int cadence_min = 10) const;

    // Same draws as simulate_irradiance, but the exposure comes from the
    // closed-form quadrature over the residual path instead of the curve.
    double simulate_exposure(Rng& rng, std::int32_t day) const;

    double expected_exposure(std::int32_t day) const;

    const Model& model() const { return *model_; }
    const RateSampler& sampler_for_day(std::int32_t day) const;

private:
    const Model* model_;
    std::map<int, RateSampler> samplers_; // keyed by season id
};

// One-shot conveniences (they build a Simulator internally; use the class
// for replicate loops).
RealizedParams realize_params(Rng& rng, std::int32_t day, const Model& model);
double sample_rate(Rng& rng, std::size_t j, const KdeMap& map);
SimulatedDay simulate_irradiance(Rng& rng, std::int32_t day, const Model& model,
                                 int cadence_min = 10);
double simulate_exposure(Rng& rng, std::int32_t day, const Model& model);
double expected_exposure(std::int32_t day, const Model& model);

// Daily radiant exposure from a uniform-cadence curve covering [0, 1440):
// trapezoid with periodic closure (exact for day-long constants), per
// minute, divided by 60 to land in W·h/m^2.
double radiant_exposure(std::span<const double> irradiance, double cadence_min);

// Replicates of each requested day; stream (seed, day, replicate) keyed,
// so results are independent of execution order and thread count.
// Output is day-major, replicate-minor.
std::vector<SimulatedDay> simulate_batch(const Model& model, std::span<const std::int32_t> days,
                                         int replicates, std::uint64_t seed, int cadence_min = 10,
                                         Exec exec = Exec::openmp);

} // namespace solsim
