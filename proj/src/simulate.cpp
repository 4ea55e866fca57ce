#include "solsim/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "solsim/error.hpp"
#include "solsim/trends.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace solsim {

RateSampler::RateSampler(const KdeMap& map) {
    cols_.resize(map.samples.size());
    for (std::size_t j = 0; j < map.samples.size(); ++j) {
        const auto& samples = map.samples[j];
        if (samples.empty()) continue;
        auto& col = cols_[j];
        col.r = kde_eval_points(samples, map.bandwidth);
        const auto f = kde_density_grid(samples, map.bandwidth, col.r);

        col.cdf.resize(col.r.size());
        col.cdf[0] = 0.0;
        double first_moment = 0.0;
        for (std::size_t i = 1; i < col.r.size(); ++i) {
            const double dr = col.r[i] - col.r[i - 1];
            col.cdf[i] = col.cdf[i - 1] + 0.5 * (f[i] + f[i - 1]) * dr;
            first_moment += 0.5 * (f[i] * col.r[i] + f[i - 1] * col.r[i - 1]) * dr;
        }
        const double total = col.cdf.back();
        if (!(total > 0.0)) continue;
        for (double& c : col.cdf) c /= total;
        col.mean = first_moment / total;
        col.valid = true;
    }
}

std::size_t RateSampler::effective_column(std::size_t j) const {
    if (j < cols_.size() && cols_[j].valid) return j;
    std::size_t best = cols_.size();
    std::size_t best_dist = cols_.size() + 1;
    for (std::size_t k = 0; k < cols_.size(); ++k) {
        if (!cols_[k].valid) continue;
        const std::size_t dist = j > k ? j - k : k - j;
        if (dist < best_dist) {
            best_dist = dist;
            best = k;
        }
    }
    if (best == cols_.size()) throw RealizationError("rate sampler has no usable column");
    return best;
}

bool RateSampler::column_valid(std::size_t j) const { return j < cols_.size() && cols_[j].valid; }

double RateSampler::column_mean(std::size_t j) const { return cols_[effective_column(j)].mean; }

double RateSampler::sample_from_u(double u, std::size_t j) const {
    if (!(u > 0.0 && u < 1.0)) throw RealizationError("sample_from_u: u outside (0,1)");
    const auto& col = cols_[effective_column(j)];
    const auto it = std::lower_bound(col.cdf.begin(), col.cdf.end(), u);
    auto hi = static_cast<std::size_t>(it - col.cdf.begin());
    if (hi == 0) hi = 1;
    if (hi >= col.cdf.size()) hi = col.cdf.size() - 1;
    const std::size_t lo = hi - 1;
    const double span = col.cdf[hi] - col.cdf[lo];
    if (span <= 0.0) return col.r[lo];
    const double t = (u - col.cdf[lo]) / span;
    return col.r[lo] + t * (col.r[hi] - col.r[lo]);
}

double RateSampler::sample(Rng& rng, std::size_t j) const {
    return sample_from_u(uniform_open(rng), j);
}

Simulator::Simulator(const Model& model) : model_(&model) {
    validate_model(model);
    for (const auto& m : model.maps) samplers_.emplace(m.season, RateSampler(m.kde));
}

const RateSampler& Simulator::sampler_for_day(std::int32_t day) const {
    return samplers_.at(season_of(day, model_->seasons));
}

RealizedParams Simulator::realize_params(Rng& rng, std::int32_t day) const {
    const auto& t = model_->trends;
    const double a_trend = eval_trend(t.a.trend, day);
    const double b_trend = eval_trend(t.b.trend, day);
    const double c_trend = eval_trend(t.c.trend, day);

    for (int attempt = 0; attempt < 100; ++attempt) {
        RealizedParams p;
        p.a = a_trend + sample_gumbel(t.a.residual, rng);
        p.b = b_trend + sample_gumbel(t.b.residual, rng);
        p.c = c_trend + sample_gumbel(t.c.residual, rng);
        const bool ok = p.b > 0.0 && p.c > 0.0 && model_->m_c * (p.a - p.b) > 0.0 &&
                        model_->m_c * (p.a + p.b) < static_cast<double>(minutes_per_day);
        if (ok) return p;
    }
    throw RealizationError("day " + std::to_string(day) +
                           ": no physical parameter draw in 100 attempts");
}

std::vector<double> Simulator::simulate_residual_path(Rng& rng, std::int32_t day) const {
    const auto& maps = model_->maps_for_day(day);
    const auto& sampler = samplers_.at(maps.season);
    const std::size_t j_count = model_->grid.j_count;
    const double step = 2.0 / static_cast<double>(j_count);

    std::vector<double> path(j_count + 1, 0.0);
    for (std::size_t j = 1; j <= j_count; ++j) {
        const auto [lo, hi] = maps.envelope[j];
        double candidate = 0.0;
        bool inside = false;
        for (int attempt = 0; attempt < 100 && !inside; ++attempt) {
            candidate = path[j - 1] + step * sampler.sample(rng, j);
            inside = candidate >= lo && candidate <= hi;
        }
        path[j] = inside ? candidate : std::clamp(candidate, lo, hi);
    }
    return path;
}

SimulatedDay Simulator::simulate_irradiance(Rng& rng, std::int32_t day, int cadence_min) const {
    if (cadence_min <= 0 || minutes_per_day % cadence_min != 0)
        throw RealizationError("cadence must be a positive divisor of 1440");

    SimulatedDay out;
    out.day = day;
    out.cadence_min = static_cast<double>(cadence_min);
    out.params = realize_params(rng, day);
    out.residual_path = simulate_residual_path(rng, day);

    const std::size_t j_count = model_->grid.j_count;
    const std::size_t n = static_cast<std::size_t>(minutes_per_day) /
                          static_cast<std::size_t>(cadence_min);
    out.minute.resize(n);
    out.irradiance.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double m = static_cast<double>(k) * out.cadence_min;
        out.minute[k] = m;
        const double m_star = (m / model_->m_c - out.params.a) / out.params.b;
        if (std::abs(m_star) > 1.0) {
            out.irradiance[k] = 0.0;
            continue;
        }
        // R*(m*) linearly interpolated between grid nodes.
        const double pos = (m_star + 1.0) * static_cast<double>(j_count) / 2.0;
        auto j0 = static_cast<std::size_t>(pos);
        if (j0 >= j_count) j0 = j_count - 1;
        const double frac = pos - static_cast<double>(j0);
        const double r =
            out.residual_path[j0] + frac * (out.residual_path[j0 + 1] - out.residual_path[j0]);
        out.irradiance[k] = out.params.c * std::max(0.0, 1.0 - m_star * m_star + r);
    }
    out.exposure = radiant_exposure(out.irradiance, out.cadence_min);
    return out;
}

double Simulator::simulate_exposure(Rng& rng, std::int32_t day) const {
    const auto params = realize_params(rng, day);
    const auto path = simulate_residual_path(rng, day);

    const auto j_count = static_cast<double>(model_->grid.j_count);
    double interior = 0.0;
    for (std::size_t j = 1; j + 1 < path.size(); ++j) interior += path[j];
    const double residual_integral = (path.front() + 2.0 * interior + path.back()) / j_count;

    return (model_->m_c / 60.0) * params.b * params.c * (4.0 / 3.0 + residual_integral);
}

double Simulator::expected_exposure(std::int32_t day) const {
    const auto& t = model_->trends;
    const double b_mean = eval_trend(t.b.trend, day) + gumbel_expected(t.b.residual);
    const double c_mean = eval_trend(t.c.trend, day) + gumbel_expected(t.c.residual);

    const auto& sampler = sampler_for_day(day);
    const std::size_t j_count = model_->grid.j_count;
    const double step = 2.0 / static_cast<double>(j_count);
    std::vector<double> expected_path(j_count + 1, 0.0);
    for (std::size_t j = 1; j <= j_count; ++j)
        expected_path[j] = expected_path[j - 1] + step * sampler.column_mean(j);

    double interior = 0.0;
    for (std::size_t j = 1; j < j_count; ++j) interior += expected_path[j];
    const double residual_integral =
        (expected_path.front() + 2.0 * interior + expected_path.back()) /
        static_cast<double>(j_count);

    return (model_->m_c / 60.0) * b_mean * c_mean * (4.0 / 3.0 + residual_integral);
}

RealizedParams realize_params(Rng& rng, std::int32_t day, const Model& model) {
    return Simulator(model).realize_params(rng, day);
}

double sample_rate(Rng& rng, std::size_t j, const KdeMap& map) {
    return RateSampler(map).sample(rng, j);
}

SimulatedDay simulate_irradiance(Rng& rng, std::int32_t day, const Model& model, int cadence_min) {
    return Simulator(model).simulate_irradiance(rng, day, cadence_min);
}

double simulate_exposure(Rng& rng, std::int32_t day, const Model& model) {
    return Simulator(model).simulate_exposure(rng, day);
}

double expected_exposure(std::int32_t day, const Model& model) {
    return Simulator(model).expected_exposure(day);
}

double radiant_exposure(std::span<const double> irradiance, double cadence_min) {
    if (irradiance.empty()) return 0.0;
    double acc = 0.0;
    for (double e : irradiance) acc += e;
    return acc * cadence_min / 60.0;
}

std::vector<SimulatedDay> simulate_batch(const Model& model, std::span<const std::int32_t> days,
                                         int replicates, std::uint64_t seed, int cadence_min,
                                         Exec exec) {
    if (replicates < 1) throw RealizationError("replicates must be at least 1");
    const Simulator sim(model);
    const std::size_t total = days.size() * static_cast<std::size_t>(replicates);
    std::vector<SimulatedDay> out(total);

    auto run_one = [&](std::ptrdiff_t idx) {
        const auto i = static_cast<std::size_t>(idx);
        const std::int32_t day = days[i / static_cast<std::size_t>(replicates)];
        const auto rep = static_cast<std::int32_t>(i % static_cast<std::size_t>(replicates));
        Rng rng(derive_stream(seed, day, rep));
        out[i] = sim.simulate_irradiance(rng, day, cadence_min);
    };

    const auto n = static_cast<std::ptrdiff_t>(total);
    if (exec == Exec::openmp) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < n; ++i) run_one(i);
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) run_one(i);
    }
    return out;
}

} // namespace solsim
