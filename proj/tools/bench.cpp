#include <chrono>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <vector>

#include "solsim/daily_fit.hpp"
#include "solsim/model.hpp"
#include "solsim/pv.hpp"
#include "solsim/simulate.hpp"
#include "solsim/smoothing.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace solsim;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void report(const char* name, double serial_ms, double openmp_ms, bool match) {
    std::printf("%-18s %10.1f ms %10.1f ms   x%.2f   %s\n", name, serial_ms, openmp_ms,
                serial_ms / openmp_ms, match ? "identical" : "MISMATCH");
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (compiled without OpenMP)\n");
#endif
    std::printf("%-18s %13s %13s\n", "kernel", "serial", "openmp");

    const Model model = default_model();
    std::vector<std::int32_t> days(days_per_year);
    std::iota(days.begin(), days.end(), 1);
    constexpr int replicates = 8;

    double t0 = now_ms();
    const auto sim_s = simulate_batch(model, days, replicates, 42, 10, Exec::serial);
    double t1 = now_ms();
    const auto sim_p = simulate_batch(model, days, replicates, 42, 10, Exec::openmp);
    double t2 = now_ms();
    bool match = sim_s.size() == sim_p.size();
    for (std::size_t i = 0; match && i < sim_s.size(); ++i)
        match = sim_s[i].exposure == sim_p[i].exposure &&
                sim_s[i].irradiance == sim_p[i].irradiance;
    report("simulate_batch", t1 - t0, t2 - t1, match);

    // One replicate per day makes a year-long synthetic grid for the
    // fitting-side kernels.
    GriddedDays grid;
    grid.cadence_min = 10;
    for (std::size_t i = 0; i < days.size(); ++i) {
        grid.day.push_back(days[i]);
        grid.value.push_back(sim_s[i * replicates].irradiance);
    }

    TmaConfig tma;
    t0 = now_ms();
    const auto smooth_s = smooth_all(grid, tma, Exec::serial);
    t1 = now_ms();
    const auto smooth_p = smooth_all(grid, tma, Exec::openmp);
    t2 = now_ms();
    report("smooth_all", t1 - t0, t2 - t1, smooth_s.value == smooth_p.value);

    t0 = now_ms();
    const auto fit_s = fit_all(smooth_s, default_m_c, Exec::serial);
    t1 = now_ms();
    const auto fit_p = fit_all(smooth_s, default_m_c, Exec::openmp);
    t2 = now_ms();
    match = fit_s.size() == fit_p.size();
    for (std::size_t i = 0; match && i < fit_s.size(); ++i) {
        match = fit_s[i].params.has_value() == fit_p[i].params.has_value();
        if (match && fit_s[i].params)
            match = fit_s[i].params->a == fit_p[i].params->a &&
                    fit_s[i].params->b == fit_p[i].params->b &&
                    fit_s[i].params->c == fit_p[i].params->c;
    }
    report("fit_all", t1 - t0, t2 - t1, match);

    const DiodeModel array = series_string(extract_diode_model(reference_panel()), 8);
    std::vector<double> charge_s(sim_s.size());
    std::vector<double> charge_p(sim_s.size());
    t0 = now_ms();
    for (std::size_t i = 0; i < sim_s.size(); ++i)
        charge_s[i] = daily_charge(sim_s[i].minute, sim_s[i].irradiance, array);
    t1 = now_ms();
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(sim_s.size()); ++i) {
        const auto k = static_cast<std::size_t>(i);
        charge_p[k] = daily_charge(sim_s[k].minute, sim_s[k].irradiance, array);
    }
    t2 = now_ms();
    report("daily_charge", t1 - t0, t2 - t1, charge_s == charge_p);
    return 0;
}
