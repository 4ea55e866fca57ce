// Acceptance runner: exercises the library end to end and prints one
// PASS/FAIL line per criterion. Exit status is the number of failures,
// so `ctest` treats any red line as a failed test. All tolerances are
// pinned here, next to the checks they guard.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "solsim/csv.hpp"
#include "solsim/daily_fit.hpp"
#include "solsim/error.hpp"
#include "solsim/model.hpp"
#include "solsim/pipeline.hpp"
#include "solsim/pv.hpp"
#include "solsim/residual_maps.hpp"
#include "solsim/rng.hpp"
#include "solsim/simulate.hpp"
#include "solsim/trends.hpp"

using namespace solsim;
namespace fs = std::filesystem;

namespace {

constexpr double euler_gamma = 0.57721566490153286;

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "solsim_acceptance";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

double rel_err(double got, double want) {
    return std::abs(got - want) / std::abs(want);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// Model with every stochastic term collapsed: Gumbel scales at 1e-12,
// every rate column a point mass at zero with a 1e-13 bandwidth, and
// envelopes too wide to ever clamp.
Model quiet_model() {
    Model m = default_model();
    for (ParamModel* p : {&m.trends.a, &m.trends.b, &m.trends.c}) {
        p->residual = GumbelParams{0.0, 1e-12};
    }
    m.bandwidth = 1e-13;
    for (auto& sm : m.maps) {
        sm.kde.bandwidth = 1e-13;
        for (auto& col : sm.kde.samples) {
            if (!col.empty()) col = {0.0};
        }
        for (auto& node : sm.envelope) node = {-1.0, 1.0};
        sm.discrete.bin_edges = {-1.0, 1.0};
        for (auto& row : sm.discrete.mass) row = {1.0};
    }
    return m;
}

// Eq-shaped daily curve on the nominal 10-minute grid, clipped at night.
std::vector<MinuteSample> parabola_day(double a, double b, double c, double m_c) {
    std::vector<MinuteSample> out;
    for (int m = 0; m < minutes_per_day; m += 10) {
        const double ms = (m / m_c - a) / b;
        out.push_back({m, std::max(0.0, c * (1.0 - ms * ms))});
    }
    return out;
}

double median_of(std::vector<double> v) {
    const std::size_t h = v.size() / 2;
    std::nth_element(v.begin(), v.end(), v.begin() + h);
    double hi = v[h];
    if (v.size() % 2 == 0) {
        std::nth_element(v.begin(), v.end(), v.begin() + h - 1);
        return 0.5 * (v[h - 1] + hi);
    }
    return hi;
}

// --- criteria ---------------------------------------------------------

bool c01_grid(std::string&) {
    const MstarGrid g = build_grid(0.8990, 360.0);
    return g.j_count == 64 && g.nodes.size() == 65 && g.spacing() == 0.03125 &&
           g.nodes.front() == -1.0 && g.nodes.back() == 1.0 && g.nodes[32] == 0.0;
}

bool c02_rice(std::string&) {
    return rice_bins(365) == 15 && rice_bins(1000) == 20;
}

bool c03_deterministic_reduction(std::string& detail) {
    const Model m = quiet_model();
    const Simulator sim(m);
    double worst = 0.0;
    for (std::int32_t day : {90, 172, 260, 350}) {
        Rng rng(derive_stream(3, day, 0));
        const double got = sim.simulate_exposure(rng, day);
        const double want = 8.0 * eval_trend(m.trends.b.trend, day) * eval_trend(m.trends.c.trend, day);
        worst = std::max(worst, rel_err(got, want));
    }
    detail = "max rel err " + fmt(worst);
    return worst <= 1e-9;
}

bool c04_parabola_roundtrip(std::string& detail) {
    const double m_c = 360.0;
    const double a = 1.9790, b = 0.8990, c = 913.0363;

    const auto clean = parabola_day(a, b, c, m_c);
    const FitParams exact = fit_parabola(clean, m_c);
    const double e0 = std::max({rel_err(exact.a, a), rel_err(exact.b, b), rel_err(exact.c, c)});

    auto noisy = clean;
    Rng rng(404);
    for (auto& s : noisy) {
        if (s.e > 0.0) {
            const double u = 2.0 * uniform_open(rng) - 1.0;
            s.e = std::max(0.0, s.e * (1.0 + 0.01 * u));
        }
    }
    const FitParams rough = fit_parabola(noisy, m_c);
    const double e1 = std::max({rel_err(rough.a, a), rel_err(rough.b, b), rel_err(rough.c, c)});

    detail = "noiseless " + fmt(e0) + ", 1% noise " + fmt(e1);
    return e0 <= 1e-9 && e1 <= 0.01;
}

bool c05_trend_roundtrip(std::string& detail) {
    const TrendCoefficients truth{0.8990, 0.0689, -0.0089};
    std::vector<std::int32_t> days(365);
    std::vector<double> values(365);
    for (int d = 1; d <= 365; ++d) {
        days[d - 1] = d;
        values[d - 1] = eval_trend(truth, d);
    }
    const TrendCoefficients got = fit_trend(days, values);
    const double worst = std::max({std::abs(got.y0 - truth.y0), std::abs(got.y1 - truth.y1),
                                   std::abs(got.y2 - truth.y2)});
    detail = "max abs err " + fmt(worst);
    return worst <= 1e-10;
}

bool c06_gumbel_suite(std::string& detail) {
    const GumbelParams rows[3] = {{0.0028, 0.0064}, {0.0048, 0.0111}, {26.0092, 26.0947}};

    // Density normalization, trapezoid over mu - 16 nu .. mu + 8 nu.
    const GumbelParams& g = rows[1];
    const std::size_t n_pts = 40001;
    const double lo = g.mu - 16.0 * g.nu, hi = g.mu + 8.0 * g.nu;
    const double h = (hi - lo) / static_cast<double>(n_pts - 1);
    double integral = 0.0;
    for (std::size_t i = 0; i < n_pts; ++i) {
        const double w = (i == 0 || i == n_pts - 1) ? 0.5 : 1.0;
        integral += w * gumbel_pdf(g, lo + static_cast<double>(i) * h);
    }
    integral *= h;
    const bool norm_ok = std::abs(integral - 1.0) <= 1e-6;

    // Sampler mean at 10^6 draws: within 3 standard errors of mu - nu gamma.
    Rng rng(606);
    const std::size_t n_mean = 1000000;
    double sum = 0.0;
    for (std::size_t i = 0; i < n_mean; ++i) sum += sample_gumbel(g, rng);
    const double mean = sum / static_cast<double>(n_mean);
    const double se = g.nu * 3.14159265358979323846 / std::sqrt(6.0) / std::sqrt(double(n_mean));
    const double mean_err = std::abs(mean - gumbel_expected(g));
    const bool mean_ok = mean_err <= 3.0 * se;

    // Parameter recovery at 10^5 draws, within 2 percent, plus skewness.
    bool fit_ok = true;
    bool skew_ok = true;
    double worst_fit = 0.0;
    const std::uint64_t seeds[3] = {611, 612, 613};
    for (int k = 0; k < 3; ++k) {
        Rng r(seeds[k]);
        std::vector<double> draws(100000);
        for (double& d : draws) d = sample_gumbel(rows[k], r);
        const GumbelParams hat = fit_gumbel(draws);
        worst_fit = std::max({worst_fit, rel_err(hat.mu, rows[k].mu), rel_err(hat.nu, rows[k].nu)});

        const double m = std::accumulate(draws.begin(), draws.end(), 0.0) / double(draws.size());
        double m2 = 0.0, m3 = 0.0;
        for (double d : draws) {
            const double z = d - m;
            m2 += z * z;
            m3 += z * z * z;
        }
        if (m3 / double(draws.size()) / std::pow(m2 / double(draws.size()), 1.5) >= 0.0)
            skew_ok = false;
    }
    fit_ok = worst_fit <= 0.02;

    detail = "integral err " + fmt(std::abs(integral - 1.0)) + ", mean err " + fmt(mean_err) +
             " (3se " + fmt(3.0 * se) + "), worst fit err " + fmt(worst_fit);
    return norm_ok && mean_ok && fit_ok && skew_ok;
}

bool c07_kde_suite(std::string& detail) {
    // Twenty columns of synthetic rates with assorted sizes and spreads.
    Rng rng(707);
    std::vector<std::vector<double>> cols(20);
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const std::size_t n = 2 + (rng() % 39);
        cols[j].resize(n);
        for (double& v : cols[j]) {
            double s = 0.0; // ~normal via 12-uniform sum
            for (int i = 0; i < 12; ++i) s += uniform_open(rng);
            v = (s - 6.0) * (0.1 + 0.05 * static_cast<double>(j)) + 0.02 * static_cast<double>(j);
        }
    }
    const double h = kde_bandwidth(cols);

    double worst_integral = 0.0;
    bool bounds_ok = true;
    for (const auto& col : cols) {
        const auto grid = kde_eval_points(col, h);
        const auto dens = kde_density_grid(col, h, grid);
        const double step = grid[1] - grid[0];
        double integral = 0.0;
        for (std::size_t i = 0; i < dens.size(); ++i) {
            const double w = (i == 0 || i == dens.size() - 1) ? 0.5 : 1.0;
            integral += w * dens[i];
        }
        worst_integral = std::max(worst_integral, std::abs(integral * step - 1.0));

        for (double v : scaled_pdm_column(col, h, grid)) {
            if (v < 0.0 || v > 1.0) bounds_ok = false;
        }
    }

    // A single sample peaks at exactly 1/(h sqrt(2 pi)) on the sample.
    const std::vector<double> one = {0.0};
    const double peak = kde_density(one, h, 0.0);
    const double peak_want = 1.0 / (h * std::sqrt(2.0 * 3.14159265358979323846));
    const bool peak_ok = rel_err(peak, peak_want) <= 1e-15;

    detail = "worst integral err " + fmt(worst_integral);
    return worst_integral <= 1e-4 && bounds_ok && peak_ok;
}

bool c08_discrete_columns(std::string& detail) {
    const MstarGrid grid = build_grid(0.8990, 360.0);
    Rng rng(808);
    std::vector<RateSample> rates;
    std::vector<std::vector<double>> cols(grid.nodes.size());
    for (std::size_t j = 1; j < grid.nodes.size(); j += 2) { // leave gaps on purpose
        for (int i = 0; i < 25; ++i) {
            const double r = 4.0 * uniform_open(rng) - 2.0 + 0.05 * static_cast<double>(j);
            rates.push_back({j, r});
            cols[j].push_back(r);
        }
    }
    const RateBinning binning = freedman_diaconis_bins(cols);
    const DiscreteProbabilityMap map = build_discrete_map(rates, grid, binning);

    double worst = 0.0;
    for (std::size_t j = 0; j < map.mass.size(); ++j) {
        const double s = std::accumulate(map.mass[j].begin(), map.mass[j].end(), 0.0);
        if (cols[j].empty()) {
            worst = std::max(worst, std::abs(s)); // untouched columns stay zero
        } else {
            worst = std::max(worst, std::abs(s - 1.0));
        }
    }
    detail = "worst column sum err " + fmt(worst);
    return worst <= 1e-12;
}

bool c09_expectation_law(std::string& detail) {
    const Model m = default_model();
    const Simulator sim(m);
    double worst_z = 0.0;
    for (std::int32_t day : {90, 172, 260, 350}) {
        const std::size_t n = 10000;
        Rng rng(derive_stream(909, day, 0));
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = sim.simulate_exposure(rng, day);
            sum += e;
            sum2 += e * e;
        }
        const double mean = sum / static_cast<double>(n);
        const double var = (sum2 - sum * sum / static_cast<double>(n)) / static_cast<double>(n - 1);
        const double se = std::sqrt(var / static_cast<double>(n));
        worst_z = std::max(worst_z, std::abs(mean - sim.expected_exposure(day)) / se);
    }
    detail = "worst |z| " + fmt(worst_z);
    return worst_z <= 3.0;
}

bool c10_route_consistency(std::string& detail) {
    const Model m = default_model();
    const Simulator sim(m);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        Rng r1(derive_stream(1010, 172, static_cast<std::uint64_t>(rep)));
        Rng r2(derive_stream(1010, 172, static_cast<std::uint64_t>(rep)));
        const double closed = sim.simulate_exposure(r1, 172);
        const double quad = sim.simulate_irradiance(r2, 172, 10).exposure;
        worst = std::max(worst, std::abs(closed - quad) / closed);
    }
    detail = "worst rel diff " + fmt(worst);
    return worst <= 0.005;
}

bool c11_pv_anchors(std::string& detail) {
    const PanelSpec spec = reference_panel();
    const DiodeModel d = extract_diode_model(spec);

    const double isc = iv_current(0.0, 1000.0, d);
    const double ioc = iv_current(spec.v_oc_v, 1000.0, d);
    const double pmp = mpp(1000.0, d).p;

    std::vector<double> minute, irr;
    for (int m = 0; m <= 60; m += 10) {
        minute.push_back(m);
        irr.push_back(1000.0);
    }
    const double q = daily_charge(minute, irr, d);

    detail = "Isc " + fmt(isc) + " A, P " + fmt(pmp) + " W, 1h charge " + fmt(q) + " Ah";
    return std::abs(isc - spec.i_sc_a) <= 0.001 * spec.i_sc_a &&
           std::abs(ioc) <= 0.001 * spec.i_sc_a &&
           std::abs(pmp - spec.stc_power_w) <= 0.02 * spec.stc_power_w &&
           std::abs(q - spec.i_mp_a) <= 0.02 * spec.i_mp_a;
}

bool c12_end_to_end(std::string& detail) {
    // Generator: published trends, zero-mean Gumbel residuals, and the
    // built-in rate maps narrowed tenfold so the day-to-day scatter stays
    // well inside the 2 percent recovery budget.
    Model gen = default_model();
    gen.trends.a.residual = {euler_gamma * 5e-4, 5e-4};
    gen.trends.b.residual = {euler_gamma * 5e-4, 5e-4};
    gen.trends.c.residual = {euler_gamma * 0.05, 0.05};
    gen.bandwidth *= 0.1;
    for (auto& sm : gen.maps) {
        sm.kde.bandwidth *= 0.1;
        for (auto& col : sm.kde.samples) {
            for (double& v : col) v *= 0.1;
        }
    }

    std::vector<std::int32_t> days(365);
    std::iota(days.begin(), days.end(), 1);

    // One synthetic year on the nominal cadence.
    const auto year = simulate_batch(gen, days, 1, 31415);
    const fs::path dataset = work_dir() / "synthetic_year.csv";
    {
        std::ofstream out(dataset);
        out << "t_min,irradiance_wm2\n";
        for (const auto& curve : year) {
            for (std::size_t k = 0; k < curve.minute.size(); ++k) {
                const long long t =
                    (curve.day - 1) * 1440LL + static_cast<long long>(curve.minute[k]);
                out << t << ',' << csv::format_double(curve.irradiance[k]) << '\n';
            }
        }
    }

    PipelineConfig fit_cfg;
    fit_cfg.input = dataset;
    fit_cfg.output_dir = work_dir() / "fit";
    const Model fitted = load_model(cmd_fit(fit_cfg).front());

    const TrendModel truth = reference_trend_model();
    double worst_trend = 0.0;
    const std::pair<const ParamModel*, const ParamModel*> pairs[3] = {
        {&fitted.trends.a, &truth.a}, {&fitted.trends.b, &truth.b}, {&fitted.trends.c, &truth.c}};
    for (const auto& [hat, ref] : pairs) {
        const double scale = std::abs(ref->trend.y0);
        worst_trend = std::max({worst_trend, std::abs(hat->trend.y0 - ref->trend.y0) / scale,
                                std::abs(hat->trend.y1 - ref->trend.y1) / scale,
                                std::abs(hat->trend.y2 - ref->trend.y2) / scale});
    }
    const bool trends_ok = worst_trend <= 0.02;

    // "Measured" charges: per-day medians over 100 generator replicates.
    const DiodeModel string8 = series_string(extract_diode_model(reference_panel()), 8);
    const auto reference_year = simulate_batch(gen, days, 100, 271828);
    const fs::path measured = work_dir() / "measured.csv";
    {
        std::ofstream out(measured);
        out << "day,charge_ah\n";
        for (std::size_t i = 0; i < days.size(); ++i) {
            std::vector<double> charges(100);
            for (int r = 0; r < 100; ++r) {
                const auto& curve = reference_year[i * 100 + static_cast<std::size_t>(r)];
                charges[static_cast<std::size_t>(r)] =
                    daily_charge(curve.minute, curve.irradiance, string8);
            }
            out << days[i] << ',' << csv::format_double(median_of(std::move(charges))) << '\n';
        }
    }

    PipelineConfig val_cfg;
    val_cfg.model_path = work_dir() / "fit" / "model.json";
    val_cfg.measured_path = measured;
    val_cfg.output_dir = work_dir() / "validate";
    val_cfg.replicates = 100;
    val_cfg.seed = 999;
    cmd_validate(val_cfg);

    std::size_t in_box = 0, total = 0;
    {
        std::ifstream in(work_dir() / "validate" / "comparison.csv");
        std::string line;
        std::getline(in, line); // header
        while (std::getline(in, line)) {
            ++total;
            if (!line.empty() && line.back() == '1') ++in_box;
        }
    }
    const double rate = total ? static_cast<double>(in_box) / static_cast<double>(total) : 0.0;

    detail = "worst trend err " + fmt(worst_trend) + ", in-box " + std::to_string(in_box) + "/" +
             std::to_string(total);
    return trends_ok && total == days.size() && rate > 0.5;
}

bool c13_determinism(std::string&) {
    PipelineConfig cfg;
    cfg.days = {1, 2, 3, 4, 5};
    cfg.replicates = 2;
    cfg.seed = 4;

    cfg.output_dir = work_dir() / "det_a";
    cmd_simulate(cfg);
    cfg.output_dir = work_dir() / "det_b";
    cmd_simulate(cfg);

    for (const char* name : {"curves.csv", "exposures.csv"}) {
        const std::string a = read_file(work_dir() / "det_a" / name);
        if (a.empty() || a != read_file(work_dir() / "det_b" / name)) return false;
    }
    return true;
}

struct Entry {
    int id;
    const char* what;
    std::function<bool(std::string&)> run;
};

} // namespace

int main() {
    const Entry entries[] = {
        {1, "grid arithmetic: J=64, 65 nodes spaced exactly 0.03125", c01_grid},
        {2, "Rice rule bin counts", c02_rice},
        {3, "deterministic reduction to 8 B(d) C(d) within 1e-9", c03_deterministic_reduction},
        {4, "parabola fit round trip, noiseless 1e-9 and 1% noise", c04_parabola_roundtrip},
        {5, "annual trend round trip within 1e-10", c05_trend_roundtrip},
        {6, "Gumbel: normalization, sampler mean, 2% fit recovery, skew", c06_gumbel_suite},
        {7, "KDE: unit mass per column, scaled PDM in [0,1], peak value", c07_kde_suite},
        {8, "discrete map columns sum to 1 within 1e-12", c08_discrete_columns},
        {9, "mean simulated exposure matches expectation within 3 SE", c09_expectation_law},
        {10, "closed-form vs quadrature exposure within 0.5%", c10_route_consistency},
        {11, "diode model hits datasheet anchors and 1-hour charge", c11_pv_anchors},
        {12, "synthetic year: fit recovers trends, medians stay in boxes", c12_end_to_end},
        {13, "simulate twice with one seed: byte-identical CSVs", c13_determinism},
    };

    int failures = 0;
    for (const Entry& e : entries) {
        bool ok = false;
        std::string extra;
        try {
            ok = e.run(extra);
        } catch (const std::exception& ex) {
            extra = std::string("exception: ") + ex.what();
        }
        std::printf("criterion %2d: %s - %s%s%s\n", e.id, ok ? "PASS" : "FAIL", e.what,
                    extra.empty() ? "" : "; ", extra.c_str());
        if (!ok) ++failures;
    }
    return failures;
}
