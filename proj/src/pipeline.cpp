#include "solsim/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>

#include "solsim/csv.hpp"
#include "solsim/daily_fit.hpp"
#include "solsim/error.hpp"
#include "solsim/numeric.hpp"
#include "solsim/plot.hpp"
#include "solsim/pv.hpp"
#include "solsim/simulate.hpp"
#include "solsim/smoothing.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace solsim {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw IoError("cannot open " + p.string() + " for writing");
    return out;
}

void finish(std::ofstream& out, const fs::path& p) {
    out.flush();
    if (!out) throw IoError("write failed: " + p.string());
}

fs::path ensure_output_dir(const PipelineConfig& cfg) {
    fs::path dir = cfg.output_dir.empty() ? fs::path(".") : cfg.output_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string());
    return dir;
}

std::int32_t normalize_day(std::int32_t d) {
    if (d >= 1 && d <= days_per_year) return d;
    std::int32_t r = (d - 1) % days_per_year;
    if (r < 0) r += days_per_year;
    ++r;
    std::cerr << "warning: day " << d << " reduced to " << r << "\n";
    return r;
}

std::string num(double v) { return csv::format_double(v); }

void write_residual_hist(const fs::path& p, std::vector<double> resid, const GumbelParams& g) {
    std::sort(resid.begin(), resid.end());
    const double lo = resid.front();
    const double range = resid.back() - lo;
    if (!(range > 0.0)) throw BinningError("residual histogram: zero range");
    const std::size_t bins = rice_bins(resid.size());
    const double width = rice_width(range, resid.size());

    std::vector<std::size_t> count(bins, 0);
    for (double v : resid) {
        auto k = static_cast<std::size_t>((v - lo) / width);
        if (k >= bins) k = bins - 1;
        ++count[k];
    }
    auto out = open_out(p);
    out << "bin_left,bin_right,count,pdf_scaled\n";
    const auto n = static_cast<double>(resid.size());
    for (std::size_t k = 0; k < bins; ++k) {
        const double left = lo + static_cast<double>(k) * width;
        const double right = left + width;
        const double expected = gumbel_pdf(g, 0.5 * (left + right)) * width * n;
        csv::write_row(out, {num(left), num(right), std::to_string(count[k]), num(expected)});
    }
    finish(out, p);
}

void write_discrete_map_csv(const fs::path& p, const DiscreteProbabilityMap& map) {
    auto out = open_out(p);
    out << "m_star,r_star,value\n";
    for (std::size_t j = 0; j < map.mass.size(); ++j)
        for (std::size_t k = 0; k < map.mass[j].size(); ++k) {
            const double center = 0.5 * (map.bin_edges[k] + map.bin_edges[k + 1]);
            csv::write_row(out, {num(map.grid.nodes[j]), num(center), num(map.mass[j][k])});
        }
    finish(out, p);
}

// Season-wide evaluation grid for the long-format scaled-PDM table.
std::vector<double> season_r_grid(const KdeMap& map, std::size_t n = 161) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& col : map.samples) {
        if (col.empty()) continue;
        const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
        lo = std::min(lo, *mn - 8.0 * map.bandwidth);
        hi = std::max(hi, *mx + 8.0 * map.bandwidth);
    }
    std::vector<double> grid;
    if (!(hi > lo)) return grid;
    grid.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return grid;
}

void write_kde_map_csv(const fs::path& p, const KdeMap& map) {
    const auto grid = season_r_grid(map);
    auto out = open_out(p);
    out << "m_star,r_star,value\n";
    for (std::size_t j = 0; j < map.samples.size(); ++j) {
        const auto& col = map.samples[j];
        for (double r : grid) {
            const double v = col.empty() ? 0.0 : map.bandwidth * kde_density(col, map.bandwidth, r);
            csv::write_row(out, {num(map.grid.nodes[j]), num(r), num(v)});
        }
    }
    finish(out, p);
}

struct SeasonAccum {
    std::vector<std::vector<double>> rate_columns;
    std::vector<std::vector<double>> node_residuals;

    explicit SeasonAccum(std::size_t n_nodes)
        : rate_columns(n_nodes), node_residuals(n_nodes) {}

    bool empty() const {
        for (const auto& c : rate_columns)
            if (!c.empty()) return false;
        return true;
    }
};

std::vector<RateSample> flatten_rates(const std::vector<std::vector<double>>& columns) {
    std::vector<RateSample> out;
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (double v : columns[j]) out.push_back({j, v});
    return out;
}

} // namespace

std::vector<fs::path> cmd_fit(const PipelineConfig& cfg) {
    if (cfg.input.empty()) throw IoError("fit: no input dataset given");
    const fs::path dir = ensure_output_dir(cfg);

    Dataset data = parse_dataset_file(cfg.input.string(), {cfg.cadence_min});
    if (!data.rejected_rows.empty()) {
        std::cerr << "warning: rejected " << data.rejected_rows.size() << " input rows\n";
        if (cfg.verbose)
            for (const auto& r : data.rejected_rows)
                std::cerr << "  line " << r.row << ": " << r.message << "\n";
    }
    const int window = 2 * cfg.tma_n + 1;
    if (static_cast<int>(data.days.size()) < days_per_year)
        std::cerr << "warning: " << data.days.size()
                  << " days of data; the smoothing window cannot wrap"
                  << (static_cast<int>(data.days.size()) < window ? " and will be truncated"
                                                                  : "")
                  << "\n";

    std::vector<fs::path> written;
    const fs::path gaps_path = dir / "gaps.csv";
    {
        auto out = open_out(gaps_path);
        write_gap_report(out, data.gaps);
        finish(out, gaps_path);
    }
    written.push_back(gaps_path);

    const auto grid = to_grid(data, cfg.cadence_min);
    TmaConfig tma;
    tma.half_window_days = cfg.tma_n;
    tma.excluded_lowest = cfg.tma_l;
    const auto smoothed = smooth_all(grid, tma, cfg.exec);

    const fs::path smoothed_path = dir / "smoothed.csv";
    {
        auto out = open_out(smoothed_path);
        out << "day,minute,irradiance_wm2\n";
        for (std::size_t row = 0; row < smoothed.day.size(); ++row)
            for (std::size_t k = 0; k < smoothed.n_minutes(); ++k)
                csv::write_row(out, {std::to_string(smoothed.day[row]),
                                     std::to_string(smoothed.minute(k)),
                                     num(smoothed.value[row][k])});
        finish(out, smoothed_path);
    }
    written.push_back(smoothed_path);

    const auto fits = fit_all(smoothed, cfg.m_c, cfg.exec);
    std::vector<std::int32_t> fit_days;
    std::vector<double> va, vb, vc;
    std::size_t dropped = 0;
    const fs::path params_path = dir / "fit_params.csv";
    {
        auto out = open_out(params_path);
        out << "day,A,B,C\n";
        for (const auto& f : fits) {
            if (!f.params) {
                ++dropped;
                if (cfg.verbose) std::cerr << "  dropped: " << f.diagnostic << "\n";
                continue;
            }
            fit_days.push_back(f.day);
            va.push_back(f.params->a);
            vb.push_back(f.params->b);
            vc.push_back(f.params->c);
            csv::write_row(out, {std::to_string(f.day), num(f.params->a), num(f.params->b),
                                 num(f.params->c)});
        }
        finish(out, params_path);
    }
    written.push_back(params_path);
    if (dropped > 0) std::cerr << "warning: " << dropped << " days dropped from the daily fit\n";

    if (fit_days.size() < 10)
        throw InsufficientDataError(Stage::trends,
                                    "only " + std::to_string(fit_days.size()) +
                                        " fitted days; need at least 10 for the trend model");

    TrendModel trends;
    auto fit_param_model = [&](const std::vector<double>& values, ParamModel& slot,
                               std::vector<double>& resid) {
        slot.trend = fit_trend(fit_days, values);
        resid.resize(values.size());
        for (std::size_t i = 0; i < values.size(); ++i)
            resid[i] = values[i] - eval_trend(slot.trend, fit_days[i]);
        slot.residual = fit_gumbel(resid);
    };
    std::vector<double> resid_a, resid_b, resid_c;
    fit_param_model(va, trends.a, resid_a);
    fit_param_model(vb, trends.b, resid_b);
    fit_param_model(vc, trends.c, resid_c);
    trends.mean_b = mean(vb);

    for (const auto& [name, resid, gum] :
         {std::tuple{"a", &resid_a, &trends.a.residual}, std::tuple{"b", &resid_b,
                                                                    &trends.b.residual},
          std::tuple{"c", &resid_c, &trends.c.residual}}) {
        const fs::path p = dir / (std::string("residual_hist_") + name + ".csv");
        write_residual_hist(p, *resid, *gum);
        written.push_back(p);
    }

    const auto mgrid = build_grid(trends.mean_b, cfg.m_c);
    const auto seasons = default_seasons();

    std::map<int, SeasonAccum> accum;
    for (const auto& s : seasons) accum.emplace(s.id, SeasonAccum(mgrid.j_count + 1));
    SeasonAccum pooled(mgrid.j_count + 1);

    std::size_t skipped_map_days = 0;
    for (std::size_t i = 0; i < fit_days.size(); ++i) {
        const std::int32_t day = fit_days[i];
        const DailySeries* raw = data.find_day(day);
        if (!raw) continue;
        FitParams p;
        p.day = day;
        p.a = va[i];
        p.b = vb[i];
        p.c = vc[i];
        const auto norm = normalize(raw->samples, p, cfg.m_c);
        const auto res = residuals(norm);
        const auto rates = column_rates(res, mgrid);
        if (rates.empty()) {
            ++skipped_map_days;
            if (cfg.verbose)
                std::cerr << "  day " << day << ": covers fewer than 2 grid nodes, skipped\n";
            continue;
        }
        auto& acc = accum.at(season_of(day, seasons));
        for (const auto& r : rates) {
            acc.rate_columns[r.j].push_back(r.r_star);
            pooled.rate_columns[r.j].push_back(r.r_star);
        }
        for (const auto& [j, v] : node_residuals(res, mgrid)) {
            acc.node_residuals[j].push_back(v);
            pooled.node_residuals[j].push_back(v);
        }
    }
    if (skipped_map_days > 0)
        std::cerr << "warning: " << skipped_map_days << " days skipped from the rate maps\n";

    // One bandwidth for the whole year, per-season maps.
    const double bandwidth = kde_bandwidth(pooled.rate_columns);

    auto build_season = [&](int id, const SeasonAccum& acc) {
        SeasonMaps sm;
        sm.season = id;
        const auto binning = freedman_diaconis_bins(acc.rate_columns);
        sm.discrete = build_discrete_map(flatten_rates(acc.rate_columns), mgrid, binning);
        sm.discrete.season = id;
        sm.kde.season = id;
        sm.kde.grid = mgrid;
        sm.kde.bandwidth = bandwidth;
        sm.kde.samples = acc.rate_columns;
        sm.envelope = residual_envelope(acc.node_residuals);
        return sm;
    };

    Model model;
    model.m_c = cfg.m_c;
    model.seasons = seasons;
    model.trends = trends;
    model.grid = mgrid;
    model.bandwidth = bandwidth;
    for (const auto& s : seasons) {
        const auto& acc = accum.at(s.id);
        if (acc.empty()) {
            std::cerr << "warning: season " << s.id
                      << " has no residual data; using the pooled annual map\n";
            auto sm = build_season(s.id, pooled);
            model.maps.push_back(std::move(sm));
            continue;
        }
        try {
            model.maps.push_back(build_season(s.id, acc));
        } catch (const Error& e) {
            std::cerr << "warning: season " << s.id << " map failed (" << e.what()
                      << "); using the pooled annual map\n";
            model.maps.push_back(build_season(s.id, pooled));
        }
    }
    model.dataset_hash = file_fingerprint(cfg.input);
    model.created_at = iso_timestamp();

    const fs::path model_path =
        cfg.model_path.empty() ? dir / "model.json" : cfg.model_path;
    save_model(model, model_path);
    written.insert(written.begin(), model_path);

    for (const auto& sm : model.maps) {
        const fs::path dpath = dir / ("map_discrete_s" + std::to_string(sm.season) + ".csv");
        write_discrete_map_csv(dpath, sm.discrete);
        written.push_back(dpath);
        const fs::path kpath = dir / ("map_kde_s" + std::to_string(sm.season) + ".csv");
        write_kde_map_csv(kpath, sm.kde);
        written.push_back(kpath);
    }
    return written;
}

std::vector<fs::path> cmd_simulate(const PipelineConfig& cfg) {
    const fs::path dir = ensure_output_dir(cfg);
    const Model model = cfg.model_path.empty() ? default_model() : load_model(cfg.model_path);
    const Simulator sim(model);

    std::vector<std::int32_t> days;
    if (cfg.days.empty()) {
        days.resize(days_per_year);
        std::iota(days.begin(), days.end(), 1);
    } else {
        for (std::int32_t d : cfg.days) days.push_back(normalize_day(d));
    }
    if (cfg.replicates < 1) throw RealizationError("replicates must be at least 1");

    const fs::path curves_path = dir / "curves.csv";
    const fs::path exposures_path = dir / "exposures.csv";
    auto curves = open_out(curves_path);
    auto exposures = open_out(exposures_path);
    curves << "day,minute,irradiance_wm2\n";
    exposures << "day,exposure_whm2\n";

    std::vector<SimulatedDay> reps(static_cast<std::size_t>(cfg.replicates));
    for (const std::int32_t day : days) {
        const auto n = static_cast<std::ptrdiff_t>(cfg.replicates);
        if (cfg.exec == Exec::openmp) {
#pragma omp parallel for schedule(dynamic)
            for (std::ptrdiff_t rep = 0; rep < n; ++rep) {
                Rng rng(derive_stream(cfg.seed, day, static_cast<std::int32_t>(rep)));
                reps[static_cast<std::size_t>(rep)] =
                    sim.simulate_irradiance(rng, day, cfg.cadence_min);
            }
        } else {
            for (std::ptrdiff_t rep = 0; rep < n; ++rep) {
                Rng rng(derive_stream(cfg.seed, day, static_cast<std::int32_t>(rep)));
                reps[static_cast<std::size_t>(rep)] =
                    sim.simulate_irradiance(rng, day, cfg.cadence_min);
            }
        }
        for (const auto& r : reps) {
            for (std::size_t k = 0; k < r.minute.size(); ++k)
                csv::write_row(curves, {std::to_string(day), num(r.minute[k]),
                                        num(r.irradiance[k])});
            csv::write_row(exposures, {std::to_string(day), num(r.exposure)});
        }
    }
    finish(curves, curves_path);
    finish(exposures, exposures_path);
    return {curves_path, exposures_path};
}

std::vector<std::pair<std::int32_t, double>> read_measured_charges(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
    {
        const auto fields = csv::split(line);
        if (fields.size() != 2 || fields[0] != "day" || fields[1] != "charge_ah")
            throw ParseError(path.string() + ": expected header day,charge_ah");
    }
    std::vector<std::pair<std::int32_t, double>> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = csv::split(line);
        const auto day = fields.size() == 2 ? csv::parse_int(fields[0]) : std::nullopt;
        const auto charge = fields.size() == 2 ? csv::parse_double(fields[1]) : std::nullopt;
        if (!day || !charge)
            throw ParseError(path.string() + " line " + std::to_string(line_no) + ": bad row");
        if (!out.empty() && *day <= out.back().first)
            throw ParseError(path.string() + " line " + std::to_string(line_no) +
                             ": days must be strictly increasing");
        out.emplace_back(static_cast<std::int32_t>(*day), *charge);
    }
    if (out.empty()) throw ParseError(path.string() + ": no data rows");
    return out;
}

std::vector<fs::path> cmd_validate(const PipelineConfig& cfg) {
    const fs::path dir = ensure_output_dir(cfg);
    const Model model = cfg.model_path.empty() ? default_model() : load_model(cfg.model_path);
    const Simulator sim(model);

    const PanelSpec panel =
        cfg.panel_spec_path.empty() ? reference_panel() : load_panel_spec(cfg.panel_spec_path);
    const DiodeModel diode = extract_diode_model(panel);
    const DiodeModel array = series_string(diode, cfg.series_panels);

    if (cfg.measured_path.empty()) throw IoError("validate: no measured charge file given");
    const auto measured = read_measured_charges(cfg.measured_path);

    std::vector<std::int32_t> days;
    for (const auto& [d, c] : measured) days.push_back(d);
    if (!cfg.days.empty()) {
        std::vector<std::int32_t> requested;
        for (std::int32_t d : cfg.days) requested.push_back(normalize_day(d));
        if (requested != days)
            throw AlignmentError("requested days do not match the measured charge days");
    }
    if (cfg.replicates < 4)
        throw InsufficientDataError(Stage::pv, "validate needs at least 4 replicates");

    const fs::path stats_path = dir / "charge_stats.csv";
    const fs::path cmp_path = dir / "comparison.csv";
    auto stats_out = open_out(stats_path);
    auto cmp_out = open_out(cmp_path);
    stats_out << "day,q1,median,q3,whisker_low,whisker_high,n_outliers\n";
    cmp_out << "day,measured_ah,q1,q3,in_box\n";

    std::size_t in_box_count = 0;
    std::vector<SimulatedDay> reps(static_cast<std::size_t>(cfg.replicates));
    std::vector<double> charges(reps.size());
    for (std::size_t i = 0; i < days.size(); ++i) {
        const std::int32_t day = days[i];
        const auto n = static_cast<std::ptrdiff_t>(cfg.replicates);
        if (cfg.exec == Exec::openmp) {
#pragma omp parallel for schedule(dynamic)
            for (std::ptrdiff_t rep = 0; rep < n; ++rep) {
                Rng rng(derive_stream(cfg.seed, day, static_cast<std::int32_t>(rep)));
                const auto sday = sim.simulate_irradiance(rng, day, cfg.cadence_min);
                charges[static_cast<std::size_t>(rep)] =
                    daily_charge(sday.minute, sday.irradiance, array);
            }
        } else {
            for (std::ptrdiff_t rep = 0; rep < n; ++rep) {
                Rng rng(derive_stream(cfg.seed, day, static_cast<std::int32_t>(rep)));
                const auto sday = sim.simulate_irradiance(rng, day, cfg.cadence_min);
                charges[static_cast<std::size_t>(rep)] =
                    daily_charge(sday.minute, sday.irradiance, array);
            }
        }
        const auto s = charge_statistics(day, charges);
        csv::write_row(stats_out,
                       {std::to_string(day), num(s.q1), num(s.median), num(s.q3),
                        num(s.whisker_low), num(s.whisker_high),
                        std::to_string(s.outliers.size())});
        const double m = measured[i].second;
        const bool in_box = m >= s.q1 && m <= s.q3;
        in_box_count += in_box ? 1 : 0;
        csv::write_row(cmp_out, {std::to_string(day), num(m), num(s.q1), num(s.q3),
                                 in_box ? "1" : "0"});
    }
    finish(stats_out, stats_path);
    finish(cmp_out, cmp_path);

    char rate[32];
    std::snprintf(rate, sizeof rate, "%.1f",
                  100.0 * static_cast<double>(in_box_count) / static_cast<double>(days.size()));
    std::cout << "within-box rate: " << in_box_count << "/" << days.size() << " (" << rate
              << "%)\n";
    return {stats_path, cmp_path};
}

namespace {

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& path,
                                                    const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != expected_header)
        throw ParseError(path.string() + ": expected header " + expected_header);
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> row;
        for (auto f : csv::split(line)) row.emplace_back(f);
        rows.push_back(std::move(row));
    }
    return rows;
}

double field_double(const std::vector<std::string>& row, std::size_t i, const fs::path& p) {
    if (i < row.size())
        if (const auto v = csv::parse_double(row[i])) return *v;
    throw ParseError(p.string() + ": bad numeric field");
}

} // namespace

std::vector<fs::path> cmd_plot(const PipelineConfig& cfg, const std::string& kind) {
    const fs::path dir = ensure_output_dir(cfg);
    std::vector<fs::path> written;

    if (kind == "pdm") {
        const Model model = cfg.model_path.empty() ? default_model() : load_model(cfg.model_path);
        for (const auto& sm : model.maps) {
            const auto r_grid = season_r_grid(sm.kde);
            if (r_grid.empty()) continue;
            std::vector<std::vector<double>> values(sm.kde.grid.nodes.size());
            for (std::size_t j = 0; j < sm.kde.samples.size(); ++j) {
                const auto& col = sm.kde.samples[j];
                values[j] = col.empty() ? std::vector<double>(r_grid.size(), 0.0)
                                        : scaled_pdm_column(col, sm.kde.bandwidth, r_grid);
            }
            const fs::path svg = dir / ("pdm_s" + std::to_string(sm.season) + ".svg");
            plot::write_heatmap_svg(svg, "scaled PDM, season " + std::to_string(sm.season),
                                    "m*", "r*", sm.kde.grid.nodes, r_grid, values);
            written.push_back(svg);
            const fs::path csv_path = dir / ("map_kde_s" + std::to_string(sm.season) + ".csv");
            write_kde_map_csv(csv_path, sm.kde);
            written.push_back(csv_path);
        }
        if (written.empty()) throw IoError("pdm plot: model has no populated maps");
        return written;
    }

    if (kind == "exposure") {
        const fs::path src = cfg.input.empty() ? dir / "exposures.csv" : cfg.input;
        const auto rows = read_csv_rows(src, "day,exposure_whm2");
        if (rows.empty()) throw ParseError(src.string() + ": no data rows");
        std::map<std::int32_t, std::pair<double, std::size_t>> per_day;
        for (const auto& row : rows) {
            const auto day = csv::parse_int(row.at(0));
            if (!day) throw ParseError(src.string() + ": bad day field");
            auto& slot = per_day[static_cast<std::int32_t>(*day)];
            slot.first += field_double(row, 1, src);
            slot.second += 1;
        }
        plot::Series sim_series;
        sim_series.label = "simulated (mean of replicates)";
        for (const auto& [day, acc] : per_day) {
            sim_series.x.push_back(static_cast<double>(day));
            sim_series.y.push_back(acc.first / static_cast<double>(acc.second));
        }
        std::vector<plot::Series> series{std::move(sim_series)};
        if (!cfg.model_path.empty()) {
            const Model model = load_model(cfg.model_path);
            const Simulator sim(model);
            plot::Series expected;
            expected.label = "expected";
            for (const auto& kv : per_day) {
                expected.x.push_back(static_cast<double>(kv.first));
                expected.y.push_back(sim.expected_exposure(kv.first));
            }
            series.push_back(std::move(expected));
        }
        const fs::path svg = dir / "exposure.svg";
        plot::write_line_svg(svg, "daily radiant exposure", "day", "I (W h/m^2)", series);
        return {svg};
    }

    if (kind == "boxes") {
        const fs::path src = cfg.input.empty() ? dir / "charge_stats.csv" : cfg.input;
        const auto rows =
            read_csv_rows(src, "day,q1,median,q3,whisker_low,whisker_high,n_outliers");
        if (rows.empty()) throw ParseError(src.string() + ": no data rows");
        std::vector<DayChargeStats> stats;
        for (const auto& row : rows) {
            DayChargeStats s;
            const auto day = csv::parse_int(row.at(0));
            if (!day) throw ParseError(src.string() + ": bad day field");
            s.day = static_cast<std::int32_t>(*day);
            s.q1 = field_double(row, 1, src);
            s.median = field_double(row, 2, src);
            s.q3 = field_double(row, 3, src);
            s.whisker_low = field_double(row, 4, src);
            s.whisker_high = field_double(row, 5, src);
            stats.push_back(std::move(s));
        }
        std::vector<double> measured;
        const fs::path cmp = src.parent_path() / "comparison.csv";
        if (fs::exists(cmp)) {
            for (const auto& row : read_csv_rows(cmp, "day,measured_ah,q1,q3,in_box"))
                measured.push_back(field_double(row, 1, cmp));
        }
        const fs::path svg = dir / "boxes.svg";
        plot::write_box_svg(svg, "daily charge statistics", stats, measured);
        return {svg};
    }

    throw IoError("unknown plot kind: " + kind + " (expected pdm, exposure, or boxes)");
}

} // namespace solsim
