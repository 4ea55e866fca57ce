#include "solsim/model.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "solsim/error.hpp"
#include "solsim/numeric.hpp"

namespace solsim {

using nlohmann::json;

const SeasonMaps& Model::maps_for_day(std::int32_t day) const {
    const int id = season_of(day, seasons);
    for (const auto& m : maps)
        if (m.season == id) return m;
    throw ModelFormatError("model has no maps for season " + std::to_string(id));
}

namespace {

json trend_to_json(const ParamModel& p) {
    return json{{"trend", {p.trend.y0, p.trend.y1, p.trend.y2}},
                {"gumbel", {{"mu", p.residual.mu}, {"nu", p.residual.nu}}}};
}

ParamModel trend_from_json(const json& j) {
    ParamModel p;
    const auto& t = j.at("trend");
    if (!t.is_array() || t.size() != 3)
        throw ModelFormatError("trend coefficient array must have 3 entries");
    p.trend = {t[0].get<double>(), t[1].get<double>(), t[2].get<double>()};
    p.residual.mu = j.at("gumbel").at("mu").get<double>();
    p.residual.nu = j.at("gumbel").at("nu").get<double>();
    return p;
}

int parse_major_version(const std::string& version) {
    const auto dot = version.find('.');
    if (dot == std::string::npos || dot == 0) throw ModelFormatError("bad format_version");
    int major = 0;
    for (std::size_t i = 0; i < dot; ++i) {
        const char c = version[i];
        if (c < '0' || c > '9') throw ModelFormatError("bad format_version");
        major = major * 10 + (c - '0');
    }
    return major;
}

} // namespace

void validate_model(const Model& model) {
    if (!(model.m_c > 0.0)) throw ModelFormatError("m_c must be positive");
    if (model.seasons.empty()) throw ModelFormatError("season table is empty");
    if (!(model.trends.mean_b > 0.0)) throw ModelFormatError("mean_b must be positive");
    if (!(model.bandwidth > 0.0)) throw ModelFormatError("bandwidth must be positive");

    const auto implied = build_grid(model.trends.mean_b, model.m_c);
    if (implied.j_count != model.grid.j_count)
        throw ModelFormatError("grid J=" + std::to_string(model.grid.j_count) +
                               " does not match mean_b (implies J=" +
                               std::to_string(implied.j_count) + ")");
    if (model.grid.nodes.size() != model.grid.j_count + 1)
        throw ModelFormatError("grid node count mismatch");

    if (model.maps.size() != model.seasons.size())
        throw ModelFormatError("expected one map set per season");
    const std::size_t n_nodes = model.grid.j_count + 1;
    for (const auto& m : model.maps) {
        bool known = false;
        for (const auto& s : model.seasons) known = known || s.id == m.season;
        if (!known) throw ModelFormatError("map references unknown season");
        if (m.kde.samples.size() != n_nodes)
            throw ModelFormatError("kde map must have one sample set per node");
        if (m.envelope.size() != n_nodes)
            throw ModelFormatError("envelope must have one interval per node");
        for (const auto& [lo, hi] : m.envelope)
            if (!(lo <= hi)) throw ModelFormatError("envelope interval inverted");
        if (m.discrete.mass.size() != n_nodes)
            throw ModelFormatError("discrete map must have one column per node");
        const std::size_t n_bins =
            m.discrete.bin_edges.empty() ? 0 : m.discrete.bin_edges.size() - 1;
        for (const auto& col : m.discrete.mass) {
            if (col.size() != n_bins) throw ModelFormatError("discrete map column size mismatch");
            double total = 0.0;
            for (double v : col) total += v;
            if (total != 0.0 && std::abs(total - 1.0) > 1e-12)
                throw ModelFormatError("discrete map column mass must be 0 or 1");
        }
    }
}

void save_model(const Model& model, const std::filesystem::path& path) {
    validate_model(model);

    json j;
    j["format_version"] = model_format_version;
    j["m_c"] = model.m_c;
    j["created_at"] = model.created_at;
    j["dataset_hash"] = model.dataset_hash;

    j["seasons"] = json::array();
    for (const auto& s : model.seasons)
        j["seasons"].push_back({{"id", s.id}, {"from_day", s.from_day}, {"to_day", s.to_day}});

    j["trends"] = {{"a", trend_to_json(model.trends.a)},
                   {"b", trend_to_json(model.trends.b)},
                   {"c", trend_to_json(model.trends.c)},
                   {"mean_b", model.trends.mean_b}};

    j["grid"] = {{"j", model.grid.j_count}};
    j["bandwidth"] = model.bandwidth;

    j["maps"] = json::array();
    for (const auto& m : model.maps) {
        json entry;
        entry["season"] = m.season;
        entry["discrete"] = {{"bin_edges", m.discrete.bin_edges}, {"mass", m.discrete.mass}};
        entry["kde_samples"] = m.kde.samples;
        json lo = json::array(), hi = json::array();
        for (const auto& [a, b] : m.envelope) {
            lo.push_back(a);
            hi.push_back(b);
        }
        entry["envelope_low"] = lo;
        entry["envelope_high"] = hi;
        j["maps"].push_back(std::move(entry));
    }

    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << j.dump(1) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ModelFormatError("model file " + path.string() + ": " + e.what());
    }

    try {
        const auto version = j.at("format_version").get<std::string>();
        if (parse_major_version(version) != parse_major_version(model_format_version))
            throw ModelFormatError("unsupported model format version " + version);

        Model m;
        m.m_c = j.at("m_c").get<double>();
        m.created_at = j.value("created_at", std::string{});
        m.dataset_hash = j.value("dataset_hash", std::string{});

        for (const auto& s : j.at("seasons"))
            m.seasons.push_back({s.at("id").get<int>(), s.at("from_day").get<std::int32_t>(),
                                 s.at("to_day").get<std::int32_t>()});

        const auto& t = j.at("trends");
        m.trends.a = trend_from_json(t.at("a"));
        m.trends.b = trend_from_json(t.at("b"));
        m.trends.c = trend_from_json(t.at("c"));
        m.trends.mean_b = t.at("mean_b").get<double>();

        m.grid = build_grid(m.trends.mean_b, m.m_c);
        if (j.at("grid").at("j").get<std::size_t>() != m.grid.j_count)
            throw ModelFormatError("stored grid J disagrees with mean_b");
        m.bandwidth = j.at("bandwidth").get<double>();

        for (const auto& entry : j.at("maps")) {
            SeasonMaps sm;
            sm.season = entry.at("season").get<int>();
            sm.discrete.season = sm.season;
            sm.discrete.grid = m.grid;
            sm.discrete.bin_edges = entry.at("discrete").at("bin_edges").get<std::vector<double>>();
            sm.discrete.mass =
                entry.at("discrete").at("mass").get<std::vector<std::vector<double>>>();
            sm.kde.season = sm.season;
            sm.kde.grid = m.grid;
            sm.kde.bandwidth = m.bandwidth;
            sm.kde.samples = entry.at("kde_samples").get<std::vector<std::vector<double>>>();
            const auto lo = entry.at("envelope_low").get<std::vector<double>>();
            const auto hi = entry.at("envelope_high").get<std::vector<double>>();
            if (lo.size() != hi.size()) throw ModelFormatError("envelope arrays differ in size");
            for (std::size_t k = 0; k < lo.size(); ++k) sm.envelope.emplace_back(lo[k], hi[k]);
            m.maps.push_back(std::move(sm));
        }

        validate_model(m);
        return m;
    } catch (const json::exception& e) {
        throw ModelFormatError("model file " + path.string() + ": " + e.what());
    }
}

Model default_model() {
    Model m;
    m.m_c = default_m_c;
    m.seasons = default_seasons();
    m.trends = reference_trend_model();
    m.grid = build_grid(m.trends.mean_b, m.m_c);
    m.dataset_hash = "builtin";
    m.created_at = "";

    // The reference site's raw rate samples are not distributable, so
    // symmetric quantile lattices stand in: 33 normal quantiles per
    // column, scaled wider near noon where measured rates scatter most.
    const std::size_t n_lattice = 33;
    std::vector<std::vector<double>> columns(m.grid.j_count + 1);
    std::vector<RateSample> rates;
    for (std::size_t j = 1; j <= m.grid.j_count; ++j) {
        const double ms = m.grid.nodes[j];
        const double width = 0.04 + 0.20 * std::sqrt(std::max(0.0, 1.0 - ms * ms));
        auto& col = columns[j];
        col.reserve(n_lattice);
        for (std::size_t s = 1; s <= n_lattice; ++s) {
            const double u = static_cast<double>(s) / static_cast<double>(n_lattice + 1);
            const double r = width * norm_quantile(u);
            col.push_back(r);
            rates.push_back({j, r});
        }
    }

    m.bandwidth = kde_bandwidth(columns);
    const auto binning = freedman_diaconis_bins(columns);
    SeasonMaps base;
    base.discrete = build_discrete_map(rates, m.grid, binning);
    base.kde.grid = m.grid;
    base.kde.bandwidth = m.bandwidth;
    base.kde.samples = columns;
    for (std::size_t j = 0; j <= m.grid.j_count; ++j) {
        const double ms = m.grid.nodes[j];
        const double bound = 0.05 + 0.20 * (1.0 - ms * ms);
        base.envelope.emplace_back(-bound, bound);
    }

    for (const auto& s : m.seasons) {
        SeasonMaps sm = base;
        sm.season = s.id;
        sm.discrete.season = s.id;
        sm.kde.season = s.id;
        m.maps.push_back(std::move(sm));
    }
    validate_model(m);
    return m;
}

std::uint64_t fnv1a(const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 14695981039346656037ULL;
    for (std::size_t i = 0; i < n; ++i) {
        hash ^= bytes[i];
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::string file_fingerprint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(fnv1a(bytes.data(), bytes.size())));
    return hex;
}

std::string iso_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace solsim
