#include "solsim/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "solsim/csv.hpp"

namespace solsim {

const DailySeries* Dataset::find_day(std::int32_t day) const {
    const auto it = std::lower_bound(days.begin(), days.end(), day,
                                     [](const DailySeries& s, std::int32_t d) { return s.day < d; });
    if (it == days.end() || it->day != day) return nullptr;
    return &*it;
}

std::pair<std::int32_t, std::int32_t> decompose_time(std::int64_t t_min) {
    if (t_min < 0) throw ParseError("time must be non-negative, got " + std::to_string(t_min));
    return {static_cast<std::int32_t>(t_min / minutes_per_day),
            static_cast<std::int32_t>(t_min % minutes_per_day)};
}

std::vector<Season> default_seasons() {
    return {
        {1, 35, 124},
        {2, 125, 218},
        {3, 219, 309},
        {4, 310, 34}, // wraps past new year
    };
}

int season_of(std::int32_t day, std::span<const Season> seasons) {
    std::int32_t d = day % days_per_year;
    if (d < 0) d += days_per_year;
    for (const Season& s : seasons) {
        if (s.from_day <= s.to_day) {
            if (d >= s.from_day && d <= s.to_day) return s.id;
        } else {
            if (d >= s.from_day || d <= s.to_day) return s.id;
        }
    }
    throw ParseError("season table does not cover day " + std::to_string(d));
}

namespace {

enum class Schema { absolute, decomposed };

Schema detect_schema(const std::vector<std::string_view>& header) {
    if (header.size() == 2 && header[0] == "t_min" && header[1] == "irradiance_wm2")
        return Schema::absolute;
    if (header.size() == 3 && header[0] == "day" && header[1] == "minute" &&
        header[2] == "irradiance_wm2")
        return Schema::decomposed;
    std::string got;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) got += ',';
        got += std::string(header[i]);
    }
    throw ParseError("unrecognized header '" + got +
                     "' (expected 't_min,irradiance_wm2' or 'day,minute,irradiance_wm2')");
}

} // namespace

Dataset parse_dataset(std::istream& in, const ParseOptions& opts) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty input: missing header");
    const Schema schema = detect_schema(csv::split(line));

    Dataset out;
    out.nominal_cadence_min = opts.nominal_cadence_min;

    std::map<std::int32_t, std::vector<MinuteSample>> by_day;
    std::size_t row = 1;
    std::size_t accepted = 0;

    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = csv::split(line);

        auto reject = [&](const std::string& why) {
            out.rejected_rows.push_back({row, why});
        };

        std::int32_t d = 0, m = 0;
        double e = 0.0;
        if (schema == Schema::absolute) {
            if (fields.size() != 2) {
                reject("expected 2 fields, got " + std::to_string(fields.size()));
                continue;
            }
            const auto t = csv::parse_int(fields[0]);
            const auto ev = csv::parse_double(fields[1]);
            if (!t || !ev) {
                reject("malformed field");
                continue;
            }
            if (*t < 0) {
                reject("negative time " + std::to_string(*t));
                continue;
            }
            std::tie(d, m) = decompose_time(*t);
            e = *ev;
        } else {
            if (fields.size() != 3) {
                reject("expected 3 fields, got " + std::to_string(fields.size()));
                continue;
            }
            const auto dv = csv::parse_int(fields[0]);
            const auto mv = csv::parse_int(fields[1]);
            const auto ev = csv::parse_double(fields[2]);
            if (!dv || !mv || !ev) {
                reject("malformed field");
                continue;
            }
            if (*dv < 0) {
                reject("negative day " + std::to_string(*dv));
                continue;
            }
            if (*mv < 0 || *mv >= minutes_per_day) {
                reject("minute out of [0,1440): " + std::to_string(*mv));
                continue;
            }
            d = static_cast<std::int32_t>(*dv);
            m = static_cast<std::int32_t>(*mv);
            e = *ev;
        }

        if (e < 0.0) {
            reject("negative irradiance " + csv::format_double(e));
            continue;
        }
        by_day[d].push_back({m, e});
        ++accepted;
    }

    if (accepted == 0) throw ParseError("no valid data rows");

    for (auto& [day, samples] : by_day) {
        std::stable_sort(samples.begin(), samples.end(),
                         [](const MinuteSample& a, const MinuteSample& b) { return a.m < b.m; });
        // Drop duplicate minutes (first occurrence wins).
        std::vector<MinuteSample> unique;
        unique.reserve(samples.size());
        for (const MinuteSample& s : samples) {
            if (!unique.empty() && unique.back().m == s.m) {
                out.rejected_rows.push_back(
                    {0, "duplicate minute " + std::to_string(s.m) + " on day " + std::to_string(day)});
                continue;
            }
            unique.push_back(s);
        }

        const double gap_threshold = 1.5 * opts.nominal_cadence_min;
        for (std::size_t i = 1; i < unique.size(); ++i) {
            const std::int32_t step = unique[i].m - unique[i - 1].m;
            if (static_cast<double>(step) > gap_threshold) {
                std::int32_t first = unique[i - 1].m + opts.nominal_cadence_min;
                std::int32_t last = unique[i].m - opts.nominal_cadence_min;
                if (last < first) last = first;
                out.gaps.push_back({day, first, last});
            }
        }
        out.days.push_back({day, std::move(unique)});
    }
    return out;
}

Dataset parse_dataset_file(const std::string& path, const ParseOptions& opts) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return parse_dataset(in, opts);
}

void write_gap_report(std::ostream& out, std::span<const Gap> gaps) {
    out << "day,first_missing_minute,last_missing_minute\n";
    for (const Gap& g : gaps) {
        out << g.day << ',' << g.first_missing_minute << ',' << g.last_missing_minute << '\n';
    }
}

} // namespace solsim
