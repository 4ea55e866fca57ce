#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "solsim/ingest.hpp"
#include "solsim/residual_maps.hpp"
#include "solsim/trends.hpp"

namespace solsim {

// Everything one season contributes to the stochastic model.
struct SeasonMaps {
    int season = 0;
    DiscreteProbabilityMap discrete;
    KdeMap kde;
    // Allowable R* interval per grid node; simulated paths may not leave it.
    std::vector<std::pair<double, double>> envelope;
};

struct Model {
    double m_c = default_m_c;
    std::vector<Season> seasons;
    TrendModel trends;
    MstarGrid grid;
    double bandwidth = 0.0;
    std::vector<SeasonMaps> maps; // one entry per season, same order as `seasons`

    std::string dataset_hash; // provenance
    std::string created_at;

    const SeasonMaps& maps_for_day(std::int32_t day) const;
};

// Current on-disk format. Readers accept any minor revision of the same
// major version and reject everything else.
inline constexpr const char* model_format_version = "1.0";

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

// Structural checks shared by load_model and the fit pipeline: grid
// consistency with mean_b and m_c, map shapes, envelope sizes.
void validate_model(const Model& model);

// Ships with the library so simulation works out of the box: published
// trend and Gumbel coefficients plus synthetic rate maps (symmetric
// quantile lattices, wider near noon where measured rates scatter most).
Model default_model();

// FNV-1a 64-bit, used to fingerprint input datasets.
std::uint64_t fnv1a(const void* data, std::size_t n);
std::string file_fingerprint(const std::filesystem::path& path);

// UTC timestamp, ISO 8601.
std::string iso_timestamp();

} // namespace solsim
