#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "solsim/exec.hpp"
#include "solsim/model.hpp"

namespace solsim {

struct PipelineConfig {
    std::filesystem::path input;           // dataset CSV (fit) or command input
    std::filesystem::path model_path;      // written by fit, read by simulate/validate
    std::filesystem::path output_dir = "."; // created on demand
    std::filesystem::path panel_spec_path;  // empty: built-in reference panel
    std::filesystem::path measured_path;    // measured daily charges (validate)

    double m_c = default_m_c;
    int tma_n = 5;
    int tma_l = 4;
    int cadence_min = 10;
    std::uint64_t seed = 1;
    int replicates = 1;
    std::vector<std::int32_t> days; // empty: simulate 1..365 / validate measured days
    int series_panels = 8;
    bool verbose = false;
    Exec exec = Exec::openmp;
};

// Each command returns the files it wrote, primary artifact first.
// Failures surface as solsim::Error subtypes; the CLI maps them to
// stage-specific exit codes.

// ingest -> smoothing -> daily fit -> trends -> maps -> ModelFile.
std::vector<std::filesystem::path> cmd_fit(const PipelineConfig& cfg);

// Per-day curves and exposures; deterministic under a fixed seed.
std::vector<std::filesystem::path> cmd_simulate(const PipelineConfig& cfg);

// Simulate, convert to PV charge, compare with measured charges.
std::vector<std::filesystem::path> cmd_validate(const PipelineConfig& cfg);

// kind: "pdm" | "exposure" | "boxes".
std::vector<std::filesystem::path> cmd_plot(const PipelineConfig& cfg, const std::string& kind);

// CSV `day,charge_ah`, one row per day, strictly increasing days.
std::vector<std::pair<std::int32_t, double>> read_measured_charges(
    const std::filesystem::path& path);

} // namespace solsim
