#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "solsim/error.hpp"
#include "solsim/pipeline.hpp"

namespace {

struct CliState {
    solsim::PipelineConfig cfg;
    bool serial = false;
    std::string plot_kind;
    std::vector<std::int32_t> days;
};

void add_common(CLI::App* cmd, CliState& st) {
    cmd->add_option("-o,--output-dir", st.cfg.output_dir, "directory for emitted files")
        ->capture_default_str();
    cmd->add_flag("-v,--verbose", st.cfg.verbose, "per-row diagnostics and file list");
    cmd->add_flag("--serial", st.serial, "disable the parallel kernels");
}

void add_sim_common(CLI::App* cmd, CliState& st) {
    cmd->add_option("-m,--model", st.cfg.model_path,
                    "ModelFile to load (omit for the built-in reference model)");
    cmd->add_option("-d,--day", st.days,
                    "day of year to simulate; repeatable, values outside 1..365 wrap");
    cmd->add_option("-s,--seed", st.cfg.seed, "base seed for all random streams")
        ->capture_default_str();
    cmd->add_option("--cadence-min", st.cfg.cadence_min, "output cadence in minutes")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"empiric-stochastic daily solar irradiance model"};
    app.require_subcommand(1);
    const char* env_config = std::getenv("SOLSIM_CONFIG");
    app.set_config("--config", env_config ? env_config : "",
                   "configuration file; command line flags win on conflict");

    CliState st;

    auto* fit = app.add_subcommand("fit", "learn a model from a GHI dataset");
    fit->add_option("input", st.cfg.input, "dataset CSV (t_min or day,minute layout)")
        ->required();
    fit->add_option("-m,--model", st.cfg.model_path,
                    "where to write the ModelFile (default: <output-dir>/model.json)");
    fit->add_option("--m-c", st.cfg.m_c, "characteristic short time, minutes")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    fit->add_option("--tma-n", st.cfg.tma_n, "smoothing half window, days")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    fit->add_option("--tma-l", st.cfg.tma_l, "lowest-aggregate days excluded per window")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    fit->add_option("--cadence-min", st.cfg.cadence_min, "nominal sample cadence, minutes")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_common(fit, st);

    auto* simulate = app.add_subcommand("simulate", "generate irradiance curves and exposures");
    add_sim_common(simulate, st);
    simulate
        ->add_option("-r,--replicates", st.cfg.replicates, "independent curves per day")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_common(simulate, st);

    auto* validate =
        app.add_subcommand("validate", "compare simulated PV charge with measured charge");
    add_sim_common(validate, st);
    validate->add_option("--panel", st.cfg.panel_spec_path,
                         "panel datasheet JSON (omit for the built-in reference panel)");
    validate->add_option("--measured", st.cfg.measured_path, "CSV day,charge_ah")->required();
    validate->add_option("--series-panels", st.cfg.series_panels, "panels in the series string")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    st.cfg.replicates = 100;
    validate
        ->add_option("-r,--replicates", st.cfg.replicates, "simulated charges per day")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_common(validate, st);

    auto* plot = app.add_subcommand("plot", "render an artifact as a static SVG");
    plot->add_option("kind", st.plot_kind, "pdm | exposure | boxes")->required();
    plot->add_option("-m,--model", st.cfg.model_path, "ModelFile (pdm, expected exposure)");
    plot->add_option("-i,--input", st.cfg.input,
                     "artifact CSV (default: the command's own output in --output-dir)");
    add_common(plot, st);

    // validate defaults to 100 replicates, simulate to 1
    st.cfg.replicates = 1;

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed() && !validate->count("--replicates")) st.cfg.replicates = 100;
    st.cfg.days = st.days;
    st.cfg.exec = st.serial ? solsim::Exec::serial : solsim::Exec::openmp;

    try {
        std::vector<std::filesystem::path> written;
        if (fit->parsed()) written = solsim::cmd_fit(st.cfg);
        else if (simulate->parsed()) written = solsim::cmd_simulate(st.cfg);
        else if (validate->parsed()) written = solsim::cmd_validate(st.cfg);
        else if (plot->parsed()) written = solsim::cmd_plot(st.cfg, st.plot_kind);
        if (st.cfg.verbose)
            for (const auto& p : written) std::cerr << "wrote " << p.string() << "\n";
        return 0;
    } catch (const solsim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
