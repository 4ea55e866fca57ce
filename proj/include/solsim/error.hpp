#pragma once

#include <stdexcept>
#include <string>

namespace solsim {

// Pipeline stage attribution. The CLI maps each stage to a distinct
// nonzero exit code (stage value + 1), so batch callers can tell which
// part of the pipeline failed.
enum class Stage {
    io = 1,
    ingest,
    smoothing,
    daily_fit,
    trends,
    maps,
    model,
    simulate,
    pv,
};

class Error : public std::runtime_error {
public:
    Error(Stage stage, const std::string& what)
        : std::runtime_error(what), stage_(stage) {}

    Stage stage() const noexcept { return stage_; }
    int exit_code() const noexcept { return static_cast<int>(stage_) + 1; }

private:
    Stage stage_;
};

struct IoError : Error {
    explicit IoError(const std::string& w) : Error(Stage::io, w) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& w) : Error(Stage::ingest, w) {}
};

struct InsufficientDataError : Error {
    InsufficientDataError(Stage s, const std::string& w) : Error(s, w) {}
};

struct DegenerateFitError : Error {
    DegenerateFitError(Stage s, const std::string& w) : Error(s, w) {}
};

struct ConvergenceError : Error {
    ConvergenceError(Stage s, const std::string& w) : Error(s, w) {}
};

struct GridError : Error {
    explicit GridError(const std::string& w) : Error(Stage::maps, w) {}
};

struct BinningError : Error {
    explicit BinningError(const std::string& w) : Error(Stage::maps, w) {}
};

struct ModelFormatError : Error {
    explicit ModelFormatError(const std::string& w) : Error(Stage::model, w) {}
};

struct RealizationError : Error {
    explicit RealizationError(const std::string& w) : Error(Stage::simulate, w) {}
};

struct ExtractionError : Error {
    explicit ExtractionError(const std::string& w) : Error(Stage::pv, w) {}
};

struct AlignmentError : Error {
    explicit AlignmentError(const std::string& w) : Error(Stage::pv, w) {}
};

} // namespace solsim
