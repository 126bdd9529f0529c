// run.hpp: Experiment execution and artifact output

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "timeless/cli/config.hpp"
#include "timeless/cli/emit.hpp"
#include "timeless/cli/svg.hpp"

namespace timeless::cli {

struct RunResult {
    Experiment experiment;
    json results;
    Table table;
    Plot plot;
    // Scalars a sweep collects per run, in a fixed order.
    std::vector<std::pair<std::string, double>> summary;
};

RunResult execute(const ExperimentConfig& config);

struct RunOptions {
    std::filesystem::path out_dir = ".";
    bool svg = false;
};

struct Artifacts {
    std::filesystem::path csv;
    std::filesystem::path json;
    std::filesystem::path svg;  // empty when not written
};

// Executes and writes <experiment>.csv and <experiment>.json (names may be
// overridden by the config's output block), plus an SVG when requested.
Artifacts run(const ExperimentConfig& config, const RunOptions& options);

// The report without its metadata block, as the determinism contract sees it.
json deterministic_payload(json report);

std::string library_version();

}  // namespace timeless::cli
