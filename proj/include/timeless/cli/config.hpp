// config.hpp: Experiment configuration files
//
// JSON in, validated specs out. Unknown keys are rejected and every module
// invariant is checked while loading, so a config that loads will run.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "timeless/chamber.hpp"
#include "timeless/clock.hpp"
#include "timeless/real_clock.hpp"
#include "timeless/relational.hpp"
#include "timeless/undecidability.hpp"
#include "timeless/zurek.hpp"

namespace timeless::cli {

using nlohmann::json;

enum class Experiment { evolve, zurek, chamber, undecide, conditional, sweep };

const char* to_string(Experiment e) noexcept;
Experiment parse_experiment(const std::string& name);

// Declared physical constants. Under "SI" they default to CODATA values;
// under "natural" only hbar has a default (1) and the Planck scales must be
// given where a model needs them.
struct Constants {
    double hbar = 1.0;
    std::optional<double> planck_length;
    std::optional<double> planck_time;
};

struct EvolveSpec {
    HermitianOperator hamiltonian;
    DensityMatrix state;
    ClockModel clock;
    std::vector<double> grid;
    std::vector<EvolutionResult::Method> methods;
};

struct RevivalSpec {
    double threshold = 0.9;
    std::optional<double> step;
};

struct ZurekSpec {
    SpinBathConfig bath;
    std::optional<ClockModel> clock;
    std::vector<double> grid;
    std::optional<RevivalSpec> revivals;
};

struct ChamberSpec {
    ChamberConfig chamber;
    std::vector<double> flight_times;  // empty: the configured τ only
};

struct UndecideSpec {
    UndecidabilityInput input;
    std::vector<double> ladder;  // environment sizes N to tabulate
};

struct ParticleSpec {
    double mass = 1.0;
    double centre = 0.0;
    double width = 1.0;
    double velocity = 0.0;
};

struct ConditionalSpec {
    Eigen::Index grid_points = 16;
    double length = 16.0;
    ParticleSpec system;
    ParticleSpec clock;
    Interval reading{0.0, 0.25};
    TimeWindow window{0.0, 1.0};
    double tolerance = 1e-6;
};

struct SweepSpec {
    json base;
    std::string parameter;  // dotted path into the base config
    std::vector<double> values;
    unsigned threads = 0;  // 0: hardware concurrency

    // Base config with the parameter set to values[i].
    json run_document(std::size_t i) const;
};

struct OutputSpec {
    std::string csv;
    std::string json;
    std::string svg;
};

struct ExperimentConfig {
    Experiment experiment;
    json document;  // as loaded, echoed into the report
    std::optional<std::uint64_t> seed;
    std::string units = "natural";
    Constants constants;
    OutputSpec output;
    std::variant<EvolveSpec, ZurekSpec, ChamberSpec, UndecideSpec, ConditionalSpec, SweepSpec> spec;
};

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override = {});
ExperimentConfig parse_config(const json& document, std::optional<std::uint64_t> seed_override = {});

// Parses JSON text, reporting syntax errors with line and column.
json parse_json_text(const std::string& text, const std::string& source);

// from/to/count/scale or an explicit list, with the grid invariants checked.
std::vector<double> parse_grid(const json& node, const std::string& path);

}  // namespace timeless::cli
