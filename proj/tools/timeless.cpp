// timeless: batch runner for the real-clock experiments.
//
//   timeless <experiment> --config file.json [--out-dir dir] [--seed n] [--svg]
//
// Errors print one line, "E_CODE: message", and exit nonzero.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "timeless/cli/run.hpp"
#include "timeless/errors.hpp"

namespace {

struct Invocation {
    std::string config;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    bool svg = false;
};

int fail(timeless::ErrorCode code, const std::string& message) {
    std::string line = message;
    for (auto& c : line) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    std::cerr << timeless::to_string(code) << ": " << line << '\n';
    return timeless::exit_status(code);
}

}  // namespace

int main(int argc, char** argv) {
    using namespace timeless;

    CLI::App app{"Real-clock decoherence experiments"};
    app.set_version_flag("--version", cli::library_version());
    app.require_subcommand(1);

    Invocation inv;
    for (const char* name : {"evolve", "zurek", "chamber", "undecide", "conditional", "sweep"}) {
        auto* sub = app.add_subcommand(name, std::string("run a ") + name + " experiment");
        sub->add_option("--config", inv.config, "experiment config (JSON)")->required();
        sub->add_option("--out-dir", inv.out_dir, "directory for CSV/JSON/SVG output");
        sub->add_option("--seed", inv.seed, "override the config seed");
        sub->add_flag("--svg", inv.svg, "also write an SVG plot");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(ErrorCode::usage, e.what());
    }

    const std::string chosen = app.get_subcommands().front()->get_name();
    try {
        const auto config = cli::load_config(inv.config, inv.seed);
        if (chosen != cli::to_string(config.experiment))
            throw ConfigError("config describes a '" + std::string(cli::to_string(config.experiment)) +
                              "' experiment, not '" + chosen + "'");
        const auto artifacts = cli::run(config, {inv.out_dir, inv.svg});
        std::cout << artifacts.csv.string() << '\n' << artifacts.json.string() << '\n';
        if (!artifacts.svg.empty()) std::cout << artifacts.svg.string() << '\n';
        return 0;
    } catch (const Error& e) {
        return fail(e.code(), e.what());
    } catch (const std::exception& e) {
        return fail(ErrorCode::numerical, e.what());
    }
}
