#include "timeless/cli/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <variant>
#include <thread>

#include "timeless/errors.hpp"

#ifndef TIMELESS_VERSION
#define TIMELESS_VERSION "0.0.0"
#endif

namespace timeless::cli {

namespace {

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }

json clock_json(const ClockModel& clock) {
    json out{{"kind", to_string(clock.kind())}};
    return out;
}

const char* method_key(EvolutionResult::Method m) {
    switch (m) {
        case EvolutionResult::Method::closed_form: return "closed_form";
        case EvolutionResult::Method::master_equation: return "master_equation";
        case EvolutionResult::Method::quadrature: return "quadrature";
    }
    return "?";
}

RunResult run_evolve(const EvolveSpec& spec) {
    RunResult out{Experiment::evolve, json::object(), {}, {}, {}};
    out.table.add("T", spec.grid);
    out.plot = {"Purity under a real clock", "clock reading T", "purity", spec.grid, {}};

    std::vector<EvolutionResult> runs;
    for (auto m : spec.methods) {
        switch (m) {
            case EvolutionResult::Method::closed_form:
                runs.push_back(closed_form_series(spec.hamiltonian, spec.state, spec.clock, spec.grid));
                break;
            case EvolutionResult::Method::master_equation:
                runs.push_back(integrate_master(spec.hamiltonian, spec.state, spec.clock, spec.grid));
                break;
            case EvolutionResult::Method::quadrature:
                runs.push_back(quadrature_series(spec.hamiltonian, spec.state, spec.clock, spec.grid));
                break;
        }
    }

    json final_purity = json::object();
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const std::string key = method_key(spec.methods[k]);
        auto purity = purity_series(runs[k]);
        final_purity[key] = purity.back();
        out.summary.emplace_back("purity_" + key, purity.back());
        out.plot.series.push_back({key, purity});
        out.table.add("purity_" + key, std::move(purity));
        if (spec.hamiltonian.dim() >= 2) {
            std::vector<double> coherence;
            for (const auto& rho : runs[k].states) coherence.push_back(std::abs(rho(0, 1)));
            out.table.add("coherence_" + key, std::move(coherence));
        }
    }

    // deviation of every other method from the closed form, per reading
    const auto reference = std::find(spec.methods.begin(), spec.methods.end(), EvolutionResult::Method::closed_form);
    json deviations = json::object();
    if (reference != spec.methods.end()) {
        const auto& exact = runs[static_cast<std::size_t>(reference - spec.methods.begin())];
        for (std::size_t k = 0; k < runs.size(); ++k) {
            if (spec.methods[k] == EvolutionResult::Method::closed_form) continue;
            std::vector<double> dev;
            for (std::size_t i = 0; i < spec.grid.size(); ++i)
                dev.push_back((runs[k].states[i].matrix() - exact.states[i].matrix()).cwiseAbs().maxCoeff());
            const double worst = *std::max_element(dev.begin(), dev.end());
            const std::string key = method_key(spec.methods[k]);
            deviations[key] = worst;
            out.summary.emplace_back("max_deviation_" + key, worst);
            out.table.add("max_deviation_" + key, std::move(dev));
        }
    }

    out.results = {{"dimension", spec.hamiltonian.dim()},
                   {"clock", clock_json(spec.clock)},
                   {"final_purity", final_purity},
                   {"max_deviation", deviations}};
    return out;
}

RunResult run_zurek(const ZurekSpec& spec) {
    RunResult out{Experiment::zurek, json::object(), {}, {}, {}};
    const auto trace = coherence_trace(spec.bath, spec.grid);
    std::vector<double> re, im, mag;
    for (auto z : trace.values) {
        re.push_back(z.real());
        im.push_back(z.imag());
        mag.push_back(std::abs(z));
    }
    out.table.add("t", spec.grid);
    out.table.add("z_re", re);
    out.table.add("z_im", im);
    out.table.add("z_abs", mag);
    out.plot = {"Central-spin coherence", "t", "|z|", spec.grid, {{"|z(t)|", mag}}};

    json results{{"N", spec.bath.size()},
                 {"couplings", spec.bath.couplings},
                 {"a", complex_json(spec.bath.a)},
                 {"b", complex_json(spec.bath.b)},
                 {"z_abs_min", *std::min_element(mag.begin(), mag.end())},
                 {"z_abs_final", mag.back()}};
    out.summary = {{"z_abs_final", mag.back()}, {"z_abs_min", *std::min_element(mag.begin(), mag.end())}};

    if (spec.clock) {
        std::vector<double> eff;
        for (double t : spec.grid) eff.push_back(std::abs(clock_corrected_coherence(spec.bath, *spec.clock, t)));
        results["clock"] = clock_json(*spec.clock);
        results["z_eff_abs_final"] = eff.back();
        out.summary.emplace_back("z_eff_abs_final", eff.back());
        out.plot.series.push_back({"|z_eff(T)|", eff});
        out.table.add("z_eff_abs", std::move(eff));
    }

    if (spec.revivals) {
        const double g_max = std::abs(*std::max_element(spec.bath.couplings.begin(), spec.bath.couplings.end(),
                                                        [](double x, double y) { return std::abs(x) < std::abs(y); }));
        const double step = spec.revivals->step.value_or(g_max > 0.0 ? std::numbers::pi / (40.0 * g_max) : spec.grid.back());
        json list = json::array();
        const auto found = revival_search(spec.bath, spec.grid.back(), step, spec.revivals->threshold);
        for (const auto& r : found) list.push_back({{"time", r.time}, {"magnitude", r.magnitude}});
        results["revivals"] = list;
        out.summary.emplace_back("revival_count", static_cast<double>(found.size()));
    }
    out.results = std::move(results);
    return out;
}

json condition_json(const Condition& c) {
    return {{"evaluated", c.evaluated},
            {"satisfied", c.satisfied},
            {"lhs", finite_or_null(c.lhs)},
            {"rhs", finite_or_null(c.rhs)},
            {"margin", finite_or_null(c.margin)}};
}

RunResult run_chamber(const ChamberSpec& spec) {
    RunResult out{Experiment::chamber, json::object(), {}, {}, {}};
    const auto& cfg = spec.chamber;
    const std::vector<double> taus = spec.flight_times.empty() ? std::vector<double>{cfg.flight_time} : spec.flight_times;
    std::vector<double> unitary, corrected, theta;
    for (double tau : taus) {
        ChamberConfig c = cfg;
        c.flight_time = tau;
        unitary.push_back(witness_unitary(c));
        corrected.push_back(witness_corrected(c));
        theta.push_back(clock_theta(c));
    }
    out.table.add("tau", taus);
    out.table.add("M_unitary", unitary);
    out.table.add("M_corrected", corrected);
    out.table.add("theta", theta);
    out.plot = {"Chamber observable M", "flight time tau", "<M>", taus, {{"unitary", unitary}, {"clock corrected", corrected}}};

    std::vector<double> omegas;
    for (std::size_t k = 0; k < cfg.spins; ++k) omegas.push_back(pair_frequency(cfg, k));
    const auto f = feasibility(cfg);
    out.results = {{"N", cfg.spins},
                   {"pair_frequencies", omegas},
                   {"precession_frequency", precession_frequency(cfg)},
                   {"theta", clock_theta(cfg)},
                   {"M_unitary", witness_unitary(cfg)},
                   {"M_corrected", witness_corrected(cfg)},
                   {"feasibility",
                    {{"coupling", condition_json(f.coupling)},
                     {"dispersion", condition_json(f.dispersion)},
                     {"basis", condition_json(f.basis)},
                     {"damping", condition_json(f.damping)}}}};
    out.summary = {{"M_unitary", witness_unitary(cfg)},
                   {"M_corrected", witness_corrected(cfg)},
                   {"theta", clock_theta(cfg)}};
    return out;
}

RunResult run_undecide(const UndecideSpec& spec) {
    RunResult out{Experiment::undecide, json::object(), {}, {}, {}};
    const auto& inp = spec.input;
    const auto r = report(inp);

    std::vector<double> ladder = spec.ladder;
    if (ladder.empty()) {
        const double top = r.crossover ? std::clamp(2.0 * static_cast<double>(r.crossover->first), 16.0, 4096.0) : 16.0;
        for (double n = 1.0; n <= top; n += 1.0) ladder.push_back(n);
    }
    std::vector<double> signal, noise, verdict;
    for (double n : ladder) {
        const double s = inp.chamber.planck_time > 0.0 && inp.chamber.gamma1 * inp.chamber.gamma2 > 0.0
                             ? -strong_damping_bound(inp.chamber, n).value() / std::numbers::ln10
                             : 0.0;
        const double z = noise_floor(inp, n).log10();
        signal.push_back(s);
        noise.push_back(z);
        verdict.push_back(s < z ? 1.0 : 0.0);
    }
    out.table.add("N", ladder);
    out.table.add("signal_log10", signal);
    out.table.add("noise_log10", noise);
    out.table.add("undecidable", verdict);
    out.plot = {"Signal against noise floor", "N", "log10 magnitude", ladder, {{"signal (strong bound)", signal}, {"noise", noise}}};

    out.results = {{"K", r.K},
                   {"signal_log10", r.signal.log10()},
                   {"delta_theta", r.delta_theta},
                   {"noise_log10", r.noise.log10()},
                   {"N_threshold", finite_or_null(r.N_threshold)},
                   {"N_threshold_printed", finite_or_null(r.N_threshold_printed)},
                   {"crossover_root", r.crossover ? json(r.crossover->root) : json()},
                   {"crossover_first", r.crossover ? json(r.crossover->first) : json()},
                   {"undecidable", r.undecidable}};
    out.summary = {{"K", r.K},
                   {"signal_log10", r.signal.log10()},
                   {"noise_log10", r.noise.log10()},
                   {"undecidable", r.undecidable ? 1.0 : 0.0}};
    return out;
}

RunResult run_conditional(const ConditionalSpec& spec) {
    RunResult out{Experiment::conditional, json::object(), {}, {}, {}};
    const PeriodicGrid grid(spec.grid_points, spec.length);
    const auto h_system = free_particle(grid, spec.system.mass);
    const auto h_clock = free_particle(grid, spec.clock.mass, spec.clock.velocity);
    const auto x = grid.position_operator();
    const TwoSubsystemModel model{h_system, h_clock, x, x};

    const auto psi_system = gaussian_packet(grid, spec.system.centre, spec.system.width);
    const auto psi_clock = gaussian_packet(grid, spec.clock.centre, spec.clock.width);
    const auto rho = DensityMatrix::pure(tensor(psi_system, psi_clock));
    const ConditionalEvaluator evaluator(model, rho, spec.reading, spec.window, spec.tolerance);

    // the system alone, evolved to the window centre
    const auto reference = evolve_unitary(h_system, psi_system, spec.window.centre);

    std::vector<double> positions, conditional, born;
    double window_change = 0.0, distance = 0.0;
    for (Eigen::Index j = 0; j < grid.size(); ++j) {
        const double xj = grid.position(j);
        const auto p = evaluator.probability({xj, 0.5 * grid.spacing()});
        window_change = std::max(window_change, p.window_change);
        positions.push_back(xj);
        conditional.push_back(p.probability);
        born.push_back(std::norm(reference[j]));
        distance += 0.5 * std::abs(conditional.back() - born.back());
    }
    out.table.add("x", positions);
    out.table.add("probability", conditional);
    out.table.add("born", born);
    out.plot = {"Conditional position distribution", "x", "probability", positions, {{"conditional", conditional}, {"Born", born}}};
    out.results = {{"dimension", model.dim()},
                   {"total_variation", distance},
                   {"window_change", window_change},
                   {"normalization", std::accumulate(conditional.begin(), conditional.end(), 0.0)}};
    out.summary = {{"total_variation", distance}, {"window_change", window_change}};
    return out;
}

RunResult run_sweep(const ExperimentConfig& config, const SweepSpec& spec) {
    const std::size_t count = spec.values.size();
    std::vector<std::optional<RunResult>> results(count);
    std::vector<std::exception_ptr> failures(count);
    std::atomic<std::size_t> next{0};

    unsigned workers = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        results[i] = execute(parse_config(spec.run_document(i), config.seed));
                    } catch (...) {
                        failures[i] = std::current_exception();
                    }
                }
            });
        }
    }

    // collector: sweep order, first failure wins
    for (std::size_t i = 0; i < count; ++i) {
        if (!failures[i]) continue;
        const std::string where = "sweep run " + std::to_string(i) + " (" + spec.parameter + " = " + format_double(spec.values[i]) + ")";
        try {
            std::rethrow_exception(failures[i]);
        } catch (const Error& e) {
            throw Error(e.code(), where + ": " + e.what());
        }
    }

    RunResult out{Experiment::sweep, json::object(), {}, {}, {}};
    out.table.add(spec.parameter, spec.values);
    const auto& first = *results.front();
    for (std::size_t k = 0; k < first.summary.size(); ++k) {
        std::vector<double> column;
        for (const auto& r : results) column.push_back(k < r->summary.size() ? r->summary[k].second : std::nan(""));
        out.plot.series.push_back({first.summary[k].first, column});
        out.table.add(first.summary[k].first, std::move(column));
    }
    out.plot.title = std::string("Sweep of ") + spec.parameter;
    out.plot.x_label = spec.parameter;
    out.plot.x = spec.values;

    json runs = json::array();
    for (std::size_t i = 0; i < count; ++i) runs.push_back({{"value", spec.values[i]}, {"results", results[i]->results}});
    out.results = {{"parameter", spec.parameter},
                   {"base_experiment", to_string(first.experiment)},
                   {"count", count},
                   {"runs", runs}};
    return out;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json constants_json(const ExperimentConfig& c) {
    json out{{"hbar", c.constants.hbar}};
    out["planck_length"] = c.constants.planck_length ? json(*c.constants.planck_length) : json();
    out["planck_time"] = c.constants.planck_time ? json(*c.constants.planck_time) : json();
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw ConfigError(path.string() + ": cannot write");
}

}  // namespace

std::string library_version() { return TIMELESS_VERSION; }

RunResult execute(const ExperimentConfig& config) {
    try {
        return std::visit(
            [&](const auto& spec) -> RunResult {
                using T = std::decay_t<decltype(spec)>;
                if constexpr (std::is_same_v<T, EvolveSpec>) return run_evolve(spec);
                else if constexpr (std::is_same_v<T, ZurekSpec>) return run_zurek(spec);
                else if constexpr (std::is_same_v<T, ChamberSpec>) return run_chamber(spec);
                else if constexpr (std::is_same_v<T, UndecideSpec>) return run_undecide(spec);
                else if constexpr (std::is_same_v<T, ConditionalSpec>) return run_conditional(spec);
                else return run_sweep(config, spec);
            },
            config.spec);
    } catch (const Error& e) {
        if (config.experiment == Experiment::sweep) throw;
        throw Error(e.code(), std::string(to_string(config.experiment)) + ": " + e.what());
    }
}

json deterministic_payload(json report) {
    report.erase("metadata");
    return report;
}

Artifacts run(const ExperimentConfig& config, const RunOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    const RunResult result = execute(config);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    const std::string stem = to_string(config.experiment);
    std::filesystem::create_directories(options.out_dir);
    Artifacts paths;
    paths.csv = options.out_dir / (config.output.csv.empty() ? stem + ".csv" : config.output.csv);
    paths.json = options.out_dir / (config.output.json.empty() ? stem + ".json" : config.output.json);

    const std::string seed = config.seed ? std::to_string(*config.seed) : "none";
    std::ostringstream csv;
    write_csv(csv, result.table,
              {{"schema", kReportSchema}, {"experiment", stem}, {"version", library_version()}, {"seed", seed}, {"units", config.units}});
    write_file(paths.csv, csv.str());

    json report{{"schema", kReportSchema},
                {"version", library_version()},
                {"experiment", stem},
                {"units", config.units},
                {"constants", constants_json(config)},
                {"seed", config.seed ? json(*config.seed) : json()},
                {"config", config.document},
                {"results", result.results},
                {"series", table_json(result.table)},
                {"metadata", {{"timestamp", utc_timestamp()}, {"wall_clock_seconds", elapsed}}}};
    write_file(paths.json, report.dump(2) + "\n");

    if (options.svg || !config.output.svg.empty()) {
        paths.svg = options.out_dir / (config.output.svg.empty() ? stem + ".svg" : config.output.svg);
        write_file(paths.svg, emit_svg(result.plot));
    }
    return paths;
}

}  // namespace timeless::cli
