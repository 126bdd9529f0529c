#include "timeless/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "timeless/errors.hpp"
#include "timeless/random.hpp"

namespace timeless::cli {

namespace {

constexpr double kSiHbar = 1.054571817e-34;
constexpr double kSiPlanckLength = 1.616255e-35;
constexpr double kSiPlanckTime = 5.391247e-44;

// Object view that records which keys were read, so leftovers can be
// reported as unknown.
class Node {
public:
    Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {
        if (!value_.is_object()) throw ConfigError(label() + ": expected an object");
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    std::string label() const { return path_.empty() ? "<root>" : path_; }

    bool has(const std::string& key) const { return value_.contains(key); }

    const json* find(const std::string& key) {
        used_.insert(key);
        auto it = value_.find(key);
        return it == value_.end() ? nullptr : &*it;
    }

    const json& get(const std::string& key) {
        const json* v = find(key);
        if (!v) throw ConfigError(at(key) + ": required key missing");
        return *v;
    }

    double number(const std::string& key) { return as_number(get(key), at(key)); }
    double number(const std::string& key, double fallback) {
        const json* v = find(key);
        return v ? as_number(*v, at(key)) : fallback;
    }
    std::optional<double> optional_number(const std::string& key) {
        const json* v = find(key);
        if (!v) return std::nullopt;
        return as_number(*v, at(key));
    }

    long long integer(const std::string& key) { return as_integer(get(key), at(key)); }
    long long integer(const std::string& key, long long fallback) {
        const json* v = find(key);
        return v ? as_integer(*v, at(key)) : fallback;
    }

    std::string string(const std::string& key) { return as_string(get(key), at(key)); }
    std::string string(const std::string& key, const std::string& fallback) {
        const json* v = find(key);
        return v ? as_string(*v, at(key)) : fallback;
    }

    Node child(const std::string& key) { return Node(get(key), at(key)); }

    void finish() const {
        for (auto it = value_.begin(); it != value_.end(); ++it) {
            if (!used_.count(it.key())) throw ConfigError("unknown key '" + at(it.key()) + "'");
        }
    }

    static double as_number(const json& v, const std::string& path) {
        if (!v.is_number()) throw ConfigError(path + ": expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(path + ": must be finite");
        return x;
    }
    static long long as_integer(const json& v, const std::string& path) {
        if (v.is_number_integer()) return v.get<long long>();
        if (v.is_number_float()) {
            const double x = v.get<double>();
            if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 0x1.0p53) return static_cast<long long>(x);
        }
        throw ConfigError(path + ": expected an integer");
    }
    static std::string as_string(const json& v, const std::string& path) {
        if (!v.is_string()) throw ConfigError(path + ": expected a string");
        return v.get<std::string>();
    }

private:
    const json& value_;
    std::string path_;
    std::set<std::string> used_;
};

// number, or [re, im]
Complex parse_complex(const json& v, const std::string& path) {
    if (v.is_number()) return {Node::as_number(v, path), 0.0};
    if (v.is_array() && v.size() == 2)
        return {Node::as_number(v[0], path + "[0]"), Node::as_number(v[1], path + "[1]")};
    throw ConfigError(path + ": expected a number or [re, im]");
}

std::vector<Complex> parse_complex_list(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) throw ConfigError(path + ": expected a non-empty array");
    std::vector<Complex> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(parse_complex(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<double> parse_real_list(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) throw ConfigError(path + ": expected a non-empty array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(Node::as_number(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

Matrix parse_matrix(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) throw ConfigError(path + ": expected a square matrix (array of rows)");
    const auto n = static_cast<Eigen::Index>(v.size());
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto row = path + "[" + std::to_string(i) + "]";
        const json& r = v[static_cast<std::size_t>(i)];
        if (!r.is_array() || static_cast<Eigen::Index>(r.size()) != n) throw ConfigError(row + ": row length must be " + std::to_string(n));
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = parse_complex(r[static_cast<std::size_t>(j)], row + "[" + std::to_string(j) + "]");
    }
    return m;
}

// Module validation failures surface as config errors with the key path,
// except capacity, which keeps its own exit status.
template <class F>
auto validated(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const CapacityError&) {
        throw;
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::uint64_t require_seed(const ExperimentConfig& cfg, const std::string& what) {
    if (!cfg.seed) throw ConfigError("seed: required because " + what + " is random");
    return *cfg.seed;
}

ClockModel parse_clock(Node node, const Constants& constants) {
    const auto kind = node.string("kind");
    ClockModel clock = ClockModel::ideal();
    if (kind == "ideal") {
    } else if (kind == "gaussian") {
        const double width = node.number("width");
        clock = validated(node.label(), [&] { return ClockModel::gaussian(width); });
    } else if (kind == "ng_van_dam") {
        const auto tp = node.optional_number("planck_time");
        if (!tp && !constants.planck_time) throw ConfigError(node.at("planck_time") + ": required (no declared constant)");
        const double prefactor = node.number("prefactor", 1.0);
        clock = validated(node.label(), [&] { return ClockModel::ng_van_dam(tp ? *tp : *constants.planck_time, prefactor); });
    } else {
        throw ConfigError(node.at("kind") + ": unknown clock '" + kind + "' (ideal, gaussian, ng_van_dam)");
    }
    node.finish();
    return clock;
}

EvolveSpec parse_evolve(Node& root, const ExperimentConfig& cfg) {
    const Matrix h = parse_matrix(root.get("hamiltonian"), "hamiltonian");
    auto hamiltonian = validated("hamiltonian", [&] { return HermitianOperator::from_matrix(h); });

    Node state = root.child("state");
    std::optional<DensityMatrix> rho;
    if (state.has("vector") == state.has("density")) throw ConfigError("state: give exactly one of 'vector' or 'density'");
    if (state.has("vector")) {
        const auto amps = parse_complex_list(state.get("vector"), "state.vector");
        Vector v(static_cast<Eigen::Index>(amps.size()));
        for (std::size_t i = 0; i < amps.size(); ++i) v(static_cast<Eigen::Index>(i)) = amps[i];
        rho = validated("state.vector", [&] { return DensityMatrix::pure(StateVector::from_amplitudes(v)); });
    } else {
        const Matrix m = parse_matrix(state.get("density"), "state.density");
        rho = validated("state.density", [&] { return DensityMatrix::from_matrix(m); });
    }
    state.finish();
    if (rho->dim() != hamiltonian.dim())
        throw ConfigError("state: dimension " + std::to_string(rho->dim()) + " does not match hamiltonian " +
                          std::to_string(hamiltonian.dim()));

    ClockModel clock = parse_clock(root.child("clock"), cfg.constants);
    auto grid = parse_grid(root.get("grid"), "grid");

    std::vector<EvolutionResult::Method> methods;
    if (const json* m = root.find("methods")) {
        if (!m->is_array() || m->empty()) throw ConfigError("methods: expected a non-empty array");
        for (const auto& name : *m) {
            const auto s = Node::as_string(name, "methods");
            if (s == "closed_form") methods.push_back(EvolutionResult::Method::closed_form);
            else if (s == "master_equation") methods.push_back(EvolutionResult::Method::master_equation);
            else if (s == "quadrature") methods.push_back(EvolutionResult::Method::quadrature);
            else throw ConfigError("methods: unknown method '" + s + "'");
        }
    } else {
        methods = {EvolutionResult::Method::closed_form, EvolutionResult::Method::master_equation};
    }
    for (auto m : methods) {
        if (m == EvolutionResult::Method::master_equation && clock.kind() == ClockModel::Kind::ng_van_dam && grid.front() <= 0.0)
            throw ConfigError("grid: master_equation with an ng_van_dam clock needs readings > 0");
    }
    return EvolveSpec{std::move(hamiltonian), std::move(*rho), clock, std::move(grid), std::move(methods)};
}

std::vector<double> parse_couplings(const json& v, std::size_t n, const ExperimentConfig& cfg, Rng* rng) {
    if (v.is_array()) {
        auto g = parse_real_list(v, "bath.couplings");
        if (g.size() != n) throw ConfigError("bath.couplings: length " + std::to_string(g.size()) + " differs from N");
        return g;
    }
    Node node(v, "bath.couplings");
    const auto kind = node.string("kind");
    std::vector<double> g;
    if (kind == "constant") {
        g = couplings::constant(n, node.number("g"));
    } else if (kind == "linear") {
        g = couplings::linear(n, node.number("g0"));
    } else if (kind == "uniform") {
        require_seed(cfg, "bath.couplings");
        const double lo = node.number("min"), hi = node.number("max");
        if (!(lo < hi)) throw ConfigError("bath.couplings: min must be below max");
        g = couplings::uniform(n, lo, hi, *rng);
    } else {
        throw ConfigError("bath.couplings.kind: unknown '" + kind + "' (constant, linear, uniform)");
    }
    node.finish();
    return g;
}

ZurekSpec parse_zurek(Node& root, const ExperimentConfig& cfg) {
    Node bath = root.child("bath");
    const auto n = bath.integer("N");
    if (n < 1) throw ConfigError("bath.N: must be at least 1");
    if (static_cast<std::size_t>(n) > kMaxBathSpins)
        throw CapacityError("bath.N = " + std::to_string(n) + " exceeds " + std::to_string(kMaxBathSpins));

    std::optional<Rng> rng;
    if (cfg.seed) rng.emplace(*cfg.seed);
    auto g = parse_couplings(bath.get("couplings"), static_cast<std::size_t>(n), cfg, rng ? &*rng : nullptr);

    const double root_half = 1.0 / std::numbers::sqrt2;
    Complex a{root_half, 0.0}, b{root_half, 0.0};
    if (const json* s = bath.find("system")) {
        Node sys(*s, "bath.system");
        a = parse_complex(sys.get("a"), "bath.system.a");
        b = parse_complex(sys.get("b"), "bath.system.b");
        sys.finish();
    }

    SpinBathConfig config;
    const json* env = bath.find("environment");
    if (!env || (env->is_string() && env->get<std::string>() == "random")) {
        require_seed(cfg, "bath.environment");
        const std::uint64_t env_seed = rng->next_u64();
        config = random_bath(std::move(g), a, b, env_seed);
    } else if (env->is_string() && env->get<std::string>() == "balanced") {
        config = balanced_bath(std::move(g), a, b);
    } else if (env->is_object()) {
        Node e(*env, "bath.environment");
        config.couplings = std::move(g);
        config.a = a;
        config.b = b;
        config.alpha = parse_complex_list(e.get("alpha"), "bath.environment.alpha");
        config.beta = parse_complex_list(e.get("beta"), "bath.environment.beta");
        e.finish();
    } else {
        throw ConfigError("bath.environment: expected \"random\", \"balanced\" or {alpha, beta}");
    }
    bath.finish();
    validated("bath", [&] { config.validate(); return 0; });

    ZurekSpec spec{std::move(config), std::nullopt, parse_grid(root.get("grid"), "grid"), std::nullopt};
    if (root.has("clock")) {
        spec.clock = parse_clock(root.child("clock"), cfg.constants);
        if (spec.clock->kind() == ClockModel::Kind::ng_van_dam && spec.grid.front() <= 0.0)
            throw ConfigError("grid: an ng_van_dam clock needs readings > 0");
    }
    if (const json* r = root.find("revivals")) {
        Node rv(*r, "revivals");
        RevivalSpec revivals;
        revivals.threshold = rv.number("threshold", 0.9);
        revivals.step = rv.optional_number("step");
        if (!(revivals.threshold > 0.0 && revivals.threshold <= 1.0)) throw ConfigError("revivals.threshold: must lie in (0, 1]");
        if (revivals.step && !(*revivals.step > 0.0)) throw ConfigError("revivals.step: must be positive");
        rv.finish();
        spec.revivals = revivals;
    }
    return spec;
}

ChamberConfig parse_chamber_block(Node node, const ExperimentConfig& cfg) {
    ChamberConfig c;
    const auto n = node.integer("N");
    if (n < 1) throw ConfigError(node.at("N") + ": must be at least 1");
    c.spins = static_cast<std::size_t>(n);
    c.field = node.number("B");
    c.gamma1 = node.number("gamma1");
    c.gamma2 = node.number("gamma2");
    const json& f = node.get("f");
    if (f.is_array()) {
        c.couplings = parse_real_list(f, node.at("f"));
        if (c.couplings.size() != c.spins) throw ConfigError(node.at("f") + ": length differs from N");
    } else {
        c.couplings.assign(c.spins, Node::as_number(f, node.at("f")));
    }
    c.flight_time = node.number("tau");
    c.duration = node.number("T", c.flight_time);
    c.env_mass = node.number("m", 1.0);
    c.impact_parameter = node.number("d", 1.0);
    c.permeability = node.number("mu", 1.0);
    c.hbar = node.number("hbar", cfg.constants.hbar);
    c.planck_time = node.number("T_P", cfg.constants.planck_time.value_or(0.0));
    const double root_half = 1.0 / std::numbers::sqrt2;
    c.a = node.has("a") ? parse_complex(node.get("a"), node.at("a")) : Complex{root_half, 0.0};
    c.b = node.has("b") ? parse_complex(node.get("b"), node.at("b")) : Complex{root_half, 0.0};
    auto per_spin = [&](const char* key) {
        if (!node.has(key)) return std::vector<Complex>(c.spins, Complex{root_half, 0.0});
        const json& v = node.get(key);
        // a two-number array is one complex value; per-spin lists otherwise
        const bool scalar = v.is_number() || (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number());
        if (!scalar) {
            auto list = parse_complex_list(v, node.at(key));
            if (list.size() != c.spins) throw ConfigError(node.at(key) + ": length differs from N");
            return list;
        }
        return std::vector<Complex>(c.spins, parse_complex(v, node.at(key)));
    };
    c.alpha = per_spin("alpha");
    c.beta = per_spin("beta");
    c.aperture = node.optional_number("aperture");
    c.decoherence_ratio = node.number("decoherence_ratio", c.decoherence_ratio);
    node.finish();
    validated(node.label(), [&] { c.validate(); return 0; });
    return c;
}

ChamberSpec parse_chamber(Node& root, const ExperimentConfig& cfg) {
    ChamberSpec spec{parse_chamber_block(root.child("chamber"), cfg), {}};
    if (root.has("grid")) {
        spec.flight_times = parse_grid(root.get("grid"), "grid");
        if (spec.flight_times.front() <= 0.0) throw ConfigError("grid: flight times must be positive");
    }
    return spec;
}

UndecideSpec parse_undecide(Node& root, const ExperimentConfig& cfg) {
    UndecidabilityInput input;
    input.chamber = parse_chamber_block(root.child("chamber"), cfg);
    const auto lp = root.optional_number("planck_length");
    if (!lp && !cfg.constants.planck_length) throw ConfigError("planck_length: required (no declared constant)");
    input.planck_length = lp ? *lp : *cfg.constants.planck_length;
    input.radius = root.number("radius");
    if (const auto extra = root.optional_number("extra_noise_log10")) input.extra_noise_ln = *extra * std::numbers::ln10;
    validated("undecide", [&] { input.validate(); return 0; });
    UndecideSpec spec{input, {}};
    if (root.has("ladder")) {
        spec.ladder = parse_grid(root.get("ladder"), "ladder");
        if (spec.ladder.front() < 1.0) throw ConfigError("ladder: environment sizes must be at least 1");
    }
    return spec;
}

ParticleSpec parse_particle(Node node, bool drift) {
    ParticleSpec p;
    p.mass = node.number("mass");
    p.centre = node.number("centre");
    p.width = node.number("width");
    if (drift) p.velocity = node.number("velocity", 0.0);
    node.finish();
    if (!(p.mass > 0.0)) throw ConfigError(node.at("mass") + ": must be positive");
    if (!(p.width > 0.0)) throw ConfigError(node.at("width") + ": must be positive");
    return p;
}

ConditionalSpec parse_conditional(Node& root) {
    ConditionalSpec spec;
    Node lattice = root.child("lattice");
    spec.grid_points = lattice.integer("points");
    spec.length = lattice.number("length");
    lattice.finish();
    if (spec.grid_points < 2) throw ConfigError("lattice.points: must be at least 2");
    if (!(spec.length > 0.0)) throw ConfigError("lattice.length: must be positive");
    if (spec.grid_points * spec.grid_points > kMaxConditionalDim)
        throw CapacityError("lattice.points: joint dimension exceeds " + std::to_string(kMaxConditionalDim));
    spec.system = parse_particle(root.child("system"), false);
    spec.clock = parse_particle(root.child("clock"), true);
    Node reading = root.child("reading");
    spec.reading = {reading.number("centre"), reading.number("halfwidth")};
    reading.finish();
    Node window = root.child("window");
    spec.window = {window.number("centre"), window.number("halfwidth")};
    window.finish();
    spec.tolerance = root.number("tolerance", spec.tolerance);
    if (!(spec.tolerance > 0.0)) throw ConfigError("tolerance: must be positive");
    // the observable interval is irrelevant for validation; the reading and window are not
    validated("conditional", [&] {
        ConditionalQuery{{0.0, 1.0}, spec.reading, spec.window}.validate();
        return 0;
    });
    return spec;
}

// Walks a dotted path to the parent object and returns it with the last key.
std::pair<json*, std::string> locate(json& doc, const std::string& dotted) {
    json* node = &doc;
    std::size_t start = 0;
    for (;;) {
        const auto dot = dotted.find('.', start);
        const auto key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError("parameter: malformed path '" + dotted + "'");
        if (!node->is_object()) throw ConfigError("parameter: '" + dotted + "' does not name a config field");
        if (dot == std::string::npos) return {node, key};
        auto it = node->find(key);
        if (it == node->end()) throw ConfigError("parameter: '" + dotted + "' does not name a config field");
        node = &*it;
        start = dot + 1;
    }
}

SweepSpec parse_sweep(Node& root, const ExperimentConfig& cfg) {
    SweepSpec spec;
    spec.base = root.get("base");
    if (!spec.base.is_object()) throw ConfigError("base: expected an experiment config object");
    if (spec.base.value("experiment", std::string{}) == "sweep") throw ConfigError("base: sweeps cannot be nested");
    spec.parameter = root.string("parameter");
    spec.values = parse_grid(root.get("values"), "values");
    spec.threads = static_cast<unsigned>(root.integer("threads", 0));
    locate(spec.base, spec.parameter);
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        try {
            parse_config(spec.run_document(i), cfg.seed);
        } catch (const ConfigError& e) {
            throw ConfigError("sweep run " + std::to_string(i) + " (" + spec.parameter + " = " +
                              std::to_string(spec.values[i]) + "): " + e.what());
        }
    }
    return spec;
}

}  // namespace

const char* to_string(Experiment e) noexcept {
    switch (e) {
        case Experiment::evolve: return "evolve";
        case Experiment::zurek: return "zurek";
        case Experiment::chamber: return "chamber";
        case Experiment::undecide: return "undecide";
        case Experiment::conditional: return "conditional";
        case Experiment::sweep: return "sweep";
    }
    return "?";
}

Experiment parse_experiment(const std::string& name) {
    for (auto e : {Experiment::evolve, Experiment::zurek, Experiment::chamber, Experiment::undecide,
                   Experiment::conditional, Experiment::sweep}) {
        if (name == to_string(e)) return e;
    }
    throw ConfigError("experiment: unknown '" + name + "' (evolve, zurek, chamber, undecide, conditional, sweep)");
}

json SweepSpec::run_document(std::size_t i) const {
    json doc = base;
    auto [parent, key] = locate(doc, parameter);
    const double v = values.at(i);
    if (v == std::floor(v) && std::abs(v) < 0x1.0p53) (*parent)[key] = static_cast<long long>(v);
    else (*parent)[key] = v;
    return doc;
}

std::vector<double> parse_grid(const json& node, const std::string& path) {
    std::vector<double> grid;
    if (node.is_array()) {
        grid = parse_real_list(node, path);
    } else {
        Node spec(node, path);
        const double from = spec.number("from"), to = spec.number("to");
        const auto count = spec.integer("count");
        const auto scale = spec.string("scale", "linear");
        spec.finish();
        if (count < 2) throw ConfigError(path + ".count: must be at least 2");
        if (scale != "linear" && scale != "log") throw ConfigError(path + ".scale: expected linear or log");
        if (scale == "log" && !(from > 0.0 && to > 0.0)) throw ConfigError(path + ": log scale needs positive endpoints");
        grid.resize(static_cast<std::size_t>(count));
        const double steps = static_cast<double>(count - 1);
        for (long long i = 0; i < count; ++i) {
            const double u = static_cast<double>(i) / steps;
            grid[static_cast<std::size_t>(i)] =
                scale == "log" ? std::exp(std::log(from) + u * (std::log(to) - std::log(from))) : from + u * (to - from);
        }
        grid.front() = from;
        grid.back() = to;
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw ConfigError(path + ": grid must be strictly increasing (index " + std::to_string(i) + ")");
    }
    return grid;
}

json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // byte offset to line/column
        const std::size_t offset = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, text.size());
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i < offset; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string detail = e.what();
        if (const auto colon = detail.rfind(": "); colon != std::string::npos) detail = detail.substr(colon + 2);
        throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": JSON syntax error: " + detail);
    }
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string() + ": cannot open");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(parse_json_text(buffer.str(), path.string()), seed_override);
}

ExperimentConfig parse_config(const json& document, std::optional<std::uint64_t> seed_override) {
    Node root(document, "");
    ExperimentConfig cfg{parse_experiment(root.string("experiment")), document, std::nullopt, "natural", {}, {}, SweepSpec{}};
    root.find("description");

    if (const json* s = root.find("seed")) {
        const auto seed = Node::as_integer(*s, "seed");
        if (seed < 0) throw ConfigError("seed: must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(seed);
    }
    if (seed_override) cfg.seed = seed_override;

    cfg.units = root.string("units", "natural");
    if (cfg.units == "SI") {
        cfg.constants = {kSiHbar, kSiPlanckLength, kSiPlanckTime};
    } else if (cfg.units != "natural") {
        throw ConfigError("units: expected \"natural\" or \"SI\"");
    }
    if (const json* c = root.find("constants")) {
        Node consts(*c, "constants");
        cfg.constants.hbar = consts.number("hbar", cfg.constants.hbar);
        if (auto v = consts.optional_number("planck_length")) cfg.constants.planck_length = v;
        if (auto v = consts.optional_number("planck_time")) cfg.constants.planck_time = v;
        consts.finish();
        if (!(cfg.constants.hbar > 0.0)) throw ConfigError("constants.hbar: must be positive");
        if (cfg.constants.planck_length && !(*cfg.constants.planck_length > 0.0)) throw ConfigError("constants.planck_length: must be positive");
        if (cfg.constants.planck_time && !(*cfg.constants.planck_time >= 0.0)) throw ConfigError("constants.planck_time: must be non-negative");
    }
    if (const json* o = root.find("output")) {
        Node out(*o, "output");
        cfg.output.csv = out.string("csv", "");
        cfg.output.json = out.string("json", "");
        cfg.output.svg = out.string("svg", "");
        out.finish();
    }

    switch (cfg.experiment) {
        case Experiment::evolve: cfg.spec = parse_evolve(root, cfg); break;
        case Experiment::zurek: cfg.spec = parse_zurek(root, cfg); break;
        case Experiment::chamber: cfg.spec = parse_chamber(root, cfg); break;
        case Experiment::undecide: cfg.spec = parse_undecide(root, cfg); break;
        case Experiment::conditional: cfg.spec = parse_conditional(root); break;
        case Experiment::sweep: cfg.spec = parse_sweep(root, cfg); break;
    }
    root.finish();
    return cfg;
}

}  // namespace timeless::cli
