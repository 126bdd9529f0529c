#include "timeless/undecidability.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace timeless {

LogMagnitude LogMagnitude::from_value(double value) {
    if (!(value > 0.0)) throw DomainError("LogMagnitude: value must be > 0");
    return {std::log(value)};
}

void UndecidabilityInput::validate() const {
    chamber.validate();
    if (!(planck_length > 0.0) || !std::isfinite(planck_length))
        throw DomainError("undecidability: planck_length must be finite and > 0");
    if (!(radius > planck_length) || !std::isfinite(radius))
        throw DomainError("undecidability: need R > l_P");
}

double damping_exponent(const ChamberConfig& cfg) {
    cfg.validate();
    const double omega = precession_frequency(cfg);
    return 6.0 * static_cast<double>(cfg.spins) * omega * omega * std::pow(cfg.planck_time, 4.0 / 3.0) *
           std::cbrt(cfg.flight_time * cfg.flight_time);
}

double angular_bound(const UndecidabilityInput& inp) {
    if (!(inp.radius > 0.0)) throw DomainError("angular_bound: R must be > 0");
    return inp.planck_length / inp.radius;
}

namespace {

// ln(e^x + e^y)
double log_add(double x, double y) {
    const double hi = std::max(x, y), lo = std::min(x, y);
    if (lo == -std::numeric_limits<double>::infinity()) return hi;
    return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

LogMagnitude noise_floor(const UndecidabilityInput& inp, double spins) {
    const double dtheta = angular_bound(inp);
    if (!(dtheta > 0.0 && dtheta < 1.0)) throw DomainError("noise_floor: need 0 < delta_theta < 1");
    // ln Δθ from the inputs directly, so it stays exact when Δθ itself is subnormal.
    const double ln_dtheta = std::log(inp.planck_length) - std::log(inp.radius);
    double ln = 2.0 * spins * ln_dtheta;
    if (inp.extra_noise_ln) ln = log_add(ln, *inp.extra_noise_ln);
    return {ln};
}

LogMagnitude strong_damping_bound(const ChamberConfig& cfg, double spins) {
    const double ln = 5.0 * std::log(spins) + (4.0 / 3.0) * std::log(cfg.planck_time) +
                      (20.0 / 3.0) * std::log(cfg.hbar) - 4.0 * std::log(cfg.env_mass) -
                      (8.0 / 3.0) * std::log(cfg.gamma1 * cfg.gamma2) - (8.0 / 3.0) * std::log(cfg.permeability);
    return {ln};
}

namespace {

void require_threshold_inputs(const ChamberConfig& cfg) {
    if (!(cfg.gamma1 * cfg.gamma2 > 0.0)) throw DomainError("threshold_spins: need gamma1*gamma2 > 0");
}

}  // namespace

double threshold_spins(const UndecidabilityInput& inp) {
    inp.validate();
    const auto& c = inp.chamber;
    require_threshold_inputs(c);
    if (c.planck_time == 0.0) return std::numeric_limits<double>::infinity();
    const double ln_inner = std::log(2.0 * std::log(inp.radius / inp.planck_length)) + 4.0 * std::log(c.env_mass) +
                            (8.0 / 3.0) * std::log(c.gamma1 * c.gamma2) + (8.0 / 3.0) * std::log(c.permeability) -
                            (4.0 / 3.0) * std::log(c.planck_time) - (20.0 / 3.0) * std::log(c.hbar);
    return std::exp(0.25 * ln_inner);
}

double threshold_spins_printed(const UndecidabilityInput& inp) {
    inp.validate();
    const auto& c = inp.chamber;
    require_threshold_inputs(c);
    const double ln_gg = std::log(c.gamma1 * c.gamma2);
    const double ln_inner = std::log(2.0 * std::log(inp.radius / inp.planck_length)) +
                            (2.0 / 3.0) * (std::log(c.env_mass) + 4.0 * ln_gg) +
                            (8.0 / 3.0) * std::log(c.permeability) - (4.0 / 3.0) * std::log(c.duration) -
                            (20.0 / 3.0) * std::log(c.hbar);
    return std::exp(0.25 * ln_inner + std::log(c.env_mass) + 2.0 * ln_gg);
}

std::optional<Crossover> solve_crossover(const std::function<double(double)>& signal_ln,
                                         const std::function<double(double)>& noise_ln) {
    auto below = [&](double n) { return signal_ln(n) - noise_ln(n); };
    if (below(1.0) < 0.0) return Crossover{1.0, 1};
    double lo = 1.0, hi = 2.0;
    while (below(hi) >= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 0x1.0p60) return std::nullopt;
    }
    while (hi - lo > 1e-13 * hi) {
        const double mid = 0.5 * (lo + hi);
        (below(mid) < 0.0 ? hi : lo) = mid;
    }
    const double root = 0.5 * (lo + hi);
    auto first = static_cast<long long>(std::ceil(root));
    while (below(static_cast<double>(first)) >= 0.0) ++first;
    while (first > 1 && below(static_cast<double>(first - 1)) < 0.0) --first;
    return Crossover{root, first};
}

UndecidabilityReport report(const UndecidabilityInput& inp) {
    inp.validate();
    const auto& c = inp.chamber;
    UndecidabilityReport r;
    r.K = damping_exponent(c);
    r.signal = {-r.K};
    r.delta_theta = angular_bound(inp);
    r.noise = noise_floor(inp, static_cast<double>(c.spins));
    r.undecidable = r.signal < r.noise;
    if (c.gamma1 * c.gamma2 > 0.0) {
        r.N_threshold = threshold_spins(inp);
        r.N_threshold_printed = threshold_spins_printed(inp);
        if (c.planck_time > 0.0) {
            r.crossover = solve_crossover([&](double n) { return -strong_damping_bound(c, n).value(); },
                                          [&](double n) { return noise_floor(inp, n).ln; });
        }
    } else {
        r.N_threshold = std::numeric_limits<double>::quiet_NaN();
        r.N_threshold_printed = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

}  // namespace timeless
