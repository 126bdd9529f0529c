// undecidability.hpp: When the unitary signal sinks below the noise floor
//
// Signal: ⟨M⟩ ~ e^{−K}, K = 6NΩ²T_P^{4/3}τ^{2/3}. Noise: angular resolution
// Δθ ≥ l_P/R enters as (Δθ)^{2N}. Everything is compared through natural
// logarithms, since both sides underflow double precision at realistic N.

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>

#include "timeless/chamber.hpp"

namespace timeless {

// A positive number held by its natural logarithm.
struct LogMagnitude {
    double ln = 0.0;

    static LogMagnitude from_value(double value);
    double log10() const noexcept { return ln / std::numbers::ln10; }
    double value() const noexcept { return std::exp(ln); }  // may underflow to 0

    friend bool operator<(LogMagnitude x, LogMagnitude y) noexcept { return x.ln < y.ln; }
};

struct UndecidabilityInput {
    ChamberConfig chamber;
    double planck_length = 1.0;  // l_P
    double radius = 1.0;         // R, same length units
    // ln of an extra noise contribution added to (Δθ)^{2N}; none by default.
    std::optional<double> extra_noise_ln;

    void validate() const;
};

double damping_exponent(const ChamberConfig& cfg);

// Δθ = l_P / R
double angular_bound(const UndecidabilityInput& inp);

// (Δθ)^{2N} [+ e^{extra}]
LogMagnitude noise_floor(const UndecidabilityInput& inp, double spins);

// N⁵·T_P^{4/3}ħ^{20/3} / (m⁴(γ1γ2)^{8/3}μ^{8/3}): the lower bound on K,
// as a function of N, used with equality for crossover estimates.
LogMagnitude strong_damping_bound(const ChamberConfig& cfg, double spins);

// [2 ln(R/l_P) · m⁴ (γ1γ2)^{8/3} μ^{8/3} / (T_P^{4/3} ħ^{20/3})]^{1/4}, the N at
// which the strong bound equals the noise exponent. Dimensionless.
double threshold_spins(const UndecidabilityInput& inp);

// The closed expression with the experiment duration T in place of T_P and an
// extra factor m(γ1γ2)², evaluated as written. Not dimensionless.
double threshold_spins_printed(const UndecidabilityInput& inp);

struct Crossover {
    double root;       // continuous N where ln signal = ln noise
    long long first;   // smallest integer N with signal < noise
};

// Smallest N ≥ 1 with signal_ln(N) < noise_ln(N), assuming the difference
// changes sign once. Empty when no crossover is found below 2^60.
std::optional<Crossover> solve_crossover(const std::function<double(double)>& signal_ln,
                                         const std::function<double(double)>& noise_ln);

struct UndecidabilityReport {
    double K = 0.0;
    LogMagnitude signal;
    double delta_theta = 0.0;
    LogMagnitude noise;
    double N_threshold = 0.0;          // threshold_spins
    double N_threshold_printed = 0.0;  // threshold_spins_printed
    std::optional<Crossover> crossover;  // strong bound taken with equality: an estimate
    bool undecidable = false;
};

UndecidabilityReport report(const UndecidabilityInput& inp);

}  // namespace timeless
