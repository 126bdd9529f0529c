// zurek.hpp: Spin system coupled to a bath of two-level atoms
//
// H_int = Σ_k g_k σ_z ⊗ σ_z^k (ħ = 1). The system starts in a|+⟩ + b|−⟩ and
// atom k in α_k|+⟩ + β_k|−⟩. The evolved state is written in the product form
//   a|+⟩ ⊗_k [α_k e^{+ig_k t}|+⟩ + β_k e^{−ig_k t}|−⟩]
// + b|−⟩ ⊗_k [α_k e^{−ig_k t}|+⟩ + β_k e^{+ig_k t}|−⟩],
// which is e^{+iH_int t}|Ψ(0)⟩, and the system coherence is
//   ρ_{+−}(t) = z(t)·a·b*,  z(t) = Π_k [cos 2g_k t + i(|α_k|² − |β_k|²) sin 2g_k t].

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "timeless/clock.hpp"
#include "timeless/hilbert.hpp"
#include "timeless/random.hpp"

namespace timeless {

struct SpinBathConfig {
    std::vector<double> couplings;  // g_k
    Complex a{1.0, 0.0};
    Complex b{0.0, 0.0};
    std::vector<Complex> alpha;
    std::vector<Complex> beta;
    std::optional<std::uint64_t> seed;

    std::size_t size() const noexcept { return couplings.size(); }
    void validate() const;
};

namespace couplings {

std::vector<double> constant(std::size_t n, double g);
// g_k = k·g0, k = 1..n
std::vector<double> linear(std::size_t n, double g0);
std::vector<double> uniform(std::size_t n, double lo, double hi, Rng& rng);

}  // namespace couplings

// Amplitudes drawn with uniform |α_k|² ∈ [0,1] and uniform phases; the system
// amplitudes (a, b) are drawn the same way.
SpinBathConfig random_bath(std::vector<double> couplings, std::uint64_t seed);

// Same environment draw, with fixed system amplitudes.
SpinBathConfig random_bath(std::vector<double> couplings, Complex a, Complex b, std::uint64_t seed);

// α_k = β_k = 1/√2 for every atom.
SpinBathConfig balanced_bath(std::vector<double> couplings, Complex a, Complex b);

inline constexpr std::size_t kMaxBathSpins = 22;

struct CoherenceTrace {
    std::vector<double> times;
    std::vector<Complex> values;
};

Complex coherence_z(const SpinBathConfig& cfg, double t);
CoherenceTrace coherence_trace(const SpinBathConfig& cfg, std::span<const double> times);

StateVector initial_state(const SpinBathConfig& cfg);
StateVector evolved_state(const SpinBathConfig& cfg, double t);

// Dense 2^{N+1} operator; N is limited to 13.
HermitianOperator interaction_hamiltonian(const SpinBathConfig& cfg);

DensityMatrix reduced_density(const SpinBathConfig& cfg, double t);

struct Revival {
    double time;
    double magnitude;
};

// Interior local maxima of |z| on [0, t_max] at or above `threshold`,
// scanned with the given step and refined to 1e-9 in t.
std::vector<Revival> revival_search(const SpinBathConfig& cfg, double t_max, double step, double threshold = 0.9);

// Off-diagonal factor of the real-clock state, from the bath's product
// eigenbasis: z_eff(T) = Σ_s w_s e^{iω_s T} e^{−ω_s² b(T)} with
// ω_s = 2Σ_k g_k s_k over sign patterns s.
Complex clock_corrected_coherence(const SpinBathConfig& cfg, const ClockModel& clock, double reading);

// Distinct Bohr frequencies ω_s of z(t) with their merged weights.
struct FrequencyLine {
    double omega;
    double weight;
};
std::vector<FrequencyLine> coherence_spectrum(const SpinBathConfig& cfg);

// sup |z_eff| over the windows [m·period − halfwidth, m·period + halfwidth],
// m = 1..count.
std::vector<double> revival_window_suprema(const SpinBathConfig& cfg, const ClockModel& clock, double period,
                                           std::size_t count, double halfwidth);

}  // namespace timeless
