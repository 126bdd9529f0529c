// chamber.hpp: Central spin in a cavity crossed by a stream of spins
//
// Pair Hamiltonian for environment spin k (frequency units, S = σ/2):
//   H_k = γ1 B S_z ⊗ I + γ2 B I ⊗ S_z + f_k (S_x S_x + S_y S_y + S_z S_z).
// The global observable M = σ_x ⊗ σ_x ⊗ … ⊗ σ_x has eigenvalues ±1.
// Dimensional inputs (μ, d, m, ħ, T) enter only the feasibility conditions.

#pragma once

#include <optional>
#include <vector>

#include "timeless/hilbert.hpp"

namespace timeless {

struct ChamberConfig {
    std::size_t spins = 1;        // N
    double field = 1.0;           // B
    double gamma1 = 1.0;          // central spin moment
    double gamma2 = 0.0;          // environment spin moment
    std::vector<double> couplings;  // f_k
    double flight_time = 1.0;     // τ
    double duration = 1.0;        // T, length of the experiment
    double env_mass = 1.0;        // m
    double impact_parameter = 1.0;  // d
    double permeability = 1.0;    // μ
    double hbar = 1.0;
    double planck_time = 0.0;     // T_P; 0 disables the clock correction
    Complex a{1.0, 0.0};
    Complex b{0.0, 0.0};
    std::vector<Complex> alpha;
    std::vector<Complex> beta;
    std::optional<double> aperture;  // admissible spread for condition (b)
    double decoherence_ratio = 0.1;  // weak coupling read as f ≤ ratio·|B(γ1−γ2)|

    void validate() const;
};

// N spins with equal couplings and identical amplitudes; a = b = 1/√2.
ChamberConfig uniform_chamber(std::size_t spins, double coupling, Complex alpha, Complex beta);

double pair_frequency(const ChamberConfig& cfg, std::size_t k);

// Ω = B(γ1 − γ2)
double precession_frequency(const ChamberConfig& cfg);

// θ = (3/2) T_P^{4/3} τ^{2/3}
double clock_theta(const ChamberConfig& cfg);

HermitianOperator build_hamiltonian(const ChamberConfig& cfg, std::size_t k);

// Sum of the pair Hamiltonians embedded in the (N+1)-spin space.
HermitianOperator total_hamiltonian(const ChamberConfig& cfg);

inline constexpr std::size_t kMaxExplicitChamberSpins = 12;
inline constexpr std::size_t kMaxChamberStateSpins = 22;

// Explicit matrix, N ≤ 12.
HermitianOperator collapse_witness(const ChamberConfig& cfg);

// ⟨ψ|M|ψ⟩ without forming M: M flips every bit of the basis index.
double witness_expectation(const StateVector& psi);
double witness_expectation(const DensityMatrix& rho);

StateVector chamber_initial_state(const ChamberConfig& cfg);

// The two branch terms of the closed-form expectation values.
struct BranchPair {
    Complex first;
    Complex second;
    double value() const;
};

// ab* Π_k[(α_kβ_k* + α_k*β_k) e^{−2iΩ_kτ}] + a*b Π_k[(α_kβ_k* + α_k*β_k) e^{2iΩ_kτ}]
BranchPair branches_unitary(const ChamberConfig& cfg);
double witness_unitary(const ChamberConfig& cfg);

// ab* e^{−2iNΩT} e^{−4NΩ²θ} Π_k[α_kβ_k* e^{−16B²γ1γ2θ} + α_k*β_k]
// + ba* e^{2iNΩT} e^{−4NΩ²θ} Π_k[α_kβ_k* + α_k*β_k e^{−16B²γ1γ2θ}]
BranchPair branches_corrected(const ChamberConfig& cfg);
double witness_corrected(const ChamberConfig& cfg);

struct Condition {
    bool evaluated = true;
    bool satisfied = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // for (a)–(c), ≥ 1 exactly when satisfied
};

struct FeasibilityReport {
    Condition coupling;    // (a) 1 < μγ1γ2τ/(ħd³)
    Condition dispersion;  // (b) √(ħT/m) against the aperture
    Condition basis;       // (c) max f_k ≤ ratio·|B(γ1−γ2)|
    Condition damping;     // (d) estimate exp(−6NΩ²T_P^{4/3}τ^{2/3}); always satisfied, margin = lhs
};

FeasibilityReport feasibility(const ChamberConfig& cfg);

}  // namespace timeless
