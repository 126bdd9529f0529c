// relational.hpp: Evolving constants and clock-conditioned probabilities
//
// Classical side: the parameterized relativistic particle with constraint
// φ = p0² − p² − m², its Dirac observables p and X = q − p·q0/√(p²+m²), the
// evolving constant Q(t) = X + p·t/√(p²+m²), and a finite-difference Poisson
// bracket. Bracket convention: {A,B} = Σ (∂A/∂p ∂B/∂q − ∂A/∂q ∂B/∂p).
//
// Quantum side: conditional probability that a system observable lies in an
// interval given that a clock observable lies in another, with both
// projectors in the Heisenberg picture and integrated over a finite window of
// the unobservable parameter.

#pragma once

#include <functional>
#include <vector>

#include "timeless/hilbert.hpp"

namespace timeless {

// --------------------------------------------------------------------------
// Classical relativistic particle
// --------------------------------------------------------------------------

struct PhaseSpacePoint {
    double q0 = 0.0;
    double q = 0.0;
    double p0 = 0.0;
    double p = 0.0;
    double mass = 1.0;

    // φ = p0² − p² − m²
    double constraint() const noexcept { return p0 * p0 - p * p - mass * mass; }
    bool on_shell(double tolerance = 1e-9) const noexcept;
};

enum class EnergyBranch { positive, negative };

// p0 = ±√(p²+m²).
PhaseSpacePoint on_shell_point(double q0, double q, double p, double mass, EnergyBranch branch);

struct DiracObservables {
    double momentum;  // p
    double position;  // X
};

DiracObservables dirac_observables(const PhaseSpacePoint& pt);

double evolving_constant(const PhaseSpacePoint& pt, double parameter);

using PhaseSpaceFunction = std::function<double(const PhaseSpacePoint&)>;

// {f, g} by central differences over (q0,p0) and (q,p), step 1e-6 scaled by
// each coordinate's magnitude.
double poisson_bracket(const PhaseSpaceFunction& f, const PhaseSpaceFunction& g, const PhaseSpacePoint& pt);

// {f, φ}
double poisson_bracket_check(const PhaseSpaceFunction& f, const PhaseSpacePoint& pt);

// Moves the point along the Hamiltonian flow generated by φ for flow
// parameter `lambda` (classical RK4 with `steps` steps).
PhaseSpacePoint constraint_flow(const PhaseSpacePoint& pt, double lambda, int steps = 1000);

// --------------------------------------------------------------------------
// Discretized particles
// --------------------------------------------------------------------------

// n equally spaced points x_j = j·L/n on a ring of circumference L.
class PeriodicGrid {
public:
    PeriodicGrid(Eigen::Index points, double length);

    Eigen::Index size() const noexcept { return points_; }
    double length() const noexcept { return length_; }
    double spacing() const noexcept { return length_ / static_cast<double>(points_); }
    double position(Eigen::Index j) const noexcept { return static_cast<double>(j) * spacing(); }
    // Angular wavenumber of Fourier mode j in FFT ordering.
    double wavenumber(Eigen::Index j) const noexcept;

    // Unitary DFT, F_jk = e^{−2πi jk/n}/√n.
    Matrix fourier() const;

    HermitianOperator position_operator() const;
    HermitianOperator momentum_operator() const;

    // Ring distance from x to the centre, in (−L/2, L/2].
    double wrapped_offset(double x, double centre) const noexcept;

private:
    Eigen::Index points_;
    double length_;
};

// p²/(2·mass) + drift_velocity·p, diagonal in momentum. The drift term is a
// Galilean boost, so a packet moves at drift_velocity plus its own group velocity.
HermitianOperator free_particle(const PeriodicGrid& grid, double mass, double drift_velocity = 0.0);

// Gaussian |ψ(x)|² of standard deviation `width` centred at `centre` on the ring.
StateVector gaussian_packet(const PeriodicGrid& grid, double centre, double width, double momentum = 0.0);

// --------------------------------------------------------------------------
// Conditional probability
// --------------------------------------------------------------------------

struct Interval {
    double centre;
    double halfwidth;
};

struct TimeWindow {
    double centre;
    double halfwidth;
};

struct ConditionalQuery {
    Interval observable;  // O ∈ [O0 − Δ1, O0 + Δ1]
    Interval reading;     // T ∈ [T0 − Δ2, T0 + Δ2]
    TimeWindow window;    // range of the unobservable parameter

    void validate() const;
};

// System ⊗ clock, evolving independently: H = H_s ⊗ I + I ⊗ H_c.
struct TwoSubsystemModel {
    HermitianOperator system_hamiltonian;
    HermitianOperator clock_hamiltonian;
    HermitianOperator system_observable;
    HermitianOperator clock_observable;

    Eigen::Index dim() const noexcept { return system_hamiltonian.dim() * clock_hamiltonian.dim(); }
    void validate() const;
};

struct ConditionalResult {
    double probability;    // at the doubled window
    double window_change;  // |P(window) − P(doubled window)|
};

inline constexpr Eigen::Index kMaxConditionalDim = Eigen::Index{1} << 14;

// Precomputes the time-averaged joint state for one clock reading and window,
// then answers queries for any number of system intervals.
class ConditionalEvaluator {
public:
    ConditionalEvaluator(const TwoSubsystemModel& model, const DensityMatrix& rho, Interval reading,
                         TimeWindow window, double convergence_tolerance = 1e-6);

    ConditionalResult probability(Interval observable) const;

    // Conditional probability of each eigenvalue of the system observable
    // (its spectral distribution), at the doubled window.
    std::vector<double> distribution() const;
    const RealVector& system_spectrum() const noexcept { return system_spectrum_; }

private:
    struct Averaged {
        Matrix clock_marginal;  // Tr_clock[(I ⊗ P_T) ρ̄] on the system factor
        double denominator;
    };
    Averaged average(double halfwidth) const;
    double ratio(const Averaged& a, const Projector& observable) const;

    TwoSubsystemModel model_;
    Eigensystem system_es_;
    Eigensystem clock_es_;
    Projector reading_projector_;
    TimeWindow window_;
    double tolerance_;
    Matrix rho_eigen_;
    RealVector system_spectrum_;
    Averaged narrow_{};
    Averaged wide_{};
};

ConditionalResult conditional_probability(const TwoSubsystemModel& model, const ConditionalQuery& query,
                                          const DensityMatrix& rho);

}  // namespace timeless
