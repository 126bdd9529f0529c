// real_clock.hpp: Evolution of states described with a real clock
//
// Three engines for the same physics:
//   effective_density  quadrature of the unitarily evolved state against the
//                      clock's reading distribution
//   integrate_master   adaptive integration of
//                        dρ/dT = −i[H,ρ] − σ(T)[H,[H,ρ]]
//   closed_form        ρ_nm(T) = ρ_nm(0) e^{−iω_nm T} e^{−ω_nm² b(T)} in the
//                      energy eigenbasis

#pragma once

#include <span>
#include <vector>

#include "timeless/clock.hpp"
#include "timeless/hilbert.hpp"

namespace timeless {

struct EvolutionResult {
    enum class Method { quadrature, master_equation, closed_form };

    std::vector<double> times;
    std::vector<DensityMatrix> states;
    Method method = Method::closed_form;
};

const char* to_string(EvolutionResult::Method method) noexcept;

DensityMatrix effective_density(const HermitianOperator& hamiltonian, const DensityMatrix& rho,
                                const ClockModel& clock, double reading);

struct MasterOptions {
    double atol = 1e-13;
    double rtol = 1e-12;
    double initial_step = 0.0;  // 0: chosen from the grid
    std::size_t max_steps = 10'000'000;
};

// The initial state is the state at T = 0. Integration starts at grid[0]
// from the closed-form state there, which for an Ng–Van Dam clock sidesteps
// the integrable T^{-1/3} singularity of σ(T) at the origin.
EvolutionResult integrate_master(const HermitianOperator& hamiltonian, const DensityMatrix& rho0,
                                 const ClockModel& clock, std::span<const double> grid,
                                 const MasterOptions& options = {});

DensityMatrix closed_form(const HermitianOperator& hamiltonian, const DensityMatrix& rho0, const ClockModel& clock,
                          double reading);

// Ng–Van Dam clock with unit prefactor.
DensityMatrix closed_form(const HermitianOperator& hamiltonian, const DensityMatrix& rho0, double planck_time,
                          double reading);

EvolutionResult closed_form_series(const HermitianOperator& hamiltonian, const DensityMatrix& rho0,
                                   const ClockModel& clock, std::span<const double> grid);

EvolutionResult quadrature_series(const HermitianOperator& hamiltonian, const DensityMatrix& rho0,
                                  const ClockModel& clock, std::span<const double> grid);

std::vector<double> purity_series(const EvolutionResult& result);

}  // namespace timeless
