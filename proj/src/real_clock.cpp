#include "timeless/real_clock.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "timeless/quadrature.hpp"

namespace timeless {

const char* to_string(EvolutionResult::Method method) noexcept {
    switch (method) {
        case EvolutionResult::Method::quadrature: return "quadrature";
        case EvolutionResult::Method::master_equation: return "master_equation";
        case EvolutionResult::Method::closed_form: return "closed_form";
    }
    return "unknown";
}

namespace {

void require_grid(std::span<const double> grid, const char* who) {
    if (grid.empty()) throw DomainError(std::string(who) + ": empty time grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            std::ostringstream os;
            os << who << ": grid not strictly increasing at index " << i;
            throw DomainError(os.str());
        }
    }
}

// Bohr frequencies with near-degeneracies snapped to exactly zero.
Eigen::MatrixXd bohr_frequencies(const RealVector& energies) {
    const auto n = energies.size();
    const double scale = std::max(1.0, energies.cwiseAbs().maxCoeff());
    Eigen::MatrixXd w(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double d = energies(i) - energies(j);
            w(i, j) = std::abs(d) <= 1e-12 * scale ? 0.0 : d;
        }
    return w;
}

// Σ_i w_i p(t_i) e^{-iω_nm t_i} over a composite rule on the ±8σ window.
Matrix smoothing_weights(const RealVector& energies, const ClockModel& clock,
                         double reading, const GaussLegendre& rule, std::size_t panels, double& mass) {
    const double sd = clock.reading_stddev(reading);
    std::vector<double> x, w;
    rule.composite(reading - 8.0 * sd, reading + 8.0 * sd, panels, x, w);
    const auto n = energies.size();
    Matrix acc = Matrix::Zero(n, n);
    Vector phase(n);
    mass = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double weight = w[i] * *clock.density(x[i], reading);
        mass += weight;
        // Phases relative to the reading keep the oscillation near the
        // centre of the window small.
        const double dt = x[i] - reading;
        for (Eigen::Index k = 0; k < n; ++k) phase(k) = std::polar(1.0, -energies(k) * dt);
        acc.noalias() += weight * (phase * phase.adjoint());
    }
    return acc;
}

}  // namespace

DensityMatrix effective_density(const HermitianOperator& hamiltonian, const DensityMatrix& rho,
                                const ClockModel& clock, double reading) {
    if (hamiltonian.dim() != rho.dim()) throw StructuralError("effective_density: H and rho dimensions differ");
    if (clock.exact(reading)) return evolve_unitary(hamiltonian, rho, reading);

    const Eigensystem es(hamiltonian);
    const Eigen::MatrixXd omega = bohr_frequencies(es.energies());
    const GaussLegendre rule(20);

    double mass = 0.0;
    std::size_t panels = 4;
    Matrix previous = smoothing_weights(es.energies(), clock, reading, rule, panels, mass);
    double disagreement = 0.0;
    constexpr std::size_t max_panels = std::size_t{1} << 14;
    while (true) {
        panels *= 2;
        double refined_mass = 0.0;
        Matrix refined = smoothing_weights(es.energies(), clock, reading, rule, panels, refined_mass);
        disagreement = (refined - previous).cwiseAbs().maxCoeff();
        previous = std::move(refined);
        mass = refined_mass;
        if (disagreement <= 1e-13) break;
        if (panels >= max_panels) {
            if (disagreement > 1e-8) {
                std::ostringstream os;
                os << "effective_density: quadrature did not converge (refinement disagreement " << disagreement
                   << " at " << panels << " panels)";
                throw NumericalError(os.str());
            }
            break;
        }
    }

    // Exact phase at the reading, smoothing factor from the quadrature.
    const auto n = es.dim();
    Matrix factor(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            factor(i, j) = std::polar(1.0, -omega(i, j) * reading) * (omega(i, j) == 0.0 ? Complex(mass) : previous(i, j));
    const Matrix smoothed = es.to_eigenbasis(rho.matrix()).cwiseProduct(factor) / mass;
    return DensityMatrix::from_trusted(es.from_eigenbasis(smoothed));
}

DensityMatrix closed_form(const HermitianOperator& hamiltonian, const DensityMatrix& rho0, const ClockModel& clock,
                          double reading) {
    if (hamiltonian.dim() != rho0.dim()) throw StructuralError("closed_form: H and rho dimensions differ");
    const double b = clock.spread(reading).b;
    const Eigensystem es(hamiltonian);
    const Eigen::MatrixXd omega = bohr_frequencies(es.energies());
    const auto n = es.dim();
    Matrix rho = es.to_eigenbasis(rho0.matrix());
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double w = omega(i, j);
            if (w == 0.0) continue;
            rho(i, j) *= std::polar(std::exp(-w * w * b), -w * reading);
        }
    return DensityMatrix::from_trusted(es.from_eigenbasis(rho));
}

DensityMatrix closed_form(const HermitianOperator& hamiltonian, const DensityMatrix& rho0, double planck_time,
                          double reading) {
    return closed_form(hamiltonian, rho0, ClockModel::ng_van_dam(planck_time), reading);
}

EvolutionResult closed_form_series(const HermitianOperator& hamiltonian, const DensityMatrix& rho0,
                                   const ClockModel& clock, std::span<const double> grid) {
    require_grid(grid, "closed_form_series");
    EvolutionResult out;
    out.method = EvolutionResult::Method::closed_form;
    out.times.assign(grid.begin(), grid.end());
    for (double T : grid) out.states.push_back(closed_form(hamiltonian, rho0, clock, T));
    return out;
}

EvolutionResult quadrature_series(const HermitianOperator& hamiltonian, const DensityMatrix& rho0,
                                  const ClockModel& clock, std::span<const double> grid) {
    require_grid(grid, "quadrature_series");
    EvolutionResult out;
    out.method = EvolutionResult::Method::quadrature;
    out.times.assign(grid.begin(), grid.end());
    for (double T : grid) out.states.push_back(effective_density(hamiltonian, rho0, clock, T));
    return out;
}

// --------------------------------------------------------------------------
// Dormand–Prince 5(4)
// --------------------------------------------------------------------------

namespace {

struct MasterRhs {
    const Matrix& h;
    const ClockModel& clock;

    Matrix operator()(double T, const Matrix& rho) const {
        const Matrix c = h * rho - rho * h;
        const double sigma = clock.spread(T).sigma;
        if (sigma == 0.0) return Complex(0.0, -1.0) * c;
        return Complex(0.0, -1.0) * c - sigma * (h * c - c * h);
    }
};

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b − b̂ (fifth minus embedded fourth order)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

EvolutionResult integrate_master(const HermitianOperator& hamiltonian, const DensityMatrix& rho0,
                                 const ClockModel& clock, std::span<const double> grid,
                                 const MasterOptions& options) {
    if (hamiltonian.dim() != rho0.dim()) throw StructuralError("integrate_master: H and rho dimensions differ");
    require_grid(grid, "integrate_master");
    if (clock.kind() == ClockModel::Kind::ng_van_dam && !(grid.front() > 0.0))
        throw DomainError("integrate_master: Ng-Van Dam clock needs a grid starting at T0 > 0");

    const MasterRhs f{hamiltonian.matrix(), clock};
    EvolutionResult out;
    out.method = EvolutionResult::Method::master_equation;
    out.times.assign(grid.begin(), grid.end());

    const DensityMatrix start = closed_form(hamiltonian, rho0, clock, grid.front());
    out.states.push_back(start);
    const double trace0 = start.trace();
    Matrix y = start.matrix();
    double T = grid.front();
    const double span = grid.back() - grid.front();
    double h = options.initial_step > 0.0 ? options.initial_step
                                          : std::max(1e-6 * std::max(1.0, std::abs(T)), 1e-3 * std::max(span, 1e-3));
    const double scale = std::max(1.0, detail::max_abs(hamiltonian.matrix()));
    h = std::min(h, 0.1 / scale);

    Matrix k1 = f(T, y);
    std::size_t steps = 0;
    for (std::size_t g = 1; g < grid.size(); ++g) {
        const double target = grid[g];
        while (T < target) {
            if (++steps > options.max_steps) throw NumericalError("integrate_master: step budget exhausted");
            bool last = false;
            double step = h;
            if (T + step >= target) {
                step = target - T;
                last = true;
            }
            if (step < 1e-14 * std::max(1.0, std::abs(T))) {
                std::ostringstream os;
                os << "integrate_master: step size underflow at T=" << T << " (stiff system)";
                throw NumericalError(os.str());
            }
            const Matrix k2 = f(T + c2 * step, y + step * (a21 * k1));
            const Matrix k3 = f(T + c3 * step, y + step * (a31 * k1 + a32 * k2));
            const Matrix k4 = f(T + c4 * step, y + step * (a41 * k1 + a42 * k2 + a43 * k3));
            const Matrix k5 = f(T + c5 * step, y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const Matrix k6 = f(T + step, y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const Matrix ynew = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const Matrix k7 = f(T + step, ynew);
            const Matrix err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            double ratio = 0.0;
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                const double tol =
                    options.atol + options.rtol * std::max(std::abs(y.data()[i]), std::abs(ynew.data()[i]));
                ratio = std::max(ratio, std::abs(err.data()[i]) / tol);
            }
            if (!std::isfinite(ratio)) throw NumericalError("integrate_master: non-finite error estimate");

            const double grow = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
            if (ratio <= 1.0) {
                T = last ? target : T + step;
                y = ynew;
                k1 = k7;
                // A step clipped to the grid must not shrink the next one.
                h = last ? std::max(h, step * grow) : step * grow;
            } else {
                h = step * std::max(0.2, grow);
            }
        }
        DensityMatrix state = DensityMatrix::from_trusted(y);
        if (std::abs(state.trace() - trace0) > 1e-10) {
            std::ostringstream os;
            os << "integrate_master: trace drifted by " << state.trace() - trace0 << " at T=" << T;
            throw NumericalError(os.str());
        }
        out.states.push_back(std::move(state));
    }
    return out;
}

std::vector<double> purity_series(const EvolutionResult& result) {
    std::vector<double> out;
    out.reserve(result.states.size());
    for (const auto& s : result.states) out.push_back(s.purity());
    return out;
}

}  // namespace timeless
