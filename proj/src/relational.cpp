#include "timeless/relational.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace timeless {

// --------------------------------------------------------------------------
// Classical relativistic particle
// --------------------------------------------------------------------------

bool PhaseSpacePoint::on_shell(double tolerance) const noexcept { return std::abs(constraint()) <= tolerance; }

PhaseSpacePoint on_shell_point(double q0, double q, double p, double mass, EnergyBranch branch) {
    if (!(mass > 0.0)) throw DomainError("on_shell_point: mass must be > 0");
    const double energy = std::hypot(p, mass);
    return {q0, q, branch == EnergyBranch::positive ? energy : -energy, p, mass};
}

DiracObservables dirac_observables(const PhaseSpacePoint& pt) {
    if (!(pt.mass > 0.0)) throw DomainError("dirac_observables: mass must be > 0");
    const double energy = std::hypot(pt.p, pt.mass);
    return {pt.p, pt.q - pt.p * pt.q0 / energy};
}

double evolving_constant(const PhaseSpacePoint& pt, double parameter) {
    const auto [p, x] = dirac_observables(pt);
    return x + p * parameter / std::hypot(p, pt.mass);
}

namespace {

enum Coordinate { q0_c, q_c, p0_c, p_c };

double& coordinate(PhaseSpacePoint& pt, Coordinate c) {
    switch (c) {
        case q0_c: return pt.q0;
        case q_c: return pt.q;
        case p0_c: return pt.p0;
        case p_c: return pt.p;
    }
    return pt.q;
}

double partial(const PhaseSpaceFunction& f, const PhaseSpacePoint& pt, Coordinate c) {
    PhaseSpacePoint plus = pt, minus = pt;
    const double h = 1e-6 * std::max(1.0, std::abs(coordinate(plus, c)));
    coordinate(plus, c) += h;
    coordinate(minus, c) -= h;
    return (f(plus) - f(minus)) / (2.0 * h);
}

}  // namespace

double poisson_bracket(const PhaseSpaceFunction& f, const PhaseSpaceFunction& g, const PhaseSpacePoint& pt) {
    double out = 0.0;
    for (auto [qc, pc] : std::array{std::pair{q0_c, p0_c}, std::pair{q_c, p_c}})
        out += partial(f, pt, pc) * partial(g, pt, qc) - partial(f, pt, qc) * partial(g, pt, pc);
    return out;
}

double poisson_bracket_check(const PhaseSpaceFunction& f, const PhaseSpacePoint& pt) {
    return poisson_bracket(f, [](const PhaseSpacePoint& x) { return x.constraint(); }, pt);
}

PhaseSpacePoint constraint_flow(const PhaseSpacePoint& pt, double lambda, int steps) {
    if (steps <= 0) throw DomainError("constraint_flow: steps must be positive");
    // dF/dλ = {F, φ}: q0' = −2p0, q' = 2p, momenta constant.
    using State = std::array<double, 4>;
    auto rhs = [](const State& s) { return State{-2.0 * s[2], 2.0 * s[3], 0.0, 0.0}; };
    State s{pt.q0, pt.q, pt.p0, pt.p};
    const double h = lambda / steps;
    auto axpy = [](const State& a, double c, const State& b) {
        State r;
        for (int i = 0; i < 4; ++i) r[i] = a[i] + c * b[i];
        return r;
    };
    for (int i = 0; i < steps; ++i) {
        const State k1 = rhs(s), k2 = rhs(axpy(s, h / 2, k1)), k3 = rhs(axpy(s, h / 2, k2)),
                    k4 = rhs(axpy(s, h, k3));
        for (int j = 0; j < 4; ++j) s[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    }
    return {s[0], s[1], s[2], s[3], pt.mass};
}

// --------------------------------------------------------------------------
// Discretized particles
// --------------------------------------------------------------------------

PeriodicGrid::PeriodicGrid(Eigen::Index points, double length) : points_(points), length_(length) {
    if (points < 2) throw DomainError("PeriodicGrid: need at least two points");
    if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("PeriodicGrid: length must be finite and > 0");
}

double PeriodicGrid::wavenumber(Eigen::Index j) const noexcept {
    const Eigen::Index signed_index = j < (points_ + 1) / 2 ? j : j - points_;
    return 2.0 * std::numbers::pi * static_cast<double>(signed_index) / length_;
}

Matrix PeriodicGrid::fourier() const {
    Matrix f(points_, points_);
    const double norm = 1.0 / std::sqrt(static_cast<double>(points_));
    for (Eigen::Index j = 0; j < points_; ++j)
        for (Eigen::Index k = 0; k < points_; ++k) {
            const auto jk = (j * k) % points_;
            f(j, k) = std::polar(norm, -2.0 * std::numbers::pi * static_cast<double>(jk) / static_cast<double>(points_));
        }
    return f;
}

HermitianOperator PeriodicGrid::position_operator() const {
    RealVector x(points_);
    for (Eigen::Index j = 0; j < points_; ++j) x(j) = position(j);
    return HermitianOperator::diagonal(x);
}

HermitianOperator PeriodicGrid::momentum_operator() const {
    const Matrix f = fourier();
    Vector k(points_);
    for (Eigen::Index j = 0; j < points_; ++j) k(j) = wavenumber(j);
    return HermitianOperator::from_matrix(f.adjoint() * k.asDiagonal() * f);
}

double PeriodicGrid::wrapped_offset(double x, double centre) const noexcept {
    double d = std::fmod(x - centre + 0.5 * length_, length_);
    if (d < 0.0) d += length_;
    return d - 0.5 * length_;
}

HermitianOperator free_particle(const PeriodicGrid& grid, double mass, double drift_velocity) {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("free_particle: mass must be finite and > 0");
    const Matrix f = grid.fourier();
    Vector energy(grid.size());
    for (Eigen::Index j = 0; j < grid.size(); ++j) {
        const double k = grid.wavenumber(j);
        energy(j) = k * k / (2.0 * mass) + drift_velocity * k;
    }
    return HermitianOperator::from_matrix(f.adjoint() * energy.asDiagonal() * f);
}

StateVector gaussian_packet(const PeriodicGrid& grid, double centre, double width, double momentum) {
    if (!(width > 0.0)) throw DomainError("gaussian_packet: width must be > 0");
    Vector psi(grid.size());
    for (Eigen::Index j = 0; j < grid.size(); ++j) {
        const double d = grid.wrapped_offset(grid.position(j), centre);
        psi(j) = std::polar(std::exp(-d * d / (4.0 * width * width)), momentum * d);
    }
    return StateVector::normalized(std::move(psi));
}

// --------------------------------------------------------------------------
// Conditional probability
// --------------------------------------------------------------------------

void ConditionalQuery::validate() const {
    if (!(observable.halfwidth > 0.0)) throw DomainError("conditional query: observable halfwidth must be > 0");
    if (!(reading.halfwidth > 0.0)) throw DomainError("conditional query: reading halfwidth must be > 0");
    if (!(window.halfwidth > 0.0) || !std::isfinite(window.halfwidth))
        throw DomainError("conditional query: time window halfwidth must be finite and > 0");
}

void TwoSubsystemModel::validate() const {
    if (system_observable.dim() != system_hamiltonian.dim())
        throw StructuralError("two-subsystem model: system observable and Hamiltonian dimensions differ");
    if (clock_observable.dim() != clock_hamiltonian.dim())
        throw StructuralError("two-subsystem model: clock observable and Hamiltonian dimensions differ");
    if (system_hamiltonian.dim() > kMaxConditionalDim / clock_hamiltonian.dim()) {
        std::ostringstream os;
        os << "two-subsystem model: total dimension exceeds " << kMaxConditionalDim;
        throw CapacityError(os.str());
    }
}

namespace {

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

}  // namespace

ConditionalEvaluator::ConditionalEvaluator(const TwoSubsystemModel& model, const DensityMatrix& rho,
                                           Interval reading, TimeWindow window, double convergence_tolerance)
    : model_((model.validate(), model)),
      system_es_(model.system_hamiltonian),
      clock_es_(model.clock_hamiltonian),
      reading_projector_(interval_projector(model.clock_observable, reading.centre - reading.halfwidth,
                                            reading.centre + reading.halfwidth)),
      window_(window),
      tolerance_(convergence_tolerance) {
    if (rho.dim() != model.dim()) throw StructuralError("conditional probability: state dimension does not match model");
    if (!(reading.halfwidth > 0.0)) throw DomainError("conditional probability: reading halfwidth must be > 0");
    if (!(window.halfwidth > 0.0) || !std::isfinite(window.halfwidth))
        throw DomainError("conditional probability: time window halfwidth must be finite and > 0");

    const Matrix v = kron(system_es_.vectors(), clock_es_.vectors());
    rho_eigen_ = v.adjoint() * rho.matrix() * v;

    Eigensystem observable_es(model.system_observable);
    system_spectrum_ = observable_es.energies();

    narrow_ = average(window.halfwidth);
    wide_ = average(2.0 * window.halfwidth);
    if (!(wide_.denominator >= 1e-14)) {
        std::ostringstream os;
        os << "conditional probability: clock never reads T0 = " << reading.centre
           << " (time-averaged reading probability " << wide_.denominator << ")";
        throw DomainError(os.str());
    }
}

ConditionalEvaluator::Averaged ConditionalEvaluator::average(double halfwidth) const {
    const auto ns = system_es_.dim(), nc = clock_es_.dim();
    const auto n = ns * nc;
    RealVector energy(n);
    for (Eigen::Index i = 0; i < ns; ++i)
        for (Eigen::Index j = 0; j < nc; ++j) energy(i * nc + j) = system_es_.energies()(i) + clock_es_.energies()(j);

    // (1/2τ) ∫_{c−τ}^{c+τ} e^{−iωt} dt = e^{−iωc} sinc(ωτ)
    Matrix averaged(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) {
            const double w = energy(a) - energy(b);
            averaged(a, b) = rho_eigen_(a, b) * std::polar(sinc(w * halfwidth), -w * window_.centre);
        }
    const Matrix v = kron(system_es_.vectors(), clock_es_.vectors());
    const Matrix lab = v * averaged * v.adjoint();

    // Tr_clock[(I ⊗ P_T) ρ̄]
    const Matrix& pt = reading_projector_.matrix();
    Matrix marginal = Matrix::Zero(ns, ns);
    for (Eigen::Index i = 0; i < ns; ++i)
        for (Eigen::Index j = 0; j < ns; ++j)
            marginal(i, j) = pt.cwiseProduct(lab.block(i * nc, j * nc, nc, nc).transpose()).sum();
    return {marginal, marginal.trace().real()};
}

double ConditionalEvaluator::ratio(const Averaged& a, const Projector& observable) const {
    const double numerator = observable.matrix().cwiseProduct(a.clock_marginal.transpose()).sum().real();
    const double value = numerator / a.denominator;
    if (!(value >= -1e-9 && value <= 1.0 + 1e-9)) {
        std::ostringstream os;
        os << "conditional probability: value " << value << " outside [0,1]";
        throw NumericalError(os.str());
    }
    return std::clamp(value, 0.0, 1.0);
}

ConditionalResult ConditionalEvaluator::probability(Interval observable) const {
    if (!(observable.halfwidth > 0.0)) throw DomainError("conditional probability: observable halfwidth must be > 0");
    const Projector p = interval_projector(model_.system_observable, observable.centre - observable.halfwidth,
                                           observable.centre + observable.halfwidth);
    const double wide = ratio(wide_, p);
    const double change = std::abs(ratio(narrow_, p) - wide);
    if (change > tolerance_) {
        std::ostringstream os;
        os << "conditional probability: time window not converged (doubling changed the value by " << change << ")";
        throw NumericalError(os.str());
    }
    return {wide, change};
}

std::vector<double> ConditionalEvaluator::distribution() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(system_spectrum_.size()));
    const double scale = std::max(1.0, system_spectrum_.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < system_spectrum_.size(); ++i) {
        if (i > 0 && system_spectrum_(i) - system_spectrum_(i - 1) <= 1e-9 * scale) {
            out.push_back(0.0);  // degenerate partner, counted with the first
            continue;
        }
        out.push_back(probability({system_spectrum_(i), 1e-10 * scale}).probability);
    }
    return out;
}

ConditionalResult conditional_probability(const TwoSubsystemModel& model, const ConditionalQuery& query,
                                          const DensityMatrix& rho) {
    query.validate();
    return ConditionalEvaluator(model, rho, query.reading, query.window).probability(query.observable);
}

}  // namespace timeless
