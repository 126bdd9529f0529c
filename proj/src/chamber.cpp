#include "timeless/chamber.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

namespace timeless {

void ChamberConfig::validate() const {
    if (spins == 0) throw DomainError("chamber: N must be >= 1");
    if (couplings.size() != spins || alpha.size() != spins || beta.size() != spins) {
        std::ostringstream os;
        os << "chamber: expected " << spins << " couplings/alpha/beta, got " << couplings.size() << "/"
           << alpha.size() << "/" << beta.size();
        throw StructuralError(os.str());
    }
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            std::ostringstream os;
            os << "chamber: " << name << " must be finite and > 0, got " << v;
            throw DomainError(os.str());
        }
    };
    positive(flight_time, "flight_time");
    positive(duration, "duration");
    positive(env_mass, "env_mass");
    positive(impact_parameter, "impact_parameter");
    positive(permeability, "permeability");
    positive(hbar, "hbar");
    positive(decoherence_ratio, "decoherence_ratio");
    if (aperture) positive(*aperture, "aperture");
    if (!(planck_time >= 0.0) || !std::isfinite(planck_time)) throw DomainError("chamber: planck_time must be >= 0");
    for (double v : {field, gamma1, gamma2})
        if (!std::isfinite(v)) throw DomainError("chamber: field and moments must be finite");
    for (double f : couplings)
        if (!std::isfinite(f)) throw DomainError("chamber: couplings must be finite");
    const double system_norm = std::norm(a) + std::norm(b);
    if (std::abs(system_norm - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "chamber: normalization |a|^2 + |b|^2 = " << system_norm << " != 1";
        throw DomainError(os.str());
    }
    for (std::size_t k = 0; k < spins; ++k) {
        const double n = std::norm(alpha[k]) + std::norm(beta[k]);
        if (std::abs(n - 1.0) > 1e-12) {
            std::ostringstream os;
            os << "chamber: normalization |alpha_" << k + 1 << "|^2 + |beta_" << k + 1 << "|^2 = " << n << " != 1";
            throw DomainError(os.str());
        }
    }
}

ChamberConfig uniform_chamber(std::size_t spins, double coupling, Complex alpha, Complex beta) {
    ChamberConfig cfg;
    cfg.spins = spins;
    cfg.couplings.assign(spins, coupling);
    cfg.alpha.assign(spins, alpha);
    cfg.beta.assign(spins, beta);
    const double s = std::numbers::sqrt2 / 2.0;
    cfg.a = s;
    cfg.b = s;
    return cfg;
}

double precession_frequency(const ChamberConfig& cfg) { return cfg.field * (cfg.gamma1 - cfg.gamma2); }

double pair_frequency(const ChamberConfig& cfg, std::size_t k) {
    if (k >= cfg.couplings.size()) {
        std::ostringstream os;
        os << "pair_frequency: index " << k << " out of range (N = " << cfg.couplings.size() << ")";
        throw StructuralError(os.str());
    }
    return std::hypot(2.0 * cfg.couplings[k], precession_frequency(cfg));
}

double clock_theta(const ChamberConfig& cfg) {
    return 1.5 * std::pow(cfg.planck_time, 4.0 / 3.0) * std::cbrt(cfg.flight_time * cfg.flight_time);
}

namespace {

Matrix spin(const Matrix& pauli) { return 0.5 * pauli; }

}  // namespace

HermitianOperator build_hamiltonian(const ChamberConfig& cfg, std::size_t k) {
    if (k >= cfg.couplings.size()) throw StructuralError("build_hamiltonian: spin index out of range");
    const Matrix sx = spin(sigma_x()), sy = spin(sigma_y()), sz = spin(sigma_z()), id = identity2();
    Matrix h = cfg.gamma1 * cfg.field * kron(sz, id) + cfg.gamma2 * cfg.field * kron(id, sz);
    h += cfg.couplings[k] * (kron(sx, sx) + kron(sy, sy) + kron(sz, sz));
    return HermitianOperator::from_matrix(std::move(h));
}

HermitianOperator total_hamiltonian(const ChamberConfig& cfg) {
    cfg.validate();
    if (cfg.spins > kMaxExplicitChamberSpins) {
        std::ostringstream os;
        os << "total_hamiltonian: N = " << cfg.spins << " exceeds the explicit-matrix limit " << kMaxExplicitChamberSpins;
        throw CapacityError(os.str());
    }
    const std::size_t n = cfg.spins;
    const Eigen::Index dim = Eigen::Index{1} << (n + 1);
    const Eigen::Index env = Eigen::Index{1} << n;
    Matrix total = Matrix::Zero(dim, dim);
    // Pair operator on (system, spin k): scatter its 4×4 entries over the
    // basis states that agree on the other spins.
    for (std::size_t k = 0; k < n; ++k) {
        const Matrix hk = build_hamiltonian(cfg, k).matrix();
        const int bit = static_cast<int>(n - 1 - k);
        for (Eigen::Index rest = 0; rest < env; ++rest) {
            if ((rest >> bit) & 1) continue;
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) {
                    const Eigen::Index row = (Eigen::Index(r >> 1) << n) | rest | (Eigen::Index(r & 1) << bit);
                    const Eigen::Index col = (Eigen::Index(c >> 1) << n) | rest | (Eigen::Index(c & 1) << bit);
                    total(row, col) += hk(r, c);
                }
        }
    }
    return HermitianOperator::from_matrix(std::move(total));
}

HermitianOperator collapse_witness(const ChamberConfig& cfg) {
    if (cfg.spins == 0) throw DomainError("collapse_witness: N must be >= 1");
    if (cfg.spins > kMaxExplicitChamberSpins) {
        std::ostringstream os;
        os << "collapse_witness: N = " << cfg.spins << " exceeds the explicit-matrix limit " << kMaxExplicitChamberSpins
           << "; use the analytic expectation values";
        throw CapacityError(os.str());
    }
    const Eigen::Index dim = Eigen::Index{1} << (cfg.spins + 1);
    Matrix m = Matrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) m(i, (dim - 1) ^ i) = 1.0;
    return HermitianOperator::from_matrix(std::move(m));
}

double witness_expectation(const StateVector& psi) {
    const Eigen::Index dim = psi.dim();
    if (dim < 2 || !std::has_single_bit(static_cast<std::uint64_t>(dim)))
        throw StructuralError("witness_expectation: dimension must be a power of two");
    Complex acc(0.0, 0.0);
    for (Eigen::Index i = 0; i < dim; ++i) acc += std::conj(psi[(dim - 1) ^ i]) * psi[i];
    return acc.real();
}

double witness_expectation(const DensityMatrix& rho) {
    const Eigen::Index dim = rho.dim();
    if (dim < 2 || !std::has_single_bit(static_cast<std::uint64_t>(dim)))
        throw StructuralError("witness_expectation: dimension must be a power of two");
    Complex acc(0.0, 0.0);
    for (Eigen::Index i = 0; i < dim; ++i) acc += rho((dim - 1) ^ i, i);
    return acc.real();
}

StateVector chamber_initial_state(const ChamberConfig& cfg) {
    cfg.validate();
    if (cfg.spins > kMaxChamberStateSpins) throw CapacityError("chamber_initial_state: N exceeds the state-vector limit");
    Vector psi(2);
    psi << cfg.a, cfg.b;
    for (std::size_t k = 0; k < cfg.spins; ++k) {
        Vector atom(2);
        atom << cfg.alpha[k], cfg.beta[k];
        psi = kron(psi, atom);
    }
    return StateVector::normalized(std::move(psi));
}

double BranchPair::value() const {
    const Complex sum = first + second;
    const double scale = std::max({1.0, std::abs(first), std::abs(second)});
    if (std::abs(sum.imag()) > 1e-10 * scale) {
        std::ostringstream os;
        os << "expectation of M: imaginary residue " << sum.imag();
        throw NumericalError(os.str());
    }
    return sum.real();
}

BranchPair branches_unitary(const ChamberConfig& cfg) {
    cfg.validate();
    Complex first = cfg.a * std::conj(cfg.b), second = std::conj(cfg.a) * cfg.b;
    for (std::size_t k = 0; k < cfg.spins; ++k) {
        const Complex bracket = cfg.alpha[k] * std::conj(cfg.beta[k]) + std::conj(cfg.alpha[k]) * cfg.beta[k];
        const double phase = 2.0 * pair_frequency(cfg, k) * cfg.flight_time;
        first *= bracket * std::polar(1.0, -phase);
        second *= bracket * std::polar(1.0, phase);
    }
    return {first, second};
}

double witness_unitary(const ChamberConfig& cfg) { return branches_unitary(cfg).value(); }

BranchPair branches_corrected(const ChamberConfig& cfg) {
    cfg.validate();
    const double n = static_cast<double>(cfg.spins);
    const double omega = precession_frequency(cfg);
    const double theta = clock_theta(cfg);
    const double envelope = std::exp(-4.0 * n * omega * omega * theta);
    const double cross = std::exp(-16.0 * cfg.field * cfg.field * cfg.gamma1 * cfg.gamma2 * theta);
    const double phase = 2.0 * n * omega * cfg.duration;
    Complex first = cfg.a * std::conj(cfg.b) * std::polar(envelope, -phase);
    Complex second = cfg.b * std::conj(cfg.a) * std::polar(envelope, phase);
    for (std::size_t k = 0; k < cfg.spins; ++k) {
        const Complex ab = cfg.alpha[k] * std::conj(cfg.beta[k]);
        const Complex ba = std::conj(cfg.alpha[k]) * cfg.beta[k];
        first *= ab * cross + ba;
        second *= ab + ba * cross;
    }
    return {first, second};
}

double witness_corrected(const ChamberConfig& cfg) { return branches_corrected(cfg).value(); }

FeasibilityReport feasibility(const ChamberConfig& cfg) {
    cfg.validate();
    FeasibilityReport r;

    r.coupling.lhs = cfg.permeability * cfg.gamma1 * cfg.gamma2 * cfg.flight_time /
                     (cfg.hbar * std::pow(cfg.impact_parameter, 3));
    r.coupling.rhs = 1.0;
    r.coupling.satisfied = r.coupling.lhs > r.coupling.rhs;
    r.coupling.margin = r.coupling.lhs / r.coupling.rhs;

    r.dispersion.lhs = std::sqrt(cfg.hbar * cfg.duration / cfg.env_mass);
    if (cfg.aperture) {
        r.dispersion.rhs = *cfg.aperture;
        r.dispersion.satisfied = r.dispersion.lhs <= r.dispersion.rhs;
        r.dispersion.margin = r.dispersion.rhs / r.dispersion.lhs;
    } else {
        r.dispersion.evaluated = false;
        r.dispersion.rhs = std::numeric_limits<double>::quiet_NaN();
        r.dispersion.margin = std::numeric_limits<double>::quiet_NaN();
    }

    double f_max = 0.0;
    for (double f : cfg.couplings) f_max = std::max(f_max, std::abs(f));
    r.basis.lhs = f_max;
    r.basis.rhs = cfg.decoherence_ratio * std::abs(precession_frequency(cfg));
    r.basis.satisfied = r.basis.lhs <= r.basis.rhs;
    r.basis.margin = r.basis.lhs == 0.0 ? std::numeric_limits<double>::infinity() : r.basis.rhs / r.basis.lhs;

    const double omega = precession_frequency(cfg);
    r.damping.lhs = std::exp(-6.0 * static_cast<double>(cfg.spins) * omega * omega *
                             std::pow(cfg.planck_time, 4.0 / 3.0) * std::cbrt(cfg.flight_time * cfg.flight_time));
    r.damping.rhs = 1.0;
    r.damping.satisfied = true;
    r.damping.margin = r.damping.lhs / r.damping.rhs;
    return r;
}

}  // namespace timeless
