// oracles.hpp: Independent reference computations for the test suites

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "timeless/chamber.hpp"
#include "timeless/hilbert.hpp"
#include "timeless/random.hpp"
#include "timeless/zurek.hpp"

namespace oracle {

using timeless::Complex;
using timeless::Matrix;
using timeless::Vector;

// Adaptive Simpson on a complex integrand.
inline Complex simpson_step(const std::function<Complex(double)>& f, double a, double b, Complex fa, Complex fm,
                            Complex fb, Complex whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const Complex flm = f(lm), frm = f(rm);
    const Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const Complex delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

inline Complex adaptive_simpson(const std::function<Complex(double)>& f, double a, double b, double tol = 1e-12) {
    const double m = 0.5 * (a + b);
    const Complex fa = f(a), fm = f(m), fb = f(b);
    const Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

inline double gaussian_pdf(double x, double mean, double sd) {
    const double u = (x - mean) / sd;
    return std::exp(-0.5 * u * u) / (sd * std::sqrt(2.0 * M_PI));
}

inline Vector random_vector(Eigen::Index dim, timeless::Rng& rng) {
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.complex_normal();
    return v;
}

inline timeless::StateVector random_state(Eigen::Index dim, timeless::Rng& rng) {
    return timeless::StateVector::normalized(random_vector(dim, rng));
}

// Random mixed state G G† / Tr(G G†) with a rank between 1 and dim.
inline timeless::DensityMatrix random_density(Eigen::Index dim, timeless::Rng& rng) {
    const Eigen::Index rank = 1 + static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(dim)) % dim;
    Matrix g(dim, rank);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < rank; ++j) g(i, j) = rng.complex_normal();
    Matrix rho = g * g.adjoint();
    rho /= rho.trace();
    return timeless::DensityMatrix::from_matrix(rho);
}

inline timeless::HermitianOperator random_hermitian(Eigen::Index dim, timeless::Rng& rng, double scale = 1.0) {
    Matrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
    return timeless::HermitianOperator::from_matrix(scale * 0.5 * (g + g.adjoint()));
}

// I ⊗ … ⊗ op ⊗ … ⊗ I over `sites` qubits, built by repeated Kronecker products.
inline Matrix on_site(const Matrix& op, std::size_t site, std::size_t sites) {
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t i = 0; i < sites; ++i) out = timeless::kron(out, i == site ? op : timeless::identity2());
    return out;
}

// Reduced system state of the spin bath from explicit Hamiltonian evolution.
// The product-form state is e^{+iH_int t}|Ψ(0)⟩, so the propagator is taken
// with the reversed sign.
// Σ g_k σz_0 σz_k, each term a Kronecker chain with two non-identity factors.
inline timeless::HermitianOperator zurek_hamiltonian(const timeless::SpinBathConfig& cfg) {
    const std::size_t n = cfg.size();
    Matrix h = Matrix::Zero(Eigen::Index{1} << (n + 1), Eigen::Index{1} << (n + 1));
    for (std::size_t k = 0; k < n; ++k) {
        Matrix term = timeless::sigma_z();
        for (std::size_t i = 1; i <= n; ++i) term = timeless::kron(term, i == k + 1 ? timeless::sigma_z() : timeless::identity2());
        h += cfg.couplings[k] * term;
    }
    return timeless::HermitianOperator::from_matrix(h);
}

inline timeless::DensityMatrix zurek_reduced(const timeless::SpinBathConfig& cfg, double t,
                                             const timeless::HermitianOperator& ham) {
    const std::size_t n = cfg.size();
    Vector psi0(2);
    psi0 << cfg.a, cfg.b;
    for (std::size_t k = 0; k < n; ++k) {
        Vector atom(2);
        atom << cfg.alpha[k], cfg.beta[k];
        psi0 = timeless::kron(psi0, atom);
    }
    const auto psi = timeless::evolve_unitary(ham, timeless::StateVector::normalized(psi0), -t);
    std::vector<Eigen::Index> dims(n + 1, 2);
    const std::size_t keep[] = {0};
    return timeless::partial_trace(psi, keep, dims);
}

inline timeless::DensityMatrix zurek_reduced(const timeless::SpinBathConfig& cfg, double t) {
    return zurek_reduced(cfg, t, zurek_hamiltonian(cfg));
}

// ⟨M⟩ after evolving the chamber's product state for the flight time under
// Σ_k H_k, with H_k assembled from single-site spin operators.
inline double chamber_expectation(const timeless::ChamberConfig& cfg) {
    const std::size_t n = cfg.spins, sites = n + 1;
    const Eigen::Index dim = Eigen::Index{1} << sites;
    const Matrix sx = 0.5 * timeless::sigma_x(), sy = 0.5 * timeless::sigma_y(), sz = 0.5 * timeless::sigma_z();
    Matrix h = Matrix::Zero(dim, dim);
    for (std::size_t k = 0; k < n; ++k) {
        h += cfg.gamma1 * cfg.field * on_site(sz, 0, sites) + cfg.gamma2 * cfg.field * on_site(sz, k + 1, sites);
        for (const Matrix* s : {&sx, &sy, &sz})
            h += cfg.couplings[k] * on_site(*s, 0, sites) * on_site(*s, k + 1, sites);
    }
    Vector psi0(2);
    psi0 << cfg.a, cfg.b;
    for (std::size_t k = 0; k < n; ++k) {
        Vector atom(2);
        atom << cfg.alpha[k], cfg.beta[k];
        psi0 = timeless::kron(psi0, atom);
    }
    const auto psi = timeless::evolve_unitary(timeless::HermitianOperator::from_matrix(h),
                                              timeless::StateVector::normalized(psi0), cfg.flight_time);
    Matrix m = Matrix::Identity(1, 1);
    for (std::size_t i = 0; i < sites; ++i) m = timeless::kron(m, timeless::sigma_x());
    return psi.amplitudes().dot(m * psi.amplitudes()).real();
}

inline timeless::ChamberConfig random_chamber(std::size_t spins, std::uint64_t seed) {
    timeless::Rng rng(seed);
    auto pair = [&] {
        const double w = rng.uniform();
        return std::pair{std::polar(std::sqrt(w), rng.phase()), std::polar(std::sqrt(1.0 - w), rng.phase())};
    };
    timeless::ChamberConfig cfg;
    cfg.spins = spins;
    auto [a, b] = pair();
    cfg.a = a;
    cfg.b = b;
    cfg.field = rng.uniform(0.5, 2.0);
    cfg.gamma1 = rng.uniform(1.0, 2.0);
    cfg.gamma2 = rng.uniform(0.1, 0.9);
    cfg.flight_time = rng.uniform(0.2, 1.5);
    cfg.duration = cfg.flight_time;
    for (std::size_t k = 0; k < spins; ++k) {
        cfg.couplings.push_back(rng.uniform(0.05, 0.5));
        auto [al, be] = pair();
        cfg.alpha.push_back(al);
        cfg.beta.push_back(be);
    }
    return cfg;
}

}  // namespace oracle
