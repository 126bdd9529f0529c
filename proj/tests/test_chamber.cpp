#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support/oracles.hpp"
#include "timeless/chamber.hpp"

using namespace timeless;

namespace {

const Complex kHalf(std::numbers::sqrt2 / 2.0, 0.0);

ChamberConfig simple(double f, double field, double g1, double g2) {
    auto cfg = uniform_chamber(1, f, kHalf, kHalf);
    cfg.field = field;
    cfg.gamma1 = g1;
    cfg.gamma2 = g2;
    return cfg;
}

}  // namespace

TEST_SUITE("chamber") {

TEST_CASE("pair frequency") {
    CHECK(pair_frequency(simple(0.0, 2.0, 3.0, 1.0), 0) == 4.0);
    CHECK(pair_frequency(simple(0.7, 2.0, 1.0, 1.0), 0) == doctest::Approx(1.4).epsilon(1e-15));
    CHECK(pair_frequency(simple(3.0, 2.0, 5.0, 1.0), 0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK_THROWS_AS(pair_frequency(simple(3.0, 2.0, 5.0, 1.0), 1), StructuralError);
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const auto cfg = oracle::random_chamber(3, 100 + i);
        for (std::size_t k = 0; k < 3; ++k) CHECK(pair_frequency(cfg, k) >= std::abs(precession_frequency(cfg)));
    }
}

TEST_CASE("pair hamiltonian") {
    const auto zeeman = build_hamiltonian(simple(0.0, 1.3, 2.0, 0.4), 0).matrix();
    CHECK((zeeman - Matrix(zeeman.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);

    const double f = 1.7;
    Eigen::SelfAdjointEigenSolver<Matrix> s(build_hamiltonian(simple(f, 0.0, 1.0, 1.0), 0).matrix());
    RealVector expected(4);
    expected << -0.75 * f, 0.25 * f, 0.25 * f, 0.25 * f;
    CHECK((s.eigenvalues() - expected).cwiseAbs().maxCoeff() <= 1e-12);

    const auto cfg = oracle::random_chamber(2, 7);
    const Matrix total_sz = 0.5 * (kron(sigma_z(), identity2()) + kron(identity2(), sigma_z()));
    for (std::size_t k = 0; k < 2; ++k) {
        const Matrix h = build_hamiltonian(cfg, k).matrix();
        CHECK((h * total_sz - total_sz * h).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("total hamiltonian is the sum of embedded pair terms") {
    const auto cfg = oracle::random_chamber(3, 9);
    const Matrix sx = 0.5 * sigma_x(), sy = 0.5 * sigma_y(), sz = 0.5 * sigma_z();
    Matrix h = Matrix::Zero(16, 16);
    for (std::size_t k = 0; k < 3; ++k) {
        h += cfg.gamma1 * cfg.field * oracle::on_site(sz, 0, 4) + cfg.gamma2 * cfg.field * oracle::on_site(sz, k + 1, 4);
        for (const Matrix* s : {&sx, &sy, &sz}) h += cfg.couplings[k] * oracle::on_site(*s, 0, 4) * oracle::on_site(*s, k + 1, 4);
    }
    CHECK((total_hamiltonian(cfg).matrix() - h).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("the global observable M") {
    auto cfg = uniform_chamber(1, 0.1, kHalf, kHalf);
    Eigen::SelfAdjointEigenSolver<Matrix> s(collapse_witness(cfg).matrix());
    CHECK(std::abs(s.eigenvalues()(0) + 1.0) <= 1e-14);
    CHECK(std::abs(s.eigenvalues()(3) - 1.0) <= 1e-14);

    for (std::size_t n = 1; n <= 4; ++n) {
        cfg = uniform_chamber(n, 0.1, kHalf, kHalf);
        const Matrix m = collapse_witness(cfg).matrix();
        const auto dim = m.rows();
        CHECK((m * m - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() == 0.0);
        Matrix expected = Matrix::Identity(1, 1);
        for (std::size_t i = 0; i <= n; ++i) expected = kron(expected, sigma_x());
        CHECK((m - expected).cwiseAbs().maxCoeff() == 0.0);
        for (Eigen::Index i = 0; i < dim; ++i) CHECK(expectation(collapse_witness(cfg), StateVector::basis(dim, i)) == 0.0);
    }

    // Collapsed states are diagonal in the z basis.
    Rng rng(13);
    const auto psi = oracle::random_state(8, rng);
    Matrix collapsed = Matrix::Zero(8, 8);
    collapsed.diagonal() = DensityMatrix::pure(psi).matrix().diagonal();
    const auto rho = DensityMatrix::from_matrix(collapsed);
    CHECK(expectation(collapse_witness(uniform_chamber(2, 0.1, kHalf, kHalf)), rho) == 0.0);
    CHECK(witness_expectation(rho) == 0.0);
    CHECK(std::abs(witness_expectation(psi) - expectation(collapse_witness(uniform_chamber(2, 0.1, kHalf, kHalf)), psi)) <=
          1e-15);

    CHECK_THROWS_AS(collapse_witness(uniform_chamber(13, 0.1, kHalf, kHalf)), CapacityError);
}

TEST_CASE("unitary expectation special cases") {
    auto cfg = oracle::random_chamber(3, 17);
    cfg.a = 1.0;
    cfg.b = 0.0;
    CHECK(witness_unitary(cfg) == 0.0);

    cfg = oracle::random_chamber(3, 19);
    cfg.alpha[1] = kHalf;
    cfg.beta[1] = Complex(0.0, kHalf.real());
    CHECK(std::abs(witness_unitary(cfg)) <= 1e-16);

    // At zero flight time the closed form is the initial-state value.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto c = oracle::random_chamber(1 + seed % 4, 200 + seed);
        c.flight_time = 1e-300;
        CHECK(std::abs(witness_unitary(c) - witness_expectation(chamber_initial_state(c))) <= 1e-12);
        CHECK(std::abs(oracle::chamber_expectation(c) - witness_expectation(chamber_initial_state(c))) <= 1e-12);
    }
}

TEST_CASE("corrected expectation") {
    auto cfg = oracle::random_chamber(3, 23);
    cfg.planck_time = 0.0;
    CHECK(clock_theta(cfg) == 0.0);
    const auto b = branches_corrected(cfg);
    const auto u = branches_unitary(cfg);
    CHECK(std::abs(std::abs(b.first) - std::abs(u.first)) <= 1e-14);
    CHECK(std::abs(std::abs(b.second) - std::abs(u.second)) <= 1e-14);

    // θ = 0 with f_k = 0 and T = τ: identical phases, identical values.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto c = oracle::random_chamber(1 + seed % 5, 300 + seed);
        c.planck_time = 0.0;
        c.couplings.assign(c.spins, 0.0);
        c.duration = c.flight_time;
        CHECK(std::abs(witness_corrected(c) - witness_unitary(c)) <= 1e-12);
    }

    // Triangle bound.
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto c = oracle::random_chamber(1 + seed % 6, 400 + seed);
        c.planck_time = 0.05 * (1 + seed % 3);
        const double omega = precession_frequency(c);
        double bound = 2.0 * std::abs(c.a) * std::abs(c.b) *
                       std::exp(-4.0 * c.spins * omega * omega * clock_theta(c));
        for (std::size_t k = 0; k < c.spins; ++k) bound *= 2.0 * std::abs(c.alpha[k]) * std::abs(c.beta[k]);
        CHECK(std::abs(witness_corrected(c)) <= bound * (1.0 + 1e-12));
    }
}

TEST_CASE("log branch magnitude is linear in N for identical spins") {
    const Complex alpha = std::polar(std::sqrt(0.3), 0.4), beta = std::polar(std::sqrt(0.7), -1.1);
    std::vector<double> logs;
    for (std::size_t n = 1; n <= 8; ++n) {
        auto cfg = uniform_chamber(n, 0.05, alpha, beta);
        cfg.field = 1.2;
        cfg.gamma1 = 1.5;
        cfg.gamma2 = 0.5;
        cfg.planck_time = 0.2;
        logs.push_back(std::log(std::abs(branches_corrected(cfg).first)));
    }
    for (std::size_t i = 2; i < logs.size(); ++i) CHECK(std::abs(logs[i] - 2 * logs[i - 1] + logs[i - 2]) <= 1e-6);

    // The envelope exponent doubles with N.
    auto one = uniform_chamber(1, 0.05, alpha, beta);
    one.planck_time = 0.2;
    auto two = uniform_chamber(2, 0.05, alpha, beta);
    two.planck_time = 0.2;
    const double e1 = 4.0 * 1 * std::pow(precession_frequency(one), 2) * clock_theta(one);
    const double e2 = 4.0 * 2 * std::pow(precession_frequency(two), 2) * clock_theta(two);
    CHECK(e2 == doctest::Approx(2 * e1).epsilon(1e-15));
}

TEST_CASE("feasibility conditions") {
    auto cfg = simple(1.0, 1.0, 2.0, 1.0);
    auto r = feasibility(cfg);
    CHECK_FALSE(r.basis.satisfied);
    CHECK(r.basis.lhs / (std::abs(precession_frequency(cfg))) == 1.0);
    CHECK_FALSE(r.dispersion.evaluated);

    cfg = simple(0.01, 1.0, 2.0, 1.0);
    cfg.planck_time = 0.1;
    cfg.flight_time = 1.0;
    r = feasibility(cfg);
    CHECK(r.basis.satisfied);
    CHECK(r.basis.margin >= 1.0);
    CHECK(std::abs(r.damping.lhs - std::exp(-6.0 * std::pow(0.1, 4.0 / 3.0))) <= 1e-15);
    CHECK(std::abs(std::log(r.damping.lhs) + 0.2785) <= 1e-4);

    const double before = r.coupling.lhs;
    cfg.impact_parameter *= 2.0;
    CHECK(feasibility(cfg).coupling.lhs == doctest::Approx(before / 8.0).epsilon(1e-15));
    CHECK(r.coupling.satisfied == (r.coupling.lhs > 1.0));

    cfg.aperture = 0.5;
    cfg.duration = 1.0;
    cfg.env_mass = 1.0;
    r = feasibility(cfg);
    CHECK(r.dispersion.evaluated);
    CHECK(r.dispersion.lhs == 1.0);
    CHECK_FALSE(r.dispersion.satisfied);
    CHECK(r.dispersion.margin == 0.5);
}

TEST_CASE("configuration validation") {
    auto cfg = oracle::random_chamber(2, 29);
    cfg.a = std::sqrt(0.9);
    cfg.b = 0.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = oracle::random_chamber(2, 31);
    cfg.flight_time = 0.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = oracle::random_chamber(2, 37);
    cfg.couplings.push_back(1.0);
    CHECK_THROWS_AS(cfg.validate(), StructuralError);
}

}  // TEST_SUITE
