#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/oracles.hpp"
#include "timeless/real_clock.hpp"

using namespace timeless;

namespace {

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

HermitianOperator two_level(double omega) { return HermitianOperator::from_matrix(0.5 * omega * sigma_z()); }

DensityMatrix plus_x() { return DensityMatrix::from_matrix(Matrix::Constant(2, 2, 0.5)); }

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
    return out;
}

}  // namespace

TEST_SUITE("real_clock") {

TEST_CASE("effective density with an ideal clock is unitary evolution") {
    Rng rng(41);
    for (int trial = 0; trial < 5; ++trial) {
        const auto h = oracle::random_hermitian(3, rng);
        const auto rho = oracle::random_density(3, rng);
        const double T = rng.uniform(0.0, 5.0);
        CHECK(max_diff(effective_density(h, rho, ClockModel::ideal(), T).matrix(),
                       evolve_unitary(h, rho, T).matrix()) == 0.0);
    }
}

TEST_CASE("stationary states are unchanged by any clock") {
    Rng rng(43);
    const auto h = oracle::random_hermitian(3, rng);
    const Eigensystem es(h);
    Matrix diag = Matrix::Zero(3, 3);
    diag.diagonal() << 0.2, 0.5, 0.3;
    const auto rho = DensityMatrix::from_matrix(es.from_eigenbasis(diag));
    for (const auto& clock : {ClockModel::gaussian(0.7), ClockModel::ng_van_dam(0.2)})
        for (double T : {0.5, 3.0}) CHECK(max_diff(effective_density(h, rho, clock, T).matrix(), rho.matrix()) <= 1e-12);
}

TEST_CASE("gaussian clock on a two-level coherence matches an adaptive quadrature oracle") {
    // H = σ_z, ω = 2, s = 0.5: |ρ_01| = (1/2) e^{−ω²s²/2} = (1/2) e^{−1/2}.
    const auto h = HermitianOperator::from_matrix(sigma_z());
    const double s = 0.5, T = 1.0;
    const auto out = effective_density(h, plus_x(), ClockModel::gaussian(s), T);
    CHECK(std::abs(std::abs(out(0, 1)) - 0.5 * std::exp(-0.5)) <= 1e-12);

    const Complex reference = oracle::adaptive_simpson(
        [&](double t) { return 0.5 * std::polar(1.0, -2.0 * t) * oracle::gaussian_pdf(t, T, s); }, T - 10 * s,
        T + 10 * s, 1e-13);
    CHECK(std::abs(out(0, 1) - reference) <= 1e-8);
}

TEST_CASE("effective density reproduces gaussian damping for many frequencies") {
    for (double omega : {0.1, 1.0, 3.0, 7.5}) {
        for (double s : {0.05, 0.4, 1.2}) {
            const auto out = effective_density(two_level(omega), plus_x(), ClockModel::gaussian(s), 2.0);
            const Complex expected = 0.5 * std::polar(std::exp(-omega * omega * s * s / 2.0), -omega * 2.0);
            CHECK(std::abs(out(0, 1) - expected) <= 1e-8);
        }
    }
}

TEST_CASE("effective density agrees with the closed form for ng-van dam clocks") {
    Rng rng(47);
    const auto clock = ClockModel::ng_van_dam(0.1);
    for (int trial = 0; trial < 5; ++trial) {
        const auto h = oracle::random_hermitian(4, rng);
        const auto rho = oracle::random_density(4, rng);
        for (double T : {0.3, 2.0, 9.0})
            CHECK(max_diff(effective_density(h, rho, clock, T).matrix(), closed_form(h, rho, clock, T).matrix()) <=
                  1e-9);
    }
}

TEST_CASE("master equation with an ideal clock is unitary") {
    Rng rng(53);
    const auto h = oracle::random_hermitian(3, rng);
    const auto rho = oracle::random_density(3, rng);
    const auto grid = linspace(0.0, 5.0, 21);
    const auto result = integrate_master(h, rho, ClockModel::ideal(), grid);
    REQUIRE(result.states.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(max_diff(result.states[i].matrix(), evolve_unitary(h, rho, grid[i]).matrix()) <= 1e-9);
}

TEST_CASE("master equation leaves energy-diagonal states fixed") {
    const auto h = two_level(1.3);
    Matrix d = Matrix::Zero(2, 2);
    d.diagonal() << 0.7, 0.3;
    const auto rho = DensityMatrix::from_matrix(d);
    const auto grid = linspace(0.01, 10.0, 11);
    const auto result = integrate_master(h, rho, ClockModel::ng_van_dam(0.3), grid);
    for (const auto& s : result.states) CHECK(max_diff(s.matrix(), d) <= 1e-14);
}

TEST_CASE("master equation matches the closed form") {
    const auto h = two_level(1.0);
    const auto clock = ClockModel::ng_van_dam(0.1);
    const std::vector<double> grid{1e-3, 0.5, 1.0};
    const auto result = integrate_master(h, plus_x(), clock, grid);
    CHECK(max_diff(result.states.back().matrix(), closed_form(h, plus_x(), 0.1, 1.0).matrix()) <= 1e-6);

    Rng rng(59);
    for (int trial = 0; trial < 3; ++trial) {
        const auto hr = oracle::random_hermitian(3, rng);
        const auto rho = oracle::random_density(3, rng);
        const auto g = linspace(1e-3, 10.0, 40);
        const auto r = integrate_master(hr, rho, clock, g);
        double worst = 0.0, trace_drift = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            worst = std::max(worst, max_diff(r.states[i].matrix(), closed_form(hr, rho, clock, g[i]).matrix()));
            trace_drift = std::max(trace_drift, std::abs(r.states[i].trace() - r.states[0].trace()));
        }
        CHECK(worst <= 1e-6);
        CHECK(trace_drift <= 1e-10);
    }
}

TEST_CASE("master equation input validation") {
    const std::vector<double> bad{0.0, 1.0};
    CHECK_THROWS_AS(integrate_master(two_level(1.0), plus_x(), ClockModel::ng_van_dam(0.1), bad), DomainError);
    const std::vector<double> unsorted{1.0, 0.5};
    CHECK_THROWS_AS(integrate_master(two_level(1.0), plus_x(), ClockModel::ideal(), unsorted), DomainError);
}

TEST_CASE("closed form values") {
    const auto h = two_level(1.0);
    const auto out = closed_form(h, plus_x(), 0.1, 1.0);
    const double damping = std::exp(-std::pow(0.1, 4.0 / 3.0));
    // Independent evaluation of 0.1^{4/3}: cube root of 10^{-4}.
    CHECK(std::abs(damping - std::exp(-std::cbrt(1e-4))) <= 1e-15);
    CHECK(std::abs(std::abs(out(0, 1)) - 0.5 * damping) <= 1e-12);
    CHECK(std::abs(std::arg(out(0, 1)) - (-1.0)) <= 1e-12);

    // Degenerate block: H = diag(1, 1, 3).
    RealVector e(3);
    e << 1.0, 1.0, 3.0;
    Rng rng(61);
    const auto rho = oracle::random_density(3, rng);
    for (double T : {0.5, 5.0, 50.0}) {
        const auto r = closed_form(HermitianOperator::diagonal(e), rho, 0.3, T);
        CHECK(max_diff(r.matrix().topLeftCorner(2, 2), rho.matrix().topLeftCorner(2, 2)) <= 1e-15);
    }

    const auto small = two_level(0.1);
    for (double T : {0.5, 1.0, 3.0})
        CHECK(max_diff(closed_form(small, plus_x(), 1e-8, T).matrix(), evolve_unitary(small, plus_x(), T).matrix()) <=
              1e-12);
}

TEST_CASE("closed form coherences decay monotonically") {
    Rng rng(67);
    const auto h = oracle::random_hermitian(4, rng);
    const auto rho = oracle::random_density(4, rng);
    const Eigensystem es(h);
    Matrix last = es.to_eigenbasis(rho.matrix()).cwiseAbs().cast<Complex>();
    for (double T = 0.1; T < 20.0; T += 0.25) {
        const Matrix now = es.to_eigenbasis(closed_form(h, rho, 0.2, T).matrix()).cwiseAbs().cast<Complex>();
        for (Eigen::Index i = 0; i < 4; ++i)
            for (Eigen::Index j = 0; j < 4; ++j)
                if (i != j) CHECK(now(i, j).real() <= last(i, j).real() + 1e-14);
        last = now;
    }
}

TEST_CASE("purity series") {
    const auto h = two_level(1.0);
    const auto grid = linspace(0.1, 10.0, 50);
    const auto ideal = purity_series(closed_form_series(h, plus_x(), ClockModel::ideal(), grid));
    for (double p : ideal) CHECK(std::abs(p - 1.0) <= 1e-10);

    const auto decaying = purity_series(closed_form_series(h, plus_x(), ClockModel::ng_van_dam(0.1), grid));
    for (std::size_t i = 1; i < decaying.size(); ++i) CHECK(decaying[i] < decaying[i - 1]);

    const auto mixed = purity_series(
        closed_form_series(HermitianOperator::identity(3), DensityMatrix::maximally_mixed(3), ClockModel::gaussian(1.0), grid));
    for (double p : mixed) CHECK(std::abs(p - 1.0 / 3.0) <= 1e-15);

    const auto master = integrate_master(h, plus_x(), ClockModel::ideal(), grid);
    for (double p : purity_series(master)) CHECK(std::abs(p - 1.0) <= 1e-10);
}

TEST_CASE("outputs are valid density matrices") {
    Rng rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index dim = 2 + trial % 3;
        const auto h = oracle::random_hermitian(dim, rng, 2.0);
        const auto rho = oracle::random_density(dim, rng);
        const auto clock = trial % 2 ? ClockModel::gaussian(rng.uniform(0.0, 1.0))
                                     : ClockModel::ng_van_dam(rng.uniform(0.01, 0.5));
        const double T = rng.uniform(0.1, 10.0);
        for (const auto& s : {effective_density(h, rho, clock, T), closed_form(h, rho, clock, T)}) {
            const auto d = s.diagnostics();
            CHECK(d.valid());
            CHECK(d.purity <= 1.0 + 1e-10);
        }
    }
}

}  // TEST_SUITE
