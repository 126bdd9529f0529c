// hilbert.hpp: Dense complex linear algebra for small Hilbert spaces
//
// States, density matrices, Hermitian operators and projectors as validated
// value types over Eigen matrices, plus the free functions that act on them:
// Kronecker products, partial traces, unitary evolution through a Hermitian
// eigendecomposition, and expectation values.
//
// Tensor-factor convention: in A ⊗ B the left factor carries the slow (most
// significant) index, i.e. |i⟩ ⊗ |j⟩ ↦ basis index i·dim(B) + j.
// Units: ħ = 1 throughout.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "timeless/errors.hpp"

namespace timeless {

template <std::floating_point Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <std::floating_point Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <std::floating_point Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using Matrix = CMatrix<double>;
using Vector = CVector<double>;
using RealVector = RVector<double>;

// Largest total dimension tensor() will build unless told otherwise.
inline constexpr Eigen::Index kDefaultMaxDim = Eigen::Index{1} << 24;

// Invariant tolerances, stated for double and rescaled by machine epsilon for
// other scalar types.
template <std::floating_point Real>
struct Tolerance {
    static constexpr Real scale =
        std::numeric_limits<Real>::epsilon() / Real(std::numeric_limits<double>::epsilon());
    static constexpr Real norm = Real(1e-12) * scale;
    static constexpr Real hermitian = Real(1e-12) * scale;
    static constexpr Real trace = Real(1e-12) * scale;
    static constexpr Real psd = Real(1e-10) * scale;
    static constexpr Real idempotent = Real(1e-10) * scale;
    static constexpr Real imaginary = Real(1e-10) * scale;
};

namespace detail {

template <typename Derived>
auto max_abs(const Eigen::MatrixBase<Derived>& m) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    return m.size() == 0 ? Real(0) : m.cwiseAbs().maxCoeff();
}

// Scale used for relative checks: entries of size ≲ 1 are compared absolutely.
template <typename Derived>
auto magnitude_scale(const Eigen::MatrixBase<Derived>& m) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    return std::max(Real(1), max_abs(m));
}

template <typename Derived>
auto hermiticity_error(const Eigen::MatrixBase<Derived>& m) {
    return max_abs(m - m.adjoint());
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        std::ostringstream os;
        os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
        throw StructuralError(os.str());
    }
    if (!m.allFinite()) throw DomainError(std::string(what) + ": non-finite entries");
}

inline Eigen::Index checked_product(Eigen::Index a, Eigen::Index b, Eigen::Index max_dim) {
    if (a <= 0 || b <= 0) throw StructuralError("tensor: factor dimension must be positive");
    if (a > max_dim / b) {
        std::ostringstream os;
        os << "tensor: dimension " << a << " x " << b << " exceeds the configured maximum " << max_dim;
        throw CapacityError(os.str());
    }
    return a * b;
}

}  // namespace detail

// --------------------------------------------------------------------------
// StateVector
// --------------------------------------------------------------------------

template <std::floating_point Real>
class BasicStateVector {
public:
    using Scalar = std::complex<Real>;
    using VectorType = CVector<Real>;

    // Rescales to unit norm. Zero or non-finite input is rejected.
    static BasicStateVector normalized(VectorType amplitudes) {
        const Real n = amplitudes.norm();
        if (amplitudes.size() == 0 || !(n > 0) || !std::isfinite(n)) {
            throw DomainError("state vector: cannot normalize an empty, zero or non-finite vector");
        }
        amplitudes /= n;
        return BasicStateVector(std::move(amplitudes));
    }

    // Accepts amplitudes that already have unit norm.
    static BasicStateVector from_amplitudes(VectorType amplitudes) {
        if (amplitudes.size() == 0) throw StructuralError("state vector: empty");
        const Real n = amplitudes.norm();
        if (!(std::abs(n - Real(1)) <= Tolerance<Real>::norm)) {
            std::ostringstream os;
            os << "state vector: norm " << n << " differs from 1";
            throw DomainError(os.str());
        }
        return BasicStateVector(std::move(amplitudes));
    }

    static BasicStateVector basis(Eigen::Index dim, Eigen::Index index) {
        if (dim <= 0 || index < 0 || index >= dim) throw StructuralError("state vector: basis index out of range");
        VectorType v = VectorType::Zero(dim);
        v(index) = Scalar(1);
        return BasicStateVector(std::move(v));
    }

    Eigen::Index dim() const noexcept { return amplitudes_.size(); }
    const VectorType& amplitudes() const noexcept { return amplitudes_; }
    Scalar operator[](Eigen::Index i) const { return amplitudes_(i); }

    // ⟨this|other⟩
    Scalar inner(const BasicStateVector& other) const {
        if (other.dim() != dim()) throw StructuralError("state vector: inner product dimension mismatch");
        return amplitudes_.dot(other.amplitudes_);
    }

private:
    explicit BasicStateVector(VectorType v) : amplitudes_(std::move(v)) {}
    VectorType amplitudes_;
};

// --------------------------------------------------------------------------
// DensityMatrix
// --------------------------------------------------------------------------

template <std::floating_point Real>
struct DensityDiagnostics {
    Real hermiticity_error{};
    Real trace_error{};
    Real min_eigenvalue{};
    Real purity{};

    bool valid() const noexcept {
        return hermiticity_error <= Tolerance<Real>::hermitian && trace_error <= Tolerance<Real>::trace &&
               min_eigenvalue >= -Tolerance<Real>::psd;
    }
};

template <std::floating_point Real>
class BasicDensityMatrix {
public:
    using Scalar = std::complex<Real>;
    using MatrixType = CMatrix<Real>;

    // Validates Hermiticity, unit trace and positive semidefiniteness.
    static BasicDensityMatrix from_matrix(MatrixType m) {
        detail::require_square(m, "density matrix");
        const Real herm = detail::hermiticity_error(m);
        if (herm > Tolerance<Real>::hermitian) {
            std::ostringstream os;
            os << "density matrix: not Hermitian (max |rho - rho^dagger| = " << herm << ")";
            throw DomainError(os.str());
        }
        BasicDensityMatrix rho(hermitize(std::move(m)));
        const auto d = rho.diagnostics();
        if (d.trace_error > Tolerance<Real>::trace) {
            std::ostringstream os;
            os << "density matrix: trace differs from 1 by " << d.trace_error;
            throw DomainError(os.str());
        }
        if (d.min_eigenvalue < -Tolerance<Real>::psd) {
            std::ostringstream os;
            os << "density matrix: not positive semidefinite (smallest eigenvalue " << d.min_eigenvalue << ")";
            throw DomainError(os.str());
        }
        return rho;
    }

    // For results of operations that preserve the invariants mathematically
    // (unitary conjugation, convex mixtures, partial traces). Only shape and
    // finiteness are checked; the Hermitian part is kept.
    static BasicDensityMatrix from_trusted(MatrixType m) {
        detail::require_square(m, "density matrix");
        return BasicDensityMatrix(hermitize(std::move(m)));
    }

    static BasicDensityMatrix pure(const BasicStateVector<Real>& psi) {
        return BasicDensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
    }

    static BasicDensityMatrix maximally_mixed(Eigen::Index dim) {
        if (dim <= 0) throw StructuralError("density matrix: dimension must be positive");
        return BasicDensityMatrix(MatrixType::Identity(dim, dim) / Real(dim));
    }

    Eigen::Index dim() const noexcept { return m_.rows(); }
    const MatrixType& matrix() const noexcept { return m_; }
    Scalar operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

    Real trace() const { return m_.trace().real(); }

    // Tr(ρ²) = Σ|ρ_ij|² for Hermitian ρ.
    Real purity() const { return m_.squaredNorm(); }

    DensityDiagnostics<Real> diagnostics() const {
        DensityDiagnostics<Real> d;
        d.hermiticity_error = detail::hermiticity_error(m_);
        d.trace_error = std::abs(m_.trace() - Scalar(1));
        Eigen::SelfAdjointEigenSolver<MatrixType> solver(m_, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) throw NumericalError("density matrix: eigenvalue computation failed");
        d.min_eigenvalue = solver.eigenvalues().minCoeff();
        d.purity = purity();
        return d;
    }

private:
    explicit BasicDensityMatrix(MatrixType m) : m_(std::move(m)) {}

    static MatrixType hermitize(MatrixType m) {
        MatrixType h = (m + m.adjoint()) * Real(0.5);
        return h;
    }

    MatrixType m_;
};

// --------------------------------------------------------------------------
// HermitianOperator
// --------------------------------------------------------------------------

template <std::floating_point Real>
class BasicHermitianOperator {
public:
    using Scalar = std::complex<Real>;
    using MatrixType = CMatrix<Real>;

    static BasicHermitianOperator from_matrix(MatrixType m) {
        detail::require_square(m, "hermitian operator");
        const Real herm = detail::hermiticity_error(m);
        if (herm > Tolerance<Real>::hermitian * detail::magnitude_scale(m)) {
            std::ostringstream os;
            os << "hermitian operator: max |A - A^dagger| = " << herm;
            throw DomainError(os.str());
        }
        MatrixType h = (m + m.adjoint()) * Real(0.5);
        return BasicHermitianOperator(std::move(h));
    }

    static BasicHermitianOperator identity(Eigen::Index dim) {
        if (dim <= 0) throw StructuralError("hermitian operator: dimension must be positive");
        return BasicHermitianOperator(MatrixType::Identity(dim, dim));
    }

    static BasicHermitianOperator zero(Eigen::Index dim) {
        if (dim <= 0) throw StructuralError("hermitian operator: dimension must be positive");
        return BasicHermitianOperator(MatrixType::Zero(dim, dim));
    }

    static BasicHermitianOperator diagonal(const RVector<Real>& values) {
        if (values.size() == 0) throw StructuralError("hermitian operator: empty diagonal");
        return BasicHermitianOperator(values.template cast<Scalar>().asDiagonal());
    }

    Eigen::Index dim() const noexcept { return m_.rows(); }
    const MatrixType& matrix() const noexcept { return m_; }
    Scalar operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

    friend BasicHermitianOperator operator+(const BasicHermitianOperator& a, const BasicHermitianOperator& b) {
        if (a.dim() != b.dim()) throw StructuralError("hermitian operator: sum of mismatched dimensions");
        return BasicHermitianOperator(a.m_ + b.m_);
    }
    friend BasicHermitianOperator operator-(const BasicHermitianOperator& a, const BasicHermitianOperator& b) {
        if (a.dim() != b.dim()) throw StructuralError("hermitian operator: difference of mismatched dimensions");
        return BasicHermitianOperator(a.m_ - b.m_);
    }
    friend BasicHermitianOperator operator*(Real s, const BasicHermitianOperator& a) {
        return BasicHermitianOperator(a.m_ * s);
    }
    friend BasicHermitianOperator operator*(const BasicHermitianOperator& a, Real s) { return s * a; }

    BasicHermitianOperator& operator+=(const BasicHermitianOperator& other) {
        if (other.dim() != dim()) throw StructuralError("hermitian operator: sum of mismatched dimensions");
        m_ += other.m_;
        return *this;
    }

private:
    explicit BasicHermitianOperator(MatrixType m) : m_(std::move(m)) {}
    MatrixType m_;
};

// --------------------------------------------------------------------------
// Projector
// --------------------------------------------------------------------------

template <std::floating_point Real>
class BasicProjector {
public:
    using MatrixType = CMatrix<Real>;

    static BasicProjector from_matrix(MatrixType m) {
        detail::require_square(m, "projector");
        const Real herm = detail::hermiticity_error(m);
        if (herm > Tolerance<Real>::hermitian) throw DomainError("projector: not Hermitian");
        const Real idem = detail::max_abs(MatrixType(m * m - m));
        if (idem > Tolerance<Real>::idempotent) {
            std::ostringstream os;
            os << "projector: not idempotent (max |P^2 - P| = " << idem << ")";
            throw DomainError(os.str());
        }
        return BasicProjector((m + m.adjoint()) * Real(0.5));
    }

    static BasicProjector identity(Eigen::Index dim) {
        if (dim <= 0) throw StructuralError("projector: dimension must be positive");
        return BasicProjector(MatrixType::Identity(dim, dim));
    }

    Eigen::Index dim() const noexcept { return m_.rows(); }
    const MatrixType& matrix() const noexcept { return m_; }
    Real rank() const { return m_.trace().real(); }

private:
    explicit BasicProjector(MatrixType m) : m_(std::move(m)) {}
    MatrixType m_;
};

using StateVector = BasicStateVector<double>;
using DensityMatrix = BasicDensityMatrix<double>;
using HermitianOperator = BasicHermitianOperator<double>;
using Projector = BasicProjector<double>;

// --------------------------------------------------------------------------
// Kronecker products
// --------------------------------------------------------------------------

template <typename A, typename B>
auto kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b, Eigen::Index max_dim = kDefaultMaxDim) {
    using Scalar = typename A::Scalar;
    detail::checked_product(a.rows(), b.rows(), max_dim);
    detail::checked_product(a.cols(), b.cols(), max_dim);
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out = Eigen::kroneckerProduct(a.eval(), b.eval());
    return out;
}

template <std::floating_point Real>
BasicStateVector<Real> tensor(const BasicStateVector<Real>& a, const BasicStateVector<Real>& b,
                              Eigen::Index max_dim = kDefaultMaxDim) {
    CVector<Real> v = kron(a.amplitudes(), b.amplitudes(), max_dim);
    return BasicStateVector<Real>::normalized(std::move(v));
}

template <std::floating_point Real>
BasicDensityMatrix<Real> tensor(const BasicDensityMatrix<Real>& a, const BasicDensityMatrix<Real>& b,
                                Eigen::Index max_dim = kDefaultMaxDim) {
    return BasicDensityMatrix<Real>::from_trusted(kron(a.matrix(), b.matrix(), max_dim));
}

template <std::floating_point Real>
BasicHermitianOperator<Real> tensor(const BasicHermitianOperator<Real>& a, const BasicHermitianOperator<Real>& b,
                                    Eigen::Index max_dim = kDefaultMaxDim) {
    return BasicHermitianOperator<Real>::from_matrix(kron(a.matrix(), b.matrix(), max_dim));
}

template <std::floating_point Real>
BasicProjector<Real> tensor(const BasicProjector<Real>& a, const BasicProjector<Real>& b,
                            Eigen::Index max_dim = kDefaultMaxDim) {
    return BasicProjector<Real>::from_matrix(kron(a.matrix(), b.matrix(), max_dim));
}

// Left-to-right fold: factors[0] ⊗ factors[1] ⊗ …
template <typename T>
T tensor_product(std::span<const T> factors, Eigen::Index max_dim = kDefaultMaxDim) {
    if (factors.empty()) throw StructuralError("tensor_product: no factors");
    T out = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) out = tensor(out, factors[i], max_dim);
    return out;
}

// I ⊗ … ⊗ op ⊗ … ⊗ I with op at position `site` of the factor list `dims`.
template <std::floating_point Real>
BasicHermitianOperator<Real> embed(const BasicHermitianOperator<Real>& op, std::size_t site,
                                   std::span<const Eigen::Index> dims, Eigen::Index max_dim = kDefaultMaxDim) {
    if (site >= dims.size()) throw StructuralError("embed: site index out of range");
    if (dims[site] != op.dim()) throw StructuralError("embed: operator dimension does not match its factor");
    Eigen::Index left = 1, right = 1;
    for (std::size_t i = 0; i < site; ++i) left = detail::checked_product(left, dims[i], max_dim);
    for (std::size_t i = site + 1; i < dims.size(); ++i) right = detail::checked_product(right, dims[i], max_dim);
    detail::checked_product(detail::checked_product(left, op.dim(), max_dim), right, max_dim);
    CMatrix<Real> m = kron(CMatrix<Real>::Identity(left, left),
                           kron(op.matrix(), CMatrix<Real>::Identity(right, right), max_dim), max_dim);
    return BasicHermitianOperator<Real>::from_matrix(std::move(m));
}

// --------------------------------------------------------------------------
// Partial trace
// --------------------------------------------------------------------------

namespace detail {

// Offsets of the kept and traced multi-indices into the full basis index.
struct SplitIndex {
    std::vector<Eigen::Index> kept;
    std::vector<Eigen::Index> traced;
};

inline SplitIndex split_index(std::span<const std::size_t> keep, std::span<const Eigen::Index> dims,
                              Eigen::Index total) {
    const std::size_t n = dims.size();
    if (n == 0) throw StructuralError("partial_trace: no factor dimensions given");
    Eigen::Index product = 1;
    for (auto d : dims) {
        if (d <= 0) throw StructuralError("partial_trace: factor dimensions must be positive");
        product = checked_product(product, d, std::numeric_limits<Eigen::Index>::max());
    }
    if (product != total) {
        std::ostringstream os;
        os << "partial_trace: product of factor dimensions " << product << " != state dimension " << total;
        throw StructuralError(os.str());
    }
    std::vector<bool> kept_mask(n, false);
    for (auto k : keep) {
        if (k >= n) throw StructuralError("partial_trace: kept subsystem index out of range");
        if (kept_mask[k]) throw StructuralError("partial_trace: kept subsystem listed twice");
        kept_mask[k] = true;
    }
    std::vector<Eigen::Index> stride(n, 1);
    for (std::size_t i = n - 1; i > 0; --i) stride[i - 1] = stride[i] * dims[i];

    auto offsets = [&](bool want_kept) {
        std::vector<Eigen::Index> out{0};
        for (std::size_t i = 0; i < n; ++i) {
            if (kept_mask[i] != want_kept) continue;
            std::vector<Eigen::Index> next;
            next.reserve(out.size() * static_cast<std::size_t>(dims[i]));
            for (auto base : out)
                for (Eigen::Index j = 0; j < dims[i]; ++j) next.push_back(base + j * stride[i]);
            out = std::move(next);
        }
        return out;
    };
    return {offsets(true), offsets(false)};
}

}  // namespace detail

// Reduced state on the factors listed in `keep` (kept factors retain their
// relative order, slow-left). `dims` lists every factor's dimension.
template <std::floating_point Real>
BasicDensityMatrix<Real> partial_trace(const BasicDensityMatrix<Real>& rho, std::span<const std::size_t> keep,
                                       std::span<const Eigen::Index> dims) {
    const auto idx = detail::split_index(keep, dims, rho.dim());
    const auto nk = static_cast<Eigen::Index>(idx.kept.size());
    CMatrix<Real> out = CMatrix<Real>::Zero(nk, nk);
    const auto& m = rho.matrix();
    for (Eigen::Index i = 0; i < nk; ++i)
        for (Eigen::Index j = 0; j < nk; ++j) {
            std::complex<Real> acc{};
            for (auto t : idx.traced) acc += m(idx.kept[i] + t, idx.kept[j] + t);
            out(i, j) = acc;
        }
    return BasicDensityMatrix<Real>::from_trusted(std::move(out));
}

// Reduced state of a pure state, without forming the full density matrix.
template <std::floating_point Real>
BasicDensityMatrix<Real> partial_trace(const BasicStateVector<Real>& psi, std::span<const std::size_t> keep,
                                       std::span<const Eigen::Index> dims) {
    const auto idx = detail::split_index(keep, dims, psi.dim());
    const auto nk = static_cast<Eigen::Index>(idx.kept.size());
    const auto nt = static_cast<Eigen::Index>(idx.traced.size());
    CMatrix<Real> block(nk, nt);
    for (Eigen::Index i = 0; i < nk; ++i)
        for (Eigen::Index t = 0; t < nt; ++t) block(i, t) = psi[idx.kept[i] + idx.traced[t]];
    CMatrix<Real> out = block * block.adjoint();
    return BasicDensityMatrix<Real>::from_trusted(std::move(out));
}

// --------------------------------------------------------------------------
// Hermitian eigensystem and unitary evolution
// --------------------------------------------------------------------------

template <std::floating_point Real>
class BasicEigensystem {
public:
    using Scalar = std::complex<Real>;
    using MatrixType = CMatrix<Real>;

    explicit BasicEigensystem(const BasicHermitianOperator<Real>& h) {
        const auto& m = h.matrix();
        const MatrixType off = m - MatrixType(m.diagonal().asDiagonal());
        if (detail::max_abs(off) == Real(0)) {
            // Already diagonal: the eigenbasis is the computational basis.
            energies_ = m.diagonal().real();
            diagonal_ = true;
            return;
        }
        Eigen::SelfAdjointEigenSolver<MatrixType> solver(m);
        if (solver.info() != Eigen::Success) {
            std::ostringstream os;
            os << "eigendecomposition failed: dim=" << m.rows() << ", max|H|=" << detail::max_abs(m)
               << ", finite=" << (m.allFinite() ? "yes" : "no");
            throw NumericalError(os.str());
        }
        energies_ = solver.eigenvalues();
        vectors_ = solver.eigenvectors();
    }

    Eigen::Index dim() const noexcept { return energies_.size(); }
    const RVector<Real>& energies() const noexcept { return energies_; }
    bool diagonal() const noexcept { return diagonal_; }

    // Columns are eigenvectors.
    MatrixType vectors() const {
        return diagonal_ ? MatrixType::Identity(dim(), dim()) : vectors_;
    }

    MatrixType to_eigenbasis(const MatrixType& a) const {
        return diagonal_ ? a : MatrixType(vectors_.adjoint() * a * vectors_);
    }
    MatrixType from_eigenbasis(const MatrixType& a) const {
        return diagonal_ ? a : MatrixType(vectors_ * a * vectors_.adjoint());
    }
    CVector<Real> to_eigenbasis(const CVector<Real>& v) const {
        return diagonal_ ? v : CVector<Real>(vectors_.adjoint() * v);
    }
    CVector<Real> from_eigenbasis(const CVector<Real>& v) const {
        return diagonal_ ? v : CVector<Real>(vectors_ * v);
    }

    // e^{-iHt}
    MatrixType propagator(Real t) const {
        const CVector<Real> phases = phase_factors(t);
        if (diagonal_) return phases.asDiagonal();
        return vectors_ * phases.asDiagonal() * vectors_.adjoint();
    }

    BasicStateVector<Real> evolve(const BasicStateVector<Real>& psi, Real t) const {
        if (psi.dim() != dim()) throw StructuralError("evolve: state/Hamiltonian dimension mismatch");
        CVector<Real> c = to_eigenbasis(psi.amplitudes());
        c = c.cwiseProduct(phase_factors(t));
        return BasicStateVector<Real>::normalized(from_eigenbasis(c));
    }

    BasicDensityMatrix<Real> evolve(const BasicDensityMatrix<Real>& rho, Real t) const {
        if (rho.dim() != dim()) throw StructuralError("evolve: state/Hamiltonian dimension mismatch");
        if (t == Real(0)) return rho;
        MatrixType r = to_eigenbasis(rho.matrix());
        const CVector<Real> ph = phase_factors(t);
        r = ph.asDiagonal() * r * ph.conjugate().asDiagonal();
        return BasicDensityMatrix<Real>::from_trusted(from_eigenbasis(r));
    }

private:
    CVector<Real> phase_factors(Real t) const {
        CVector<Real> ph(dim());
        for (Eigen::Index i = 0; i < dim(); ++i) ph(i) = std::polar(Real(1), -energies_(i) * t);
        return ph;
    }

    RVector<Real> energies_;
    MatrixType vectors_;
    bool diagonal_ = false;
};

using Eigensystem = BasicEigensystem<double>;

// e^{-iHt} ρ e^{+iHt}
template <std::floating_point Real>
BasicDensityMatrix<Real> evolve_unitary(const BasicHermitianOperator<Real>& h, const BasicDensityMatrix<Real>& rho,
                                        Real t) {
    if (h.dim() != rho.dim()) throw StructuralError("evolve_unitary: H and rho dimensions differ");
    return BasicEigensystem<Real>(h).evolve(rho, t);
}

template <std::floating_point Real>
BasicStateVector<Real> evolve_unitary(const BasicHermitianOperator<Real>& h, const BasicStateVector<Real>& psi,
                                      Real t) {
    if (h.dim() != psi.dim()) throw StructuralError("evolve_unitary: H and state dimensions differ");
    return BasicEigensystem<Real>(h).evolve(psi, t);
}

// --------------------------------------------------------------------------
// Expectation values
// --------------------------------------------------------------------------

// Tr(Aρ). The imaginary residue is checked and dropped.
template <std::floating_point Real>
Real expectation(const BasicHermitianOperator<Real>& a, const BasicDensityMatrix<Real>& rho) {
    if (a.dim() != rho.dim()) throw StructuralError("expectation: operator/state dimension mismatch");
    const std::complex<Real> value = a.matrix().cwiseProduct(rho.matrix().transpose()).sum();
    if (std::abs(value.imag()) > Tolerance<Real>::imaginary * detail::magnitude_scale(a.matrix())) {
        std::ostringstream os;
        os << "expectation: imaginary residue " << value.imag() << " above tolerance";
        throw NumericalError(os.str());
    }
    return value.real();
}

template <std::floating_point Real>
Real expectation(const BasicHermitianOperator<Real>& a, const BasicStateVector<Real>& psi) {
    if (a.dim() != psi.dim()) throw StructuralError("expectation: operator/state dimension mismatch");
    const std::complex<Real> value = psi.amplitudes().dot(a.matrix() * psi.amplitudes());
    if (std::abs(value.imag()) > Tolerance<Real>::imaginary * detail::magnitude_scale(a.matrix())) {
        std::ostringstream os;
        os << "expectation: imaginary residue " << value.imag() << " above tolerance";
        throw NumericalError(os.str());
    }
    return value.real();
}

// --------------------------------------------------------------------------
// Spectral projectors
// --------------------------------------------------------------------------

// Sum of the eigenprojectors of `observable` whose eigenvalues lie in the
// closed interval [lo, hi].
template <std::floating_point Real>
BasicProjector<Real> interval_projector(const BasicHermitianOperator<Real>& observable, Real lo, Real hi) {
    if (!(lo <= hi)) throw DomainError("interval_projector: empty interval");
    const BasicEigensystem<Real> es(observable);
    const Real slack = Tolerance<Real>::hermitian * detail::magnitude_scale(observable.matrix());
    const auto n = es.dim();
    CVector<Real> selected = CVector<Real>::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Real e = es.energies()(i);
        if (e >= lo - slack && e <= hi + slack) selected(i) = Real(1);
    }
    CMatrix<Real> p = es.from_eigenbasis(CMatrix<Real>(selected.asDiagonal()));
    return BasicProjector<Real>::from_matrix(std::move(p));
}

// --------------------------------------------------------------------------
// Pauli matrices (eigenvalues ±1; |+⟩ is basis index 0)
// --------------------------------------------------------------------------

inline Matrix identity2() { return Matrix::Identity(2, 2); }

inline Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

inline Matrix sigma_y() {
    Matrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}

inline Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

}  // namespace timeless
