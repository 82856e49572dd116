// Copyright 2026 The swapmeter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SWAPMETER_LINALG_HPP
#define SWAPMETER_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "swapmeter/error.hpp"

namespace swapmeter {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Tolerance for exact algebraic identities (hermiticity, unit trace, unitarity).
inline constexpr double kAlgebraTol = 1e-10;
/// Tolerance for quantities that pass through an eigensolver.
inline constexpr double kEigenTol = 1e-9;

inline constexpr Complex kI{0.0, 1.0};

// ---------------------------------------------------------------------------
// Matrix diagnostics
// ---------------------------------------------------------------------------

inline double max_abs(const CMatrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double max_abs_diff(const CMatrix &a, const CMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("max_abs_diff: shape mismatch");
    }
    return max_abs(a - b);
}

/// max |M - M^dagger| entrywise; infinite for non-square input.
inline double hermiticity_error(const CMatrix &m) {
    if (m.rows() != m.cols()) {
        return INFINITY;
    }
    return max_abs(m - m.adjoint());
}

/// max |U^dagger U - I| entrywise.
inline double unitarity_error(const CMatrix &u) {
    if (u.rows() != u.cols()) {
        return INFINITY;
    }
    return max_abs(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()));
}

inline bool all_finite(const CMatrix &m) {
    for (Eigen::Index k = 0; k < m.size(); ++k) {
        const Complex z = m.data()[k];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// CompositeSpace
// ---------------------------------------------------------------------------

/// Ordered list of subsystem dimensions. The leftmost subsystem is the
/// slowest-varying tensor index, so for dims {2, D, D} the basis state
/// |a, n0, n1> sits at index a*D*D + n0*D + n1.
class CompositeSpace {
   public:
    CompositeSpace() = default;

    explicit CompositeSpace(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
        if (dims_.empty()) {
            throw DimensionError("CompositeSpace: at least one subsystem is required");
        }
        for (std::size_t d : dims_) {
            if (d < 2) {
                throw DimensionError("CompositeSpace: every subsystem dimension must be >= 2, got " +
                                     std::to_string(d));
            }
        }
    }

    CompositeSpace(std::initializer_list<std::size_t> dims) : CompositeSpace(std::vector<std::size_t>(dims)) {}

    const std::vector<std::size_t> &dims() const { return dims_; }
    std::size_t num_subsystems() const { return dims_.size(); }
    std::size_t dim(std::size_t k) const {
        check_index(k);
        return dims_[k];
    }

    std::size_t total() const {
        return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
    }

    /// Product of the dimensions to the right of subsystem k.
    std::size_t stride(std::size_t k) const {
        check_index(k);
        std::size_t s = 1;
        for (std::size_t j = k + 1; j < dims_.size(); ++j) {
            s *= dims_[j];
        }
        return s;
    }

    /// Digit of subsystem k in a flat basis index.
    std::size_t digit(std::size_t index, std::size_t k) const { return (index / stride(k)) % dims_[k]; }

    void check_index(std::size_t k) const {
        if (k >= dims_.size()) {
            throw DimensionError("subsystem index " + std::to_string(k) + " out of range for space " +
                                 to_string());
        }
    }

    CompositeSpace select(std::span<const std::size_t> subsystems) const {
        std::vector<std::size_t> out;
        out.reserve(subsystems.size());
        for (std::size_t k : subsystems) {
            out.push_back(dim(k));
        }
        return CompositeSpace(std::move(out));
    }

    /// The same Hilbert space viewed as one system of dimension total().
    CompositeSpace flattened() const { return CompositeSpace({total()}); }

    friend CompositeSpace operator*(const CompositeSpace &a, const CompositeSpace &b) {
        std::vector<std::size_t> dims = a.dims_;
        dims.insert(dims.end(), b.dims_.begin(), b.dims_.end());
        return CompositeSpace(std::move(dims));
    }

    friend bool operator==(const CompositeSpace &, const CompositeSpace &) = default;

    std::string to_string() const {
        std::ostringstream os;
        os << '{';
        for (std::size_t k = 0; k < dims_.size(); ++k) {
            os << (k ? "," : "") << dims_[k];
        }
        os << '}';
        return os.str();
    }

   private:
    std::vector<std::size_t> dims_;
};

// ---------------------------------------------------------------------------
// DensityMatrix
// ---------------------------------------------------------------------------

struct StateDiagnostics {
    double hermiticity_error = 0.0;
    double trace_error = 0.0;
    double min_eigenvalue = 0.0;
    bool finite = true;

    bool valid() const {
        return finite && hermiticity_error <= kAlgebraTol && trace_error <= kAlgebraTol &&
               min_eigenvalue >= -kEigenTol;
    }
};

inline StateDiagnostics diagnose_state(const CMatrix &m) {
    StateDiagnostics d;
    d.finite = all_finite(m);
    d.hermiticity_error = hermiticity_error(m);
    if (!d.finite || !std::isfinite(d.hermiticity_error)) {
        d.finite = false;
        return d;
    }
    d.trace_error = std::abs(m.trace() - Complex(1.0));
    const CMatrix herm = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = solver.eigenvalues().minCoeff();
    return d;
}

/// Hermitian, unit-trace, positive operator on a CompositeSpace.
class DensityMatrix {
   public:
    /// Validates every density-matrix invariant; throws InvalidStateError otherwise.
    static DensityMatrix from_matrix(CompositeSpace space, CMatrix m) {
        check_shape(space, m);
        const StateDiagnostics d = diagnose_state(m);
        if (!d.valid()) {
            std::ostringstream os;
            os << "not a density matrix: hermiticity error " << d.hermiticity_error << ", trace error "
               << d.trace_error << ", min eigenvalue " << d.min_eigenvalue << (d.finite ? "" : ", non-finite");
            throw InvalidStateError(os.str());
        }
        return DensityMatrix(std::move(space), std::move(m));
    }

    /// Skips the eigenvalue check. Only for results that are valid by construction.
    static DensityMatrix unchecked(CompositeSpace space, CMatrix m) {
        check_shape(space, m);
        return DensityMatrix(std::move(space), std::move(m));
    }

    const CompositeSpace &space() const { return space_; }
    const CMatrix &matrix() const { return mat_; }
    std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }

    DensityMatrix flattened() const { return DensityMatrix(space_.flattened(), mat_); }

    StateDiagnostics diagnostics() const { return diagnose_state(mat_); }

   private:
    DensityMatrix(CompositeSpace space, CMatrix m) : space_(std::move(space)), mat_(std::move(m)) {}

    static void check_shape(const CompositeSpace &space, const CMatrix &m) {
        const auto n = static_cast<Eigen::Index>(space.total());
        if (m.rows() != n || m.cols() != n) {
            throw DimensionError("density matrix shape " + std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()) + " does not match space " + space.to_string());
        }
    }

    CompositeSpace space_;
    CMatrix mat_;
};

// ---------------------------------------------------------------------------
// UnitaryGate
// ---------------------------------------------------------------------------

/// Square unitary matrix tagged with the space it acts on.
class UnitaryGate {
   public:
    UnitaryGate(CompositeSpace space, CMatrix m) : space_(std::move(space)), mat_(std::move(m)) {
        const auto n = static_cast<Eigen::Index>(space_.total());
        if (mat_.rows() != n || mat_.cols() != n) {
            throw DimensionError("gate shape does not match space " + space_.to_string());
        }
        const double err = unitarity_error(mat_);
        if (!(err <= kAlgebraTol)) {
            throw InvalidStateError("matrix is not unitary (|U^dag U - I| = " + std::to_string(err) + ")");
        }
    }

    const CompositeSpace &space() const { return space_; }
    const CMatrix &matrix() const { return mat_; }

    UnitaryGate adjoint() const { return UnitaryGate(space_, mat_.adjoint(), Trusted{}); }

    /// Operator product: (a * b) applies b first.
    friend UnitaryGate operator*(const UnitaryGate &a, const UnitaryGate &b) {
        if (a.space_ != b.space_) {
            throw DimensionError("cannot compose gates on " + a.space_.to_string() + " and " +
                                 b.space_.to_string());
        }
        return UnitaryGate(a.space_, a.mat_ * b.mat_, Trusted{});
    }

   private:
    struct Trusted {};
    UnitaryGate(CompositeSpace space, CMatrix m, Trusted) : space_(std::move(space)), mat_(std::move(m)) {}

    CompositeSpace space_;
    CMatrix mat_;
};

// ---------------------------------------------------------------------------
// Tensor products, embedding, partial trace / transpose
// ---------------------------------------------------------------------------

inline CMatrix tensor(const CMatrix &a, const CMatrix &b) { return Eigen::kroneckerProduct(a, b).eval(); }

inline CVector tensor(const CVector &a, const CVector &b) {
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

inline DensityMatrix tensor(const DensityMatrix &a, const DensityMatrix &b) {
    return DensityMatrix::unchecked(a.space() * b.space(), tensor(a.matrix(), b.matrix()));
}

namespace detail {

inline void check_distinct(const CompositeSpace &space, std::span<const std::size_t> subsystems) {
    std::vector<std::size_t> sorted(subsystems.begin(), subsystems.end());
    for (std::size_t k : sorted) {
        space.check_index(k);
    }
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw DimensionError("repeated subsystem index");
    }
}

/// Flat index of the basis state obtained from `index` by overwriting the
/// digits of `subsystems` with the digits of `local` (an index of the
/// sub-space spanned by `subsystems`, in the listed order).
inline std::size_t replace_digits(const CompositeSpace &space, std::size_t index,
                                  std::span<const std::size_t> subsystems, std::size_t local) {
    for (std::size_t j = subsystems.size(); j-- > 0;) {
        const std::size_t k = subsystems[j];
        const std::size_t d = space.dims()[k];
        const std::size_t s = space.stride(k);
        const std::size_t old_digit = (index / s) % d;
        const std::size_t new_digit = local % d;
        local /= d;
        index = index - old_digit * s + new_digit * s;
    }
    return index;
}

inline std::size_t extract_digits(const CompositeSpace &space, std::size_t index,
                                  std::span<const std::size_t> subsystems) {
    std::size_t local = 0;
    for (std::size_t k : subsystems) {
        local = local * space.dims()[k] + space.digit(index, k);
    }
    return local;
}

}  // namespace detail

/// Lift an operator acting on `targets` (in that order) to the full space,
/// acting as identity on every other subsystem.
inline CMatrix embed(const CMatrix &op, const CompositeSpace &space, std::span<const std::size_t> targets) {
    detail::check_distinct(space, targets);
    const std::size_t local_dim = space.select(targets).total();
    if (static_cast<std::size_t>(op.rows()) != local_dim || static_cast<std::size_t>(op.cols()) != local_dim) {
        throw DimensionError("embed: operator shape does not match target subsystems");
    }
    const std::size_t n = space.total();
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t col = 0; col < n; ++col) {
        const std::size_t local_col = detail::extract_digits(space, col, targets);
        for (std::size_t local_row = 0; local_row < local_dim; ++local_row) {
            const Complex v = op(static_cast<Eigen::Index>(local_row), static_cast<Eigen::Index>(local_col));
            if (v != Complex(0.0)) {
                out(static_cast<Eigen::Index>(detail::replace_digits(space, col, targets, local_row)),
                    static_cast<Eigen::Index>(col)) = v;
            }
        }
    }
    return out;
}

inline CMatrix embed(const CMatrix &op, const CompositeSpace &space, std::initializer_list<std::size_t> targets) {
    return embed(op, space, std::span<const std::size_t>(targets.begin(), targets.size()));
}

inline UnitaryGate embed(const UnitaryGate &gate, const CompositeSpace &space, std::span<const std::size_t> targets) {
    if (space.select(targets) != gate.space()) {
        throw DimensionError("embed: gate space " + gate.space().to_string() + " does not match targets");
    }
    return UnitaryGate(space, embed(gate.matrix(), space, targets));
}

inline UnitaryGate embed(const UnitaryGate &gate, const CompositeSpace &space,
                         std::initializer_list<std::size_t> targets) {
    return embed(gate, space, std::span<const std::size_t>(targets.begin(), targets.size()));
}

/// Trace out every subsystem not listed in `keep`. Kept subsystems retain
/// their relative order.
inline CMatrix partial_trace(const CMatrix &m, const CompositeSpace &space, std::vector<std::size_t> keep) {
    if (keep.empty()) {
        throw DimensionError("partial_trace: keep set is empty");
    }
    detail::check_distinct(space, keep);
    std::sort(keep.begin(), keep.end());
    std::vector<std::size_t> traced;
    for (std::size_t k = 0; k < space.num_subsystems(); ++k) {
        if (!std::binary_search(keep.begin(), keep.end(), k)) {
            traced.push_back(k);
        }
    }
    const std::size_t dk = space.select(keep).total();
    std::size_t dt = 1;
    for (std::size_t k : traced) {
        dt *= space.dims()[k];
    }
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (std::size_t t = 0; t < dt; ++t) {
        const std::size_t base = traced.empty() ? 0 : detail::replace_digits(space, 0, traced, t);
        for (std::size_t i = 0; i < dk; ++i) {
            const std::size_t row = detail::replace_digits(space, base, keep, i);
            for (std::size_t j = 0; j < dk; ++j) {
                const std::size_t col = detail::replace_digits(space, base, keep, j);
                out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
                    m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
            }
        }
    }
    return out;
}

inline DensityMatrix partial_trace(const DensityMatrix &rho, std::vector<std::size_t> keep) {
    for (std::size_t k : keep) {
        rho.space().check_index(k);
    }
    std::vector<std::size_t> sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    CompositeSpace kept = rho.space().select(sorted);
    return DensityMatrix::unchecked(std::move(kept), partial_trace(rho.matrix(), rho.space(), std::move(keep)));
}

/// Transpose the indices of one subsystem:
///   <i_0..i_k..|M^T_k|j_0..j_k..> = <i_0..j_k..|M|j_0..i_k..>.
/// The result is Hermitian when M is, but need not be positive.
inline CMatrix partial_transpose(const CMatrix &m, const CompositeSpace &space, std::size_t subsystem) {
    space.check_index(subsystem);
    const std::size_t n = space.total();
    if (static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) != n) {
        throw DimensionError("partial_transpose: matrix shape does not match space");
    }
    const std::size_t s = space.stride(subsystem);
    const std::size_t d = space.dims()[subsystem];
    CMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t di = (i / s) % d;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t dj = (j / s) % d;
            const std::size_t src_row = i - di * s + dj * s;
            const std::size_t src_col = j - dj * s + di * s;
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                m(static_cast<Eigen::Index>(src_row), static_cast<Eigen::Index>(src_col));
        }
    }
    return out;
}

inline CMatrix partial_transpose(const DensityMatrix &rho, std::size_t subsystem) {
    return partial_transpose(rho.matrix(), rho.space(), subsystem);
}

// ---------------------------------------------------------------------------
// Spectral decomposition and unitary exponentiation
// ---------------------------------------------------------------------------

struct SpectralDecomposition {
    RVector eigenvalues;   // descending
    CMatrix eigenvectors;  // column k belongs to eigenvalues(k)

    CMatrix reconstruct() const { return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint(); }
};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues sorted in
/// descending order. Within a degenerate eigenspace the basis is whatever
/// the solver returns.
inline SpectralDecomposition spectral_decompose(const CMatrix &m) {
    const double herr = hermiticity_error(m);
    if (!(herr <= kAlgebraTol)) {
        throw InvalidStateError("spectral_decompose: matrix is not Hermitian (error " + std::to_string(herr) + ")");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw Error("spectral_decompose: eigensolver did not converge");
    }
    SpectralDecomposition out;
    out.eigenvalues = solver.eigenvalues().reverse();
    out.eigenvectors = solver.eigenvectors().rowwise().reverse();
    return out;
}

/// exp(-i h t) for Hermitian h, computed from the spectral decomposition.
/// h is in angular-frequency units (hbar = 1), so exp_unitary(sigma_z, pi)
/// is diag(e^{-i pi}, e^{+i pi}) = -I.
inline UnitaryGate exp_unitary(const CMatrix &h, double t, CompositeSpace space) {
    const SpectralDecomposition sd = spectral_decompose(h);
    CVector phases(sd.eigenvalues.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) {
        phases(k) = std::exp(-kI * sd.eigenvalues(k) * t);
    }
    return UnitaryGate(std::move(space), sd.eigenvectors * phases.asDiagonal() * sd.eigenvectors.adjoint());
}

inline UnitaryGate exp_unitary(const CMatrix &h, double t) {
    return exp_unitary(h, t, CompositeSpace({static_cast<std::size_t>(h.rows())}));
}

/// Annihilation operator truncated to Fock levels 0..D-1.
inline CMatrix annihilation(std::size_t cutoff) {
    const auto d = static_cast<Eigen::Index>(cutoff);
    CMatrix a = CMatrix::Zero(d, d);
    for (Eigen::Index n = 1; n < d; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

inline CMatrix number_operator(std::size_t cutoff) {
    const auto d = static_cast<Eigen::Index>(cutoff);
    CMatrix n = CMatrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        n(k, k) = static_cast<double>(k);
    }
    return n;
}

}  // namespace swapmeter

#endif  // SWAPMETER_LINALG_HPP
