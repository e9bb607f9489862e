// Copyright 2026 The thermoq Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Dense complex kernels on truncated tensor-product Hilbert spaces.
 *
 * Factor 0 of every HilbertSpace is the thermometer; factors 1.. are sample
 * modes. Composite indices follow the Kronecker convention: for A (x) B the
 * basis state |i_A, i_B> sits at row i_A * dim(B) + i_B.
 *
 * Units: hbar = k_B = 1, so beta is an inverse energy.
 */

#pragma once

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace thermoq {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Raised when an operator violates the Hermiticity or density-matrix invariants.
class InvalidOperatorError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised on shape mismatches between operators and spaces.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a matrix function is undefined on part of the spectrum.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Relative Hermiticity tolerance used by HermitianOperator.
inline constexpr double kHermitianTolerance = 1e-12;
/// Trace and positivity tolerance used by DensityMatrix.
inline constexpr double kDensityTolerance = 1e-10;

class HilbertSpace {
  public:
    explicit HilbertSpace(std::vector<Index> factor_dims);

    [[nodiscard]] const std::vector<Index> &factor_dims() const noexcept {
        return dims_;
    }
    [[nodiscard]] Index factor_dim(Index factor) const;
    [[nodiscard]] Index factor_count() const noexcept {
        return static_cast<Index>(dims_.size());
    }
    [[nodiscard]] Index total_dim() const noexcept { return total_; }

    /// Space spanned by the given factors, kept in increasing index order.
    [[nodiscard]] HilbertSpace subspace(std::span<const Index> factors) const;
    /// Factors 1.. (the sample). Requires at least two factors.
    [[nodiscard]] HilbertSpace sample_space() const;

    bool operator==(const HilbertSpace &) const = default;

  private:
    std::vector<Index> dims_;
    Index total_ = 1;
};

/// True if max|m - m^dagger| <= rel_tol * (1 + max|m|).
[[nodiscard]] bool is_hermitian(const Matrix &m,
                                double rel_tol = kHermitianTolerance);

class HermitianOperator {
  public:
    HermitianOperator(HilbertSpace space, Matrix matrix);

    [[nodiscard]] const HilbertSpace &space() const noexcept { return space_; }
    [[nodiscard]] const Matrix &matrix() const noexcept { return matrix_; }
    [[nodiscard]] Index dim() const noexcept { return matrix_.rows(); }

    HermitianOperator operator+(const HermitianOperator &rhs) const;
    friend HermitianOperator operator*(double scale,
                                       const HermitianOperator &op);

  private:
    HilbertSpace space_;
    Matrix matrix_;
};

class DensityMatrix {
  public:
    /// Validates Hermiticity, unit trace and positivity (min eigenvalue).
    DensityMatrix(HilbertSpace space, Matrix matrix);

    /// Skips the positivity check; for states that are positive by
    /// construction (Gibbs states, unitary images of valid states).
    /// Hermiticity, trace and shape are still checked.
    static DensityMatrix trusted(HilbertSpace space, Matrix matrix);

    [[nodiscard]] const HilbertSpace &space() const noexcept { return space_; }
    [[nodiscard]] const Matrix &matrix() const noexcept { return matrix_; }
    [[nodiscard]] Index dim() const noexcept { return matrix_.rows(); }
    [[nodiscard]] double trace() const { return matrix_.trace().real(); }
    [[nodiscard]] double purity() const;

  private:
    struct Trusted {};
    DensityMatrix(HilbertSpace space, Matrix matrix, Trusted);

    HilbertSpace space_;
    Matrix matrix_;
};

/**
 * Eigendecomposition that exploits block structure.
 *
 * The nonzero pattern of the matrix is split into connected components and
 * each component is diagonalized on its own (LAPACK syevd/heevd). Matrix
 * functions are then assembled block by block, so models with a conserved
 * quantity (e.g. total excitation number) stay cheap at large dimension.
 */
class Spectrum {
  public:
    explicit Spectrum(const HermitianOperator &op);
    explicit Spectrum(const Matrix &hermitian);

    [[nodiscard]] Index dim() const noexcept { return dim_; }
    /// All eigenvalues, ascending.
    [[nodiscard]] const RealVector &values() const noexcept { return values_; }
    /// Dense unitary whose k-th column belongs to values()[k].
    [[nodiscard]] Matrix vectors() const;
    [[nodiscard]] std::size_t block_count() const noexcept {
        return blocks_.size();
    }

    /// V f(Lambda) V^dagger. Throws DomainError if f is not finite somewhere.
    [[nodiscard]] Matrix function(const std::function<Complex(double)> &f) const;
    /// V f(Lambda) V^dagger * columns, without forming the dense function.
    [[nodiscard]] Matrix apply(const std::function<Complex(double)> &f,
                               const Matrix &columns) const;

  private:
    struct Block {
        std::vector<Index> indices;
        RealVector values;
        Matrix vectors;
    };
    struct Slot {
        std::size_t block;
        Index local;
    };

    void decompose(const Matrix &m);
    [[nodiscard]] Eigen::VectorXcd evaluate(const Block &b,
                                            const std::function<Complex(double)> &f) const;

    Index dim_ = 0;
    std::vector<Block> blocks_;
    RealVector values_;
    std::vector<Slot> order_;
};

struct Eigensystem {
    RealVector values; ///< ascending
    Matrix vectors;    ///< unitary, op * vectors = vectors * diag(values)
};

[[nodiscard]] Eigensystem hermitian_eig(const HermitianOperator &op);

/// V f(Lambda) V^dagger for real- or complex-valued f.
[[nodiscard]] Matrix hermitian_func(const HermitianOperator &op,
                                    const std::function<Complex(double)> &f);

/// Kronecker product a (x) b.
[[nodiscard]] Matrix tensor_product(const Matrix &a, const Matrix &b);

/// I (x) ... (x) local (x) ... (x) I for an arbitrary (not necessarily
/// Hermitian) local operator.
[[nodiscard]] Matrix embed_local(const Matrix &local, const HilbertSpace &space,
                                 Index factor_index);

/// Hermitian variant of embed_local.
[[nodiscard]] HermitianOperator embed_factor(const Matrix &local,
                                             const HilbertSpace &space,
                                             Index factor_index);

/// Partial trace of an arbitrary operator over all factors not in keep.
[[nodiscard]] Matrix partial_trace(const Matrix &m, const HilbertSpace &space,
                                   std::span<const Index> keep);

[[nodiscard]] DensityMatrix partial_trace(const DensityMatrix &rho,
                                          std::span<const Index> keep);

/// e^{-beta h} / tr e^{-beta h}, computed from the spectrum with a
/// ground-energy shift so large beta cannot overflow.
[[nodiscard]] DensityMatrix thermal_state(const HermitianOperator &h,
                                          double beta);

/// Smallest n_max such that the single-mode Gibbs weight above n_max is
/// below tail. The weight above N is exp(-beta*omega*(N+1)).
[[nodiscard]] int truncation_level(double beta, double omega, double tail);

/// Largest entrywise modulus.
[[nodiscard]] double max_abs(const Matrix &m);

} // namespace thermoq
