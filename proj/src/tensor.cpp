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

#include "thermoq/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace thermoq {

namespace {

void require_square(const Matrix &m, Index dim, const char *what) {
    if (m.rows() != dim || m.cols() != dim) {
        throw DimensionError(std::string(what) + ": expected " +
                             std::to_string(dim) + "x" + std::to_string(dim) +
                             " matrix, got " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()));
    }
}

} // namespace

HilbertSpace::HilbertSpace(std::vector<Index> factor_dims)
    : dims_(std::move(factor_dims)) {
    if (dims_.empty()) {
        throw DimensionError("HilbertSpace needs at least one factor");
    }
    for (Index d : dims_) {
        if (d < 1) {
            throw DimensionError("factor dimensions must be >= 1");
        }
        total_ *= d;
    }
}

Index HilbertSpace::factor_dim(Index factor) const {
    if (factor < 0 || factor >= factor_count()) {
        throw DimensionError("factor index out of range");
    }
    return dims_[static_cast<std::size_t>(factor)];
}

HilbertSpace HilbertSpace::subspace(std::span<const Index> factors) const {
    std::vector<Index> sorted(factors.begin(), factors.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.empty() ||
        std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw DimensionError("subspace needs a nonempty set of distinct factors");
    }
    std::vector<Index> dims;
    dims.reserve(sorted.size());
    for (Index f : sorted) {
        dims.push_back(factor_dim(f));
    }
    return HilbertSpace(std::move(dims));
}

HilbertSpace HilbertSpace::sample_space() const {
    if (factor_count() < 2) {
        throw DimensionError("space has no sample factors");
    }
    return HilbertSpace(std::vector<Index>(dims_.begin() + 1, dims_.end()));
}

double max_abs(const Matrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix &m, double rel_tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    const double scale = 1.0 + max_abs(m);
    return max_abs(m - m.adjoint()) <= rel_tol * scale;
}

HermitianOperator::HermitianOperator(HilbertSpace space, Matrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
    require_square(matrix_, space_.total_dim(), "HermitianOperator");
    if (!is_hermitian(matrix_)) {
        throw InvalidOperatorError("operator is not Hermitian");
    }
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator &rhs) const {
    if (!(space_ == rhs.space_)) {
        throw DimensionError("cannot add operators on different spaces");
    }
    return HermitianOperator(space_, matrix_ + rhs.matrix_);
}

HermitianOperator operator*(double scale, const HermitianOperator &op) {
    return HermitianOperator(op.space_, scale * op.matrix_);
}

DensityMatrix::DensityMatrix(HilbertSpace space, Matrix matrix, Trusted)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
    require_square(matrix_, space_.total_dim(), "DensityMatrix");
    const double scale = 1.0 + max_abs(matrix_);
    if (max_abs(matrix_ - matrix_.adjoint()) > kDensityTolerance * scale) {
        throw InvalidOperatorError("density matrix is not Hermitian");
    }
    const double tr = matrix_.trace().real();
    if (std::abs(tr - 1.0) > kDensityTolerance) {
        throw InvalidOperatorError("density matrix trace is " + std::to_string(tr));
    }
}

DensityMatrix::DensityMatrix(HilbertSpace space, Matrix matrix)
    : DensityMatrix(std::move(space), std::move(matrix), Trusted{}) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kDensityTolerance) {
        throw InvalidOperatorError("density matrix has negative eigenvalue " +
                                   std::to_string(solver.eigenvalues().minCoeff()));
    }
}

DensityMatrix DensityMatrix::trusted(HilbertSpace space, Matrix matrix) {
    return DensityMatrix(std::move(space), std::move(matrix), Trusted{});
}

double DensityMatrix::purity() const {
    // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    return matrix_.cwiseAbs2().sum();
}

Eigensystem hermitian_eig(const HermitianOperator &op) {
    Spectrum spectrum(op);
    return {spectrum.values(), spectrum.vectors()};
}

Matrix hermitian_func(const HermitianOperator &op,
                      const std::function<Complex(double)> &f) {
    return Spectrum(op).function(f);
}

Matrix tensor_product(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix embed_local(const Matrix &local, const HilbertSpace &space,
                   Index factor_index) {
    const Index d = space.factor_dim(factor_index);
    require_square(local, d, "embed_local");
    Index left = 1;
    Index right = 1;
    for (Index f = 0; f < space.factor_count(); ++f) {
        if (f < factor_index) {
            left *= space.factor_dim(f);
        } else if (f > factor_index) {
            right *= space.factor_dim(f);
        }
    }
    // I_left (x) local (x) I_right, written directly to avoid two Kronecker passes.
    const Index n = space.total_dim();
    Matrix out = Matrix::Zero(n, n);
    for (Index l = 0; l < left; ++l) {
        for (Index i = 0; i < d; ++i) {
            for (Index j = 0; j < d; ++j) {
                const Complex v = local(i, j);
                if (v == Complex(0.0)) {
                    continue;
                }
                const Index row0 = (l * d + i) * right;
                const Index col0 = (l * d + j) * right;
                for (Index r = 0; r < right; ++r) {
                    out(row0 + r, col0 + r) = v;
                }
            }
        }
    }
    return out;
}

HermitianOperator embed_factor(const Matrix &local, const HilbertSpace &space,
                               Index factor_index) {
    if (!is_hermitian(local)) {
        throw InvalidOperatorError("embed_factor: local operator is not Hermitian");
    }
    return HermitianOperator(space, embed_local(local, space, factor_index));
}

Matrix partial_trace(const Matrix &m, const HilbertSpace &space,
                     std::span<const Index> keep) {
    require_square(m, space.total_dim(), "partial_trace");
    if (keep.empty()) {
        throw DimensionError("partial_trace: keep set is empty");
    }
    const HilbertSpace kept = space.subspace(keep);
    std::vector<bool> is_kept(static_cast<std::size_t>(space.factor_count()), false);
    for (Index f : keep) {
        is_kept[static_cast<std::size_t>(f)] = true;
    }
    const Index dk = kept.total_dim();
    const Index dt = space.total_dim() / dk;

    // For every full index, its coordinates in the kept and traced subspaces.
    std::vector<Index> kept_of(static_cast<std::size_t>(space.total_dim()));
    std::vector<Index> traced_of(kept_of.size());
    const auto &dims = space.factor_dims();
    for (Index idx = 0; idx < space.total_dim(); ++idx) {
        Index rem = idx;
        Index k = 0, kstride = 1, t = 0, tstride = 1;
        for (Index f = space.factor_count() - 1; f >= 0; --f) {
            const Index d = dims[static_cast<std::size_t>(f)];
            const Index digit = rem % d;
            rem /= d;
            if (is_kept[static_cast<std::size_t>(f)]) {
                k += digit * kstride;
                kstride *= d;
            } else {
                t += digit * tstride;
                tstride *= d;
            }
        }
        kept_of[static_cast<std::size_t>(idx)] = k;
        traced_of[static_cast<std::size_t>(idx)] = t;
    }
    // full_index[t][k]
    std::vector<std::vector<Index>> full(static_cast<std::size_t>(dt),
                                         std::vector<Index>(static_cast<std::size_t>(dk)));
    for (Index idx = 0; idx < space.total_dim(); ++idx) {
        full[static_cast<std::size_t>(traced_of[static_cast<std::size_t>(idx)])]
            [static_cast<std::size_t>(kept_of[static_cast<std::size_t>(idx)])] = idx;
    }
    Matrix out = Matrix::Zero(dk, dk);
    for (const auto &rows : full) {
        for (Index j = 0; j < dk; ++j) {
            const Index col = rows[static_cast<std::size_t>(j)];
            for (Index i = 0; i < dk; ++i) {
                out(i, j) += m(rows[static_cast<std::size_t>(i)], col);
            }
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const Index> keep) {
    Matrix reduced = partial_trace(rho.matrix(), rho.space(), keep);
    return DensityMatrix::trusted(rho.space().subspace(keep), std::move(reduced));
}

DensityMatrix thermal_state(const HermitianOperator &h, double beta) {
    if (!(beta > 0.0)) {
        throw std::invalid_argument("thermal_state: beta must be positive");
    }
    Spectrum spectrum(h);
    const double ground = spectrum.values()(0);
    double z = 0.0;
    for (Index k = 0; k < spectrum.dim(); ++k) {
        z += std::exp(-beta * (spectrum.values()(k) - ground));
    }
    Matrix rho = spectrum.function([&](double e) -> Complex {
        return std::exp(-beta * (e - ground)) / z;
    });
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix::trusted(h.space(), std::move(rho));
}

int truncation_level(double beta, double omega, double tail) {
    if (!(beta > 0.0) || !(omega > 0.0) || !(tail > 0.0)) {
        throw std::invalid_argument("truncation_level: beta, omega and tail must be positive");
    }
    if (tail >= 1.0) {
        throw std::invalid_argument("truncation_level: tail must be below 1");
    }
    const double x = beta * omega;
    // Weight above N is exp(-x (N+1)); need x (N+1) > -ln(tail).
    const double need = -std::log(tail);
    int n = static_cast<int>(std::max(0.0, std::floor(need / x) - 1.0));
    while (std::exp(-x * (n + 1)) >= tail) {
        ++n;
    }
    while (n > 0 && std::exp(-x * n) < tail) {
        --n;
    }
    return n;
}

} // namespace thermoq
