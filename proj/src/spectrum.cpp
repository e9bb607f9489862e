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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <lapacke.h>

#include "thermoq/tensor.hpp"

namespace thermoq {

namespace {

class DisjointSets {
  public:
    explicit DisjointSets(Index n) : parent_(static_cast<std::size_t>(n)) {
        std::iota(parent_.begin(), parent_.end(), Index{0});
    }
    Index find(Index x) {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            auto &p = parent_[static_cast<std::size_t>(x)];
            p = parent_[static_cast<std::size_t>(p)];
            x = p;
        }
        return x;
    }
    void unite(Index a, Index b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        }
    }

  private:
    std::vector<Index> parent_;
};

void lapack_check(lapack_int info, const char *routine) {
    if (info != 0) {
        throw std::runtime_error(std::string(routine) + " failed with info " +
                                 std::to_string(info));
    }
}

// Dense Hermitian eigensolve of one block; real arithmetic when possible.
void solve_block(const Matrix &a, RealVector &values, Matrix &vectors) {
    const Index n = a.rows();
    values.resize(n);
    if (n == 1) {
        values(0) = a(0, 0).real();
        vectors = Matrix::Ones(1, 1);
        return;
    }
    if (a.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::MatrixXd work = a.real();
        lapack_check(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L',
                                    static_cast<lapack_int>(n), work.data(),
                                    static_cast<lapack_int>(n), values.data()),
                     "dsyevd");
        vectors = work.cast<Complex>();
        return;
    }
    vectors = a;
    lapack_check(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L',
                                static_cast<lapack_int>(n),
                                reinterpret_cast<lapack_complex_double *>(vectors.data()),
                                static_cast<lapack_int>(n), values.data()),
                 "zheevd");
}

} // namespace

Spectrum::Spectrum(const HermitianOperator &op) { decompose(op.matrix()); }

Spectrum::Spectrum(const Matrix &hermitian) {
    if (!is_hermitian(hermitian)) {
        throw InvalidOperatorError("Spectrum: matrix is not Hermitian");
    }
    decompose(hermitian);
}

void Spectrum::decompose(const Matrix &m) {
    dim_ = m.rows();
    if (dim_ == 0) {
        throw DimensionError("Spectrum: empty matrix");
    }
    // Lower triangle only; LAPACK reads the same triangle.
    DisjointSets sets(dim_);
    for (Index j = 0; j < dim_; ++j) {
        for (Index i = j + 1; i < dim_; ++i) {
            if (m(i, j) != Complex(0.0)) {
                sets.unite(i, j);
            }
        }
    }
    std::vector<Index> block_of(static_cast<std::size_t>(dim_), -1);
    for (Index i = 0; i < dim_; ++i) {
        const Index root = sets.find(i);
        auto &slot = block_of[static_cast<std::size_t>(root)];
        if (slot < 0) {
            slot = static_cast<Index>(blocks_.size());
            blocks_.emplace_back();
        }
        blocks_[static_cast<std::size_t>(slot)].indices.push_back(i);
    }

    for (auto &b : blocks_) {
        const auto n = static_cast<Index>(b.indices.size());
        Matrix sub(n, n);
        for (Index j = 0; j < n; ++j) {
            for (Index i = 0; i < n; ++i) {
                sub(i, j) = m(b.indices[static_cast<std::size_t>(i)],
                              b.indices[static_cast<std::size_t>(j)]);
            }
        }
        solve_block(sub, b.values, b.vectors);
    }

    order_.clear();
    order_.reserve(static_cast<std::size_t>(dim_));
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
        for (Index k = 0; k < blocks_[bi].values.size(); ++k) {
            order_.push_back({bi, k});
        }
    }
    std::stable_sort(order_.begin(), order_.end(), [&](const Slot &a, const Slot &b) {
        return blocks_[a.block].values(a.local) < blocks_[b.block].values(b.local);
    });
    values_.resize(dim_);
    for (Index k = 0; k < dim_; ++k) {
        const Slot &s = order_[static_cast<std::size_t>(k)];
        values_(k) = blocks_[s.block].values(s.local);
    }
}

Matrix Spectrum::vectors() const {
    Matrix v = Matrix::Zero(dim_, dim_);
    for (Index k = 0; k < dim_; ++k) {
        const Slot &s = order_[static_cast<std::size_t>(k)];
        const Block &b = blocks_[s.block];
        for (std::size_t i = 0; i < b.indices.size(); ++i) {
            v(b.indices[i], k) = b.vectors(static_cast<Index>(i), s.local);
        }
    }
    return v;
}

Eigen::VectorXcd Spectrum::evaluate(const Block &b,
                                    const std::function<Complex(double)> &f) const {
    Eigen::VectorXcd fv(b.values.size());
    for (Index k = 0; k < b.values.size(); ++k) {
        const Complex v = f(b.values(k));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw DomainError("matrix function undefined at eigenvalue " +
                              std::to_string(b.values(k)));
        }
        fv(k) = v;
    }
    return fv;
}

Matrix Spectrum::function(const std::function<Complex(double)> &f) const {
    Matrix out = Matrix::Zero(dim_, dim_);
    for (const Block &b : blocks_) {
        const Eigen::VectorXcd fv = evaluate(b, f);
        const Matrix local = b.vectors * fv.asDiagonal() * b.vectors.adjoint();
        const auto n = static_cast<Index>(b.indices.size());
        for (Index j = 0; j < n; ++j) {
            for (Index i = 0; i < n; ++i) {
                out(b.indices[static_cast<std::size_t>(i)],
                    b.indices[static_cast<std::size_t>(j)]) = local(i, j);
            }
        }
    }
    return out;
}

Matrix Spectrum::apply(const std::function<Complex(double)> &f,
                       const Matrix &columns) const {
    if (columns.rows() != dim_) {
        throw DimensionError("Spectrum::apply: row count mismatch");
    }
    Matrix out = Matrix::Zero(dim_, columns.cols());
    for (const Block &b : blocks_) {
        const auto n = static_cast<Index>(b.indices.size());
        Matrix gathered(n, columns.cols());
        for (Index i = 0; i < n; ++i) {
            gathered.row(i) = columns.row(b.indices[static_cast<std::size_t>(i)]);
        }
        if (gathered.cwiseAbs().maxCoeff() == 0.0) {
            continue;
        }
        const Eigen::VectorXcd fv = evaluate(b, f);
        const Matrix local = b.vectors * (fv.asDiagonal() * (b.vectors.adjoint() * gathered));
        for (Index i = 0; i < n; ++i) {
            out.row(b.indices[static_cast<std::size_t>(i)]) = local.row(i);
        }
    }
    return out;
}

} // namespace thermoq
