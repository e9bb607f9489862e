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

#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "thermoq/tensor.hpp"

namespace thermoq::testing {

inline Matrix random_matrix(Index n, std::mt19937_64 &rng) {
    std::normal_distribution<double> d;
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            m(i, j) = Complex(d(rng), d(rng));
        }
    }
    return m;
}

inline Matrix random_hermitian(Index n, std::mt19937_64 &rng) {
    const Matrix a = random_matrix(n, rng);
    return 0.5 * (a + a.adjoint());
}

/// Random full-rank density matrix a a^dag / tr.
inline Matrix random_density(Index n, std::mt19937_64 &rng) {
    const Matrix a = random_matrix(n, rng);
    Matrix rho = a * a.adjoint();
    return rho / rho.trace().real();
}

inline Matrix ket_bra(const Vector &v) { return v * v.adjoint(); }

/// Independent Kronecker product by explicit index arithmetic.
inline Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            for (Index k = 0; k < b.rows(); ++k)
                for (Index l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

/// exp(-i H t) by Eigen's own Hermitian solver (not the library's LAPACK path).
inline Matrix eigen_unitary(const Matrix &h, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Eigen::VectorXcd phase =
        (es.eigenvalues().cast<Complex>() * Complex(0.0, -t)).array().exp().matrix();
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

inline double max_abs_diff(const Matrix &a, const Matrix &b) { return (a - b).cwiseAbs().maxCoeff(); }

} // namespace thermoq::testing
