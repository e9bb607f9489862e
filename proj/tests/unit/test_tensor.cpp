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

#include <array>
#include <catch_amalgamated.hpp>

#include "helpers.hpp"
#include "thermoq/models.hpp"
#include "thermoq/tensor.hpp"

using namespace thermoq;
using namespace thermoq::testing;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("HilbertSpace dimensions", "[tensor]") {
    const HilbertSpace s({2, 3, 4});
    CHECK(s.total_dim() == 24);
    CHECK(s.factor_count() == 3);
    CHECK(s.factor_dim(1) == 3);
    CHECK(s.sample_space().total_dim() == 12);
    CHECK_THROWS_AS(HilbertSpace({2, 0}), DimensionError);
    CHECK_THROWS(HilbertSpace(std::vector<Index>{}));
}

TEST_CASE("Hermitian operator validation", "[tensor]") {
    Matrix m(2, 2);
    m << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 2.0;
    CHECK_THROWS_AS(HermitianOperator(HilbertSpace({2}), m), InvalidOperatorError);
    CHECK_THROWS_AS(HermitianOperator(HilbertSpace({3}), Matrix::Identity(2, 2)), DimensionError);
}

TEST_CASE("DensityMatrix invariants", "[tensor]") {
    const HilbertSpace s({2});
    CHECK_THROWS_AS(DensityMatrix(s, Matrix::Identity(2, 2)), InvalidOperatorError);
    Matrix neg(2, 2);
    neg << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(DensityMatrix(s, neg), InvalidOperatorError);
    const DensityMatrix rho(s, 0.5 * Matrix::Identity(2, 2));
    CHECK_THAT(rho.purity(), WithinAbs(0.5, 1e-15));
}

TEST_CASE("hermitian_eig examples", "[tensor]") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 1.0;
    const Eigensystem es = hermitian_eig(HermitianOperator(HilbertSpace({2}), d));
    CHECK_THAT(es.values(0), WithinAbs(1.0, 1e-15));
    CHECK_THAT(es.values(1), WithinAbs(2.0, 1e-15));
    CHECK(std::abs(es.vectors(1, 0)) == Catch::Approx(1.0));
    CHECK(std::abs(es.vectors(0, 1)) == Catch::Approx(1.0));

    const Eigensystem px = hermitian_eig(HermitianOperator(HilbertSpace({2}), pauli_x()));
    CHECK_THAT(px.values(0), WithinAbs(-1.0, 1e-14));
    CHECK_THAT(px.values(1), WithinAbs(1.0, 1e-14));

    CHECK_THROWS_AS(Spectrum(Matrix(Matrix::Random(3, 3))), InvalidOperatorError);
}

TEST_CASE("hermitian_eig reconstruction on random matrices", "[tensor][property]") {
    std::mt19937_64 rng(11);
    for (Index n : {1, 2, 6, 17, 64, 200, 512}) {
        const Matrix h = random_hermitian(n, rng);
        const Eigensystem es = hermitian_eig(HermitianOperator(HilbertSpace({n}), h));
        const Matrix rebuilt = es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
        CHECK(max_abs_diff(rebuilt, h) <= 1e-10 * (1.0 + max_abs(h)));
        CHECK(max_abs_diff(es.vectors.adjoint() * es.vectors, Matrix::Identity(n, n)) <= 1e-10);
        for (Index k = 1; k < n; ++k) {
            CHECK(es.values(k) >= es.values(k - 1));
        }
        // spectrum agrees with Eigen's independent solver
        Eigen::SelfAdjointEigenSolver<Matrix> ref(h, Eigen::EigenvaluesOnly);
        CHECK((ref.eigenvalues() - es.values).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + max_abs(h)));
    }
}

TEST_CASE("block-structured spectrum matches dense solver", "[tensor]") {
    std::mt19937_64 rng(5);
    // three decoupled blocks in scrambled index order
    const Index n = 9;
    Matrix h = Matrix::Zero(n, n);
    const std::array<std::array<Index, 3>, 3> blocks{{{0, 4, 8}, {1, 3, 7}, {2, 5, 6}}};
    for (const auto &b : blocks) {
        const Matrix local = random_hermitian(3, rng);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                h(b[i], b[j]) = local(i, j);
    }
    const Spectrum sp(h);
    CHECK(sp.block_count() == 3);
    Eigen::SelfAdjointEigenSolver<Matrix> ref(h);
    CHECK((ref.eigenvalues() - sp.values()).cwiseAbs().maxCoeff() <= 1e-12);
    const Matrix u = sp.function([](double x) { return std::exp(Complex(0.0, -0.7 * x)); });
    CHECK(max_abs_diff(u, eigen_unitary(h, 0.7)) <= 1e-12);
    const Matrix cols = random_matrix(n, rng).leftCols(4);
    CHECK(max_abs_diff(sp.apply([](double x) { return Complex(x * x, 0.0); }, cols), h * h * cols) <= 1e-11);
}

TEST_CASE("hermitian_func examples", "[tensor]") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    const HermitianOperator op(HilbertSpace({2}), d);
    CHECK(max_abs_diff(hermitian_func(op, [](double x) { return Complex(x, 0.0); }), d) <= 1e-15);
    CHECK(max_abs_diff(hermitian_func(op, [](double x) { return Complex(std::exp(-0.0 * x), 0.0); }),
                       Matrix::Identity(2, 2)) <= 1e-15);
    const HermitianOperator zero(HilbertSpace({2}), Matrix::Zero(2, 2));
    CHECK_THROWS_AS(hermitian_func(zero, [](double x) { return Complex(std::log(x), 0.0); }), DomainError);
}

TEST_CASE("time evolution is unitary on the two-oscillator model", "[tensor][property]") {
    const CompositeModel model = build_coupled_oscillators(1.2, 1.0, 0.3, 12);
    for (double t : {0.0, 0.1, 3.7, 50.0}) {
        const Matrix u = hermitian_func(model.hamiltonian(), [t](double e) { return std::exp(Complex(0.0, -e * t)); });
        CHECK(max_abs_diff(u.adjoint() * u, Matrix::Identity(u.rows(), u.cols())) <= 1e-10);
        CHECK(max_abs_diff(u, eigen_unitary(model.hamiltonian().matrix(), t)) <= 1e-9);
    }
}

TEST_CASE("tensor_product examples", "[tensor]") {
    CHECK(max_abs_diff(tensor_product(Matrix::Identity(2, 2), Matrix::Identity(3, 3)), Matrix::Identity(6, 6)) == 0.0);
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 1.0;
    Matrix b = Matrix::Zero(2, 2);
    b(1, 1) = 1.0;
    Matrix expected = Matrix::Zero(4, 4);
    expected(1, 1) = 1.0;
    CHECK(max_abs_diff(tensor_product(a, b), expected) == 0.0);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix x = random_matrix(3, rng);
        const Matrix y = random_matrix(4, rng);
        const Matrix xy = tensor_product(x, y);
        CHECK(max_abs_diff(xy, kron(x, y)) <= 1e-14);
        CHECK(std::abs(xy.trace() - x.trace() * y.trace()) <= 1e-12 * (1.0 + std::abs(xy.trace())));
    }
}

TEST_CASE("embed_factor examples", "[tensor]") {
    const HilbertSpace s({2, 2});
    CHECK(max_abs_diff(embed_factor(Matrix::Identity(2, 2), s, 1).matrix(), Matrix::Identity(4, 4)) == 0.0);
    Matrix p = Matrix::Zero(2, 2);
    p(1, 1) = 1.0;
    Matrix expected = Matrix::Zero(4, 4);
    expected(2, 2) = 1.0;
    expected(3, 3) = 1.0;
    CHECK(max_abs_diff(embed_factor(p, s, 0).matrix(), expected) == 0.0);
    CHECK_THROWS_AS(embed_factor(Matrix::Identity(3, 3), s, 0), DimensionError);

    std::mt19937_64 rng(8);
    const HilbertSpace s3({2, 3, 2});
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix a = embed_factor(random_hermitian(2, rng), s3, 0).matrix();
        const Matrix b = embed_factor(random_hermitian(3, rng), s3, 1).matrix();
        const Matrix c = embed_factor(random_hermitian(2, rng), s3, 2).matrix();
        CHECK(max_abs_diff(a * b, b * a) <= 1e-13);
        CHECK(max_abs_diff(a * c, c * a) <= 1e-13);
        CHECK(max_abs_diff(b * c, c * b) <= 1e-13);
    }
}

TEST_CASE("partial_trace examples", "[tensor]") {
    std::mt19937_64 rng(2);
    const Matrix a = random_density(2, rng);
    const Matrix b = random_density(3, rng);
    const HilbertSpace s({2, 3});
    const DensityMatrix ab(s, kron(a, b));
    const std::array<Index, 1> keep0{0};
    const std::array<Index, 1> keep1{1};
    const std::array<Index, 2> keep_all{0, 1};
    CHECK(max_abs_diff(partial_trace(ab, keep0).matrix(), a) <= 1e-14);
    CHECK(max_abs_diff(partial_trace(ab, keep1).matrix(), b) <= 1e-14);
    CHECK(max_abs_diff(partial_trace(ab, keep_all).matrix(), ab.matrix()) == 0.0);
    CHECK_THROWS(partial_trace(ab, std::span<const Index>{}));

    Vector bell = Vector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const DensityMatrix phi(HilbertSpace({2, 2}), ket_bra(bell));
    CHECK(max_abs_diff(partial_trace(phi, keep1).matrix(), 0.5 * Matrix::Identity(2, 2)) <= 1e-15);
}

TEST_CASE("partial_trace is linear and trace preserving", "[tensor][property]") {
    std::mt19937_64 rng(21);
    const HilbertSpace s({2, 3, 2});
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix r1 = random_density(12, rng);
        const Matrix r2 = random_density(12, rng);
        const std::array<Index, 2> keep{0, 2};
        const Matrix mixed = partial_trace((0.3 * r1 + 0.7 * r2).eval(), s, keep);
        const Matrix separate = 0.3 * partial_trace(r1, s, keep) + 0.7 * partial_trace(r2, s, keep);
        CHECK(max_abs_diff(mixed, separate) <= 1e-14);
        CHECK(std::abs(mixed.trace().real() - 1.0) <= 1e-12);
        // explicit index sum over the middle factor
        Matrix oracle = Matrix::Zero(4, 4);
        const Matrix r = 0.3 * r1 + 0.7 * r2;
        for (Index i = 0; i < 2; ++i)
            for (Index k = 0; k < 2; ++k)
                for (Index i2 = 0; i2 < 2; ++i2)
                    for (Index k2 = 0; k2 < 2; ++k2)
                        for (Index j = 0; j < 3; ++j)
                            oracle(i * 2 + k, i2 * 2 + k2) += r(i * 6 + j * 2 + k, i2 * 6 + j * 2 + k2);
        CHECK(max_abs_diff(mixed, oracle) <= 1e-14);
    }
}

TEST_CASE("thermal_state examples", "[tensor]") {
    Matrix d = Matrix::Zero(2, 2);
    d(1, 1) = 1.0;
    const HermitianOperator h(HilbertSpace({2}), d);
    const double beta = 40.0;
    const DensityMatrix g = thermal_state(h, beta);
    CHECK(std::abs(g.matrix()(0, 0).real() - 1.0) <= std::exp(-beta));
    CHECK_THROWS(thermal_state(h, 0.0));
    CHECK_THROWS(thermal_state(h, -1.0));
    // large beta with a large spectrum must not overflow
    const DensityMatrix cold = thermal_state(HermitianOperator(HilbertSpace({2}), 1e3 * d), 1e3);
    CHECK_THAT(cold.matrix()(0, 0).real(), WithinAbs(1.0, 1e-15));

    const Index n = 60;
    const Matrix a = annihilation(n);
    const HermitianOperator osc(HilbertSpace({n + 1}), a.adjoint() * a);
    const DensityMatrix rho = thermal_state(osc, 1.0);
    for (Index k = 0; k < 40; ++k) {
        CHECK_THAT(rho.matrix()(k + 1, k + 1).real() / rho.matrix()(k, k).real(), WithinRel(std::exp(-1.0), 1e-12));
    }
    double mean = 0.0;
    for (Index k = 0; k <= n; ++k) {
        mean += k * rho.matrix()(k, k).real();
    }
    CHECK_THAT(mean, WithinAbs(1.0 / std::expm1(1.0), 1e-12));
    CHECK(max_abs_diff(rho.matrix() * osc.matrix(), osc.matrix() * rho.matrix()) <= 1e-10);
}

TEST_CASE("thermal_state equals normalized exp(-beta h)", "[tensor][property]") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const HermitianOperator h(HilbertSpace({5}), random_hermitian(5, rng));
        const double beta = 0.3 + trial * 0.4;
        const Matrix e = hermitian_func(h, [beta](double x) { return Complex(std::exp(-beta * x), 0.0); });
        Eigen::SelfAdjointEigenSolver<Matrix> es(e, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
        CHECK(max_abs_diff(e / e.trace().real(), thermal_state(h, beta).matrix()) <= 1e-12);
    }
}

TEST_CASE("truncation_level examples", "[tensor]") {
    CHECK(truncation_level(20.0, 1.0, 1e-10) == 1);
    CHECK(truncation_level(1.0, 20.0, 1e-10) == 1);
    // exp(-23) = 1.03e-10 is still above the tail, so the first passing level is 23
    CHECK(truncation_level(1.0, 1.0, 1e-10) == 23);
    CHECK(truncation_level(1.0, 1.0, 0.999) == 0);
    CHECK_THROWS(truncation_level(1.0, 1.0, 1.0));
    CHECK_THROWS(truncation_level(0.0, 1.0, 1e-3));
    CHECK_THROWS(truncation_level(1.0, -1.0, 1e-3));
}

TEST_CASE("truncation_level is the smallest passing level", "[tensor][property]") {
    for (double x : {0.05, 0.3, 1.0, 2.5, 7.0, 30.0}) {
        for (double tail : {1e-3, 1e-8, 1e-12}) {
            const int n = truncation_level(x, 1.0, tail);
            CHECK(std::exp(-x * (n + 1)) < tail);
            if (n > 0) {
                CHECK(std::exp(-x * n) >= tail);
            }
        }
    }
}
