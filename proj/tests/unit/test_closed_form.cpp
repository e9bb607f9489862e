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


#include <catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "thermoq/closed_form.hpp"
#include "thermoq/heat.hpp"

using namespace thermoq;
using namespace thermoq::testing;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

HEParams he(double omega_a, double g, double beta, double t) {
    HEParams p;
    p.omega_a = omega_a;
    p.omega_0 = 1.0;
    p.g = g;
    p.beta = beta;
    p.t = t;
    return p;
}

DephParams single_mode() {
    DephParams p;
    p.modes = {{1.0, 0.1}};
    p.beta = 1.0;
    p.t = std::numbers::pi;
    return p;
}

DensityMatrix vacuum(int n) {
    Matrix m = Matrix::Zero(n + 1, n + 1);
    m(0, 0) = 1.0;
    return DensityMatrix(HilbertSpace({n + 1}), m);
}

DensityMatrix plus_x() { return DensityMatrix(HilbertSpace({2}), 0.5 * Matrix::Ones(2, 2)); }

} // namespace

TEST_CASE("heat-exchange mean excitation", "[closed_form]") {
    HEParams p = he(1.0, 0.1, 1.0, 0.0);
    CHECK(he_mean_excitation(p) == 0.0);
    p.t = std::numbers::pi / (2 * 0.1);
    const double nbar_b = 1.0 / std::expm1(1.0);
    CHECK_THAT(he_mean_excitation(p), WithinRel(nbar_b, 1e-12));
    CHECK_THAT(he_mean_excitation(p), WithinAbs(0.581977, 1e-6));

    HEParams q = he(1.2, 0.1, 1.0, 0.0);
    q.t = q.optimal_time();
    CHECK_THAT(q.rabi(), WithinRel(std::sqrt(0.02), 1e-14));
    CHECK_THAT(he_mean_excitation(q), WithinRel(0.5 * nbar_b, 1e-12));
    CHECK_THAT(he_mean_excitation(q), WithinAbs(0.290989, 1e-6));

    // brute-force <b^dag b> transferred into the probe
    const int n = 40;
    const CompositeModel m = build_coupled_oscillators(1.2, 1.0, 0.1, n);
    const DensityMatrix chit = evolve_total(m, initial_state(m, vacuum(n), 1.0), q.t);
    const std::array<Index, 1> keep{0};
    const Matrix probe = partial_trace(chit, keep).matrix();
    double mean = 0.0;
    for (int k = 0; k <= n; ++k) {
        mean += k * probe(k, k).real();
    }
    CHECK_THAT(mean, WithinAbs(he_mean_excitation(q), 1e-10));
}

TEST_CASE("heat-exchange geometric law", "[closed_form]") {
    CHECK(he_outcome_probability(he(1.0, 0.1, 1.0, 0.0), 0) == 1.0);
    HEParams p = he(1.1, 0.2, 0.7, 0.0);
    p.t = 0.8 * p.optimal_time();
    const double nbar = he_mean_excitation(p);
    double total = 0.0, mean = 0.0, second = 0.0;
    for (int l = 0; l < 400; ++l) {
        const double pl = he_outcome_probability(p, l);
        total += pl;
        mean += l * pl;
        second += static_cast<double>(l) * l * pl;
    }
    CHECK_THAT(total, WithinAbs(1.0, 1e-12));
    CHECK_THAT(mean, WithinRel(nbar, 1e-12));
    CHECK_THAT(second - mean * mean, WithinRel(nbar * (1 + nbar), 1e-10));
}

TEST_CASE("heat-exchange heat terms", "[closed_form]") {
    HEParams p = he(1.0, 0.1, 1.0, 1.0);
    CHECK_THAT(he_heat_terms(p, 2).trajectory, WithinAbs(2.0, 1e-15));
    p.t = p.optimal_time();
    for (int l = 0; l < 6; ++l) {
        CHECK_THAT(he_heat_terms(p, l).correlation, WithinAbs(0.0, 1e-12));
    }

    // score prefactor (1 + nbar_b) / (1 + nbar) >= 1, equality at full swap
    for (double t : {0.1, 0.5, 1.0, 2.0, p.optimal_time()}) {
        p.t = t;
        const double nbar = he_mean_excitation(p);
        const double prefactor = (1 + p.thermal_occupation()) / (1 + nbar);
        CHECK(prefactor >= 1.0 - 1e-15);
        CHECK_THAT(he_score(p, 3), WithinRel(prefactor * (3 - nbar) * p.omega_0, 1e-12));
    }

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int draw = 0; draw < 5; ++draw) {
        HEParams q = he(1.0 + 0.4 * (u(rng) - 0.3), 0.05 + 0.3 * u(rng), 1.0 + 2.0 * u(rng), 0.0);
        q.t = (0.2 + 1.5 * u(rng)) * q.optimal_time();
        const int n = std::min(40, truncation_level(q.beta, q.omega_0, 1e-14));
        const CompositeModel m = build_coupled_oscillators(q.omega_a, q.omega_0, q.g, n);
        const HeatRecord rec = heat_decomposition(m, vacuum(n), q.beta, q.t, fock_measurement(n));
        for (int l = 0; l < 4; ++l) {
            const HeatPair cf = he_heat_terms(q, l);
            CHECK_THAT(rec.outcomes[l].trajectory_heat, WithinAbs(cf.trajectory, 1e-8));
            CHECK_THAT(rec.outcomes[l].correlation_heat, WithinAbs(cf.correlation, 1e-8));
            CHECK_THAT(rec.outcomes[l].score, WithinAbs(he_score(q, l), 1e-8));
        }
    }
}

TEST_CASE("heat-exchange fisher and bound", "[closed_form]") {
    HEParams p = he(1.0, 0.1, 1.0, 0.0);
    p.t = p.optimal_time();
    CHECK_THAT(he_precision_bound(p), WithinAbs((std::numbers::e - 1) / std::sqrt(std::numbers::e), 1e-12));
    CHECK_THAT(he_precision_bound(p), WithinAbs(1.042190, 1e-6));

    // F from the series sum of P_l L^2
    for (double frac : {0.3, 0.7, 1.0}) {
        p.t = frac * p.optimal_time();
        double series = 0.0;
        for (int l = 0; l < 400; ++l) {
            series += he_outcome_probability(p, l) * std::pow(he_score(p, l), 2);
        }
        CHECK_THAT(he_fisher(p), WithinRel(series, 1e-10));
        CHECK_THAT(he_precision_bound(p) * p.beta * std::sqrt(he_fisher(p)), WithinAbs(1.0, 1e-12));
    }

    // saturation against brute force
    p.t = p.optimal_time();
    const int n = 40;
    const CompositeModel m = build_coupled_oscillators(1.0, 1.0, 0.1, n);
    const HeatRecord rec = heat_decomposition(m, vacuum(n), 1.0, p.t, fock_measurement(n));
    CHECK_THAT(he_precision_bound(p) * std::sqrt(rec.fisher) * p.beta, WithinAbs(1.0, 1e-6));

    p.t = 0.0;
    CHECK(std::isinf(he_precision_bound(p)));
}

TEST_CASE("dephasing closed forms", "[closed_form]") {
    DephParams p = single_mode();
    CHECK_THAT(deph_gamma(p), WithinAbs(0.08 / std::tanh(0.5), 1e-14));
    CHECK_THAT(deph_gamma(p), WithinAbs(0.173116, 1e-6));
    CHECK_THAT(deph_Q(p), WithinAbs(-0.04, 1e-14));
    CHECK_THAT(deph_C(p), WithinAbs(-0.0736539, 1e-6));
    CHECK_THAT(deph_precision_bound(p), WithinAbs(4.3665, 1e-3));

    DephParams zero = single_mode();
    zero.t = 0.0;
    CHECK(deph_gamma(zero) == 0.0);
    CHECK(deph_Q(zero) == 0.0);
    CHECK(deph_C(zero) == 0.0);
    CHECK_THAT(deph_probability(zero, 1), WithinAbs(1.0, 1e-15));
    CHECK(std::isinf(deph_precision_bound(zero)));

    DephParams cold = single_mode();
    cold.beta = 800.0;
    CHECK_THAT(deph_C(cold), WithinAbs(0.0, 1e-300));
    CHECK(deph_Q(cold) == deph_Q(p));

    // Gamma grows with temperature
    double previous = 0.0;
    for (double beta : {5.0, 2.0, 1.0, 0.5}) {
        DephParams q = single_mode();
        q.beta = beta;
        CHECK(deph_gamma(q) > previous);
        previous = deph_gamma(q);
    }
}

TEST_CASE("dephasing heat terms and fisher", "[closed_form]") {
    DephParams p;
    p.modes = {{1.0, 0.2}, {1.6, 0.1}};
    p.beta = 1.3;
    p.t = 2.1;
    const double decay = std::exp(-deph_gamma(p));
    double mean_tra = 0.0, fisher_sum = 0.0;
    for (int l : {1, -1}) {
        const double pl = deph_probability(p, l);
        CHECK_THAT(pl, WithinAbs(0.5 * (1 + l * decay), 1e-15));
        const HeatPair h = deph_heat_terms(p, l);
        mean_tra += pl * h.trajectory;
        const double score = h.trajectory - deph_Q(p) + h.correlation;
        CHECK_THAT(score, WithinAbs(l * decay / pl * deph_C(p), 1e-14));
        fisher_sum += pl * score * score;
    }
    CHECK_THAT(mean_tra, WithinAbs(deph_Q(p), 1e-14));
    CHECK_THAT(deph_fisher(p), WithinRel(fisher_sum, 1e-12));
    CHECK_THAT(deph_fisher(p), WithinRel(4 * std::pow(deph_C(p), 2) / std::expm1(2 * deph_gamma(p)), 1e-12));
    CHECK_THAT(deph_precision_bound(p) * p.beta * std::sqrt(deph_fisher(p)), WithinAbs(1.0, 1e-12));

    DephParams zero = p;
    zero.t = 0.0;
    CHECK_THAT(deph_heat_terms(zero, 1).trajectory, WithinAbs(0.0, 1e-15));
    CHECK_THAT(deph_heat_terms(zero, 1).correlation, WithinAbs(0.0, 1e-15));
}

TEST_CASE("dephasing closed forms match brute force", "[closed_form]") {
    const std::vector<std::vector<BathMode>> cases{
        {{1.0, 0.1}}, {{1.0, 0.15}, {1.7, 0.1}}, {{0.9, 0.08}, {1.3, 0.06}, {2.0, 0.1}}};
    const std::vector<int> cutoffs{30, 12, 7};
    for (std::size_t c = 0; c < cases.size(); ++c) {
        DephParams p;
        p.modes = cases[c];
        p.beta = c == 0 ? 1.0 : 3.0;
        p.t = c == 0 ? std::numbers::pi : 1.9;
        const CompositeModel m = build_dephasing_model(p.modes, cutoffs[c]);
        const DensityMatrix chi0 = initial_state(m, plus_x(), p.beta);
        const DensityMatrix chit = evolve_total(m, chi0, p.t);
        const std::array<Index, 1> keep{0};
        const Matrix qubit = partial_trace(chit, keep).matrix();
        CHECK_THAT(2 * std::abs(qubit(0, 1)), WithinAbs(std::exp(-deph_gamma(p)), 1e-6));
        // populations are conserved
        CHECK_THAT(qubit(0, 0).real(), WithinAbs(0.5, 1e-10));

        const HeatRecord rec = heat_decomposition(m, plus_x(), p.beta, p.t, pauli_x_measurement());
        CHECK_THAT(rec.average_heat, WithinAbs(deph_Q(p), 1e-8));
        for (std::size_t i = 0; i < 2; ++i) {
            const int l = i == 0 ? 1 : -1;
            const HeatPair h = deph_heat_terms(p, l);
            const double scale = std::abs(deph_Q(p)) + std::abs(deph_C(p));
            CHECK_THAT(rec.outcomes[i].probability, WithinAbs(deph_probability(p, l), 1e-6));
            CHECK(std::abs(rec.outcomes[i].trajectory_heat - h.trajectory) <= 1e-6 * scale / rec.outcomes[i].probability);
            CHECK(std::abs(rec.outcomes[i].correlation_heat - h.correlation) <= 1e-6 * scale / rec.outcomes[i].probability);
        }
        CHECK_THAT(rec.fisher, WithinRel(deph_fisher(p), 1e-5));
    }
}

TEST_CASE("power-law fit", "[closed_form]") {
    std::vector<std::pair<double, double>> pts;
    for (double b : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        pts.emplace_back(b, 3.0 * b * b);
    }
    const PowerLawFit fit = scaling_fit(pts);
    CHECK_THAT(fit.slope, WithinAbs(2.0, 1e-10));
    CHECK_THAT(fit.intercept, WithinAbs(std::log(3.0), 1e-10));
    CHECK_THAT(fit.r_squared, WithinAbs(1.0, 1e-12));
    CHECK_THROWS(scaling_fit({{1.0, 1.0}, {2.0, 2.0}, {3.0, 3.0}}));
    pts[2].second = -1.0;
    CHECK_THROWS(scaling_fit(pts));
}

TEST_CASE("scaling parameter recipes", "[closed_form]") {
    const SpectralDensity j{0.01, 1.0, 10.0};
    const HEParams p = he_single_mode_params(j, 10.0, 0.5);
    CHECK_THAT(p.omega_0, WithinRel(0.1, 1e-15));
    CHECK_THAT(p.g * p.g, WithinRel(j.integral(0.1), 1e-12));
    CHECK_THAT(p.detuning(), WithinRel(0.5, 1e-12));
    CHECK_THAT(p.t, WithinRel(p.optimal_time(), 1e-15));

    const DephParams d = deph_spectral_params(j, 10.0, 1.0, 100, 100.0);
    CHECK(d.modes.size() == 100);
    CHECK(d.beta == 10.0);
    CHECK(d.t == 1.0);
}
