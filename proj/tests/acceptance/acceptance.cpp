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


// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "thermoq/closed_form.hpp"
#include "thermoq/config.hpp"
#include "thermoq/experiments.hpp"
#include "thermoq/heat.hpp"
#include "thermoq/mean_force.hpp"

using namespace thermoq;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
    bool passed = true;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string &title, const Verdict &v) {
    std::printf("%s C%-2d %-34s %s\n", v.passed ? "PASS" : "FAIL", id, title.c_str(), v.detail.c_str());
    std::fflush(stdout);
    if (!v.passed) {
        ++failures;
    }
}

std::string fmt(const char *f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

Matrix random_density(Index n, std::mt19937_64 &rng) {
    std::normal_distribution<double> d;
    Matrix a(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            a(i, j) = Complex(d(rng), d(rng));
    Matrix rho = a * a.adjoint();
    return rho / rho.trace().real();
}

DensityMatrix vacuum(int n_max) {
    Matrix m = Matrix::Zero(n_max + 1, n_max + 1);
    m(0, 0) = 1.0;
    return DensityMatrix(HilbertSpace({n_max + 1}), m);
}

DensityMatrix plus_x() { return DensityMatrix(HilbertSpace({2}), 0.5 * Matrix::Ones(2, 2)); }

// ---------------------------------------------------------------------------
// C1-C3 and C11: random instances of both thermometers

struct Instance {
    CompositeModel model;
    DensityMatrix rho0;
    double beta;
    double t;
    ProjectiveMeasurement meas;
};

std::vector<Instance> draw_instances(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Instance> out;
    for (int k = 0; k < 20; ++k) {
        const double omega_0 = 0.5 + 1.5 * u(rng);
        const double omega_a = omega_0 * (0.7 + 0.6 * u(rng));
        const double g = 0.05 + 0.45 * u(rng);
        const double beta = (0.5 + 2.5 * u(rng)) / omega_0;
        const int n_max = std::min(30, truncation_level(beta, omega_0, 1e-12));
        HEParams p{omega_a, omega_0, g, beta, 0.0};
        const double t = (0.1 + 2.0 * u(rng)) * p.optimal_time();
        // alternate the vacuum probe with a random mixed probe on the lowest levels
        Matrix rho = Matrix::Zero(n_max + 1, n_max + 1);
        if (k % 2 == 0) {
            rho(0, 0) = 1.0;
        } else {
            const Index low = std::min<Index>(4, n_max + 1);
            rho.topLeftCorner(low, low) = random_density(low, rng);
        }
        out.push_back({build_coupled_oscillators(omega_a, omega_0, g, n_max),
                       DensityMatrix(HilbertSpace({n_max + 1}), rho), beta, t, fock_measurement(n_max)});
    }
    for (int k = 0; k < 20; ++k) {
        const int modes = 1 + k % 3;
        const int cap = modes == 1 ? 15 : modes == 2 ? 8 : 5;
        std::vector<BathMode> bath;
        for (int i = 0; i < modes; ++i) {
            bath.push_back({0.8 + 1.2 * u(rng), 0.02 + 0.25 * u(rng)});
        }
        const double beta = 1.0 + 3.0 * u(rng);
        const double t = 0.3 + 5.0 * u(rng);
        Matrix hs = Matrix::Zero(2, 2);
        if (k % 4 == 3) {
            // a tilted probe Hamiltonian keeps the identities generic
            hs << 0.0, 0.2, 0.2, 0.7;
        }
        const CompositeModel model = build_dephasing_model(bath, std::vector<int>(modes, cap), hs);
        const DensityMatrix rho0 = k % 2 == 0 ? plus_x() : DensityMatrix(HilbertSpace({2}), random_density(2, rng));
        out.push_back({model, rho0, beta, t, pauli_x_measurement()});
    }
    return out;
}

struct IdentityMaxima {
    double score = 0.0;
    double fisher = 0.0;
    double two_point = 0.0;
};

IdentityMaxima identity_maxima(const std::vector<Instance> &instances, HeatMutation mutation) {
    IdentityMaxima m;
    for (const Instance &in : instances) {
        const HeatRecord rec =
            heat_decomposition(in.model, in.rho0, in.beta, in.t, in.meas, {kProbabilityFloor, mutation});
        const double fd = fisher_finite_difference(in.model, in.rho0, in.beta, in.t, in.meas);
        const double f_dev = std::abs(fd - rec.fisher) / std::max(rec.fisher, 1e-12);
        m.fisher = std::isfinite(f_dev) ? std::max(m.fisher, f_dev) : INFINITY;
        if (mutation != HeatMutation::none) {
            continue;
        }
        const auto direct = score_direct_all(in.model, in.rho0, in.beta, in.t, in.meas);
        const auto two_point =
            two_point_trajectory_heat_all(in.model, initial_state(in.model, in.rho0, in.beta), in.t, in.meas);
        for (std::size_t l = 0; l < rec.outcomes.size(); ++l) {
            const OutcomeHeat &o = rec.outcomes[l];
            if (!(o.probability > 1e-12)) {
                continue;
            }
            m.score = std::max(m.score, std::abs(direct[l] - o.score));
            m.two_point = std::max(m.two_point, std::abs(two_point[l] - o.trajectory_heat));
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// C4: heat-exchange grid against the closed forms

Verdict criterion_4() {
    double worst = 0.0;
    int points = 0;
    std::string where;
    for (double beta : {0.5, 1.0, 2.0}) {
        for (double ratio : {0.0, 0.5, 2.0}) {
            for (double fraction : {1.0, 1.0 / 3.0}) {
                HEParams p;
                p.omega_0 = 1.0;
                p.g = 0.1;
                p.omega_a = p.omega_0 + 2.0 * ratio * p.g;
                p.beta = beta;
                p.t = fraction * p.optimal_time();
                const int n_max = truncation_level(beta, p.omega_0, 1e-16);
                const CompositeModel m = build_coupled_oscillators(p.omega_a, p.omega_0, p.g, n_max);
                const HeatRecord rec = heat_decomposition(m, vacuum(n_max), beta, p.t, fock_measurement(n_max));
                auto note = [&](double dev) {
                    if (!(dev <= worst)) {
                        worst = std::isfinite(dev) ? dev : INFINITY;
                        where = fmt("beta=%g delta/g=%g t/t_opt=%.3f", beta, ratio, fraction);
                    }
                };
                for (int l = 0; l <= n_max; ++l) {
                    const double pl = he_outcome_probability(p, l);
                    if (pl < 1e-10) {
                        break;
                    }
                    const OutcomeHeat &o = rec.outcomes[static_cast<std::size_t>(l)];
                    const HeatPair h = he_heat_terms(p, l);
                    note(std::abs(o.probability - pl) / pl);
                    note(std::abs(o.trajectory_heat - h.trajectory) / std::max(std::abs(h.trajectory), p.omega_0));
                    note(std::abs(o.correlation_heat - h.correlation) / std::max(std::abs(h.correlation), p.omega_0));
                }
                const double bound = he_precision_bound(p);
                note(std::abs(precision_bound(rec.fisher) / beta - bound) / bound);
                ++points;
            }
        }
    }
    return {worst <= 1e-6, fmt("max rel=%.2e tol=1e-6 points=%g", worst, points) + " worst at " + where};
}

// C5: the resonance worked number
Verdict criterion_5() {
    HEParams p;
    p.beta = 1.0;
    p.t = p.optimal_time();
    const double bound = he_precision_bound(p);
    const double exact = (std::numbers::e - 1.0) / std::sqrt(std::numbers::e);
    const int n_max = 40;
    const CompositeModel m = build_coupled_oscillators(1.0, 1.0, p.g, n_max);
    const HeatRecord rec = heat_decomposition(m, vacuum(n_max), 1.0, p.t, fock_measurement(n_max));
    const double numeric = precision_bound(rec.fisher);
    const bool ok = std::abs(bound - 1.042190) <= 1e-5 && std::abs(exact - 1.042190) <= 1e-5 &&
                    std::abs(numeric - 1.042190) <= 1e-5;
    return {ok, fmt("closed=%.7f (e-1)/sqrt(e)=%.7f brute=%.7f target=1.042190", bound, exact, numeric)};
}

// C6: single-mode dephasing numbers
Verdict criterion_6() {
    DephParams p;
    p.modes = {{1.0, 0.1}};
    p.beta = 1.0;
    p.t = std::numbers::pi;
    const double gamma = deph_gamma(p), q = deph_Q(p), c = deph_C(p), bound = deph_precision_bound(p);
    bool ok = std::abs(gamma - 0.173116) <= 1e-6 && std::abs(q + 0.04) <= 1e-10 && std::abs(c + 0.073654) <= 1e-6 &&
              std::abs(bound - 4.3665) <= 1e-3;

    const int n_max = 40;
    const CompositeModel m = build_dephasing_model(p.modes, n_max);
    const DensityMatrix chit = evolve_total(m, initial_state(m, plus_x(), p.beta), p.t);
    const std::array<Index, 1> keep{0};
    const Matrix qubit = partial_trace(chit, keep).matrix();
    const double gamma_bf = -std::log(2.0 * std::abs(qubit(0, 1)));
    const HeatRecord rec = heat_decomposition(m, plus_x(), p.beta, p.t, pauli_x_measurement());
    const double q_bf = rec.average_heat;
    // score_+ = e^{-Gamma} C / P_+
    const double c_bf = rec.outcomes[0].score * rec.outcomes[0].probability * std::exp(gamma_bf);
    const double bound_bf = precision_bound(rec.fisher) / p.beta;
    ok = ok && std::abs(gamma_bf - gamma) <= 1e-6 && std::abs(q_bf - q) <= 1e-10 && std::abs(c_bf - c) <= 1e-6 &&
         std::abs(bound_bf - bound) <= 1e-3;
    return {ok, fmt("Gamma=%.7f Q=%.10f C=%.7f bound=%.5f", gamma, q, c, bound) +
                    fmt(" | brute dGamma=%.1e dQ=%.1e dC=%.1e dbound=%.1e", std::abs(gamma_bf - gamma),
                        std::abs(q_bf - q), std::abs(c_bf - c), std::abs(bound_bf - bound))};
}

// C7: average trajectory heat equals Q
Verdict criterion_7() {
    const std::vector<std::vector<BathMode>> cases{
        {{1.0, 0.1}}, {{1.0, 0.25}}, {{0.9, 0.1}, {1.6, 0.15}}, {{0.8, 0.08}, {1.2, 0.1}, {2.0, 0.05}}};
    const std::vector<int> cutoffs{40, 45, 20, 10};
    double worst = 0.0;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        for (double t : {0.7, std::numbers::pi, 4.1}) {
            DephParams p;
            p.modes = cases[c];
            p.beta = c == 3 ? 4.0 : 1.5;
            p.t = t;
            const CompositeModel m = build_dephasing_model(p.modes, cutoffs[c]);
            const HeatRecord rec = heat_decomposition(m, plus_x(), p.beta, t, pauli_x_measurement());
            double mean = 0.0;
            for (const OutcomeHeat &o : rec.outcomes) {
                mean += o.probability * o.trajectory_heat;
            }
            worst = std::max(worst, std::abs(mean - deph_Q(p)));
        }
    }
    return {worst <= 1e-8, fmt("max |sum P H_tra - Q|=%.2e tol=1e-8 instances=12", worst)};
}

// C8: low-temperature scaling exponents
Verdict criterion_8() {
    const auto start = Clock::now();
    const RunResult he = run_experiment(
        parse_config(R"({"experiment": "scaling-he", "sweep": {"beta": {"logspace": [5, 50, 8]}}})"));
    const RunResult de = run_experiment(
        parse_config(R"({"experiment": "scaling-deph", "sweep": {"beta": {"logspace": [5, 50, 8]}}})"));
    const double elapsed = seconds_since(start);
    if (he.slopes.size() != 1 || de.slopes.size() != 1) {
        return {false, "slope fit missing"};
    }
    const double s_he = he.slopes[0].fit.slope;
    const double s_de = de.slopes[0].fit.slope;
    const bool ok = std::abs(s_he - 1.0) <= 0.1 && std::abs(s_de - 2.0) <= 0.1 && he.passed() && de.passed() &&
                    elapsed < 60.0;
    return {ok, fmt("HE slope=%.4f (1.0) dephasing slope=%.4f (2.0) tol=0.1 runtime=%.1fs", s_he, s_de, elapsed)};
}

// ---------------------------------------------------------------------------
// C9, C10: mean force on a qubit with two bath modes

Matrix qubit_h() {
    Matrix h(2, 2);
    h << 0.0, 0.5, 0.5, 1.0;
    return h;
}

CompositeModel mean_force_model(double g, double beta, double tail) {
    const std::vector<BathMode> modes{{0.8, g}, {1.3, g}};
    return build_dephasing_model(
        modes, {truncation_level(beta, 0.8, tail), truncation_level(beta, 1.3, tail)}, qubit_h());
}

/// Tr_B e^{-beta H} / Tr e^{-beta H}, dense and independent of the library spectra.
Matrix reference_reduced_gibbs(const CompositeModel &m, double beta) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.hamiltonian().matrix());
    const RealVector w = (-beta * (es.eigenvalues().array() - es.eigenvalues().minCoeff())).exp().matrix();
    const Matrix gibbs = es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    const Index ds = m.system_dim(), db = m.sample_dim();
    Matrix out = Matrix::Zero(ds, ds);
    for (Index a = 0; a < ds; ++a)
        for (Index c = 0; c < ds; ++c)
            for (Index k = 0; k < db; ++k)
                out(a, c) += gibbs(a * db + k, c * db + k);
    return out / out.trace().real();
}

Verdict criterion_9() {
    double rec = 0.0, syl = 0.0, dev = 0.0, ur = 0.0, prod = 0.0, ref = 0.0;
    for (const auto &[g, beta] : {std::pair{0.15, 1.0}, std::pair{0.15, 2.0}, std::pair{0.3, 1.0}}) {
        const CompositeModel m = mean_force_model(g, beta, 1e-10);
        const MeanForceResult r = internal_energy_deviation(m, beta);
        const UncertaintyCheck c = temperature_energy_ur_check(m, beta);
        rec = std::max(rec, r.reconstruction_error);
        syl = std::max(syl, r.sylvester_residual);
        dev = std::max(dev, r.identity_deviation);
        ur = std::max(ur, std::abs(c.fisher - r.delta_u_sq) / r.delta_u_sq);
        prod = std::max(prod, std::abs(c.product - 1.0));
        // H* rebuilt against an independent dense reduced Gibbs state
        const Eigen::SelfAdjointEigenSolver<Matrix> hs(r.h_star.matrix());
        const RealVector w = (-beta * hs.eigenvalues().array()).exp().matrix();
        Matrix rebuilt = hs.eigenvectors() * w.cast<Complex>().asDiagonal() * hs.eigenvectors().adjoint();
        rebuilt /= rebuilt.trace().real();
        ref = std::max(ref, max_abs(rebuilt - reference_reduced_gibbs(m, beta)));
    }
    const bool ok = rec <= 1e-10 && ref <= 1e-10 && syl <= 1e-8 && dev <= 1e-6 && ur <= 1e-5 && prod <= 1e-5;
    return {ok, fmt("(a) %.1e/%.1e (b) %.1e (c) %.1e", rec, ref, syl, dev) +
                    fmt(" (d) %.1e |product-1|=%.1e", ur, prod)};
}

Verdict criterion_10() {
    std::vector<double> dist;
    for (double g : {0.1, 0.05, 0.025, 0.0}) {
        const CompositeModel m = mean_force_model(g, 1.0, 1e-10);
        dist.push_back(max_abs(energy_operator(m, 1.0).matrix() - qubit_h()));
    }
    const bool ok = dist[0] > dist[1] && dist[1] > dist[2] && dist[3] <= 1e-6;
    return {ok, fmt("||E*-H_S||: g=0.1 %.2e, 0.05 %.2e, 0.025 %.2e, ", dist[0], dist[1], dist[2]) +
                    fmt("0 %.2e", dist[3])};
}

} // namespace

int main() {
    std::printf("thermoq acceptance suite\n");
    const auto start = Clock::now();
    const std::vector<Instance> instances = draw_instances(20260101);
    const IdentityMaxima id = identity_maxima(instances, HeatMutation::none);
    const double elapsed = seconds_since(start);
    report(1, "score-heat identity",
           {id.score <= 1e-8 && elapsed < 120.0,
            fmt("max=%.2e tol=1e-8 instances=40 runtime(C1-C3)=%.1fs", id.score, elapsed)});
    report(2, "temperature-heat UR (Fisher)", {id.fisher <= 1e-5, fmt("max rel=%.2e tol=1e-5", id.fisher)});
    report(3, "two-point trajectory heat", {id.two_point <= 1e-8, fmt("max=%.2e tol=1e-8", id.two_point)});

    const std::vector<std::pair<int, std::function<Verdict()>>> criteria{
        {4, criterion_4}, {5, criterion_5}, {6, criterion_6}, {7, criterion_7},
        {8, criterion_8}, {9, criterion_9}, {10, criterion_10}};
    const char *titles[] = {"heat-exchange closed forms", "heat-exchange bound number", "dephasing closed forms",
                            "dephasing average heat",     "scaling exponents",          "mean-force identities",
                            "weak-coupling collapse"};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception &e) {
            v = {false, std::string("error: ") + e.what()};
        }
        report(criteria[i].first, titles[i], v);
    }

    const IdentityMaxima flip = identity_maxima(instances, HeatMutation::flip_correlation_sign);
    const IdentityMaxima drop = identity_maxima(instances, HeatMutation::drop_probability_normalization);
    report(11, "mutation sensitivity",
           {flip.fisher > 1e-5 && drop.fisher > 1e-5,
            fmt("C2 deviation with flipped H_cor=%.2e, without 1/P_l=%.2e (both must exceed 1e-5)", flip.fisher,
                drop.fisher)});

    std::printf("%s: %d criterion(s) failed, total %.1fs\n", failures ? "FAILED" : "ALL PASSED", failures,
                seconds_since(start));
    return failures ? 1 : 0;
}
