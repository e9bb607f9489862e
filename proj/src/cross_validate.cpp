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

#include "thermoq/cross_validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "thermoq/mean_force.hpp"

namespace thermoq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kCrossTail = 1e-12;

class Draw {
  public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
    }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  private:
    std::mt19937_64 rng_;
};

DensityMatrix pure(const Vector &psi) {
    return DensityMatrix::trusted(HilbertSpace({psi.size()}), psi * psi.adjoint());
}

std::vector<std::string> columns() {
    return {"draw",        "model",        "beta",           "t",
            "dim",         "score_dev",    "two_point_dev",  "fisher_dev",
            "closed_form_dev", "average_heat_dev", "reconstruction", "sylvester",
            "deviation_identity", "energy_ur", "error"};
}

struct Row {
    long long draw = 0;
    std::string model;
    double beta = kNaN, t = kNaN, dim = kNaN;
    double score = kNaN, two_point = kNaN, fisher = kNaN, closed = kNaN, average = kNaN;
    double reconstruction = kNaN, sylvester = kNaN, deviation = kNaN, energy_ur = kNaN;
    std::string error;

    [[nodiscard]] std::vector<Cell> cells() const {
        return {draw,   model,     beta,           t,         dim,       score,     two_point,
                fisher, closed,    average,        reconstruction, sylvester, deviation, energy_ur,
                error};
    }
};

void heat_checks(CheckLedger &ledger, Row &row, const HeatInstance &inst, const std::string &where) {
    row.score = inst.score_deviation;
    row.two_point = inst.two_point_deviation;
    row.fisher = inst.fisher_deviation;
    ledger.record("score_heat", tolerance::score_heat, row.score, where);
    ledger.record("two_point", tolerance::two_point, row.two_point, where);
    ledger.record("fisher_ur", tolerance::fisher, row.fisher, where);
}

Row heat_exchange_draw(Draw &d, const CrossValidateOptions &opt, CheckLedger &ledger) {
    Row row;
    row.model = "heat-exchange";
    HEParams p;
    p.omega_0 = d.uniform(0.5, 2.0);
    p.omega_a = p.omega_0 + 2.0 * d.uniform(-0.2, 0.5);
    p.g = d.uniform(0.05, 0.5);
    p.beta = d.uniform(1.0, 3.0) / p.omega_0;
    p.t = d.uniform(0.1, 2.0) * p.optimal_time();
    const int n_max = std::min(30, truncation_level(p.beta, p.omega_0, kCrossTail));
    row.beta = p.beta;
    row.t = p.t;
    row.dim = (n_max + 1) * (n_max + 1);
    const std::string where = describe({{"omega_a", p.omega_a}, {"omega_0", p.omega_0}, {"g", p.g},
                                        {"beta", p.beta}, {"t", p.t}, {"n_max", n_max}});
    const CompositeModel model = build_coupled_oscillators(p.omega_a, p.omega_0, p.g, n_max);
    Vector vac = Vector::Zero(n_max + 1);
    vac(0) = 1.0;
    const HeatInstance inst = evaluate_heat_instance(model, pure(vac), p.beta, p.t,
                                                     fock_measurement(n_max),
                                                     {opt.prob_floor, opt.mutation}, opt.fd_step);
    heat_checks(ledger, row, inst, "heat-exchange " + where);
    if (opt.closed_form) {
        row.closed = he_closed_form_deviation(p, inst);
        ledger.record("closed_form_he", tolerance::closed_form, row.closed, "heat-exchange " + where);
    }
    return row;
}

Row dephasing_draw(Draw &d, const CrossValidateOptions &opt, CheckLedger &ledger) {
    Row row;
    row.model = "dephasing";
    const int k = d.integer(1, 3);
    constexpr int caps[3] = {15, 8, 5};
    constexpr double min_beta_omega[3] = {1.5, 2.5, 3.0};
    const double g_max = k == 1 ? 0.3 : 0.1;
    DephParams p;
    double omega_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
        p.modes.push_back({d.uniform(0.8, 2.0), d.uniform(0.02, g_max)});
        omega_min = std::min(omega_min, p.modes.back().omega);
    }
    p.beta = d.uniform(min_beta_omega[k - 1], min_beta_omega[k - 1] + 2.0) / omega_min;
    p.t = d.uniform(0.5, 5.0);

    NumericsConfig numerics;
    numerics.tail = kCrossTail;
    std::vector<int> cutoffs;
    bool exact_enough = true;
    Index dim = 2;
    std::vector<std::pair<std::string, double>> params{{"beta", p.beta}, {"t", p.t}};
    for (std::size_t i = 0; i < p.modes.size(); ++i) {
        const int wanted = dephasing_cutoff(numerics, p.beta, p.modes[i]);
        exact_enough = exact_enough && wanted <= caps[k - 1];
        cutoffs.push_back(std::min(wanted, caps[k - 1]));
        dim *= cutoffs.back() + 1;
        params.emplace_back("omega" + std::to_string(i), p.modes[i].omega);
        params.emplace_back("g" + std::to_string(i), p.modes[i].g);
        params.emplace_back("n_max" + std::to_string(i), cutoffs.back());
    }
    row.beta = p.beta;
    row.t = p.t;
    row.dim = static_cast<double>(dim);
    const std::string where = "dephasing " + describe(params);
    const CompositeModel model = build_dephasing_model(p.modes, cutoffs, Matrix::Zero(2, 2));
    const Vector plus = Vector::Constant(2, Complex(std::numbers::sqrt2 / 2.0, 0.0));
    const HeatInstance inst = evaluate_heat_instance(model, pure(plus), p.beta, p.t,
                                                     pauli_x_measurement(),
                                                     {opt.prob_floor, opt.mutation}, opt.fd_step);
    heat_checks(ledger, row, inst, where);
    if (opt.closed_form && exact_enough) {
        row.closed = deph_closed_form_deviation(p, inst);
        ledger.record("closed_form_deph", tolerance::closed_form, row.closed, where);
        double mean_tra = 0.0;
        for (const OutcomeHeat &o : inst.record.outcomes) {
            if (!o.suppressed) {
                mean_tra += o.probability * o.trajectory_heat;
            }
        }
        row.average = std::abs(mean_tra - deph_Q(p));
        ledger.record("average_heat", tolerance::average_heat, row.average, where);
    }
    return row;
}

Row mean_force_draw(Draw &d, const CrossValidateOptions &opt, CheckLedger &ledger) {
    Row row;
    row.model = "mean-force";
    const int k = d.integer(1, 2);
    std::vector<BathMode> modes;
    std::vector<int> cutoffs;
    Index dim = 2;
    const double beta = d.uniform(0.3, 3.0);
    const double omega_q = d.uniform(0.5, 1.5);
    const double tunneling = d.uniform(0.1, 0.8);
    std::vector<std::pair<std::string, double>> params{
        {"beta", beta}, {"omega_q", omega_q}, {"tunneling", tunneling}};
    for (int i = 0; i < k; ++i) {
        modes.push_back({d.uniform(0.5, 2.0), d.uniform(0.05, 0.3)});
        cutoffs.push_back(d.integer(4, 8));
        dim *= cutoffs.back() + 1;
        params.emplace_back("omega" + std::to_string(i), modes.back().omega);
        params.emplace_back("g" + std::to_string(i), modes.back().g);
        params.emplace_back("n_max" + std::to_string(i), cutoffs.back());
    }
    row.beta = beta;
    row.dim = static_cast<double>(dim);
    const std::string where = "mean-force " + describe(params);
    Matrix hs(2, 2);
    hs << 0.0, tunneling, tunneling, omega_q;
    const CompositeModel model = build_dephasing_model(modes, cutoffs, hs);
    const UncertaintyCheck ur = temperature_energy_ur_check(model, beta, 1e-8, opt.fd_step);
    const MeanForceResult mf = internal_energy_deviation(model, beta, 1e-8, opt.fd_step);
    row.reconstruction = mf.reconstruction_error;
    row.sylvester = mf.sylvester_residual;
    row.deviation = mf.identity_deviation;
    row.energy_ur = std::abs(ur.fisher - mf.delta_u_sq) / mf.delta_u_sq;
    ledger.record("mean_force_reconstruction", tolerance::reconstruction, row.reconstruction, where);
    ledger.record("mean_force_sylvester", tolerance::sylvester, row.sylvester, where);
    ledger.record("mean_force_deviation", tolerance::deviation, row.deviation, where);
    ledger.record("energy_ur", tolerance::energy_ur, row.energy_ur, where);
    return row;
}

} // namespace

RunResult cross_validate(const CrossValidateOptions &options) {
    if (options.draws < 1) {
        throw std::invalid_argument("cross_validate: draws must be >= 1");
    }
    RunResult result;
    result.experiment = Experiment::cross_validate;
    result.table.columns = columns();
    Draw d(options.seed);
    using Runner = Row (*)(Draw &, const CrossValidateOptions &, CheckLedger &);
    std::vector<std::pair<std::string, Runner>> runners{{"heat-exchange", heat_exchange_draw},
                                                        {"dephasing", dephasing_draw}};
    if (options.mean_force) {
        runners.emplace_back("mean-force", mean_force_draw);
    }
    for (int draw = 0; draw < options.draws; ++draw) {
        for (const auto &[name, run] : runners) {
            // a fixed number of variates per instance keeps later draws reproducible
            Draw local(static_cast<std::uint64_t>(d.integer(0, std::numeric_limits<int>::max())));
            Row row;
            try {
                row = run(local, options, result.checks);
            } catch (const std::exception &e) {
                row.model = name;
                row.error = e.what();
                ++result.failed_points;
                result.checks.record("instance_errors", 0.0, 1.0, e.what());
            }
            row.draw = draw;
            result.table.rows.push_back(row.cells());
        }
    }
    result.summary["seed"] = static_cast<double>(options.seed);
    result.summary["draws"] = options.draws;
    return result;
}

} // namespace thermoq
