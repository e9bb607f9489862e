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

#include "thermoq/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <thread>

#include "thermoq/cross_validate.hpp"
#include "thermoq/mean_force.hpp"

namespace thermoq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

/// Largest Hilbert-space dimension the driver will diagonalize.
constexpr Index kMaxDriverDim = 6000;

double rel_dev(double numeric, double exact, double scale) {
    return std::abs(numeric - exact) / std::max(std::abs(exact), scale);
}

double safe_max(double a, double b) {
    if (std::isnan(a) || std::isnan(b)) {
        return kInf;
    }
    return std::max(a, b);
}

DensityMatrix pure_state(const Vector &psi) {
    const Index d = psi.size();
    return DensityMatrix::trusted(HilbertSpace({d}), psi * psi.adjoint());
}

struct PointOutput {
    std::vector<std::vector<Cell>> rows;
    CheckLedger checks;
    bool failed = false;
};

using Params = std::vector<std::pair<std::string, double>>;

std::vector<Cell> param_cells(const Params &params) {
    std::vector<Cell> out;
    for (const auto &[name, value] : params) {
        out.emplace_back(value);
    }
    return out;
}

void append(std::vector<Cell> &row, std::initializer_list<Cell> cells) {
    row.insert(row.end(), cells.begin(), cells.end());
}

/// Row of NaNs with the error message in the last column.
std::vector<Cell> error_row(const Params &params, std::size_t total_columns, const std::string &what) {
    std::vector<Cell> row = param_cells(params);
    while (row.size() + 1 < total_columns) {
        row.emplace_back(kNaN);
    }
    row.emplace_back(what);
    return row;
}

// ---------------------------------------------------------------- heat exchange

HEParams he_params(const ModelConfig &m) {
    HEParams p;
    p.omega_0 = m.omega_0;
    p.omega_a = m.delta ? m.omega_0 + 2.0 * *m.delta : m.omega_a;
    p.g = m.g;
    p.beta = m.beta;
    p.validate();
    p.t = m.t ? *m.t : m.t_fraction * p.optimal_time();
    return p;
}

Params he_point_params(const HEParams &p, int n_max) {
    return {{"beta", p.beta},       {"omega_a", p.omega_a}, {"omega_0", p.omega_0}, {"g", p.g},
            {"delta", p.detuning()}, {"t", p.t},            {"n_max", n_max}};
}

const std::vector<std::string> kHEParamColumns{"beta", "omega_a", "omega_0", "g", "delta", "t", "n_max"};
const std::vector<std::string> kOutcomeColumns{"l", "P_l", "H_tra", "H_cor", "score", "score_direct"};

std::vector<std::string> with_outcomes(std::vector<std::string> params, bool per_outcome,
                                       const std::vector<std::string> &aggregates) {
    if (per_outcome) {
        params.insert(params.end(), kOutcomeColumns.begin(), kOutcomeColumns.end());
    }
    params.insert(params.end(), aggregates.begin(), aggregates.end());
    params.emplace_back("error");
    return params;
}

std::vector<std::string> he_columns(bool per_outcome) {
    return with_outcomes(kHEParamColumns, per_outcome,
                         {"H_avg", "fisher_heat", "fisher_fd", "fisher_closed_form", "bound",
                          "bound_closed_form", "score_dev", "two_point_dev", "closed_form_dev",
                          "excluded_probability"});
}

/// Emits one aggregate row or one row per unsuppressed outcome.
void emit_rows(PointOutput &out, const Params &params, const HeatInstance &inst, bool per_outcome,
               const std::vector<Cell> &aggregates) {
    if (!per_outcome) {
        std::vector<Cell> row = param_cells(params);
        row.insert(row.end(), aggregates.begin(), aggregates.end());
        row.emplace_back(std::string());
        out.rows.push_back(std::move(row));
        return;
    }
    for (std::size_t l = 0; l < inst.record.outcomes.size(); ++l) {
        const OutcomeHeat &o = inst.record.outcomes[l];
        if (o.suppressed) {
            continue;
        }
        std::vector<Cell> row = param_cells(params);
        append(row, {o.label, o.probability, o.trajectory_heat, o.correlation_heat, o.score,
                     inst.score_direct[l]});
        row.insert(row.end(), aggregates.begin(), aggregates.end());
        row.emplace_back(std::string());
        out.rows.push_back(std::move(row));
    }
}

void record_heat_checks(CheckLedger &ledger, const HeatInstance &inst, double beta,
                        double bound, const std::string &where) {
    ledger.record("score_heat", tolerance::score_heat, inst.score_deviation, where);
    ledger.record("two_point", tolerance::two_point, inst.two_point_deviation, where);
    ledger.record("fisher_ur", tolerance::fisher, inst.fisher_deviation, where);
    if (std::isfinite(bound) && inst.fisher_fd > 0.0) {
        ledger.record("cramer_rao", tolerance::cramer_rao,
                      std::abs(bound * beta * std::sqrt(inst.fisher_fd) - 1.0), where);
    }
}

PointOutput he_point(const RunConfig &cfg, const ModelConfig &m) {
    PointOutput out;
    const HEParams p = he_params(m);
    const int n_max = mode_cutoff(cfg.numerics, p.beta, p.omega_0);
    const Params params = he_point_params(p, n_max);
    const std::string where = describe(params);

    const CompositeModel model = build_coupled_oscillators(p.omega_a, p.omega_0, p.g, n_max);
    Vector vac = Vector::Zero(n_max + 1);
    vac(0) = 1.0;
    const HeatInstance inst =
        evaluate_heat_instance(model, pure_state(vac), p.beta, p.t, fock_measurement(n_max),
                               HeatOptions{cfg.numerics.prob_floor, HeatMutation::none},
                               cfg.numerics.fd_step);
    const double bound = precision_bound(inst.record.fisher) / p.beta;
    record_heat_checks(out.checks, inst, p.beta, bound, where);
    double cf_dev = kNaN;
    if (!cfg.numerics.n_max) {
        cf_dev = he_closed_form_deviation(p, inst);
        out.checks.record("closed_form_he", tolerance::closed_form, cf_dev, where);
    }
    emit_rows(out, params, inst, cfg.output.per_outcome,
              {inst.record.average_heat, inst.record.fisher, inst.fisher_fd, he_fisher(p), bound,
               he_precision_bound(p), inst.score_deviation, inst.two_point_deviation, cf_dev,
               inst.record.excluded_probability});
    return out;
}

// -------------------------------------------------------------------- dephasing

const std::vector<std::string> kDephParamColumns{"beta", "t", "modes", "g", "dim"};

std::vector<std::string> deph_columns(bool per_outcome) {
    return with_outcomes(kDephParamColumns, per_outcome,
                         {"gamma", "Q", "C", "H_avg", "fisher_heat", "fisher_fd",
                          "fisher_closed_form", "bound", "bound_closed_form", "score_dev",
                          "two_point_dev", "average_heat_dev", "closed_form_dev"});
}

PointOutput deph_point(const RunConfig &cfg, const ModelConfig &m) {
    PointOutput out;
    DephParams p{m.modes, m.beta, m.t ? *m.t : std::numbers::pi};
    p.validate();
    std::vector<int> cutoffs;
    Index dim = 2;
    for (const BathMode &mode : p.modes) {
        cutoffs.push_back(dephasing_cutoff(cfg.numerics, p.beta, mode));
        dim *= cutoffs.back() + 1;
    }
    const Params params{{"beta", p.beta},
                        {"t", p.t},
                        {"modes", static_cast<double>(p.modes.size())},
                        {"g", p.modes.front().g},
                        {"dim", static_cast<double>(dim)}};
    if (dim > kMaxDriverDim) {
        throw std::invalid_argument("model dimension " + std::to_string(dim) +
                                    " exceeds the driver limit; set numerics.n_max");
    }
    const std::string where = describe(params);
    const CompositeModel model = build_dephasing_model(p.modes, cutoffs, Matrix::Zero(2, 2));
    const Vector plus = Vector::Constant(2, Complex(std::numbers::sqrt2 / 2.0, 0.0));
    const HeatInstance inst =
        evaluate_heat_instance(model, pure_state(plus), p.beta, p.t, pauli_x_measurement(),
                               HeatOptions{cfg.numerics.prob_floor, HeatMutation::none},
                               cfg.numerics.fd_step);
    const double bound = precision_bound(inst.record.fisher) / p.beta;
    record_heat_checks(out.checks, inst, p.beta, bound, where);

    double mean_tra = 0.0;
    for (const OutcomeHeat &o : inst.record.outcomes) {
        if (!o.suppressed) {
            mean_tra += o.probability * o.trajectory_heat;
        }
    }
    const double q = deph_Q(p);
    const double avg_dev = std::abs(mean_tra - q);
    out.checks.record("average_heat", tolerance::average_heat, avg_dev, where);
    double cf_dev = kNaN;
    if (!cfg.numerics.n_max) {
        cf_dev = deph_closed_form_deviation(p, inst);
        out.checks.record("closed_form_deph", tolerance::closed_form, cf_dev, where);
    }
    emit_rows(out, params, inst, cfg.output.per_outcome,
              {deph_gamma(p), q, deph_C(p), inst.record.average_heat, inst.record.fisher,
               inst.fisher_fd, deph_fisher(p), bound, deph_precision_bound(p),
               inst.score_deviation, inst.two_point_deviation, avg_dev, cf_dev});
    return out;
}

// ------------------------------------------------------------------- mean force

std::vector<std::string> mf_columns(bool /*per_outcome*/) {
    return {"beta", "g", "omega_q", "tunneling", "dim", "u_s", "e_star_mean", "delta_u_sq",
            "fisher_fd", "product", "reconstruction_error", "sylvester_residual",
            "deviation_identity", "e_star_minus_hs", "error"};
}

PointOutput mf_point(const RunConfig &cfg, const ModelConfig &m) {
    PointOutput out;
    std::vector<int> cutoffs;
    Index dim = 2;
    for (const BathMode &mode : m.modes) {
        cutoffs.push_back(mode_cutoff(cfg.numerics, m.beta, mode.omega));
        dim *= cutoffs.back() + 1;
    }
    const Params params{{"beta", m.beta},
                        {"g", m.modes.front().g},
                        {"omega_q", m.omega_q},
                        {"tunneling", m.tunneling},
                        {"dim", static_cast<double>(dim)}};
    if (dim > kMaxDriverDim) {
        throw std::invalid_argument("model dimension " + std::to_string(dim) +
                                    " exceeds the driver limit; set numerics.n_max");
    }
    const std::string where = describe(params);
    Matrix hs(2, 2);
    hs << 0.0, m.tunneling, m.tunneling, m.omega_q;
    const CompositeModel model = build_dephasing_model(m.modes, cutoffs, hs);

    const MeanForceResult mf = internal_energy_deviation(model, m.beta, cfg.numerics.degeneracy_tol,
                                                         cfg.numerics.fd_step);
    const UncertaintyCheck ur =
        temperature_energy_ur_check(model, m.beta, cfg.numerics.degeneracy_tol, cfg.numerics.fd_step);
    const double e_mean = (mf.e_star.matrix() * steady_state(model, m.beta).matrix()).trace().real();

    out.checks.record("mean_force_reconstruction", tolerance::reconstruction, mf.reconstruction_error, where);
    out.checks.record("mean_force_sylvester", tolerance::sylvester, mf.sylvester_residual, where);
    out.checks.record("mean_force_deviation", tolerance::deviation, mf.identity_deviation, where);
    out.checks.record("energy_ur", tolerance::energy_ur,
                      std::abs(ur.fisher - mf.delta_u_sq) / mf.delta_u_sq, where);
    out.checks.record("energy_expectation", tolerance::deviation, std::abs(e_mean - mf.u_s), where);

    std::vector<Cell> row = param_cells(params);
    append(row, {mf.u_s, e_mean, mf.delta_u_sq, ur.fisher, ur.product, mf.reconstruction_error,
                 mf.sylvester_residual, mf.identity_deviation, max_abs(mf.e_star.matrix() - hs),
                 std::string()});
    out.rows.push_back(std::move(row));
    return out;
}

// --------------------------------------------------------------------- scaling

double default_detuning(const ModelConfig &m) { return m.delta ? *m.delta : 0.5; }

std::vector<std::string> scaling_he_columns(bool /*per_outcome*/) {
    return {"beta", "s", "alpha", "omega_c", "delta", "omega_0", "g", "t", "n_bar",
            "bound", "bound_numeric", "error"};
}

PointOutput scaling_he_point(const RunConfig &cfg, const ModelConfig &m) {
    PointOutput out;
    const HEParams p = he_single_mode_params(m.spectral, m.beta, default_detuning(m));
    const Params params{{"beta", m.beta},          {"s", m.spectral.s},
                        {"alpha", m.spectral.alpha}, {"omega_c", m.spectral.omega_c},
                        {"delta", p.detuning()},   {"omega_0", p.omega_0},
                        {"g", p.g},                {"t", p.t}};
    const std::string where = describe(params);
    const double bound = he_precision_bound(p);

    // brute-force cross-check of the single-mode closed form at this point
    const int n_max = mode_cutoff(cfg.numerics, p.beta, p.omega_0);
    const CompositeModel model = build_coupled_oscillators(p.omega_a, p.omega_0, p.g, n_max);
    Vector vac = Vector::Zero(n_max + 1);
    vac(0) = 1.0;
    const HeatRecord rec = heat_decomposition(model, pure_state(vac), p.beta, p.t,
                                              fock_measurement(n_max),
                                              HeatOptions{cfg.numerics.prob_floor, HeatMutation::none});
    const double numeric = precision_bound(rec.fisher) / p.beta;
    if (!cfg.numerics.n_max) {
        out.checks.record("closed_form_he", tolerance::closed_form, rel_dev(numeric, bound, 0.0), where);
    }
    std::vector<Cell> row = param_cells(params);
    append(row, {he_mean_excitation(p), bound, numeric, std::string()});
    out.rows.push_back(std::move(row));
    return out;
}

double default_scaling_time(const ModelConfig &m) { return m.t ? *m.t : 1.0; }

std::vector<std::string> scaling_deph_columns(bool /*per_outcome*/) {
    return {"beta", "s", "alpha", "omega_c", "t", "k_modes", "gamma", "C", "bound", "error"};
}

PointOutput scaling_deph_point(const RunConfig &, const ModelConfig &m) {
    PointOutput out;
    const DephParams p =
        deph_spectral_params(m.spectral, m.beta, default_scaling_time(m), m.k_modes,
                             m.omega_max.value_or(10.0 * m.spectral.omega_c));
    const Params params{{"beta", m.beta},
                        {"s", m.spectral.s},
                        {"alpha", m.spectral.alpha},
                        {"omega_c", m.spectral.omega_c},
                        {"t", p.t},
                        {"k_modes", static_cast<double>(m.k_modes)}};
    std::vector<Cell> row = param_cells(params);
    append(row, {deph_gamma(p), deph_C(p), deph_precision_bound(p), std::string()});
    out.rows.push_back(std::move(row));
    return out;
}

// ---------------------------------------------------------------------- driver

struct Family {
    std::vector<std::string> (*columns)(bool);
    PointOutput (*point)(const RunConfig &, const ModelConfig &);
};

Family family(Experiment e) {
    switch (e) {
    case Experiment::heat_exchange:
        return {he_columns, he_point};
    case Experiment::dephasing:
        return {deph_columns, deph_point};
    case Experiment::mean_force:
        return {mf_columns, mf_point};
    case Experiment::scaling_he:
        return {scaling_he_columns, scaling_he_point};
    case Experiment::scaling_deph:
        return {scaling_deph_columns, scaling_deph_point};
    case Experiment::cross_validate:
        break;
    }
    throw std::logic_error("no sweep family for this experiment");
}

/// Parameter cells that identify a point when its evaluation throws.
Params fallback_params(const std::vector<std::string> &columns, const ModelConfig &m) {
    Params out;
    for (const std::string &c : columns) {
        if (c == "error") {
            break;
        }
        double v = kNaN;
        if (c == "beta") {
            v = m.beta;
        } else if (c == "g") {
            v = m.modes.empty() ? m.g : m.modes.front().g;
        } else if (c == "t" && m.t) {
            v = *m.t;
        } else if (c == "s") {
            v = m.spectral.s;
        } else if (c == "alpha") {
            v = m.spectral.alpha;
        } else if (c == "omega_c") {
            v = m.spectral.omega_c;
        } else if (c == "delta" && m.delta) {
            v = *m.delta;
        } else if (c == "omega_0") {
            v = m.omega_0;
        } else if (c == "omega_a") {
            v = m.omega_a;
        } else if (c == "omega_q") {
            v = m.omega_q;
        } else if (c == "tunneling") {
            v = m.tunneling;
        }
        out.emplace_back(c, v);
        if (c == "dim" || c == "n_max" || c == "k_modes") {
            break;
        }
    }
    return out;
}

double cell_number(const Cell &c) {
    if (const double *d = std::get_if<double>(&c)) {
        return *d;
    }
    if (const long long *i = std::get_if<long long>(&c)) {
        return static_cast<double>(*i);
    }
    return kNaN;
}

void fit_slopes(RunResult &result, const RunConfig &cfg) {
    const bool he = cfg.experiment == Experiment::scaling_he;
    if (!he && cfg.experiment != Experiment::scaling_deph) {
        return;
    }
    const auto &cols = result.table.columns;
    auto index_of = [&](const std::string &name) {
        return static_cast<std::size_t>(std::find(cols.begin(), cols.end(), name) - cols.begin());
    };
    const std::size_t ib = index_of("beta");
    const std::size_t is = index_of("s");
    const std::size_t ibound = index_of("bound");
    // group rows by every swept value except beta
    std::map<std::vector<double>, std::vector<std::size_t>> groups;
    const auto points = sweep_points(cfg.sweep);
    for (std::size_t r = 0; r < points.size(); ++r) {
        std::vector<double> key;
        for (std::size_t a = 0; a < cfg.sweep.size(); ++a) {
            if (cfg.sweep[a].name != "beta") {
                key.push_back(points[r][a]);
            }
        }
        groups[key].push_back(r);
    }
    for (const auto &[key, rows] : groups) {
        std::vector<std::pair<double, double>> pts;
        double s = kNaN;
        for (std::size_t r : rows) {
            const auto &row = result.table.rows[r];
            pts.emplace_back(cell_number(row[ib]), cell_number(row[ibound]));
            s = cell_number(row[is]);
        }
        if (pts.size() < 4) {
            continue;
        }
        SlopeReport rep;
        std::string name = he ? "slope_he" : "slope_deph";
        for (double k : key) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "_%g", k);
            name += buf;
        }
        rep.name = name;
        rep.expected = he ? 0.5 * (1.0 + s) : 1.0 + s;
        try {
            rep.fit = scaling_fit(pts);
        } catch (const std::invalid_argument &) {
            rep.fit = {kNaN, kNaN, kNaN};
        }
        result.slopes.push_back(rep);
    }
}

} // namespace

void CheckLedger::record(const std::string &name, double tol, double deviation,
                         const std::string &point) {
    if (std::isnan(deviation)) {
        deviation = kInf;
    }
    auto it = std::find_if(results_.begin(), results_.end(),
                           [&](const CheckResult &c) { return c.name == name; });
    if (it == results_.end()) {
        results_.push_back({name, tol, deviation, 1, point});
        return;
    }
    ++it->evaluations;
    if (deviation > it->max_deviation) {
        it->max_deviation = deviation;
        it->worst_point = point;
    }
}

void CheckLedger::merge(const CheckLedger &other) {
    for (const CheckResult &c : other.results_) {
        auto it = std::find_if(results_.begin(), results_.end(),
                               [&](const CheckResult &r) { return r.name == c.name; });
        if (it == results_.end()) {
            results_.push_back(c);
            continue;
        }
        it->evaluations += c.evaluations;
        if (c.max_deviation > it->max_deviation) {
            it->max_deviation = c.max_deviation;
            it->worst_point = c.worst_point;
        }
    }
}

const CheckResult *CheckLedger::find(const std::string &name) const {
    for (const CheckResult &c : results_) {
        if (c.name == name) {
            return &c;
        }
    }
    return nullptr;
}

bool CheckLedger::passed() const {
    return std::all_of(results_.begin(), results_.end(), [](const CheckResult &c) { return c.passed(); });
}

bool SlopeReport::passed() const { return std::abs(fit.slope - expected) <= tolerance; }

bool RunResult::passed() const {
    return failed_points == 0 && checks.passed() &&
           std::all_of(slopes.begin(), slopes.end(), [](const SlopeReport &s) { return s.passed(); });
}

std::string describe(const std::vector<std::pair<std::string, double>> &params) {
    std::string out;
    char buf[64];
    for (const auto &[name, value] : params) {
        std::snprintf(buf, sizeof buf, "%s%s=%.6g", out.empty() ? "" : " ", name.c_str(), value);
        out += buf;
    }
    return out;
}

int mode_cutoff(const NumericsConfig &numerics, double beta, double omega) {
    if (numerics.n_max) {
        return *numerics.n_max;
    }
    return truncation_level(beta, omega, numerics.tail);
}

int dephasing_cutoff(const NumericsConfig &numerics, double beta, const BathMode &mode) {
    if (numerics.n_max) {
        return *numerics.n_max;
    }
    const int thermal = truncation_level(beta, mode.omega, numerics.tail);
    const double alpha = 2.0 * std::abs(mode.g) / mode.omega;
    const double lambda = alpha * alpha;
    if (lambda == 0.0) {
        return thermal;
    }
    // smallest N with Poisson(lambda) mass above N below the tail
    double term = std::exp(-lambda);
    double cumulative = term;
    int n = 0;
    while (1.0 - cumulative >= numerics.tail && n < 1000) {
        ++n;
        term *= lambda / n;
        cumulative += term;
        if (term < numerics.tail * 1e-3 && n > lambda) {
            break;
        }
    }
    return thermal + n;
}

HeatInstance evaluate_heat_instance(const CompositeModel &model, const DensityMatrix &rho0,
                                    double beta, double t, const ProjectiveMeasurement &meas,
                                    const HeatOptions &options, double fd_step) {
    HeatInstance inst;
    inst.record = heat_decomposition(model, rho0, beta, t, meas, options);
    inst.score_direct = score_direct_all(model, rho0, beta, t, meas, options.prob_floor);
    inst.two_point = two_point_trajectory_heat_all(model, initial_state(model, rho0, beta), t,
                                                   meas, options.prob_floor);
    inst.fisher_fd = fisher_finite_difference(model, rho0, beta, t, meas, fd_step, options.prob_floor);
    for (std::size_t l = 0; l < meas.size(); ++l) {
        const OutcomeHeat &o = inst.record.outcomes[l];
        if (o.suppressed) {
            continue;
        }
        inst.score_deviation = safe_max(inst.score_deviation, std::abs(inst.score_direct[l] - o.score));
        inst.two_point_deviation =
            safe_max(inst.two_point_deviation, std::abs(inst.two_point[l] - o.trajectory_heat));
    }
    inst.fisher_deviation =
        std::abs(inst.fisher_fd - inst.record.fisher) / std::max(inst.record.fisher, 1e-12);
    if (std::isnan(inst.fisher_deviation)) {
        inst.fisher_deviation = kInf;
    }
    return inst;
}

double he_closed_form_deviation(const HEParams &p, const HeatInstance &inst, double min_probability) {
    double dev = 0.0;
    for (const OutcomeHeat &o : inst.record.outcomes) {
        const int l = static_cast<int>(std::lround(o.label));
        const double pl = he_outcome_probability(p, l);
        dev = safe_max(dev, std::abs(o.probability - pl));
        if (pl < min_probability || o.suppressed) {
            continue;
        }
        dev = safe_max(dev, rel_dev(o.probability, pl, 1e-300));
        const HeatPair h = he_heat_terms(p, l);
        dev = safe_max(dev, rel_dev(o.trajectory_heat, h.trajectory, p.omega_0));
        dev = safe_max(dev, rel_dev(o.correlation_heat, h.correlation, p.omega_0));
        dev = safe_max(dev, rel_dev(o.score, he_score(p, l), p.omega_0));
    }
    const double f = he_fisher(p);
    dev = safe_max(dev, rel_dev(inst.record.fisher, f, 1e-300));
    const double bound = he_precision_bound(p);
    if (std::isfinite(bound)) {
        dev = safe_max(dev, rel_dev(precision_bound(inst.record.fisher) / p.beta, bound, 0.0));
    }
    return dev;
}

double deph_closed_form_deviation(const DephParams &p, const HeatInstance &inst) {
    const double q = deph_Q(p);
    const double c = deph_C(p);
    const double scale = std::max(std::abs(q) + std::abs(c), 1e-300);
    double dev = 0.0;
    for (const OutcomeHeat &o : inst.record.outcomes) {
        const int l = o.label > 0.0 ? 1 : -1;
        const double pl = deph_probability(p, l);
        dev = safe_max(dev, rel_dev(o.probability, pl, 1e-300));
        if (o.suppressed || pl < kProbabilityFloor) {
            continue;
        }
        const HeatPair h = deph_heat_terms(p, l);
        dev = safe_max(dev, rel_dev(o.trajectory_heat, h.trajectory, scale));
        dev = safe_max(dev, rel_dev(o.correlation_heat, h.correlation, scale));
    }
    dev = safe_max(dev, rel_dev(inst.record.fisher, deph_fisher(p), 1e-300));
    return dev;
}

RunResult run_experiment(const RunConfig &config) {
    if (config.experiment == Experiment::cross_validate) {
        CrossValidateOptions opts;
        opts.seed = config.seed;
        opts.draws = config.draws;
        opts.prob_floor = config.numerics.prob_floor;
        opts.fd_step = config.numerics.fd_step;
        return cross_validate(opts);
    }
    const Family fam = family(config.experiment);
    RunResult result;
    result.experiment = config.experiment;
    result.table.columns = fam.columns(config.output.per_outcome);

    const auto points = sweep_points(config.sweep);
    std::vector<PointOutput> outputs(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            const ModelConfig m = apply_point(config.model, config.sweep, points[i]);
            try {
                outputs[i] = fam.point(config, m);
            } catch (const std::exception &e) {
                PointOutput failed;
                failed.failed = true;
                failed.rows.push_back(error_row(fallback_params(result.table.columns, m),
                                                result.table.columns.size(), e.what()));
                if (dynamic_cast<const IdentityViolationError *>(&e) != nullptr) {
                    failed.checks.record("mean_force_deviation", tolerance::deviation, kInf,
                                         describe(fallback_params(result.table.columns, m)));
                }
                outputs[i] = std::move(failed);
            }
        }
    };
    const int threads = std::max(1, std::min<int>(config.numerics.threads, static_cast<int>(points.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < threads; ++k) {
            pool.emplace_back(worker);
        }
        for (std::thread &th : pool) {
            th.join();
        }
    }
    for (PointOutput &o : outputs) {
        result.checks.merge(o.checks);
        result.failed_points += o.failed ? 1 : 0;
        for (auto &row : o.rows) {
            result.table.rows.push_back(std::move(row));
        }
    }
    fit_slopes(result, config);
    return result;
}

} // namespace thermoq
