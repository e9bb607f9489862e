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

#include "thermoq/heat.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace thermoq {

namespace {

// Probe eigenvalues below this are dropped from the branch expansion.
constexpr double kBranchCutoff = 1e-15;

void require_beta(double beta) {
    if (!(beta > 0.0)) {
        throw std::invalid_argument("beta must be positive");
    }
}

void require_system_state(const CompositeModel &model, const DensityMatrix &rho0) {
    if (rho0.dim() != model.system_dim()) {
        throw DimensionError("probe state dimension does not match factor 0");
    }
}

void require_model_state(const CompositeModel &model, const DensityMatrix &chi) {
    if (!(chi.space() == model.space())) {
        throw DimensionError("state does not live on the model's space");
    }
}

void require_measurement(const CompositeModel &model, const ProjectiveMeasurement &meas) {
    if (meas.dim() != model.system_dim()) {
        throw DimensionError("measurement does not act on factor 0");
    }
}

double trace_product(const Matrix &a, const Matrix &b) {
    // Re tr(a b)
    return a.cwiseProduct(b.transpose()).sum().real();
}

/// U_t * columns, block by block.
Matrix apply_evolution(const CompositeModel &model, double t, const Matrix &columns) {
    return model.spectrum().apply([t](double e) { return std::exp(Complex(0.0, -e * t)); },
                                  columns);
}

/// Principal square root of a positive semidefinite matrix.
Matrix psd_sqrt(const Matrix &m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const RealVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

/// Re tr_B-contracted products: out(a, c) = sum over sample index and columns of x y^*.
Matrix reduce_to_probe(const Matrix &x, const Matrix &y, Index ds, Index db) {
    Matrix out(ds, ds);
    for (Index a = 0; a < ds; ++a) {
        for (Index c = 0; c < ds; ++c) {
            out(a, c) = x.middleRows(a * db, db).cwiseProduct(y.middleRows(c * db, db).conjugate()).sum();
        }
    }
    return out;
}

RealVector thermal_weights(const RealVector &energies, double beta) {
    const double ground = energies.minCoeff();
    RealVector w = (-beta * (energies.array() - ground)).exp().matrix();
    return w / w.sum();
}

/**
 * chi(0) = rho0 (x) rho_B expanded over product eigenvectors u_r (x) e_m, each
 * evolved as a pure state. Weights q_r p_m(beta) with p_m the Gibbs law of
 * H_B; the evolved vectors do not depend on beta.
 */
struct Branches {
    Index system_dim = 0;
    Index sample_dim = 0;
    RealVector sample_energies;
    std::vector<double> system_weight;
    std::vector<Index> sample_level;
    Matrix evolved;

    [[nodiscard]] std::size_t size() const { return system_weight.size(); }

    // Psi_b with Psi(m, s) = <s, m | phi_b>.
    [[nodiscard]] Eigen::Map<const Matrix> psi(std::size_t b) const {
        return {evolved.col(static_cast<Index>(b)).data(), sample_dim, system_dim};
    }

    // Tr_B |phi_b><phi_b| on the probe.
    [[nodiscard]] Matrix reduced(std::size_t b) const {
        const auto p = psi(b);
        return (p.adjoint() * p).transpose();
    }

    [[nodiscard]] RealVector weights(double beta) const {
        const RealVector p = thermal_weights(sample_energies, beta);
        RealVector w(static_cast<Index>(size()));
        for (std::size_t b = 0; b < size(); ++b) {
            w(static_cast<Index>(b)) = system_weight[b] * p(sample_level[b]);
        }
        return w;
    }
};

Branches propagate(const CompositeModel &model, const DensityMatrix &rho0, double t) {
    require_system_state(model, rho0);
    Branches out;
    out.system_dim = model.system_dim();
    out.sample_dim = model.sample_dim();

    const Spectrum probe(rho0.matrix());
    const Spectrum sample(model.sample_hamiltonian());
    out.sample_energies = sample.values();
    const Matrix u = probe.vectors();
    const Matrix e = sample.vectors();

    double kept = 0.0;
    for (Index r = 0; r < out.system_dim; ++r) {
        if (probe.values()(r) > kBranchCutoff) {
            kept += probe.values()(r);
        }
    }
    std::vector<Index> probe_index;
    for (Index r = 0; r < out.system_dim; ++r) {
        const double q = probe.values()(r);
        if (q <= kBranchCutoff) {
            continue;
        }
        for (Index m = 0; m < out.sample_dim; ++m) {
            out.system_weight.push_back(q / kept);
            out.sample_level.push_back(m);
            probe_index.push_back(r);
        }
    }
    Matrix initial(model.space().total_dim(), static_cast<Index>(out.size()));
    for (std::size_t b = 0; b < out.size(); ++b) {
        initial.col(static_cast<Index>(b)) =
            tensor_product(u.col(probe_index[b]), e.col(out.sample_level[b]));
    }
    out.evolved = model.spectrum().apply(
        [t](double energy) { return std::exp(Complex(0.0, -energy * t)); }, initial);
    return out;
}

// table(l, b) = <phi_b| Pi_l (x) I |phi_b>
Eigen::MatrixXd outcome_table(const Branches &branches, const ProjectiveMeasurement &meas) {
    Eigen::MatrixXd table(static_cast<Index>(meas.size()), static_cast<Index>(branches.size()));
    for (std::size_t b = 0; b < branches.size(); ++b) {
        const Matrix reduced = branches.reduced(b);
        for (std::size_t l = 0; l < meas.size(); ++l) {
            table(static_cast<Index>(l), static_cast<Index>(b)) =
                trace_product(meas.projector(l), reduced);
        }
    }
    return table;
}

std::vector<double> law_from_table(const Eigen::MatrixXd &table, const RealVector &weights) {
    const RealVector p = table * weights;
    std::vector<double> out(static_cast<std::size_t>(p.size()));
    for (Index l = 0; l < p.size(); ++l) {
        out[static_cast<std::size_t>(l)] = std::clamp(p(l), 0.0, 1.0);
    }
    return out;
}

} // namespace

DensityMatrix initial_state(const CompositeModel &model, const DensityMatrix &rho0,
                            double beta) {
    require_system_state(model, rho0);
    const DensityMatrix rho_b =
        thermal_state(HermitianOperator(model.sample_space(), model.sample_hamiltonian()), beta);
    return DensityMatrix::trusted(model.space(), tensor_product(rho0.matrix(), rho_b.matrix()));
}

DensityMatrix evolve_total(const CompositeModel &model, const DensityMatrix &chi0, double t) {
    require_model_state(model, chi0);
    if (t == 0.0) {
        return chi0;
    }
    // U chi U^dag = U (U chi)^dag for Hermitian chi
    const Matrix half = apply_evolution(model, t, chi0.matrix());
    Matrix chi = apply_evolution(model, t, half.adjoint());
    chi = 0.5 * (chi + chi.adjoint()).eval();
    return DensityMatrix::trusted(model.space(), std::move(chi));
}

std::vector<OutcomeProbability> outcome_probabilities(const DensityMatrix &chi_t,
                                                      const ProjectiveMeasurement &meas) {
    if (meas.dim() != chi_t.space().factor_dim(0)) {
        throw DimensionError("measurement does not act on factor 0");
    }
    const std::array<Index, 1> keep{0};
    const Matrix probe = partial_trace(chi_t.matrix(), chi_t.space(), keep);
    std::vector<OutcomeProbability> out;
    out.reserve(meas.size());
    for (std::size_t l = 0; l < meas.size(); ++l) {
        out.push_back({meas.label(l), std::clamp(trace_product(meas.projector(l), probe), 0.0, 1.0)});
    }
    return out;
}

ConditionalState conditional_bath_state(const CompositeModel &model, const DensityMatrix &chi0,
                                        double t, std::size_t outcome,
                                        const ProjectiveMeasurement &meas, double prob_floor) {
    require_measurement(model, meas);
    const DensityMatrix chi = evolve_total(model, chi0, t);
    const Matrix pi = embed_local(meas.projector(outcome), model.space(), 0);
    const Matrix projected = pi * chi.matrix() * pi;
    const double p = projected.trace().real();
    if (p < prob_floor) {
        throw SuppressedOutcomeError("outcome probability " + std::to_string(p) +
                                     " is below the floor");
    }
    std::vector<Index> keep;
    for (Index f = 1; f < model.space().factor_count(); ++f) {
        keep.push_back(f);
    }
    Matrix sample = partial_trace(projected, model.space(), keep) / p;
    sample = 0.5 * (sample + sample.adjoint()).eval();
    return {p, DensityMatrix::trusted(model.sample_space(), std::move(sample))};
}

HeatRecord heat_decomposition(const CompositeModel &model, const DensityMatrix &rho0,
                              double beta, double t, const ProjectiveMeasurement &meas,
                              const HeatOptions &options) {
    require_beta(beta);
    require_measurement(model, meas);
    const Branches branches = propagate(model, rho0, t);
    const RealVector w = branches.weights(beta);
    const Matrix &h_b = model.sample_hamiltonian();

    // Probe-side reductions of chi(t), U H_B chi(0) U^dag and H_B chi(t).
    const Index ds = branches.system_dim;
    Matrix evolved = Matrix::Zero(ds, ds);
    Matrix evolved_weighted = Matrix::Zero(ds, ds);
    Matrix energy_final = Matrix::Zero(ds, ds);
    double energy_initial = 0.0;
    for (std::size_t b = 0; b < branches.size(); ++b) {
        const double wb = w(static_cast<Index>(b));
        if (wb == 0.0) {
            continue;
        }
        const auto psi = branches.psi(b);
        const Matrix reduced = (psi.adjoint() * psi).transpose();
        const double eps = branches.sample_energies(branches.sample_level[b]);
        evolved += wb * reduced;
        evolved_weighted += (wb * eps) * reduced;
        energy_final += wb * (psi.adjoint() * (h_b * psi)).transpose();
        energy_initial += wb * eps;
    }

    HeatRecord record;
    record.initial_sample_energy = energy_initial;
    record.final_sample_energy = energy_final.trace().real();
    record.average_heat = record.initial_sample_energy - record.final_sample_energy;

    for (std::size_t l = 0; l < meas.size(); ++l) {
        const Matrix &pi = meas.projector(l);
        OutcomeHeat o;
        o.label = meas.label(l);
        o.probability = std::clamp(trace_product(pi, evolved), 0.0, 1.0);
        if (o.probability < options.prob_floor) {
            o.suppressed = true;
            record.excluded_probability += o.probability;
            record.outcomes.push_back(o);
            continue;
        }
        const double moved = trace_product(pi, evolved_weighted); // Tr[Pi U H_B chi0 U^dag]
        const double after = trace_product(pi, energy_final);     // Tr[H_B Pi chi(t)]
        const double norm = options.mutation == HeatMutation::drop_probability_normalization
                                ? 1.0
                                : 1.0 / o.probability;
        o.trajectory_heat = (moved - after) * norm;
        o.correlation_heat = after * norm - record.final_sample_energy;
        if (options.mutation == HeatMutation::flip_correlation_sign) {
            o.correlation_heat = -o.correlation_heat;
        }
        o.score = o.trajectory_heat - record.average_heat + o.correlation_heat;
        record.fisher += o.probability * o.score * o.score;
        record.outcomes.push_back(o);
    }
    return record;
}

std::vector<double> two_point_trajectory_heat_all(const CompositeModel &model,
                                                  const DensityMatrix &chi0, double t,
                                                  const ProjectiveMeasurement &meas,
                                                  double prob_floor) {
    require_model_state(model, chi0);
    require_measurement(model, meas);
    const Index ds = model.system_dim();
    const Index db = model.sample_dim();
    const Matrix &hb = model.sample_hamiltonian();

    // H_B eigenbasis; a diagonal H_B is used as is
    const bool diagonal_b = max_abs(hb - Matrix(hb.diagonal().asDiagonal())) == 0.0;
    Matrix vb;
    RealVector eps;
    if (diagonal_b) {
        vb = Matrix::Identity(db, db);
        eps = hb.diagonal().real();
    } else {
        const Spectrum sample(hb);
        vb = sample.vectors();
        eps = sample.values();
    }

    Matrix chi = chi0.matrix();
    if (!diagonal_b) {
        for (Index s = 0; s < ds; ++s) {
            for (Index s2 = 0; s2 < ds; ++s2) {
                chi.block(s * db, s2 * db, db, db) =
                    vb.adjoint() * chi0.matrix().block(s * db, s2 * db, db, db) * vb;
            }
        }
    }
    const double scale = 1.0 + max_abs(chi);
    for (Index s = 0; s < ds; ++s) {
        for (Index s2 = 0; s2 < ds; ++s2) {
            for (Index n = 0; n < db; ++n) {
                for (Index m = 0; m < db; ++m) {
                    if (n != m && std::abs(chi(s * db + n, s2 * db + m)) > kDensityTolerance * scale) {
                        throw std::invalid_argument(
                            "two_point_trajectory_heat: sample state is not diagonal in the H_B eigenbasis");
                    }
                }
            }
        }
    }

    // orthonormal basis of every projector range; row j of q^dag belongs to outcome owner[j]
    const std::size_t outcomes = meas.size();
    Matrix q(ds, 0);
    std::vector<std::size_t> owner;
    for (std::size_t l = 0; l < outcomes; ++l) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(meas.projector(l));
        for (Index k = 0; k < ds; ++k) {
            if (es.eigenvalues()(k) > 0.5) {
                q.conservativeResize(Eigen::NoChange, q.cols() + 1);
                q.col(q.cols() - 1) = es.eigenvectors().col(k);
                owner.push_back(l);
            }
        }
    }
    const bool standard_q = q.cols() == ds && max_abs(q - Matrix::Identity(ds, ds)) == 0.0;

    std::vector<double> probability(outcomes, 0.0);
    std::vector<double> heat(outcomes, 0.0);
    Matrix sigma(ds, ds);
    for (Index m = 0; m < db; ++m) {
        for (Index a = 0; a < ds; ++a) {
            for (Index c = 0; c < ds; ++c) {
                sigma(a, c) = chi(a * db + m, c * db + m);
            }
        }
        if (max_abs(sigma) == 0.0) {
            continue;
        }
        const Matrix root = psd_sqrt(sigma);
        // columns sum_a root(a, k) |a> (x) |e_m>
        Matrix start = Matrix::Zero(ds * db, ds);
        for (Index a = 0; a < ds; ++a) {
            start.middleRows(a * db, db) = vb.col(m) * root.row(a);
        }
        Matrix evolved = apply_evolution(model, t, start);
        if (!diagonal_b) {
            for (Index s = 0; s < ds; ++s) {
                evolved.middleRows(s * db, db) = (vb.adjoint() * evolved.middleRows(s * db, db)).eval();
            }
        }
        // P_{l;n,m} P_l = sum over basis rows j of outcome l of |<q_j, e_n| U |root_k, e_m>|^2
        for (Index j = 0; j < q.cols(); ++j) {
            Matrix rows;
            if (standard_q) {
                rows = evolved.middleRows(j * db, db);
            } else {
                rows = Matrix::Zero(db, ds);
                for (Index s = 0; s < ds; ++s) {
                    rows += std::conj(q(s, j)) * evolved.middleRows(s * db, db);
                }
            }
            const RealVector weight = rows.rowwise().squaredNorm();
            const std::size_t l = owner[static_cast<std::size_t>(j)];
            for (Index n = 0; n < db; ++n) {
                probability[l] += weight(n);
                heat[l] += weight(n) * (eps(m) - eps(n));
            }
        }
    }
    std::vector<double> out(outcomes, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t l = 0; l < outcomes; ++l) {
        if (probability[l] >= prob_floor) {
            out[l] = heat[l] / probability[l];
        }
    }
    return out;
}

double two_point_trajectory_heat(const CompositeModel &model, const DensityMatrix &chi0,
                                 double t, std::size_t outcome,
                                 const ProjectiveMeasurement &meas, double prob_floor) {
    if (outcome >= meas.size()) {
        throw std::out_of_range("two_point_trajectory_heat: outcome index out of range");
    }
    const double q = two_point_trajectory_heat_all(model, chi0, t, meas, prob_floor)[outcome];
    if (std::isnan(q)) {
        throw SuppressedOutcomeError("outcome probability below the floor");
    }
    return q;
}

std::vector<double> score_direct_all(const CompositeModel &model, const DensityMatrix &rho0,
                                     double beta, double t, const ProjectiveMeasurement &meas,
                                     double prob_floor) {
    require_beta(beta);
    require_measurement(model, meas);
    const Index ds = model.system_dim();
    const Index db = model.sample_dim();
    if (rho0.dim() != ds) {
        throw DimensionError("probe state dimension does not match factor 0");
    }
    // chi(0) = F F^dag with F = sqrt(rho0) (x) sqrt(rho_B), zero columns dropped
    const Matrix &hb = model.sample_hamiltonian();
    const Matrix root_b = psd_sqrt(thermal_state(HermitianOperator(model.sample_space(), hb), beta).matrix());
    const Matrix root_s = psd_sqrt(rho0.matrix());
    std::vector<Index> keep_cols;
    for (Index c = 0; c < ds; ++c) {
        if (root_s.col(c).norm() > 0.0) {
            keep_cols.push_back(c);
        }
    }
    const auto cols = static_cast<Index>(keep_cols.size());
    Matrix f(ds * db, cols * db);
    Matrix hf(ds * db, cols * db);
    const Matrix hb_root = hb * root_b;
    for (Index k = 0; k < cols; ++k) {
        for (Index a = 0; a < ds; ++a) {
            const Complex w = root_s(a, keep_cols[static_cast<std::size_t>(k)]);
            f.block(a * db, k * db, db, db) = w * root_b;
            hf.block(a * db, k * db, db, db) = w * hb_root;
        }
    }
    const double initial = hf.cwiseProduct(f.conjugate()).sum().real();
    const Matrix y = apply_evolution(model, t, f);
    const Matrix z = apply_evolution(model, t, hf);
    const Matrix probe = reduce_to_probe(y, y, ds, db);
    const Matrix probe_weighted = reduce_to_probe(z, y, ds, db);
    std::vector<double> out(meas.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t l = 0; l < meas.size(); ++l) {
        const Matrix &pi = meas.projector(l);
        const double p = trace_product(pi, probe);
        if (p >= prob_floor) {
            out[l] = trace_product(pi, probe_weighted) / p - initial;
        }
    }
    return out;
}

double score_direct(const CompositeModel &model, const DensityMatrix &rho0, double beta,
                    double t, const ProjectiveMeasurement &meas, std::size_t outcome,
                    double prob_floor) {
    if (outcome >= meas.size()) {
        throw std::out_of_range("score_direct: outcome index out of range");
    }
    const double s = score_direct_all(model, rho0, beta, t, meas, prob_floor)[outcome];
    if (std::isnan(s)) {
        throw SuppressedOutcomeError("outcome probability below the floor");
    }
    return s;
}

std::vector<double> outcome_law(const CompositeModel &model, const DensityMatrix &rho0,
                                double beta, double t, const ProjectiveMeasurement &meas) {
    require_beta(beta);
    require_measurement(model, meas);
    const Branches branches = propagate(model, rho0, t);
    return law_from_table(outcome_table(branches, meas), branches.weights(beta));
}

double fisher_finite_difference(const CompositeModel &model, const DensityMatrix &rho0,
                                double beta, double t, const ProjectiveMeasurement &meas,
                                double h, double prob_floor) {
    require_beta(beta);
    require_measurement(model, meas);
    if (h <= 0.0) {
        h = 1e-4 * beta;
    }
    if (h > beta / 10.0) {
        throw std::invalid_argument("fisher_finite_difference: step must be <= beta/10");
    }
    const Branches branches = propagate(model, rho0, t);
    const Eigen::MatrixXd table = outcome_table(branches, meas);
    auto law = [&](double b) { return law_from_table(table, branches.weights(b)); };

    const std::vector<double> p0 = law(beta);
    const std::vector<double> lo = law(beta - h);
    const std::vector<double> hi = law(beta + h);
    const std::vector<double> lo2 = law(beta - h / 2);
    const std::vector<double> hi2 = law(beta + h / 2);

    double fisher = 0.0;
    for (std::size_t l = 0; l < p0.size(); ++l) {
        if (p0[l] < prob_floor || lo[l] <= 0.0 || hi[l] <= 0.0 || lo2[l] <= 0.0 ||
            hi2[l] <= 0.0) {
            continue;
        }
        // derivative with respect to -beta
        const double coarse = (std::log(lo[l]) - std::log(hi[l])) / (2.0 * h);
        const double fine = (std::log(lo2[l]) - std::log(hi2[l])) / h;
        const double score = (4.0 * fine - coarse) / 3.0;
        fisher += p0[l] * score * score;
    }
    return fisher;
}

double precision_bound(double fisher, int n_measurements) {
    if (n_measurements < 1) {
        throw std::invalid_argument("precision_bound: need at least one measurement");
    }
    if (!(fisher > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    return 1.0 / std::sqrt(n_measurements * fisher);
}

} // namespace thermoq
