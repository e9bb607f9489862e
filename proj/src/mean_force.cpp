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

#include "thermoq/mean_force.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <type_traits>

namespace thermoq {

namespace {

void require_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("beta must be positive and finite");
    }
}

double resolve_step(double beta, double h) {
    if (h <= 0.0) {
        return 1e-4 * beta;
    }
    if (h > 0.1 * beta) {
        throw std::invalid_argument("finite-difference step must not exceed beta/10");
    }
    return h;
}

/// d f / d(-beta) from central differences at h and h/2 plus one Richardson step.
template <class F> auto minus_beta_derivative(const F &f, double beta, double h) {
    using Value = std::decay_t<decltype(f(beta))>;
    const double h2 = 0.5 * h;
    const Value d1 = (f(beta - h) - f(beta + h)) / (2.0 * h);
    const Value d2 = (f(beta - h2) - f(beta + h2)) / (2.0 * h2);
    return Value((4.0 * d2 - d1) / 3.0);
}

double minus_beta_derivative_scalar(const std::function<double(double)> &f, double beta,
                                    double h) {
    const double d1 = (f(beta - h) - f(beta + h)) / (2.0 * h);
    const double h2 = 0.5 * h;
    const double d2 = (f(beta - h2) - f(beta + h2)) / (2.0 * h2);
    return (4.0 * d2 - d1) / 3.0;
}

/**
 * Tr_B e^{-beta H} = sum_k e^{-beta lambda_k} R_k with R_k = Tr_B |v_k><v_k|.
 * Storing the R_k makes every further beta evaluation O(D d_S^2).
 */
class ReducedSpectrum {
  public:
    explicit ReducedSpectrum(const CompositeModel &model)
        : space_(model.system_space()), lambda_(model.spectrum().values()),
          sample_(Spectrum(model.sample_hamiltonian()).values()) {
        const Index ds = model.system_dim();
        const Index db = model.sample_dim();
        const Matrix v = model.spectrum().vectors();
        r_.reserve(static_cast<std::size_t>(v.cols()));
        for (Index k = 0; k < v.cols(); ++k) {
            Eigen::Map<const Matrix> psi(v.col(k).data(), db, ds);
            r_.emplace_back(psi.transpose() * psi.conjugate());
        }
    }

    [[nodiscard]] const HilbertSpace &space() const { return space_; }

    /// sum_k e^{-beta (lambda_k - lambda_0)} R_k
    [[nodiscard]] Matrix shifted_gibbs(double beta) const {
        const Index ds = space_.total_dim();
        Matrix g = Matrix::Zero(ds, ds);
        const double l0 = lambda_(0);
        for (std::size_t k = 0; k < r_.size(); ++k) {
            const double w = std::exp(-beta * (lambda_(static_cast<Index>(k)) - l0));
            if (w == 0.0) {
                break;
            }
            g += w * r_[k];
        }
        return 0.5 * (g + g.adjoint());
    }

    /// ln of the factor turning shifted_gibbs into Tr_B e^{-beta H} / Z_B.
    [[nodiscard]] double log_scale(double beta) const {
        const double b0 = sample_(0);
        double zb = 0.0;
        for (Index j = 0; j < sample_.size(); ++j) {
            zb += std::exp(-beta * (sample_(j) - b0));
        }
        return -beta * (lambda_(0) - b0) - std::log(zb);
    }

    /// Tr_B e^{-beta H} / Z_B
    [[nodiscard]] Matrix reduced_gibbs(double beta) const {
        return std::exp(log_scale(beta)) * shifted_gibbs(beta);
    }

    /// ln Z* = ln(Z / Z_B)
    [[nodiscard]] double log_z_star(double beta) const {
        return std::log(shifted_gibbs(beta).trace().real()) + log_scale(beta);
    }

    [[nodiscard]] HermitianOperator h_star(double beta) const {
        const Matrix g = shifted_gibbs(beta);
        const Eigensystem es = hermitian_eig(HermitianOperator(space_, g));
        if (!(es.values(0) > 0.0)) {
            throw DomainError("reduced Gibbs operator is not positive definite");
        }
        const double shift = log_scale(beta);
        RealVector h(es.values.size());
        for (Index i = 0; i < h.size(); ++i) {
            h(i) = -(std::log(es.values(i)) + shift) / beta;
        }
        Matrix m = es.vectors * h.cast<Complex>().asDiagonal() * es.vectors.adjoint();
        return HermitianOperator(space_, 0.5 * (m + m.adjoint()));
    }

  private:
    HilbertSpace space_;
    RealVector lambda_;
    RealVector sample_;
    std::vector<Matrix> r_;
};

struct SylvesterSolution {
    Matrix e;
    double residual;
};

/// Solves (E A + A E)/2 = D in the eigenbasis of A.
SylvesterSolution solve_symmetric_sylvester(const HilbertSpace &space, const Matrix &a,
                                            const Matrix &d) {
    const Eigensystem es = hermitian_eig(HermitianOperator(space, a));
    const Matrix dt = es.vectors.adjoint() * d * es.vectors;
    Matrix et(dt.rows(), dt.cols());
    for (Index i = 0; i < dt.rows(); ++i) {
        for (Index j = 0; j < dt.cols(); ++j) {
            const double s = es.values(i) + es.values(j);
            if (!(std::abs(s) >= 1e-300)) {
                throw DomainError("energy operator: near-singular Sylvester denominator");
            }
            et(i, j) = 2.0 * dt(i, j) / s;
        }
    }
    Matrix e = es.vectors * et * es.vectors.adjoint();
    e = 0.5 * (e + e.adjoint());
    const Matrix lhs = 0.5 * (e * a + a * e);
    const double scale = max_abs(d);
    const double residual = max_abs(lhs - d) / (scale > 0.0 ? scale : 1.0);
    return {std::move(e), residual};
}

SylvesterSolution energy_operator_impl(const ReducedSpectrum &rs, double beta, double h) {
    const Matrix a = rs.reduced_gibbs(beta);
    const Matrix d =
        minus_beta_derivative([&](double b) { return rs.reduced_gibbs(b); }, beta, h);
    return solve_symmetric_sylvester(rs.space(), a, 0.5 * (d + d.adjoint()));
}

double expectation(const Matrix &op, const Matrix &rho) { return (op * rho).trace().real(); }

/// e^{-beta H}/Z on the full space, from the spectrum of H.
Matrix full_gibbs(const CompositeModel &model, double beta) {
    const Spectrum &sp = model.spectrum();
    const double l0 = sp.values()(0);
    Matrix chi = sp.function([&](double x) { return Complex(std::exp(-beta * (x - l0)), 0.0); });
    chi /= chi.trace().real();
    return 0.5 * (chi + chi.adjoint());
}

} // namespace

DensityMatrix steady_state(const CompositeModel &model, double beta) {
    require_beta(beta);
    const std::array<Index, 1> keep{0};
    const Matrix chi = full_gibbs(model, beta);
    return DensityMatrix::trusted(model.system_space(),
                                  partial_trace(chi, model.space(), keep));
}

HermitianOperator mean_force_hamiltonian(const CompositeModel &model, double beta) {
    require_beta(beta);
    return ReducedSpectrum(model).h_star(beta);
}

HermitianOperator energy_operator(const CompositeModel &model, double beta, double h_step) {
    require_beta(beta);
    const double h = resolve_step(beta, h_step);
    const ReducedSpectrum rs(model);
    return HermitianOperator(rs.space(), energy_operator_impl(rs, beta, h).e);
}

HermitianOperator energy_operator_beta_derivative(const CompositeModel &model, double beta,
                                                  double h_step) {
    require_beta(beta);
    const double h = resolve_step(beta, h_step);
    const ReducedSpectrum rs(model);
    const Matrix d = minus_beta_derivative(
        [&](double b) { return (b * rs.h_star(b).matrix()).eval(); }, beta, h);
    return HermitianOperator(rs.space(), -0.5 * (d + d.adjoint()));
}

double internal_energy(const CompositeModel &model, double beta, double h_step) {
    require_beta(beta);
    const double h = resolve_step(beta, h_step);
    const ReducedSpectrum rs(model);
    return minus_beta_derivative_scalar([&](double b) { return rs.log_z_star(b); }, beta, h);
}

MeanForceResult internal_energy_deviation(const CompositeModel &model, double beta,
                                          double degeneracy_tol, double h_step) {
    require_beta(beta);
    if (!(degeneracy_tol >= 0.0)) {
        throw std::invalid_argument("degeneracy_tol must be non-negative");
    }
    const double h = resolve_step(beta, h_step);
    const ReducedSpectrum rs(model);

    const SylvesterSolution sol = energy_operator_impl(rs, beta, h);
    MeanForceResult out{rs.h_star(beta), HermitianOperator(rs.space(), sol.e), 0.0, 0.0, {}, 0.0,
                        0.0, sol.residual, 0.0};

    const double log_z = rs.log_z_star(beta);
    out.z_star = std::exp(log_z);
    out.u_s = minus_beta_derivative_scalar([&](double b) { return rs.log_z_star(b); }, beta, h);

    const Matrix chi = full_gibbs(model, beta);
    const std::array<Index, 1> keep{0};
    const Matrix rho = partial_trace(chi, model.space(), keep);
    const Matrix rebuilt = hermitian_func(out.h_star, [&](double x) {
        return Complex(std::exp(-beta * x - log_z), 0.0);
    });
    out.reconstruction_error = max_abs(rebuilt - rho);

    const Matrix h_chi_reduced =
        partial_trace((model.hamiltonian().matrix() * chi).eval(), model.space(), keep);
    const double total_energy = h_chi_reduced.trace().real();

    const RealVector eps = hermitian_eig(out.e_star).values;
    const double range = eps(eps.size() - 1) - eps(0);
    const ProjectiveMeasurement meas = eigenbasis_measurement(sol.e, degeneracy_tol * range);

    for (std::size_t l = 0; l < meas.size(); ++l) {
        EnergyOutcome o;
        o.energy = meas.label(l);
        o.probability = expectation(meas.projector(l), rho);
        o.deviation = o.energy - out.u_s;
        if (o.probability > 0.0) {
            o.deviation_trace =
                expectation(meas.projector(l), h_chi_reduced) / o.probability - total_energy;
            out.identity_deviation =
                std::max(out.identity_deviation, std::abs(o.deviation - o.deviation_trace));
        }
        out.delta_u_sq += o.probability * o.deviation * o.deviation;
        out.delta_u.push_back(o);
    }
    if (out.identity_deviation > kDeviationTolerance) {
        throw IdentityViolationError("internal-energy deviation: spectral and trace routes differ by " +
                                     std::to_string(out.identity_deviation));
    }
    return out;
}

UncertaintyCheck temperature_energy_ur_check(const CompositeModel &model, double beta,
                                             double degeneracy_tol, double h_step) {
    const MeanForceResult mf = internal_energy_deviation(model, beta, degeneracy_tol, h_step);
    const double energy_scale = 1e-10 * (1.0 + std::abs(mf.u_s) + max_abs(mf.e_star.matrix()));
    if (!(mf.delta_u_sq > energy_scale * energy_scale)) {
        throw DegenerateUncertaintyError("energy fluctuation vanishes; temperature is unidentifiable");
    }
    const double h = resolve_step(beta, h_step);
    const ProjectiveMeasurement meas = eigenbasis_measurement(
        mf.e_star.matrix(), degeneracy_tol * (mf.delta_u.back().energy - mf.delta_u.front().energy));
    const ReducedSpectrum rs(model);
    auto law = [&](double b) {
        const Matrix g = rs.shifted_gibbs(b);
        const double z = g.trace().real();
        Eigen::VectorXd p(static_cast<Index>(meas.size()));
        for (std::size_t l = 0; l < meas.size(); ++l) {
            p(static_cast<Index>(l)) = expectation(meas.projector(l), g) / z;
        }
        return p;
    };
    const Eigen::VectorXd p = law(beta);
    const Eigen::VectorXd dp = minus_beta_derivative(law, beta, h);
    double fisher = 0.0;
    for (Index l = 0; l < p.size(); ++l) {
        if (p(l) > 1e-300) {
            fisher += dp(l) * dp(l) / p(l);
        }
    }
    UncertaintyCheck out;
    out.delta_u = std::sqrt(mf.delta_u_sq);
    out.fisher = fisher;
    out.product = fisher > 0.0 ? out.delta_u / std::sqrt(fisher) : 0.0;
    return out;
}

} // namespace thermoq
