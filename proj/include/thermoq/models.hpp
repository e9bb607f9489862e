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

/**
 * @file
 * Thermometer models, bath discretization and measurement bases.
 */

#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "thermoq/tensor.hpp"

namespace thermoq {

/// Truncated bosonic annihilation operator on n_max + 1 Fock levels.
[[nodiscard]] Matrix annihilation(Index n_max);
[[nodiscard]] Matrix pauli_x();
[[nodiscard]] Matrix pauli_y();
/// diag(1, -1): basis state 0 is |+_z>.
[[nodiscard]] Matrix pauli_z();

/**
 * Thermometer (factor 0) coupled to a sample (factors 1..).
 *
 * H = h_s + h_b + h_i, with h_s = H_S (x) I and h_b = I (x) H_B built from
 * the local Hamiltonians, so the factor-support invariant holds by
 * construction. The spectrum of H is computed once on first use and shared
 * between copies.
 */
class CompositeModel {
  public:
    CompositeModel(HilbertSpace space, Matrix system_hamiltonian,
                   Matrix sample_hamiltonian, Matrix interaction);

    [[nodiscard]] const HilbertSpace &space() const noexcept { return space_; }
    [[nodiscard]] HilbertSpace system_space() const;
    [[nodiscard]] HilbertSpace sample_space() const;
    [[nodiscard]] Index system_dim() const { return space_.factor_dim(0); }
    [[nodiscard]] Index sample_dim() const {
        return space_.total_dim() / space_.factor_dim(0);
    }

    [[nodiscard]] const HermitianOperator &h_s() const noexcept { return h_s_; }
    [[nodiscard]] const HermitianOperator &h_b() const noexcept { return h_b_; }
    [[nodiscard]] const HermitianOperator &h_i() const noexcept { return h_i_; }
    [[nodiscard]] const HermitianOperator &hamiltonian() const noexcept { return h_; }

    /// H_S on factor 0 alone.
    [[nodiscard]] const Matrix &system_hamiltonian() const noexcept { return system_h_; }
    /// H_B on the sample factors alone.
    [[nodiscard]] const Matrix &sample_hamiltonian() const noexcept { return sample_h_; }

    [[nodiscard]] const Spectrum &spectrum() const;

  private:
    struct SpectrumCache {
        std::once_flag once;
        std::optional<Spectrum> value;
    };

    HilbertSpace space_;
    Matrix system_h_;
    Matrix sample_h_;
    HermitianOperator h_s_;
    HermitianOperator h_b_;
    HermitianOperator h_i_;
    HermitianOperator h_;
    std::shared_ptr<SpectrumCache> cache_;
};

struct BathMode {
    double omega; ///< frequency, > 0
    double g;     ///< coupling
};

/// J(w) = alpha w^s w_c^{1-s} exp(-w / w_c).
struct SpectralDensity {
    double alpha = 0.0;
    double s = 1.0;
    double omega_c = 1.0;

    void validate() const;
    [[nodiscard]] double operator()(double omega) const;
    /// Integral of J over [0, omega] (lower incomplete gamma function).
    [[nodiscard]] double integral(double omega) const;
};

/// H_S = omega_a a^dag a, H_B = omega_0 b^dag b, H_I = g (a^dag b + b^dag a).
[[nodiscard]] CompositeModel build_coupled_oscillators(double omega_a, double omega_0,
                                                       double g, int n_max);

/// Qubit with H_I = sigma_z (x) sum_k g_k (b_k^dag + b_k), H_B = sum_k
/// omega_k b_k^dag b_k and H_S = 0.
[[nodiscard]] CompositeModel build_dephasing_model(const std::vector<BathMode> &modes,
                                                   int n_max);

/// Same coupling with a per-mode truncation and an arbitrary 2x2 system
/// Hamiltonian (H_S = 0 reproduces the pure-dephasing thermometer).
[[nodiscard]] CompositeModel build_dephasing_model(const std::vector<BathMode> &modes,
                                                   const std::vector<int> &n_max,
                                                   const Matrix &system_hamiltonian);

/// Midpoint grid w_k = (k - 1/2) dw, dw = omega_max / k_modes, g_k = sqrt(J(w_k) dw).
[[nodiscard]] std::vector<BathMode> discretize_spectral_density(const SpectralDensity &j,
                                                                int k_modes,
                                                                double omega_max);

/// Complete set of orthogonal projectors on the thermometer factor.
class ProjectiveMeasurement {
  public:
    ProjectiveMeasurement(std::vector<Matrix> projectors, std::vector<double> labels);

    [[nodiscard]] std::size_t size() const noexcept { return projectors_.size(); }
    [[nodiscard]] Index dim() const { return projectors_.front().rows(); }
    [[nodiscard]] const Matrix &projector(std::size_t l) const { return projectors_.at(l); }
    [[nodiscard]] double label(std::size_t l) const { return labels_.at(l); }
    [[nodiscard]] const std::vector<Matrix> &projectors() const noexcept { return projectors_; }
    [[nodiscard]] const std::vector<double> &labels() const noexcept { return labels_; }

  private:
    std::vector<Matrix> projectors_;
    std::vector<double> labels_;
};

/// |l><l| for l = 0..n_max, labelled by l.
[[nodiscard]] ProjectiveMeasurement fock_measurement(int n_max);
/// |+_x><+_x| (label +1) and |-_x><-_x| (label -1).
[[nodiscard]] ProjectiveMeasurement pauli_x_measurement();
/// One projector per eigenvalue cluster; eigenvalues whose consecutive gaps
/// are within degeneracy_tol share a cluster labelled by the cluster mean.
[[nodiscard]] ProjectiveMeasurement eigenbasis_measurement(const Matrix &op,
                                                           double degeneracy_tol);

} // namespace thermoq
