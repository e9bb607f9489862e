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
 * Steady-state limit: the probe relaxes to rho_s = Tr_B[e^{-beta H}]/Z.
 *
 * Hamiltonian of mean force H* = -(1/beta) ln(Tr_B e^{-beta H} / Z_B), so
 * that rho_s = e^{-beta H*}/Z* with Z* = Z/Z_B. The energy operator E*
 * solves d/d(-beta) e^{-beta H*} = (E* A + A E*)/2 with A = e^{-beta H*}.
 * Measuring in the eigenbasis of E* gives outcome energies eps_l whose
 * deviations eps_l - U_S carry all the temperature information.
 *
 * All beta derivatives are central differences at h and h/2 combined by
 * one Richardson step (default h = 1e-4 beta).
 */

#pragma once

#include <stdexcept>
#include <vector>

#include "thermoq/models.hpp"
#include "thermoq/tensor.hpp"

namespace thermoq {

/// Raised when the two routes to the internal-energy deviation disagree.
class IdentityViolationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when the energy fluctuation vanishes (e.g. a trivial probe).
class DegenerateUncertaintyError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Tolerance on the spectral vs full-Hamiltonian deviation identity.
inline constexpr double kDeviationTolerance = 1e-6;

struct EnergyOutcome {
    double energy = 0.0;             ///< eps_{S,l}, cluster mean eigenvalue of E*
    double probability = 0.0;        ///< P_l = tr(Pi_l rho_s)
    double deviation = 0.0;          ///< eps_l - U_S
    double deviation_trace = 0.0;    ///< Tr[Pi_l H chi_s]/P_l - Tr[H chi_s]
};

struct MeanForceResult {
    HermitianOperator h_star;
    HermitianOperator e_star;
    double u_s = 0.0;
    double z_star = 0.0;
    std::vector<EnergyOutcome> delta_u; ///< one entry per E* eigenvalue cluster
    double delta_u_sq = 0.0; ///< sum_l P_l deviation_l^2
    double reconstruction_error = 0.0; ///< max|e^{-beta H*}/Z* - rho_s|
    double sylvester_residual = 0.0;   ///< max|(E A + A E)/2 - D| / max|D|
    double identity_deviation = 0.0;   ///< max_l |deviation - deviation_trace|
};

struct UncertaintyCheck {
    double delta_u = 0.0; ///< sqrt(sum_l P_l deviation_l^2)
    double fisher = 0.0;  ///< finite-difference Fisher information of P_l(beta)
    double product = 0.0; ///< Delta beta * Delta U_S with Delta beta = 1/sqrt(fisher)
};

/// Exact reduced steady state Tr_B[e^{-beta H}]/Z.
[[nodiscard]] DensityMatrix steady_state(const CompositeModel &model, double beta);

/// -(1/beta) ln(Tr_B e^{-beta H} / Z_B) on factor 0.
[[nodiscard]] HermitianOperator mean_force_hamiltonian(const CompositeModel &model,
                                                       double beta);

/// Symmetrized-derivative energy operator. h_step <= 0 picks 1e-4 beta.
[[nodiscard]] HermitianOperator energy_operator(const CompositeModel &model, double beta,
                                                double h_step = 0.0);

/// d(beta H*)/d beta; same expectation as energy_operator, different matrix.
[[nodiscard]] HermitianOperator energy_operator_beta_derivative(const CompositeModel &model,
                                                                double beta,
                                                                double h_step = 0.0);

/// U_S = -d ln Z* / d beta.
[[nodiscard]] double internal_energy(const CompositeModel &model, double beta,
                                     double h_step = 0.0);

/// Everything needed for the steady-state uncertainty relation. Eigenvalues
/// of E* closer than degeneracy_tol times its spectral range share an
/// outcome. Throws IdentityViolationError if the spectral and trace routes
/// to the deviation differ by more than kDeviationTolerance.
[[nodiscard]] MeanForceResult internal_energy_deviation(const CompositeModel &model,
                                                        double beta,
                                                        double degeneracy_tol = 1e-8,
                                                        double h_step = 0.0);

/// Fisher information of the E*-eigenbasis readout on rho_s and the
/// uncertainty product at the Cramer-Rao point.
[[nodiscard]] UncertaintyCheck temperature_energy_ur_check(const CompositeModel &model,
                                                           double beta,
                                                           double degeneracy_tol = 1e-8,
                                                           double h_step = 0.0);

} // namespace thermoq
