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
 * Probe thermometry: evolve the probe-sample product state, measure the
 * probe, split the score into trajectory and correlation heat, and compute
 * the Fisher information independently from the heat fluctuation and from
 * finite differences of the outcome law.
 *
 * Heat sign convention: trajectory heat is eps_{B,l}(0) - eps_{B,l}(t), the
 * sample energy lost along the probe trajectory ending in outcome l.
 */

#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include "thermoq/models.hpp"
#include "thermoq/tensor.hpp"

namespace thermoq {

/// Outcomes with probability below this floor are left out of score sums.
inline constexpr double kProbabilityFloor = 1e-12;

/// Raised when an outcome is too improbable for its conditional quantities
/// to be defined. Callers skip the outcome; it contributes nothing.
class SuppressedOutcomeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Deliberate faults for checking that the identity tests are not vacuous.
enum class HeatMutation {
    none,
    flip_correlation_sign,        ///< H_cor -> -H_cor
    drop_probability_normalization ///< 1/P_l removed from the conditional energies
};

struct HeatOptions {
    double prob_floor = kProbabilityFloor;
    HeatMutation mutation = HeatMutation::none;
};

struct OutcomeHeat {
    double label = 0.0;
    double probability = 0.0;
    double trajectory_heat = 0.0;
    double correlation_heat = 0.0;
    double score = 0.0; ///< delta H_tra + H_cor
    bool suppressed = false;
};

struct HeatRecord {
    std::vector<OutcomeHeat> outcomes;
    double average_heat = 0.0;
    double fisher = 0.0; ///< sum_l P_l score_l^2 over unsuppressed outcomes
    double excluded_probability = 0.0;
    double initial_sample_energy = 0.0; ///< Tr[H_B chi(0)]
    double final_sample_energy = 0.0;   ///< Tr[H_B chi(t)]
};

struct OutcomeProbability {
    double label;
    double probability;
};

struct ConditionalState {
    double probability;
    DensityMatrix sample_state;
};

/// chi(0) = rho0 (x) e^{-beta H_B}/Z_B on the model's space.
[[nodiscard]] DensityMatrix initial_state(const CompositeModel &model,
                                          const DensityMatrix &rho0, double beta);

/// U_t chi0 U_t^dagger with U_t = exp(-i H t).
[[nodiscard]] DensityMatrix evolve_total(const CompositeModel &model,
                                         const DensityMatrix &chi0, double t);

/// P_l = Tr[(Pi_l (x) I) chi_t], clipped to [0, 1].
[[nodiscard]] std::vector<OutcomeProbability>
outcome_probabilities(const DensityMatrix &chi_t, const ProjectiveMeasurement &meas);

/// Sample state after outcome l: Tr_S[Pi_l chi(t) Pi_l] / P_l.
[[nodiscard]] ConditionalState
conditional_bath_state(const CompositeModel &model, const DensityMatrix &chi0, double t,
                       std::size_t outcome, const ProjectiveMeasurement &meas,
                       double prob_floor = kProbabilityFloor);

/// Per-outcome trajectory, correlation and average heat, score and the
/// heat-fluctuation Fisher information, for rho0 (x) thermal sample.
[[nodiscard]] HeatRecord heat_decomposition(const CompositeModel &model,
                                            const DensityMatrix &rho0, double beta,
                                            double t, const ProjectiveMeasurement &meas,
                                            const HeatOptions &options = {});

/// Trajectory heat as the two-point-measurement double sum
/// sum_{m,n} P_{l;n,m} (eps_m - eps_n) over eigenvectors of H_B.
/// chi0 must be diagonal in the H_B eigenbasis on the sample side.
[[nodiscard]] double two_point_trajectory_heat(const CompositeModel &model,
                                               const DensityMatrix &chi0, double t,
                                               std::size_t outcome,
                                               const ProjectiveMeasurement &meas,
                                               double prob_floor = kProbabilityFloor);

/// two_point_trajectory_heat for every outcome at once; NaN marks outcomes
/// below prob_floor.
[[nodiscard]] std::vector<double>
two_point_trajectory_heat_all(const CompositeModel &model, const DensityMatrix &chi0, double t,
                              const ProjectiveMeasurement &meas,
                              double prob_floor = kProbabilityFloor);

/// Score from the sample energy shift,
/// Tr[M_l H_B chi0 M_l^dagger] - Tr[H_B chi0], M_l = Pi_l U_t / sqrt(P_l).
[[nodiscard]] double score_direct(const CompositeModel &model, const DensityMatrix &rho0,
                                  double beta, double t, const ProjectiveMeasurement &meas,
                                  std::size_t outcome,
                                  double prob_floor = kProbabilityFloor);

/// score_direct for every outcome at once; NaN marks outcomes below prob_floor.
[[nodiscard]] std::vector<double> score_direct_all(const CompositeModel &model,
                                                   const DensityMatrix &rho0, double beta,
                                                   double t, const ProjectiveMeasurement &meas,
                                                   double prob_floor = kProbabilityFloor);

/// Outcome law P_l(beta) for the thermal-sample scheme.
[[nodiscard]] std::vector<double> outcome_law(const CompositeModel &model,
                                              const DensityMatrix &rho0, double beta,
                                              double t, const ProjectiveMeasurement &meas);

/// sum_l P_l (d ln P_l / d(-beta))^2 with central differences at h and h/2
/// combined by one Richardson step. h must lie in (0, beta/10]; h <= 0 picks
/// the default 1e-4 beta.
[[nodiscard]] double fisher_finite_difference(const CompositeModel &model,
                                              const DensityMatrix &rho0, double beta,
                                              double t, const ProjectiveMeasurement &meas,
                                              double h = 0.0,
                                              double prob_floor = kProbabilityFloor);

/// Cramer-Rao bound 1/sqrt(N F); +infinity when F <= 0.
[[nodiscard]] double precision_bound(double fisher, int n_measurements = 1);

} // namespace thermoq
