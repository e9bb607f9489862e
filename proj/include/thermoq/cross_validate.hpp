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
 * Randomized oracle-equivalence sweep over small instances of every model.
 */

#pragma once

#include <cstdint>

#include "thermoq/experiments.hpp"

namespace thermoq {

struct CrossValidateOptions {
    std::uint64_t seed = 1;
    int draws = 5;
    HeatMutation mutation = HeatMutation::none;
    double prob_floor = kProbabilityFloor;
    double fd_step = 0.0;
    bool closed_form = true; ///< also compare brute force with the analytic results
    bool mean_force = true;
};

/**
 * For each draw: a random heat-exchange instance (n_max <= 30), a random
 * dephasing instance (1 to 3 modes, n_max <= 15, 8, 5) and a random
 * qubit-plus-modes mean-force instance. Checks per instance:
 *   score_heat    score_direct vs trajectory + correlation heat
 *   two_point     two-point double sum vs trajectory heat
 *   fisher_ur     finite-difference Fisher vs heat-fluctuation Fisher
 *   closed_form_* brute force vs analytic (heat exchange, dephasing)
 *   average_heat  dephasing sum_l P_l H_tra vs Q
 *   mean_force_*  reconstruction, Sylvester residual, deviation identity
 * One table row per instance. Deterministic for fixed options.
 */
[[nodiscard]] RunResult cross_validate(const CrossValidateOptions &options);

} // namespace thermoq
