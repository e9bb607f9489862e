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
 * Sweep execution and identity bookkeeping for the batch driver.
 */

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "thermoq/closed_form.hpp"
#include "thermoq/config.hpp"
#include "thermoq/heat.hpp"

namespace thermoq {

/// Tolerances of the identity checks reported by `run` and `cross-validate`.
namespace tolerance {
inline constexpr double score_heat = 1e-8;      ///< |score_direct - (dH_tra + H_cor)|
inline constexpr double two_point = 1e-8;       ///< |two-point H_tra - H_tra|
inline constexpr double fisher = 1e-5;          ///< relative, heat vs finite difference
inline constexpr double closed_form = 1e-6;     ///< relative, brute force vs analytic
inline constexpr double average_heat = 1e-8;    ///< |sum_l P_l H_tra - Q|
inline constexpr double cramer_rao = 1e-5;      ///< |bound beta sqrt(F_fd) - 1|
inline constexpr double reconstruction = 1e-10; ///< reduced Gibbs rebuilt from H*
inline constexpr double sylvester = 1e-8;       ///< relative residual
inline constexpr double deviation = 1e-6;       ///< spectral vs trace route
inline constexpr double energy_ur = 1e-5;       ///< relative, fisher vs Delta U^2
inline constexpr double slope = 0.1;
} // namespace tolerance

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct CheckResult {
    std::string name;
    double tolerance = 0.0;
    double max_deviation = 0.0;
    std::size_t evaluations = 0;
    std::string worst_point; ///< parameters of the largest deviation

    [[nodiscard]] bool passed() const { return max_deviation <= tolerance; }
};

/// Running maxima of named identity deviations. NaN counts as a failure.
class CheckLedger {
  public:
    void record(const std::string &name, double tolerance, double deviation,
                const std::string &point);
    void merge(const CheckLedger &other);

    [[nodiscard]] const std::vector<CheckResult> &results() const noexcept { return results_; }
    [[nodiscard]] const CheckResult *find(const std::string &name) const;
    [[nodiscard]] bool passed() const;

  private:
    std::vector<CheckResult> results_;
};

struct SlopeReport {
    std::string name;
    PowerLawFit fit;
    double expected = 0.0;
    double tolerance = tolerance::slope;

    [[nodiscard]] bool passed() const;
};

struct RunResult {
    Experiment experiment = Experiment::heat_exchange;
    Table table;
    CheckLedger checks;
    std::vector<SlopeReport> slopes;
    std::size_t failed_points = 0;
    std::map<std::string, double> summary; ///< extra scalar results (e.g. cross-validate)

    [[nodiscard]] bool passed() const;
};

/// Fock cutoff for one mode: the override if set, else truncation_level.
[[nodiscard]] int mode_cutoff(const NumericsConfig &numerics, double beta, double omega);

/// Cutoff for a dephasing mode: thermal tail plus room for the coherent
/// displacement 2|g|/omega, unless overridden.
[[nodiscard]] int dephasing_cutoff(const NumericsConfig &numerics, double beta,
                                   const BathMode &mode);

/// Both routes to every per-outcome quantity of one probe instance.
struct HeatInstance {
    HeatRecord record;
    std::vector<double> score_direct; ///< NaN where suppressed
    std::vector<double> two_point;    ///< NaN where suppressed
    double fisher_fd = 0.0;
    double score_deviation = 0.0;     ///< max_l |score_direct - score|
    double two_point_deviation = 0.0; ///< max_l |two_point - trajectory heat|
    double fisher_deviation = 0.0;    ///< |F_fd - F_heat| / max(F_heat, 1e-12)
};

[[nodiscard]] HeatInstance evaluate_heat_instance(const CompositeModel &model,
                                                  const DensityMatrix &rho0, double beta,
                                                  double t, const ProjectiveMeasurement &meas,
                                                  const HeatOptions &options, double fd_step);

/// Largest relative deviation of a brute-force heat-exchange instance from
/// the closed forms. Outcomes with analytic P_l below min_probability are
/// skipped; heats are compared on the scale max(|analytic|, omega_0).
[[nodiscard]] double he_closed_form_deviation(const HEParams &p, const HeatInstance &inst,
                                              double min_probability = 1e-5);

/// Same for the dephasing thermometer (H_S = 0, probe in |+_x>).
[[nodiscard]] double deph_closed_form_deviation(const DephParams &p, const HeatInstance &inst);

/// Runs every sweep point (concurrently when numerics.threads > 1) and
/// collects rows in grid order.
[[nodiscard]] RunResult run_experiment(const RunConfig &config);

/// Short "name=value ..." description of a point, used in reports.
[[nodiscard]] std::string describe(const std::vector<std::pair<std::string, double>> &params);

} // namespace thermoq
