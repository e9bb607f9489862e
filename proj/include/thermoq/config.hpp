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
 * Run configuration for the batch driver (JSON; see `thermoq schema`).
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thermoq/models.hpp"

namespace thermoq {

/// Invalid configuration; the CLI maps it to exit status 2.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

enum class Experiment { heat_exchange, dephasing, mean_force, scaling_he, scaling_deph, cross_validate };

[[nodiscard]] std::string_view to_string(Experiment e);
[[nodiscard]] Experiment parse_experiment(std::string_view name);

struct ModelConfig {
    // heat exchange
    double omega_a = 1.0;
    double omega_0 = 1.0;
    double g = 0.1;
    std::optional<double> delta; ///< if set, omega_a = omega_0 + 2 delta
    // shared
    double beta = 1.0;
    std::optional<double> t;  ///< unset: t_fraction times the first optimal time
    double t_fraction = 1.0;
    // dephasing and mean force
    std::vector<BathMode> modes{{1.0, 0.1}};
    double omega_q = 1.0;     ///< mean force: H_S = [[0, tunneling], [tunneling, omega_q]]
    double tunneling = 0.5;
    // scaling pipelines
    SpectralDensity spectral{0.01, 1.0, 10.0};
    int k_modes = 50000;
    std::optional<double> omega_max; ///< default 10 omega_c
};

struct NumericsConfig {
    std::optional<int> n_max; ///< unset: truncation_level(beta, omega, tail) per mode
    double tail = 1e-12;
    double fd_step = 0.0;     ///< <= 0 picks 1e-4 beta
    double prob_floor = 1e-12;
    double degeneracy_tol = 1e-8;
    int threads = 1;
};

enum class OutputFormat { csv, json };

struct OutputConfig {
    std::filesystem::path path;
    OutputFormat format = OutputFormat::csv;
    bool per_outcome = false;
};

/// One named axis; the grid is the Cartesian product in declaration order.
struct SweepAxis {
    std::string name; ///< beta, t, g, delta, s, alpha or omega_c
    std::vector<double> values;
};

struct RunConfig {
    Experiment experiment = Experiment::heat_exchange;
    ModelConfig model;
    std::vector<SweepAxis> sweep;
    NumericsConfig numerics;
    OutputConfig output;
    std::uint64_t seed = 1;
    int draws = 5;
    std::string hash; ///< FNV-1a of the canonical JSON, hex
};

/// Parse and validate. Throws ConfigError with a field path on failure.
[[nodiscard]] RunConfig parse_config(std::string_view json_text);
[[nodiscard]] RunConfig load_config(const std::filesystem::path &path);

/// JSON schema of the configuration file.
[[nodiscard]] std::string config_schema();

/// 64-bit FNV-1a.
[[nodiscard]] std::uint64_t fnv1a(std::string_view bytes);

/// Values of every sweep point, one entry per axis, in grid order.
[[nodiscard]] std::vector<std::vector<double>> sweep_points(const std::vector<SweepAxis> &axes);

/// Model with the sweep values of one point applied.
[[nodiscard]] ModelConfig apply_point(const ModelConfig &base, const std::vector<SweepAxis> &axes,
                                      const std::vector<double> &point);

} // namespace thermoq
