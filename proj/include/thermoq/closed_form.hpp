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
 * Analytic results for the two thermometers and power-law fits of the
 * low-temperature precision bounds.
 *
 * Heat-exchange thermometer: probe oscillator (omega_a) in vacuum, sample
 * oscillator (omega_0) thermal, exchange coupling g, Fock-basis readout.
 * Dephasing thermometer: qubit in |+_x>, sigma_z coupling to bath modes,
 * x-basis readout with outcomes l = +1, -1.
 */

#pragma once

#include <utility>
#include <vector>

#include "thermoq/heat.hpp"
#include "thermoq/models.hpp"

namespace thermoq {

struct HeatPair {
    double trajectory;
    double correlation;
};

struct HEParams {
    double omega_a = 1.0;
    double omega_0 = 1.0;
    double g = 0.1;
    double beta = 1.0;
    double t = 0.0;

    void validate() const;
    /// (omega_a - omega_0) / 2
    [[nodiscard]] double detuning() const { return 0.5 * (omega_a - omega_0); }
    /// sqrt(detuning^2 + g^2)
    [[nodiscard]] double rabi() const;
    /// 1 / (e^{beta omega_0} - 1)
    [[nodiscard]] double thermal_occupation() const;
    /// (i + 1/2) pi / rabi()
    [[nodiscard]] double optimal_time(int i = 0) const;
};

/// Mean probe excitation n(t) = g^2 n_b / E^2 sin^2(E t).
[[nodiscard]] double he_mean_excitation(const HEParams &p);
/// Geometric outcome law n^l / (1+n)^{l+1}.
[[nodiscard]] double he_outcome_probability(const HEParams &p, int l);
/// H_tra = l omega_0, H_cor = (n_b - n)/(1 + n) (l - n) omega_0.
[[nodiscard]] HeatPair he_heat_terms(const HEParams &p, int l);
/// Score ((1 + n_b)/(1 + n)) (l - n) omega_0.
[[nodiscard]] double he_score(const HEParams &p, int l);
/// omega_0^2 (1 + n_b)^2 n / (1 + n).
[[nodiscard]] double he_fisher(const HEParams &p);
/// Relative bound Delta beta / beta; +infinity when n(t) = 0.
[[nodiscard]] double he_precision_bound(const HEParams &p);

struct DephParams {
    std::vector<BathMode> modes;
    double beta = 1.0;
    double t = 0.0;

    void validate() const;
};

/// Gamma(t) = 4 sum_k g_k^2/omega_k^2 (2 n_k + 1)(1 - cos omega_k t).
[[nodiscard]] double deph_gamma(const DephParams &p);
/// Q = -2 sum_k g_k^2/omega_k (1 - cos omega_k t).
[[nodiscard]] double deph_Q(const DephParams &p);
/// C = -4 sum_k g_k^2/omega_k n_k (1 + n_k)(1 - cos omega_k t).
[[nodiscard]] double deph_C(const DephParams &p);
/// P_l = (1 + l e^{-Gamma}) / 2 for l = +1, -1.
[[nodiscard]] double deph_probability(const DephParams &p, int l);
/// H_tra = Q - (l e^{-Gamma}/P_l) Q, H_cor = (l e^{-Gamma}/P_l)(Q + C).
/// Throws SuppressedOutcomeError if P_l is below the probability floor.
[[nodiscard]] HeatPair deph_heat_terms(const DephParams &p, int l);
/// 4 C^2 / (e^{2 Gamma} - 1).
[[nodiscard]] double deph_fisher(const DephParams &p);
/// sqrt(e^{2 Gamma} - 1) / (2 beta |C|); +infinity when C = 0.
[[nodiscard]] double deph_precision_bound(const DephParams &p);

struct PowerLawFit {
    double slope;
    double intercept;
    double r_squared;
};

/// Least squares of log(bound) against log(beta). Needs >= 4 positive points.
[[nodiscard]] PowerLawFit scaling_fit(const std::vector<std::pair<double, double>> &points);

/**
 * Single-mode picture of a multimode sample at low temperature: the sample
 * mode sits at omega_0 = 1/beta with g^2 = int_0^{1/beta} J, probe detuned
 * by a fixed `detuning`, read out at the first optimal time.
 */
[[nodiscard]] HEParams he_single_mode_params(const SpectralDensity &j, double beta,
                                             double detuning);

/// Dephasing parameters for a spectral density discretized on k_modes
/// midpoints up to omega_max.
[[nodiscard]] DephParams deph_spectral_params(const SpectralDensity &j, double beta, double t,
                                              int k_modes, double omega_max);

} // namespace thermoq
