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

#include "thermoq/closed_form.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace thermoq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double occupation(double beta, double omega) { return 1.0 / std::expm1(beta * omega); }

void require_outcome(int l) {
    if (l != 1 && l != -1) {
        throw std::invalid_argument("dephasing outcomes are +1 and -1");
    }
}

} // namespace

void HEParams::validate() const {
    if (!(omega_a > 0.0) || !(omega_0 > 0.0) || !(beta > 0.0) || !(t >= 0.0)) {
        throw std::invalid_argument(
            "heat-exchange parameters need omega_a, omega_0, beta > 0 and t >= 0");
    }
}

double HEParams::rabi() const { return std::hypot(detuning(), g); }

double HEParams::thermal_occupation() const { return occupation(beta, omega_0); }

double HEParams::optimal_time(int i) const {
    const double e = rabi();
    if (e == 0.0) {
        throw std::invalid_argument("optimal time undefined without coupling or detuning");
    }
    return (i + 0.5) * std::numbers::pi / e;
}

double he_mean_excitation(const HEParams &p) {
    p.validate();
    const double e = p.rabi();
    if (e == 0.0) {
        return 0.0;
    }
    const double s = std::sin(e * p.t);
    return (p.g * p.g) / (e * e) * p.thermal_occupation() * s * s;
}

double he_outcome_probability(const HEParams &p, int l) {
    if (l < 0) {
        return 0.0;
    }
    const double n = he_mean_excitation(p);
    return std::pow(n / (1.0 + n), l) / (1.0 + n);
}

HeatPair he_heat_terms(const HEParams &p, int l) {
    const double n = he_mean_excitation(p);
    const double nb = p.thermal_occupation();
    return {l * p.omega_0, (nb - n) / (1.0 + n) * (l - n) * p.omega_0};
}

double he_score(const HEParams &p, int l) {
    const double n = he_mean_excitation(p);
    const double nb = p.thermal_occupation();
    return (1.0 + nb) / (1.0 + n) * (l - n) * p.omega_0;
}

double he_fisher(const HEParams &p) {
    const double n = he_mean_excitation(p);
    const double nb = p.thermal_occupation();
    return p.omega_0 * p.omega_0 * (1.0 + nb) * (1.0 + nb) * n / (1.0 + n);
}

double he_precision_bound(const HEParams &p) {
    const double n = he_mean_excitation(p);
    if (!(n > 0.0)) {
        return kInf;
    }
    const double nb = p.thermal_occupation();
    return std::sqrt((1.0 + n) / n) / (p.beta * p.omega_0 * (1.0 + nb));
}

void DephParams::validate() const {
    if (!(beta > 0.0) || !(t >= 0.0)) {
        throw std::invalid_argument("dephasing parameters need beta > 0 and t >= 0");
    }
    for (const BathMode &m : modes) {
        if (!(m.omega > 0.0)) {
            throw std::invalid_argument("bath mode frequencies must be positive");
        }
    }
}

double deph_gamma(const DephParams &p) {
    p.validate();
    double gamma = 0.0;
    for (const BathMode &m : p.modes) {
        const double coth = 2.0 * occupation(p.beta, m.omega) + 1.0;
        gamma += 4.0 * m.g * m.g / (m.omega * m.omega) * coth * (1.0 - std::cos(m.omega * p.t));
    }
    return gamma;
}

double deph_Q(const DephParams &p) {
    p.validate();
    double q = 0.0;
    for (const BathMode &m : p.modes) {
        q -= 2.0 * m.g * m.g / m.omega * (1.0 - std::cos(m.omega * p.t));
    }
    return q;
}

double deph_C(const DephParams &p) {
    p.validate();
    double c = 0.0;
    for (const BathMode &m : p.modes) {
        const double n = occupation(p.beta, m.omega);
        c -= 4.0 * m.g * m.g / m.omega * n * (1.0 + n) * (1.0 - std::cos(m.omega * p.t));
    }
    return c;
}

double deph_probability(const DephParams &p, int l) {
    require_outcome(l);
    return 0.5 * (1.0 + l * std::exp(-deph_gamma(p)));
}

HeatPair deph_heat_terms(const DephParams &p, int l) {
    const double prob = deph_probability(p, l);
    if (prob < kProbabilityFloor) {
        throw SuppressedOutcomeError("dephasing outcome probability below the floor");
    }
    const double weight = l * std::exp(-deph_gamma(p)) / prob;
    const double q = deph_Q(p);
    const double c = deph_C(p);
    return {q - weight * q, weight * (q + c)};
}

double deph_fisher(const DephParams &p) {
    const double gamma = deph_gamma(p);
    const double c = deph_C(p);
    const double denom = std::expm1(2.0 * gamma);
    if (!(denom > 0.0)) {
        return c == 0.0 ? 0.0 : kInf;
    }
    return 4.0 * c * c / denom;
}

double deph_precision_bound(const DephParams &p) {
    const double c = deph_C(p);
    if (c == 0.0) {
        return kInf;
    }
    return std::sqrt(std::expm1(2.0 * deph_gamma(p))) / (2.0 * p.beta * std::abs(c));
}

PowerLawFit scaling_fit(const std::vector<std::pair<double, double>> &points) {
    if (points.size() < 4) {
        throw std::invalid_argument("scaling_fit: need at least 4 points");
    }
    const auto n = static_cast<double>(points.size());
    double sx = 0.0, sy = 0.0;
    for (const auto &[beta, bound] : points) {
        if (!(beta > 0.0) || !(bound > 0.0) || !std::isfinite(bound)) {
            throw std::invalid_argument("scaling_fit: points must be positive and finite");
        }
        sx += std::log(beta);
        sy += std::log(bound);
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto &[beta, bound] : points) {
        const double dx = std::log(beta) - mx;
        const double dy = std::log(bound) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("scaling_fit: beta values must not all coincide");
    }
    const double slope = sxy / sxx;
    const double r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return {slope, my - slope * mx, r2};
}

HEParams he_single_mode_params(const SpectralDensity &j, double beta, double detuning) {
    j.validate();
    if (!(beta > 0.0)) {
        throw std::invalid_argument("beta must be positive");
    }
    HEParams p;
    p.beta = beta;
    p.omega_0 = 1.0 / beta;
    p.omega_a = p.omega_0 + 2.0 * detuning;
    p.g = std::sqrt(j.integral(1.0 / beta));
    p.validate();
    p.t = p.optimal_time();
    return p;
}

DephParams deph_spectral_params(const SpectralDensity &j, double beta, double t, int k_modes,
                                double omega_max) {
    DephParams p;
    p.modes = discretize_spectral_density(j, k_modes, omega_max);
    p.beta = beta;
    p.t = t;
    p.validate();
    return p;
}

} // namespace thermoq
