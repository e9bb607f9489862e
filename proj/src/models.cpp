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

#include "thermoq/models.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

namespace thermoq {

namespace {

constexpr double kMeasurementTolerance = 1e-10;

Matrix identity(Index n) { return Matrix::Identity(n, n); }

} // namespace

Matrix annihilation(Index n_max) {
    Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
    for (Index n = 1; n <= n_max; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

CompositeModel::CompositeModel(HilbertSpace space, Matrix system_hamiltonian,
                               Matrix sample_hamiltonian, Matrix interaction)
    : space_(std::move(space)), system_h_(std::move(system_hamiltonian)),
      sample_h_(std::move(sample_hamiltonian)),
      h_s_(space_, tensor_product(system_h_, identity(sample_dim()))),
      h_b_(space_, tensor_product(identity(system_dim()), sample_h_)),
      h_i_(space_, std::move(interaction)),
      h_(space_, h_s_.matrix() + h_b_.matrix() + h_i_.matrix()),
      cache_(std::make_shared<SpectrumCache>()) {}

HilbertSpace CompositeModel::system_space() const {
    return HilbertSpace({space_.factor_dim(0)});
}

HilbertSpace CompositeModel::sample_space() const { return space_.sample_space(); }

const Spectrum &CompositeModel::spectrum() const {
    std::call_once(cache_->once, [&] { cache_->value.emplace(h_); });
    return *cache_->value;
}

void SpectralDensity::validate() const {
    if (!(alpha > 0.0) || !(s >= 0.0) || !(omega_c > 0.0)) {
        throw std::invalid_argument(
            "spectral density needs alpha > 0, s >= 0 and omega_c > 0");
    }
}

double SpectralDensity::operator()(double omega) const {
    if (omega <= 0.0) {
        return 0.0;
    }
    return alpha * std::pow(omega, s) * std::pow(omega_c, 1.0 - s) *
           std::exp(-omega / omega_c);
}

double SpectralDensity::integral(double omega) const {
    if (omega <= 0.0) {
        return 0.0;
    }
    // int_0^w alpha x^s wc^{1-s} e^{-x/wc} dx = alpha wc^2 gamma(s+1, w/wc)
    return alpha * omega_c * omega_c * boost::math::tgamma_lower(s + 1.0, omega / omega_c);
}

CompositeModel build_coupled_oscillators(double omega_a, double omega_0, double g,
                                         int n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("build_coupled_oscillators: n_max must be >= 1");
    }
    const Index d = n_max + 1;
    HilbertSpace space({d, d});
    const Matrix a = annihilation(n_max);
    const Matrix number = a.adjoint() * a;
    const Matrix coupling =
        g * (tensor_product(a.adjoint(), a) + tensor_product(a, a.adjoint()));
    return CompositeModel(std::move(space), omega_a * number, omega_0 * number, coupling);
}

CompositeModel build_dephasing_model(const std::vector<BathMode> &modes, int n_max) {
    return build_dephasing_model(modes, std::vector<int>(modes.size(), n_max),
                                 Matrix::Zero(2, 2));
}

CompositeModel build_dephasing_model(const std::vector<BathMode> &modes,
                                     const std::vector<int> &n_max,
                                     const Matrix &system_hamiltonian) {
    if (modes.empty()) {
        throw std::invalid_argument("build_dephasing_model: no bath modes");
    }
    if (n_max.size() != modes.size()) {
        throw std::invalid_argument("build_dephasing_model: one n_max per mode required");
    }
    if (system_hamiltonian.rows() != 2 || system_hamiltonian.cols() != 2) {
        throw DimensionError("build_dephasing_model: system Hamiltonian must be 2x2");
    }
    std::vector<Index> dims{2};
    for (std::size_t k = 0; k < modes.size(); ++k) {
        if (!(modes[k].omega > 0.0)) {
            throw std::invalid_argument("build_dephasing_model: mode frequencies must be positive");
        }
        if (n_max[k] < 1) {
            throw std::invalid_argument("build_dephasing_model: n_max must be >= 1");
        }
        dims.push_back(n_max[k] + 1);
    }
    HilbertSpace space(dims);
    const HilbertSpace sample = space.sample_space();

    Matrix sample_h = Matrix::Zero(sample.total_dim(), sample.total_dim());
    Matrix displacement = Matrix::Zero(sample.total_dim(), sample.total_dim());
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const Matrix b = annihilation(n_max[k]);
        const auto factor = static_cast<Index>(k);
        sample_h += modes[k].omega * embed_local(b.adjoint() * b, sample, factor);
        displacement += modes[k].g * embed_local(b + b.adjoint(), sample, factor);
    }
    Matrix interaction = tensor_product(pauli_z(), displacement);
    return CompositeModel(std::move(space), system_hamiltonian, std::move(sample_h),
                          std::move(interaction));
}

std::vector<BathMode> discretize_spectral_density(const SpectralDensity &j, int k_modes,
                                                  double omega_max) {
    j.validate();
    if (k_modes < 1 || !(omega_max > 0.0)) {
        throw std::invalid_argument(
            "discretize_spectral_density: need k_modes >= 1 and omega_max > 0");
    }
    const double dw = omega_max / k_modes;
    std::vector<BathMode> modes;
    modes.reserve(static_cast<std::size_t>(k_modes));
    for (int k = 1; k <= k_modes; ++k) {
        const double w = (k - 0.5) * dw;
        modes.push_back({w, std::sqrt(j(w) * dw)});
    }
    return modes;
}

ProjectiveMeasurement::ProjectiveMeasurement(std::vector<Matrix> projectors,
                                             std::vector<double> labels)
    : projectors_(std::move(projectors)), labels_(std::move(labels)) {
    if (projectors_.empty() || projectors_.size() != labels_.size()) {
        throw std::invalid_argument("measurement needs one label per projector");
    }
    const Index d = projectors_.front().rows();
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t l = 0; l < projectors_.size(); ++l) {
        const Matrix &p = projectors_[l];
        if (p.rows() != d || p.cols() != d) {
            throw DimensionError("measurement projectors must share one dimension");
        }
        if (!is_hermitian(p, kMeasurementTolerance)) {
            throw InvalidOperatorError("measurement projector is not Hermitian");
        }
        for (std::size_t m = l; m < projectors_.size(); ++m) {
            const Matrix prod = p * projectors_[m];
            const double err = l == m ? max_abs(prod - p) : max_abs(prod);
            if (err > kMeasurementTolerance) {
                throw InvalidOperatorError("measurement projectors are not orthogonal idempotents");
            }
        }
        sum += p;
    }
    if (max_abs(sum - identity(d)) > kMeasurementTolerance) {
        throw InvalidOperatorError("measurement projectors do not resolve the identity");
    }
}

ProjectiveMeasurement fock_measurement(int n_max) {
    if (n_max < 0) {
        throw std::invalid_argument("fock_measurement: n_max must be >= 0");
    }
    std::vector<Matrix> projectors;
    std::vector<double> labels;
    for (int l = 0; l <= n_max; ++l) {
        Matrix p = Matrix::Zero(n_max + 1, n_max + 1);
        p(l, l) = 1.0;
        projectors.push_back(std::move(p));
        labels.push_back(l);
    }
    return ProjectiveMeasurement(std::move(projectors), std::move(labels));
}

ProjectiveMeasurement pauli_x_measurement() {
    Vector plus(2), minus(2);
    plus << std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2;
    minus << std::numbers::sqrt2 / 2, -std::numbers::sqrt2 / 2;
    return ProjectiveMeasurement({plus * plus.adjoint(), minus * minus.adjoint()},
                                 {+1.0, -1.0});
}

ProjectiveMeasurement eigenbasis_measurement(const Matrix &op, double degeneracy_tol) {
    const Spectrum spectrum(op);
    const Matrix v = spectrum.vectors();
    const RealVector &e = spectrum.values();
    std::vector<Matrix> projectors;
    std::vector<double> labels;
    Index start = 0;
    for (Index k = 1; k <= e.size(); ++k) {
        if (k < e.size() && e(k) - e(k - 1) <= degeneracy_tol) {
            continue;
        }
        const Matrix cols = v.middleCols(start, k - start);
        projectors.push_back(cols * cols.adjoint());
        labels.push_back(e.segment(start, k - start).mean());
        start = k;
    }
    return ProjectiveMeasurement(std::move(projectors), std::move(labels));
}

} // namespace thermoq
