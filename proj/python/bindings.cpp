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


#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "thermoq/closed_form.hpp"
#include "thermoq/config.hpp"
#include "thermoq/cross_validate.hpp"
#include "thermoq/experiments.hpp"
#include "thermoq/heat.hpp"
#include "thermoq/mean_force.hpp"
#include "thermoq/output.hpp"

namespace py = pybind11;
using namespace thermoq;

namespace {

DensityMatrix probe_state(const Matrix &rho) {
    return DensityMatrix(HilbertSpace({rho.rows()}), rho);
}

HeatMutation parse_mutation(const std::string &name) {
    if (name.empty() || name == "none") {
        return HeatMutation::none;
    }
    if (name == "flip-correlation-sign") {
        return HeatMutation::flip_correlation_sign;
    }
    if (name == "drop-normalization") {
        return HeatMutation::drop_probability_normalization;
    }
    throw py::value_error("unknown mutation '" + name + "'");
}

py::dict run_result(const RunResult &r) {
    py::dict d;
    d["passed"] = r.passed();
    d["columns"] = r.table.columns;
    py::list rows;
    for (const auto &row : r.table.rows) {
        py::list cells;
        for (const Cell &c : row) {
            std::visit([&](const auto &v) { cells.append(v); }, c);
        }
        rows.append(cells);
    }
    d["rows"] = rows;
    d["report"] = report_json(r, "");
    return d;
}

} // namespace

PYBIND11_MODULE(_thermoq, m) {
    m.doc() = "Heat-fluctuation thermometry kernels";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("truncation_level", &truncation_level, py::arg("beta"), py::arg("omega"), py::arg("tail"));
    m.def("precision_bound", &precision_bound, py::arg("fisher"), py::arg("n_measurements") = 1);

    py::class_<BathMode>(m, "BathMode")
        .def(py::init<double, double>(), py::arg("omega"), py::arg("g"))
        .def_readwrite("omega", &BathMode::omega)
        .def_readwrite("g", &BathMode::g);

    py::class_<HEParams>(m, "HEParams")
        .def(py::init([](double omega_a, double omega_0, double g, double beta, double t) {
                 HEParams p{omega_a, omega_0, g, beta, t};
                 p.validate();
                 return p;
             }),
             py::arg("omega_a") = 1.0, py::arg("omega_0") = 1.0, py::arg("g") = 0.1,
             py::arg("beta") = 1.0, py::arg("t") = 0.0)
        .def_readwrite("omega_a", &HEParams::omega_a)
        .def_readwrite("omega_0", &HEParams::omega_0)
        .def_readwrite("g", &HEParams::g)
        .def_readwrite("beta", &HEParams::beta)
        .def_readwrite("t", &HEParams::t)
        .def("optimal_time", &HEParams::optimal_time, py::arg("i") = 0);

    py::class_<DephParams>(m, "DephParams")
        .def(py::init([](std::vector<BathMode> modes, double beta, double t) {
                 DephParams p{std::move(modes), beta, t};
                 p.validate();
                 return p;
             }),
             py::arg("modes"), py::arg("beta") = 1.0, py::arg("t") = 0.0)
        .def_readwrite("modes", &DephParams::modes)
        .def_readwrite("beta", &DephParams::beta)
        .def_readwrite("t", &DephParams::t);

    m.def("he_outcome_probability", &he_outcome_probability);
    m.def("he_heat_terms", [](const HEParams &p, int l) {
        const HeatPair h = he_heat_terms(p, l);
        return py::make_tuple(h.trajectory, h.correlation);
    });
    m.def("he_fisher", &he_fisher);
    m.def("he_precision_bound", &he_precision_bound);
    m.def("deph_gamma", &deph_gamma);
    m.def("deph_Q", &deph_Q);
    m.def("deph_C", &deph_C);
    m.def("deph_fisher", &deph_fisher);
    m.def("deph_precision_bound", &deph_precision_bound);

    py::class_<CompositeModel>(m, "CompositeModel")
        .def_property_readonly("system_dim", &CompositeModel::system_dim)
        .def_property_readonly("sample_dim", &CompositeModel::sample_dim)
        .def_property_readonly("hamiltonian",
                               [](const CompositeModel &c) { return c.hamiltonian().matrix(); });

    m.def("coupled_oscillators", &build_coupled_oscillators, py::arg("omega_a"), py::arg("omega_0"),
          py::arg("g"), py::arg("n_max"));
    m.def(
        "dephasing_model",
        [](const std::vector<BathMode> &modes, const std::vector<int> &n_max, const Matrix &h_s) {
            return build_dephasing_model(modes, n_max, h_s);
        },
        py::arg("modes"), py::arg("n_max"), py::arg("system_hamiltonian") = Matrix(Matrix::Zero(2, 2)));

    py::class_<ProjectiveMeasurement>(m, "ProjectiveMeasurement")
        .def(py::init<std::vector<Matrix>, std::vector<double>>(), py::arg("projectors"), py::arg("labels"))
        .def("__len__", &ProjectiveMeasurement::size);
    m.def("fock_measurement", &fock_measurement, py::arg("n_max"));
    m.def("pauli_x_measurement", &pauli_x_measurement);

    py::class_<OutcomeHeat>(m, "OutcomeHeat")
        .def_readonly("label", &OutcomeHeat::label)
        .def_readonly("probability", &OutcomeHeat::probability)
        .def_readonly("trajectory_heat", &OutcomeHeat::trajectory_heat)
        .def_readonly("correlation_heat", &OutcomeHeat::correlation_heat)
        .def_readonly("score", &OutcomeHeat::score)
        .def_readonly("suppressed", &OutcomeHeat::suppressed);

    py::class_<HeatRecord>(m, "HeatRecord")
        .def_readonly("outcomes", &HeatRecord::outcomes)
        .def_readonly("average_heat", &HeatRecord::average_heat)
        .def_readonly("fisher", &HeatRecord::fisher)
        .def_readonly("excluded_probability", &HeatRecord::excluded_probability);

    m.def(
        "heat_decomposition",
        [](const CompositeModel &model, const Matrix &rho0, double beta, double t,
           const ProjectiveMeasurement &meas, const std::string &mutation) {
            return heat_decomposition(model, probe_state(rho0), beta, t, meas,
                                      {kProbabilityFloor, parse_mutation(mutation)});
        },
        py::arg("model"), py::arg("rho0"), py::arg("beta"), py::arg("t"), py::arg("measurement"),
        py::arg("mutation") = "none");
    m.def(
        "score_direct",
        [](const CompositeModel &model, const Matrix &rho0, double beta, double t,
           const ProjectiveMeasurement &meas) { return score_direct_all(model, probe_state(rho0), beta, t, meas); },
        py::arg("model"), py::arg("rho0"), py::arg("beta"), py::arg("t"), py::arg("measurement"));
    m.def(
        "fisher_finite_difference",
        [](const CompositeModel &model, const Matrix &rho0, double beta, double t,
           const ProjectiveMeasurement &meas) {
            return fisher_finite_difference(model, probe_state(rho0), beta, t, meas);
        },
        py::arg("model"), py::arg("rho0"), py::arg("beta"), py::arg("t"), py::arg("measurement"));

    m.def(
        "mean_force_hamiltonian",
        [](const CompositeModel &model, double beta) { return mean_force_hamiltonian(model, beta).matrix(); },
        py::arg("model"), py::arg("beta"));
    m.def(
        "energy_operator",
        [](const CompositeModel &model, double beta) { return energy_operator(model, beta).matrix(); },
        py::arg("model"), py::arg("beta"));
    m.def("internal_energy", [](const CompositeModel &model, double beta) { return internal_energy(model, beta); },
          py::arg("model"), py::arg("beta"));
    m.def(
        "energy_uncertainty",
        [](const CompositeModel &model, double beta) {
            const MeanForceResult r = internal_energy_deviation(model, beta);
            const UncertaintyCheck c = temperature_energy_ur_check(model, beta);
            py::dict d;
            d["u_s"] = r.u_s;
            d["delta_u_sq"] = r.delta_u_sq;
            d["fisher"] = c.fisher;
            d["product"] = c.product;
            d["reconstruction_error"] = r.reconstruction_error;
            d["sylvester_residual"] = r.sylvester_residual;
            d["identity_deviation"] = r.identity_deviation;
            return d;
        },
        py::arg("model"), py::arg("beta"));

    m.def(
        "run_config",
        [](const std::string &json_text) {
            const RunConfig cfg = parse_config(json_text);
            py::gil_scoped_release release;
            RunResult r = run_experiment(cfg);
            py::gil_scoped_acquire acquire;
            return run_result(r);
        },
        py::arg("json_text"));
    m.def(
        "cross_validate",
        [](std::uint64_t seed, int draws, const std::string &mutation) {
            CrossValidateOptions o;
            o.seed = seed;
            o.draws = draws;
            o.mutation = parse_mutation(mutation);
            return run_result(cross_validate(o));
        },
        py::arg("seed") = 1, py::arg("draws") = 5, py::arg("mutation") = "none");
    m.def("schema", &config_schema);
    m.attr("__version__") = tool_version();
}
