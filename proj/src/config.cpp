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

#include "thermoq/config.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace thermoq {

namespace {

using ojson = nlohmann::ordered_json;

constexpr std::array<std::pair<Experiment, std::string_view>, 6> kExperimentNames{{
    {Experiment::heat_exchange, "heat-exchange"},
    {Experiment::dephasing, "dephasing"},
    {Experiment::mean_force, "mean-force"},
    {Experiment::scaling_he, "scaling-he"},
    {Experiment::scaling_deph, "scaling-deph"},
    {Experiment::cross_validate, "cross-validate"},
}};

constexpr std::array<std::string_view, 7> kAxisNames{"beta",  "t",     "g",      "delta",
                                                     "s",     "alpha", "omega_c"};

[[noreturn]] void fail(const std::string &where, const std::string &what) {
    throw ConfigError(where + ": " + what);
}

void reject_unknown(const ojson &obj, const std::string &where,
                    std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) {
        fail(where, "expected an object");
    }
    for (const auto &[key, value] : obj.items()) {
        bool ok = false;
        for (std::string_view a : allowed) {
            ok = ok || key == a;
        }
        if (!ok) {
            fail(where + "." + key, "unknown field");
        }
    }
}

double number(const ojson &obj, const std::string &key, const std::string &where, double fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const ojson &v = obj.at(key);
    if (!v.is_number()) {
        fail(where + "." + key, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        fail(where + "." + key, "must be finite");
    }
    return x;
}

double positive(const ojson &obj, const std::string &key, const std::string &where, double fallback) {
    const double x = number(obj, key, where, fallback);
    if (!(x > 0.0)) {
        fail(where + "." + key, "must be positive");
    }
    return x;
}

int integer(const ojson &obj, const std::string &key, const std::string &where, int fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    const ojson &v = obj.at(key);
    if (!v.is_number_integer()) {
        fail(where + "." + key, "expected an integer");
    }
    return v.get<int>();
}

std::vector<double> axis_values(const ojson &v, const std::string &where) {
    std::vector<double> out;
    if (v.is_array()) {
        for (const ojson &x : v) {
            if (!x.is_number()) {
                fail(where, "sweep values must be numbers");
            }
            out.push_back(x.get<double>());
        }
    } else if (v.is_object() && v.size() == 1 &&
               (v.contains("linspace") || v.contains("logspace"))) {
        const bool log = v.contains("logspace");
        const ojson &spec = log ? v.at("logspace") : v.at("linspace");
        if (!spec.is_array() || spec.size() != 3 || !spec[0].is_number() ||
            !spec[1].is_number() || !spec[2].is_number_integer()) {
            fail(where, "expected [start, stop, count]");
        }
        const double a = spec[0].get<double>();
        const double b = spec[1].get<double>();
        const int n = spec[2].get<int>();
        if (n < 1) {
            fail(where, "count must be >= 1");
        }
        if (log && !(a > 0.0 && b > 0.0)) {
            fail(where, "logspace endpoints must be positive");
        }
        for (int i = 0; i < n; ++i) {
            const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
            out.push_back(log ? std::exp(std::log(a) + f * (std::log(b) - std::log(a)))
                              : a + f * (b - a));
        }
    } else {
        fail(where, "expected a list of numbers or {\"linspace\"|\"logspace\": [start, stop, count]}");
    }
    if (out.empty()) {
        fail(where, "sweep axis is empty");
    }
    for (double x : out) {
        if (!std::isfinite(x)) {
            fail(where, "sweep values must be finite");
        }
    }
    return out;
}

void parse_model(const ojson &m, ModelConfig &cfg) {
    const std::string w = "model";
    reject_unknown(m, w,
                   {"omega_a", "omega_0", "g", "delta", "beta", "t", "t_fraction", "modes", "omega_q",
                    "tunneling", "spectral_density", "k_modes", "omega_max"});
    cfg.omega_a = positive(m, "omega_a", w, cfg.omega_a);
    cfg.omega_0 = positive(m, "omega_0", w, cfg.omega_0);
    cfg.g = number(m, "g", w, cfg.g);
    if (m.contains("delta")) {
        cfg.delta = number(m, "delta", w, 0.0);
    }
    cfg.beta = positive(m, "beta", w, cfg.beta);
    if (m.contains("t")) {
        cfg.t = number(m, "t", w, 0.0);
        if (*cfg.t < 0.0) {
            fail(w + ".t", "must be non-negative");
        }
    }
    cfg.t_fraction = positive(m, "t_fraction", w, cfg.t_fraction);
    if (m.contains("modes")) {
        const ojson &modes = m.at("modes");
        if (!modes.is_array() || modes.empty()) {
            fail(w + ".modes", "expected a non-empty list of {omega, g}");
        }
        cfg.modes.clear();
        for (std::size_t k = 0; k < modes.size(); ++k) {
            const std::string mw = w + ".modes[" + std::to_string(k) + "]";
            reject_unknown(modes[k], mw, {"omega", "g"});
            cfg.modes.push_back({positive(modes[k], "omega", mw, 1.0), number(modes[k], "g", mw, 0.0)});
        }
    }
    cfg.omega_q = number(m, "omega_q", w, cfg.omega_q);
    cfg.tunneling = number(m, "tunneling", w, cfg.tunneling);
    if (m.contains("spectral_density")) {
        const ojson &j = m.at("spectral_density");
        const std::string jw = w + ".spectral_density";
        reject_unknown(j, jw, {"alpha", "s", "omega_c"});
        cfg.spectral.alpha = positive(j, "alpha", jw, cfg.spectral.alpha);
        cfg.spectral.s = positive(j, "s", jw, cfg.spectral.s);
        cfg.spectral.omega_c = positive(j, "omega_c", jw, cfg.spectral.omega_c);
    }
    cfg.k_modes = integer(m, "k_modes", w, cfg.k_modes);
    if (cfg.k_modes < 1) {
        fail(w + ".k_modes", "must be >= 1");
    }
    if (m.contains("omega_max")) {
        cfg.omega_max = positive(m, "omega_max", w, 0.0);
    }
}

void parse_numerics(const ojson &n, NumericsConfig &cfg) {
    const std::string w = "numerics";
    reject_unknown(n, w, {"n_max", "tail", "fd_step", "prob_floor", "degeneracy_tol", "threads"});
    if (n.contains("n_max")) {
        cfg.n_max = integer(n, "n_max", w, 0);
        if (*cfg.n_max < 1) {
            fail(w + ".n_max", "must be >= 1");
        }
    }
    cfg.tail = positive(n, "tail", w, cfg.tail);
    if (cfg.tail >= 1.0) {
        fail(w + ".tail", "must be below 1");
    }
    cfg.fd_step = number(n, "fd_step", w, cfg.fd_step);
    cfg.prob_floor = positive(n, "prob_floor", w, cfg.prob_floor);
    cfg.degeneracy_tol = number(n, "degeneracy_tol", w, cfg.degeneracy_tol);
    if (cfg.degeneracy_tol < 0.0) {
        fail(w + ".degeneracy_tol", "must be non-negative");
    }
    cfg.threads = integer(n, "threads", w, cfg.threads);
    if (cfg.threads < 1) {
        fail(w + ".threads", "must be >= 1");
    }
}

void parse_output(const ojson &o, OutputConfig &cfg) {
    const std::string w = "output";
    reject_unknown(o, w, {"path", "format", "per_outcome"});
    if (o.contains("path")) {
        if (!o.at("path").is_string() || o.at("path").get<std::string>().empty()) {
            fail(w + ".path", "expected a non-empty string");
        }
        cfg.path = o.at("path").get<std::string>();
    }
    if (o.contains("format")) {
        const ojson &f = o.at("format");
        if (f == "csv") {
            cfg.format = OutputFormat::csv;
        } else if (f == "json") {
            cfg.format = OutputFormat::json;
        } else {
            fail(w + ".format", "expected \"csv\" or \"json\"");
        }
    }
    if (o.contains("per_outcome")) {
        if (!o.at("per_outcome").is_boolean()) {
            fail(w + ".per_outcome", "expected a boolean");
        }
        cfg.per_outcome = o.at("per_outcome").get<bool>();
    }
}

bool axis_must_be_positive(std::string_view name) { return name != "delta" && name != "g" && name != "t"; }

} // namespace

std::string_view to_string(Experiment e) {
    for (const auto &[kind, name] : kExperimentNames) {
        if (kind == e) {
            return name;
        }
    }
    return "unknown";
}

Experiment parse_experiment(std::string_view name) {
    for (const auto &[kind, n] : kExperimentNames) {
        if (n == name) {
            return kind;
        }
    }
    throw ConfigError("experiment: unknown experiment '" + std::string(name) + "'");
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

RunConfig parse_config(std::string_view json_text) {
    ojson root;
    try {
        root = ojson::parse(json_text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(root, "config", {"experiment", "model", "sweep", "numerics", "output", "seed", "draws"});
    if (!root.contains("experiment") || !root.at("experiment").is_string()) {
        fail("experiment", "required string field");
    }
    RunConfig cfg;
    cfg.experiment = parse_experiment(root.at("experiment").get<std::string>());
    if (root.contains("model")) {
        parse_model(root.at("model"), cfg.model);
    }
    if (root.contains("numerics")) {
        parse_numerics(root.at("numerics"), cfg.numerics);
    }
    if (root.contains("output")) {
        parse_output(root.at("output"), cfg.output);
    }
    if (cfg.output.path.empty()) {
        cfg.output.path = std::string(to_string(cfg.experiment)) +
                          (cfg.output.format == OutputFormat::csv ? ".csv" : ".json");
    }
    if (root.contains("sweep")) {
        const ojson &s = root.at("sweep");
        if (!s.is_object()) {
            fail("sweep", "expected an object of named axes");
        }
        if (s.size() > 3) {
            fail("sweep", "at most 3 sweep axes are allowed");
        }
        for (const auto &[name, values] : s.items()) {
            bool known = false;
            for (std::string_view a : kAxisNames) {
                known = known || name == a;
            }
            if (!known) {
                fail("sweep." + name, "unknown axis (beta, t, g, delta, s, alpha, omega_c)");
            }
            SweepAxis axis{name, axis_values(values, "sweep." + name)};
            for (double x : axis.values) {
                if (axis_must_be_positive(name) && !(x > 0.0)) {
                    fail("sweep." + name, "values must be positive");
                }
                if (name == "t" && x < 0.0) {
                    fail("sweep.t", "values must be non-negative");
                }
            }
            cfg.sweep.push_back(std::move(axis));
        }
    }
    if (root.contains("seed")) {
        if (!root.at("seed").is_number_unsigned()) {
            fail("seed", "expected a non-negative integer");
        }
        cfg.seed = root.at("seed").get<std::uint64_t>();
    }
    cfg.draws = integer(root, "draws", "config", cfg.draws);
    if (cfg.draws < 1) {
        fail("draws", "must be >= 1");
    }

    const bool needs_modes = cfg.experiment == Experiment::dephasing || cfg.experiment == Experiment::mean_force;
    if (needs_modes && cfg.model.modes.size() > 3) {
        fail("model.modes", "at most 3 explicit bath modes are supported");
    }
    if (cfg.experiment == Experiment::dephasing && cfg.model.modes.empty()) {
        fail("model.modes", "dephasing needs at least one mode");
    }

    const nlohmann::json canonical = nlohmann::json::parse(json_text);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical.dump())));
    cfg.hash = buf;
    return cfg;
}

RunConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::vector<std::vector<double>> sweep_points(const std::vector<SweepAxis> &axes) {
    std::vector<std::vector<double>> points{{}};
    for (const SweepAxis &axis : axes) {
        std::vector<std::vector<double>> next;
        next.reserve(points.size() * axis.values.size());
        for (const auto &p : points) {
            for (double v : axis.values) {
                auto q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        }
        points = std::move(next);
    }
    return points;
}

ModelConfig apply_point(const ModelConfig &base, const std::vector<SweepAxis> &axes,
                        const std::vector<double> &point) {
    ModelConfig m = base;
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const std::string &name = axes[i].name;
        const double v = point.at(i);
        if (name == "beta") {
            m.beta = v;
        } else if (name == "t") {
            m.t = v;
        } else if (name == "g") {
            m.g = v;
            for (BathMode &mode : m.modes) {
                mode.g = v;
            }
        } else if (name == "delta") {
            m.delta = v;
        } else if (name == "s") {
            m.spectral.s = v;
        } else if (name == "alpha") {
            m.spectral.alpha = v;
        } else if (name == "omega_c") {
            m.spectral.omega_c = v;
        }
    }
    return m;
}

std::string config_schema() {
    return R"schema({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "thermoq run configuration",
  "type": "object",
  "required": ["experiment"],
  "additionalProperties": false,
  "properties": {
    "experiment": {"enum": ["heat-exchange", "dephasing", "mean-force", "scaling-he", "scaling-deph", "cross-validate"]},
    "model": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "omega_a": {"type": "number", "exclusiveMinimum": 0, "default": 1.0, "description": "probe oscillator frequency"},
        "omega_0": {"type": "number", "exclusiveMinimum": 0, "default": 1.0, "description": "sample oscillator frequency"},
        "g": {"type": "number", "default": 0.1, "description": "heat-exchange coupling"},
        "delta": {"type": "number", "description": "detuning (omega_a - omega_0)/2; overrides omega_a. scaling-he: fixed probe detuning"},
        "beta": {"type": "number", "exclusiveMinimum": 0, "default": 1.0},
        "t": {"type": "number", "minimum": 0, "description": "interaction time; default t_fraction * first optimal time (heat-exchange), pi (dephasing), 1 (scaling-deph)"},
        "t_fraction": {"type": "number", "exclusiveMinimum": 0, "default": 1.0},
        "modes": {"type": "array", "minItems": 1, "maxItems": 3,
                  "items": {"type": "object", "additionalProperties": false,
                            "properties": {"omega": {"type": "number", "exclusiveMinimum": 0}, "g": {"type": "number"}}},
                  "default": [{"omega": 1.0, "g": 0.1}]},
        "omega_q": {"type": "number", "default": 1.0, "description": "mean-force qubit splitting"},
        "tunneling": {"type": "number", "default": 0.5, "description": "mean-force qubit off-diagonal term"},
        "spectral_density": {"type": "object", "additionalProperties": false,
                             "properties": {"alpha": {"type": "number", "exclusiveMinimum": 0, "default": 0.01},
                                            "s": {"type": "number", "exclusiveMinimum": 0, "default": 1.0},
                                            "omega_c": {"type": "number", "exclusiveMinimum": 0, "default": 10.0}}},
        "k_modes": {"type": "integer", "minimum": 1, "default": 50000},
        "omega_max": {"type": "number", "exclusiveMinimum": 0, "description": "default 10 * omega_c"}
      }
    },
    "sweep": {
      "type": "object",
      "maxProperties": 3,
      "propertyNames": {"enum": ["beta", "t", "g", "delta", "s", "alpha", "omega_c"]},
      "additionalProperties": {
        "oneOf": [
          {"type": "array", "items": {"type": "number"}, "minItems": 1},
          {"type": "object", "properties": {"linspace": {"type": "array", "minItems": 3, "maxItems": 3}}, "required": ["linspace"], "additionalProperties": false},
          {"type": "object", "properties": {"logspace": {"type": "array", "minItems": 3, "maxItems": 3}}, "required": ["logspace"], "additionalProperties": false}
        ]
      }
    },
    "numerics": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "n_max": {"type": "integer", "minimum": 1, "description": "Fock cutoff; default from the truncation tail"},
        "tail": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1, "default": 1e-12},
        "fd_step": {"type": "number", "default": 0, "description": "beta step; <= 0 means 1e-4 beta"},
        "prob_floor": {"type": "number", "exclusiveMinimum": 0, "default": 1e-12},
        "degeneracy_tol": {"type": "number", "minimum": 0, "default": 1e-8},
        "threads": {"type": "integer", "minimum": 1, "default": 1}
      }
    },
    "output": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "path": {"type": "string", "description": "result file; THERMOQ_OUTPUT_DIR replaces its directory"},
        "format": {"enum": ["csv", "json"], "default": "csv"},
        "per_outcome": {"type": "boolean", "default": false}
      }
    },
    "seed": {"type": "integer", "minimum": 0, "default": 1},
    "draws": {"type": "integer", "minimum": 1, "default": 5}
  }
}
)schema";
}

} // namespace thermoq
