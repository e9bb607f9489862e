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

#include "thermoq/output.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

#ifndef THERMOQ_VERSION
#define THERMOQ_VERSION "0.0.0"
#endif

namespace thermoq {

namespace {

using ojson = nlohmann::ordered_json;

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string csv_escape(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
}

ojson json_number(double x) {
    if (std::isfinite(x)) {
        return x;
    }
    return format_number(x);
}

ojson json_cell(const Cell &c) {
    if (const double *d = std::get_if<double>(&c)) {
        return json_number(*d);
    }
    if (const long long *i = std::get_if<long long>(&c)) {
        return *i;
    }
    return std::get<std::string>(c);
}

} // namespace

std::string tool_version() { return THERMOQ_VERSION; }

std::filesystem::path resolve_output_path(const std::filesystem::path &configured) {
    const char *dir = std::getenv(kOutputDirEnv);
    if (dir == nullptr || *dir == '\0') {
        return configured;
    }
    return std::filesystem::path(dir) / configured.filename();
}

std::filesystem::path report_path(const std::filesystem::path &results) {
    std::filesystem::path p = results;
    p.replace_filename(results.stem().string() + ".report.json");
    return p;
}

std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.11e", x);
    return buf;
}

void write_csv(std::ostream &os, const Table &table, const std::string &config_hash) {
    os << "# thermoq " << tool_version() << " config=" << config_hash << '\n';
    os << "# generated " << utc_timestamp() << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        os << (i ? "," : "") << table.columns[i];
    }
    os << '\n';
    for (const auto &row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "");
            if (const double *d = std::get_if<double>(&row[i])) {
                os << format_number(*d);
            } else if (const long long *n = std::get_if<long long>(&row[i])) {
                os << *n;
            } else {
                os << csv_escape(std::get<std::string>(row[i]));
            }
        }
        os << '\n';
    }
}

void write_json(std::ostream &os, const Table &table, const std::string &config_hash,
                Experiment experiment) {
    ojson doc;
    doc["tool"] = "thermoq";
    doc["version"] = tool_version();
    doc["config"] = config_hash;
    doc["generated"] = utc_timestamp();
    doc["experiment"] = std::string(to_string(experiment));
    doc["columns"] = table.columns;
    ojson rows = ojson::array();
    for (const auto &row : table.rows) {
        ojson r = ojson::object();
        for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
            r[table.columns[i]] = json_cell(row[i]);
        }
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    os << doc.dump(2) << '\n';
}

std::string report_json(const RunResult &result, const std::string &config_hash) {
    ojson doc;
    doc["tool"] = "thermoq";
    doc["version"] = tool_version();
    doc["config"] = config_hash;
    doc["experiment"] = std::string(to_string(result.experiment));
    doc["passed"] = result.passed();
    doc["rows"] = result.table.rows.size();
    doc["failed_points"] = result.failed_points;
    ojson checks = ojson::array();
    for (const CheckResult &c : result.checks.results()) {
        checks.push_back({{"name", c.name},
                          {"passed", c.passed()},
                          {"max_deviation", json_number(c.max_deviation)},
                          {"tolerance", c.tolerance},
                          {"evaluations", c.evaluations},
                          {"worst_point", c.worst_point}});
    }
    doc["checks"] = std::move(checks);
    ojson slopes = ojson::array();
    for (const SlopeReport &s : result.slopes) {
        slopes.push_back({{"name", s.name},
                          {"passed", s.passed()},
                          {"slope", json_number(s.fit.slope)},
                          {"expected", s.expected},
                          {"tolerance", s.tolerance},
                          {"intercept", json_number(s.fit.intercept)},
                          {"r_squared", json_number(s.fit.r_squared)}});
    }
    doc["slopes"] = std::move(slopes);
    if (!result.summary.empty()) {
        ojson summary = ojson::object();
        for (const auto &[k, v] : result.summary) {
            summary[k] = json_number(v);
        }
        doc["summary"] = std::move(summary);
    }
    return doc.dump(2) + "\n";
}

std::string report_text(const RunResult &result) {
    std::ostringstream os;
    char buf[256];
    for (const CheckResult &c : result.checks.results()) {
        std::snprintf(buf, sizeof buf, "%s %-26s max=%.3e tol=%.1e n=%zu", c.passed() ? "PASS" : "FAIL",
                      c.name.c_str(), c.max_deviation, c.tolerance, c.evaluations);
        os << buf;
        if (!c.passed()) {
            os << "  at " << c.worst_point;
        }
        os << '\n';
    }
    for (const SlopeReport &s : result.slopes) {
        std::snprintf(buf, sizeof buf, "%s %-26s slope=%.4f expected=%.4f tol=%.2f r2=%.6f",
                      s.passed() ? "PASS" : "FAIL", s.name.c_str(), s.fit.slope, s.expected,
                      s.tolerance, s.fit.r_squared);
        os << buf << '\n';
    }
    if (result.failed_points > 0) {
        os << "note " << result.failed_points << " point(s) raised errors; see the error column\n";
    }
    return os.str();
}

WrittenFiles write_outputs(const RunResult &result, const OutputConfig &output,
                           const std::string &config_hash) {
    WrittenFiles files;
    files.results = resolve_output_path(output.path);
    files.report = report_path(files.results);
    if (files.results.has_parent_path()) {
        std::filesystem::create_directories(files.results.parent_path());
    }
    {
        std::ofstream os(files.results);
        if (!os) {
            throw std::runtime_error("cannot write " + files.results.string());
        }
        if (output.format == OutputFormat::csv) {
            write_csv(os, result.table, config_hash);
        } else {
            write_json(os, result.table, config_hash, result.experiment);
        }
    }
    std::ofstream rep(files.report);
    if (!rep) {
        throw std::runtime_error("cannot write " + files.report.string());
    }
    rep << report_json(result, config_hash);
    return files;
}

} // namespace thermoq
