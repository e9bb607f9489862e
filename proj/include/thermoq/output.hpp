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
 * Result tables (CSV or JSON) and the verification report.
 *
 * CSV layout: a "# thermoq <version> config=<hash>" line, a
 * "# generated <UTC time>" line, the header row, then one row per record.
 * Numbers use '.' and 12 significant digits.
 */

#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "thermoq/experiments.hpp"

namespace thermoq {

/// Environment variable that replaces the directory of every output path.
inline constexpr const char *kOutputDirEnv = "THERMOQ_OUTPUT_DIR";

[[nodiscard]] std::string tool_version();

/// The configured path, moved into $THERMOQ_OUTPUT_DIR when that is set.
[[nodiscard]] std::filesystem::path resolve_output_path(const std::filesystem::path &configured);

/// Report path next to a result file: <stem>.report.json.
[[nodiscard]] std::filesystem::path report_path(const std::filesystem::path &results);

/// %.11e, or nan/inf/-inf.
[[nodiscard]] std::string format_number(double x);

void write_csv(std::ostream &os, const Table &table, const std::string &config_hash);
void write_json(std::ostream &os, const Table &table, const std::string &config_hash,
                Experiment experiment);

/// Machine-readable verification report: per-check maxima, slopes, pass flag.
[[nodiscard]] std::string report_json(const RunResult &result, const std::string &config_hash);

/// One line per check and slope, "PASS name ..." or "FAIL name ...".
[[nodiscard]] std::string report_text(const RunResult &result);

struct WrittenFiles {
    std::filesystem::path results;
    std::filesystem::path report;
};

/// Writes the table and the report, creating directories as needed.
WrittenFiles write_outputs(const RunResult &result, const OutputConfig &output,
                           const std::string &config_hash);

} // namespace thermoq
