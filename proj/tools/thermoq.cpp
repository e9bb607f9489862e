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

// thermoq command-line driver.
//
//   thermoq run <config.json>
//   thermoq cross-validate --seed N --draws K
//   thermoq schema
//
// Exit status: 0 ok, 1 verification failure, 2 usage or configuration error.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "thermoq/config.hpp"
#include "thermoq/cross_validate.hpp"
#include "thermoq/experiments.hpp"
#include "thermoq/output.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kVerificationFailure = 1;
constexpr int kUsage = 2;

int finish(const thermoq::RunResult &result, const thermoq::OutputConfig &output,
           const std::string &hash, bool quiet) {
    const thermoq::WrittenFiles files = thermoq::write_outputs(result, output, hash);
    if (!quiet) {
        std::cout << thermoq::report_text(result);
        std::cout << "results: " << files.results.string() << '\n';
        std::cout << "report:  " << files.report.string() << '\n';
    }
    std::cout << (result.passed() ? "verification passed" : "verification FAILED") << '\n';
    return result.passed() ? kOk : kVerificationFailure;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"thermoq: probe thermometry, heat statistics and precision bounds"};
    app.set_version_flag("--version", thermoq::tool_version());
    app.require_subcommand(1);

    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "Only print the final verdict");

    std::string config_path;
    CLI::App *run = app.add_subcommand("run", "Run the sweep described by a JSON config");
    run->add_option("config", config_path, "Configuration file")->required();

    std::uint64_t seed = 1;
    int draws = 5;
    std::string mutation = "none";
    std::string cv_output = "cross-validate.csv";
    CLI::App *cv = app.add_subcommand("cross-validate", "Randomized oracle-equivalence checks");
    cv->add_option("--seed", seed, "Random seed")->capture_default_str();
    cv->add_option("--draws", draws, "Instances per model family")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cv->add_option("--mutate", mutation, "Inject a deliberate fault into the heat decomposition")
        ->check(CLI::IsMember({"none", "flip-correlation-sign", "drop-normalization"}))
        ->capture_default_str();
    cv->add_option("--output", cv_output, "Result file (CSV)")->capture_default_str();

    CLI::App *schema = app.add_subcommand("schema", "Print the configuration JSON schema");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (schema->parsed()) {
            std::cout << thermoq::config_schema();
            return kOk;
        }
        if (run->parsed()) {
            thermoq::RunConfig config;
            try {
                config = thermoq::load_config(config_path);
            } catch (const thermoq::ConfigError &e) {
                std::cerr << "thermoq: invalid configuration: " << e.what() << '\n';
                return kUsage;
            }
            const thermoq::RunResult result = thermoq::run_experiment(config);
            return finish(result, config.output, config.hash, quiet);
        }
        if (cv->parsed()) {
            const std::map<std::string, thermoq::HeatMutation> mutations{
                {"none", thermoq::HeatMutation::none},
                {"flip-correlation-sign", thermoq::HeatMutation::flip_correlation_sign},
                {"drop-normalization", thermoq::HeatMutation::drop_probability_normalization}};
            thermoq::CrossValidateOptions opts;
            opts.seed = seed;
            opts.draws = draws;
            opts.mutation = mutations.at(mutation);
            const thermoq::RunResult result = thermoq::cross_validate(opts);
            thermoq::OutputConfig output;
            output.path = cv_output;
            char hash[64];
            std::snprintf(hash, sizeof hash, "seed%llu-draws%d-%s",
                          static_cast<unsigned long long>(seed), draws, mutation.c_str());
            return finish(result, output, hash, quiet);
        }
    } catch (const std::exception &e) {
        std::cerr << "thermoq: " << e.what() << '\n';
        return kVerificationFailure;
    }
    return kUsage;
}
