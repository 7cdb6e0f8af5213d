/*
 * Copyright 2026 The dismet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dismet/analysis.hpp"
#include "dismet/core.hpp"
#include "dismet/discretize.hpp"
#include "dismet/synthgen.hpp"

namespace dismet {

// Canonical metric identifiers, in report order. dci_lasso / dci_rf expand to
// their three component scores.
const std::vector<std::string>& canonical_metric_ids();
const std::vector<std::string>& canonical_score_columns();  // 17 expanded columns

struct MetricFailure {
    std::string metric;
    std::string message;
};

struct MetricRunResult {
    std::vector<MetricReport> reports;
    std::vector<MetricFailure> failures;
};

// Per-run configuration shared by the CLI commands.
struct RunConfig {
    std::vector<std::string> metrics = {"all"};
    nlohmann::json metric_params;  // object: metric id -> parameter overrides
    int bins = 10;
    std::string binning = "empirical";  // "empirical" | "fixed01"
    std::vector<std::uint64_t> seeds = {0};
    int jobs = 1;
    std::vector<std::string> formats = {"csv", "json", "svg"};
};

RunConfig parse_run_config(const nlohmann::json& j);

// Runs the configured metrics on one factor/code pair for one seed. Individual
// metric errors are captured, never fatal.
MetricRunResult run_metrics(const FactorMatrix& factors, const CodeMatrix& codes,
                            const RunConfig& config, const BinningSpec& factor_bins,
                            const BinningSpec& code_bins, std::uint64_t seed);

// --- file I/O ---

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);
Matrix csv_to_matrix(const CsvTable& table, std::size_t first_value_column);

FactorMatrix load_factors_csv(const std::string& path);  // honors <path>.kinds.json sidecar
CodeMatrix load_codes_csv(const std::string& path);
ScoreTable load_score_table(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string format_double(double v);  // fixed 6 decimals

// --- CLI commands; return process exit codes (0 ok, 1 input error, 2 metric
// failure with partial results written) ---

struct CommonOptions {
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    std::vector<std::string> formats = {"csv", "json", "svg"};
};

int run_score_command(const std::string& factors_file, const std::string& codes_file,
                      const std::string& config_file, const CommonOptions& opts);

int run_experiment_command(const std::string& name, const std::string& profile,
                           const CommonOptions& opts);

int run_compare_command(const std::string& table_file, const CommonOptions& opts);

// Default output directory: --out flag, else this environment variable, else
// "./dismet_out".
extern const char* kOutputDirEnvVar;

}  // namespace dismet
