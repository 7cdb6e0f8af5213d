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

#include <CLI11.hpp>
#include <string>
#include <vector>

#include "dismet/harness.hpp"

namespace {

std::vector<std::string> split_formats(const std::string& spec) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= spec.size()) {
        std::size_t comma = spec.find(',', start);
        std::string f = spec.substr(start, comma == std::string::npos ? comma : comma - start);
        if (!f.empty()) out.push_back(f);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dismet: supervised disentanglement metrics and controlled representation experiments"};
    app.require_subcommand(1);

    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;
    std::string formats = "csv,json,svg";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "output directory (default: $DISMET_OUT or ./dismet_out)");
        cmd->add_option("--seed", seed, "base random seed")->each([&](const std::string&) {
            seed_set = true;
        });
        cmd->add_option("--jobs", jobs, "max concurrent seed evaluations")->check(CLI::PositiveNumber);
        cmd->add_option("--format", formats, "comma-separated subset of csv,json,svg");
    };

    std::string factors_file, codes_file, config_file;
    CLI::App* score = app.add_subcommand("score", "score a representation from factor/code CSV files");
    score->add_option("--factors", factors_file, "factor realizations CSV")->required();
    score->add_option("--codes", codes_file, "code matrix CSV")->required();
    score->add_option("--config", config_file, "run configuration JSON");
    add_common(score);

    std::string exp_name, profile = "desk";
    CLI::App* experiment = app.add_subcommand("experiment", "run a controlled synthetic experiment");
    experiment->add_option("--name", exp_name, "noise|rotation|angles|tangent|hidden")->required();
    experiment->add_option("--profile", profile, "desk (N=5000, 10 seeds) or paper (N=20000, 100 seeds)");
    add_common(experiment);

    std::string table_file;
    CLI::App* compare = app.add_subcommand("compare", "rank-correlation matrix between metric score tables");
    compare->add_option("--table", table_file, "score table CSV (config label + one column per metric)")
        ->required();
    add_common(compare);

    CLI11_PARSE(app, argc, argv);

    dismet::CommonOptions opts;
    opts.out_dir = out_dir;
    if (seed_set) opts.seed = seed;
    opts.jobs = jobs;
    opts.formats = split_formats(formats);

    if (score->parsed()) return dismet::run_score_command(factors_file, codes_file, config_file, opts);
    if (experiment->parsed()) return dismet::run_experiment_command(exp_name, profile, opts);
    if (compare->parsed()) return dismet::run_compare_command(table_file, opts);
    return 1;
}
