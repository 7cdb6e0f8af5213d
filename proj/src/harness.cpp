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

#include "dismet/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "dismet/infotheory.hpp"
#include "dismet/metrics/information.hpp"
#include "dismet/metrics/intervention.hpp"
#include "dismet/metrics/predictor.hpp"
#include "dismet/rng.hpp"
#include "dismet/svg.hpp"

namespace dismet {

const char* kOutputDirEnvVar = "DISMET_OUT";

namespace {

using nlohmann::json;

const std::vector<std::string> kMetricIds = {
    "z_diff",       "z_min_variance", "z_max_variance", "irs",
    "dci_lasso",    "dci_rf",         "explicitness_score", "sap",
    "mig_rmig",     "mig_sup",        "jemmig",         "modularity_score", "dcimig"};

const std::vector<std::string> kScoreColumns = {
    "z_diff",
    "z_min_variance",
    "z_max_variance",
    "irs",
    "dci_lasso_modularity",
    "dci_lasso_compactness",
    "dci_lasso_explicitness",
    "dci_rf_modularity",
    "dci_rf_compactness",
    "dci_rf_explicitness",
    "explicitness_score",
    "sap",
    "mig_rmig",
    "mig_sup",
    "jemmig",
    "modularity_score",
    "dcimig"};

std::string resolve_metric_alias(const std::string& name) {
    if (name == "mig") return "mig_rmig";
    if (name == "z_min") return "z_min_variance";
    if (name == "z_max") return "z_max_variance";
    return name;
}

template <typename T>
T json_get(const json& j, const std::string& key, T fallback) {
    if (j.is_object() && j.contains(key)) return j.at(key).get<T>();
    return fallback;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    unsigned workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace

const std::vector<std::string>& canonical_metric_ids() { return kMetricIds; }
const std::vector<std::string>& canonical_score_columns() { return kScoreColumns; }

RunConfig parse_run_config(const json& j) {
    RunConfig cfg;
    if (j.contains("metrics")) {
        cfg.metrics.clear();
        for (const auto& m : j.at("metrics")) {
            cfg.metrics.push_back(resolve_metric_alias(m.get<std::string>()));
        }
    }
    cfg.bins = json_get<int>(j, "bins", cfg.bins);
    cfg.binning = json_get<std::string>(j, "binning", cfg.binning);
    if (cfg.binning != "empirical" && cfg.binning != "fixed01") {
        throw invalid_parameter_error("binning must be 'empirical' or 'fixed01'");
    }
    if (j.contains("seeds")) {
        cfg.seeds.clear();
        for (const auto& s : j.at("seeds")) cfg.seeds.push_back(s.get<std::uint64_t>());
        if (cfg.seeds.empty()) throw invalid_parameter_error("seed list must not be empty");
    } else if (j.contains("num_seeds")) {
        int n = j.at("num_seeds").get<int>();
        if (n < 1) throw invalid_parameter_error("num_seeds must be positive");
        cfg.seeds.clear();
        for (int k = 0; k < n; ++k) cfg.seeds.push_back(static_cast<std::uint64_t>(k));
    }
    cfg.jobs = json_get<int>(j, "jobs", cfg.jobs);
    if (j.contains("formats")) {
        cfg.formats.clear();
        for (const auto& f : j.at("formats")) cfg.formats.push_back(f.get<std::string>());
    }
    if (j.contains("params")) cfg.metric_params = j.at("params");

    // Every requested metric must resolve.
    for (const std::string& m : cfg.metrics) {
        if (m == "all") continue;
        if (std::find(kMetricIds.begin(), kMetricIds.end(), m) == kMetricIds.end()) {
            throw invalid_parameter_error("unknown metric '" + m + "'");
        }
    }
    return cfg;
}

namespace {

std::vector<std::string> expand_metric_selection(const std::vector<std::string>& selection) {
    for (const std::string& m : selection) {
        if (m == "all") return kMetricIds;
    }
    return selection;
}

InterventionParams intervention_params(const RunConfig& cfg, const std::string& id,
                                       const BinningSpec& fbins, const BinningSpec& zbins,
                                       std::uint64_t seed) {
    InterventionParams p;
    p.factor_bins = fbins;
    p.code_bins = zbins;
    p.seed = seed;
    const json& overrides = cfg.metric_params.is_object() && cfg.metric_params.contains(id)
                                ? cfg.metric_params.at(id)
                                : json::object();
    p.num_batches = json_get<int>(overrides, "num_batches", p.num_batches);
    p.pairs_per_batch = json_get<int>(overrides, "pairs_per_batch", p.pairs_per_batch);
    p.samples_per_subset = json_get<int>(overrides, "samples_per_subset", p.samples_per_subset);
    p.num_train_points = json_get<int>(overrides, "num_train_points", p.num_train_points);
    if (p.num_batches < 1 || p.pairs_per_batch < 1 || p.samples_per_subset < 1) {
        throw invalid_parameter_error(id + ": all subset counts must be positive");
    }
    return p;
}

}  // namespace

MetricRunResult run_metrics(const FactorMatrix& factors, const CodeMatrix& codes,
                            const RunConfig& config, const BinningSpec& factor_bins,
                            const BinningSpec& code_bins, std::uint64_t seed) {
    MetricRunResult result;
    std::vector<std::string> wanted = expand_metric_selection(config.metrics);

    // Shared MI estimates: every information-based score in a run sees the
    // same discretization pass.
    bool needs_bundle = false;
    for (const std::string& id : wanted) {
        if (id == "mig_rmig" || id == "mig_sup" || id == "jemmig" || id == "modularity_score" ||
            id == "dcimig") {
            needs_bundle = true;
        }
    }
    MiBundle bundle;
    bool bundle_ok = false;
    if (needs_bundle) {
        try {
            bundle = compute_mi_bundle(factors, codes, factor_bins, code_bins);
            bundle_ok = true;
        } catch (const std::exception& e) {
            result.failures.push_back({"mi_matrix", e.what()});
        }
    }

    for (std::size_t ord = 0; ord < kMetricIds.size(); ++ord) {
        const std::string& id = kMetricIds[ord];
        if (std::find(wanted.begin(), wanted.end(), id) == wanted.end()) continue;
        std::uint64_t metric_seed = mix_seed(seed, 5000 + ord);
        try {
            if (id == "z_diff") {
                result.reports.push_back(
                    z_diff(factors, codes, intervention_params(config, id, factor_bins, code_bins, metric_seed)));
            } else if (id == "z_min_variance") {
                result.reports.push_back(z_min_variance(
                    factors, codes, intervention_params(config, id, factor_bins, code_bins, metric_seed)));
            } else if (id == "z_max_variance") {
                result.reports.push_back(z_max_variance(
                    factors, codes, intervention_params(config, id, factor_bins, code_bins, metric_seed)));
            } else if (id == "irs") {
                result.reports.push_back(
                    irs(factors, codes, intervention_params(config, id, factor_bins, code_bins, metric_seed)));
            } else if (id == "dci_lasso" || id == "dci_rf") {
                DciParams p;
                p.backend = id == "dci_lasso" ? DciBackend::Lasso : DciBackend::RandomForest;
                p.seed = metric_seed;
                const json& ov = config.metric_params.is_object() && config.metric_params.contains(id)
                                     ? config.metric_params.at(id)
                                     : json::object();
                p.cv_folds = json_get<int>(ov, "cv_folds", p.cv_folds);
                p.holdout_fraction = json_get<double>(ov, "holdout_fraction", p.holdout_fraction);
                p.forest.num_trees = json_get<int>(ov, "num_trees", p.forest.num_trees);
                p.forest.min_leaf = json_get<int>(ov, "min_leaf", p.forest.min_leaf);
                if (ov.contains("lambda_grid")) {
                    p.lambda_grid = ov.at("lambda_grid").get<std::vector<double>>();
                }
                if (ov.contains("depth_grid")) {
                    p.depth_grid = ov.at("depth_grid").get<std::vector<int>>();
                }
                DciReport rep = dci(factors, codes, p);
                for (MetricReport& r : dci_reports(rep)) result.reports.push_back(std::move(r));
            } else if (id == "explicitness_score") {
                ExplicitnessParams p;
                p.factor_bins = factor_bins;
                p.seed = metric_seed;
                const json& ov = config.metric_params.is_object() && config.metric_params.contains(id)
                                     ? config.metric_params.at(id)
                                     : json::object();
                p.logistic.epochs = json_get<int>(ov, "epochs", p.logistic.epochs);
                p.logistic.lr = json_get<double>(ov, "lr", p.logistic.lr);
                p.logistic.l2 = json_get<double>(ov, "l2", p.logistic.l2);
                MetricReport r = explicitness_score(factors, codes, p);
                r.seed = metric_seed;
                result.reports.push_back(std::move(r));
            } else if (id == "sap") {
                SapParams p;
                p.seed = metric_seed;
                const json& ov = config.metric_params.is_object() && config.metric_params.contains(id)
                                     ? config.metric_params.at(id)
                                     : json::object();
                p.dead_code_threshold = json_get<double>(ov, "dead_code_threshold", p.dead_code_threshold);
                MetricReport r = sap(factors, codes, p);
                result.reports.push_back(std::move(r));
            } else {
                if (!bundle_ok) throw insufficient_data_error("shared MI matrix unavailable");
                MetricReport r;
                if (id == "mig_rmig") {
                    r = mig(bundle.mi, bundle.factor_entropies);
                } else if (id == "mig_sup") {
                    r = mig_sup(bundle.mi, bundle.factor_entropies);
                } else if (id == "jemmig") {
                    r = jemmig(bundle.mi, bundle.joint_entropies, bundle.factor_entropies,
                               bundle.code_bins);
                } else if (id == "modularity_score") {
                    r = modularity_score(bundle.mi);
                } else if (id == "dcimig") {
                    r = dcimig(bundle.mi, bundle.factor_entropies);
                } else {
                    throw invalid_parameter_error("unknown metric '" + id + "'");
                }
                r.seed = metric_seed;
                result.reports.push_back(std::move(r));
            }
        } catch (const std::exception& e) {
            result.failures.push_back({id, e.what()});
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// File I/O
// ---------------------------------------------------------------------------

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open '" + path + "'");
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (table.header.empty()) {
            table.header = std::move(fields);
        } else {
            if (fields.size() != table.header.size()) {
                throw error(path + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(table.header.size()) + " fields, found " +
                            std::to_string(fields.size()));
            }
            table.rows.push_back(std::move(fields));
        }
    }
    if (table.header.empty()) throw error(path + ": file is empty");
    return table;
}

Matrix csv_to_matrix(const CsvTable& table, std::size_t first_value_column) {
    if (table.header.size() <= first_value_column) {
        throw error("csv table has no value columns");
    }
    Matrix m(table.rows.size(), table.header.size() - first_value_column);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t c = first_value_column; c < table.header.size(); ++c) {
            const std::string& cell = table.rows[r][c];
            char* end = nullptr;
            double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0') {
                throw error("line " + std::to_string(r + 2) + ": cannot parse number '" + cell + "'");
            }
            m.at(r, c - first_value_column) = v;
        }
    }
    return m;
}

FactorMatrix load_factors_csv(const std::string& path) {
    CsvTable table = read_csv(path);
    Matrix values = csv_to_matrix(table, 0);
    std::vector<FactorKind> kinds(values.cols, FactorKind::Continuous);

    std::string sidecar = path + ".kinds.json";
    if (std::filesystem::exists(sidecar)) {
        std::ifstream in(sidecar);
        json j = json::parse(in);
        if (j.contains("kinds")) {
            const json& arr = j.at("kinds");
            if (arr.size() != values.cols) {
                throw error(sidecar + ": kinds array length does not match factor columns");
            }
            for (std::size_t i = 0; i < values.cols; ++i) {
                std::string k = arr.at(i).get<std::string>();
                if (k == "categorical") {
                    kinds[i] = FactorKind::Categorical;
                } else if (k == "continuous") {
                    kinds[i] = FactorKind::Continuous;
                } else {
                    throw error(sidecar + ": unknown factor kind '" + k + "'");
                }
            }
        }
    }
    return make_factor_matrix(std::move(values), table.header, std::move(kinds));
}

CodeMatrix load_codes_csv(const std::string& path) {
    CsvTable table = read_csv(path);
    Matrix values = csv_to_matrix(table, 0);
    return make_code_matrix(std::move(values), table.header);
}

ScoreTable load_score_table(const std::string& path) {
    CsvTable table = read_csv(path);
    if (table.header.size() < 3) {
        throw error(path + ": a score table needs a label column and at least 2 metric columns");
    }
    ScoreTable st;
    st.metric_names.assign(table.header.begin() + 1, table.header.end());
    st.scores = csv_to_matrix(table, 1);
    for (const auto& row : table.rows) st.config_labels.push_back(row[0]);
    return st;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write '" + path + "'");
    out << content;
}

// ---------------------------------------------------------------------------
// Shared report serialization
// ---------------------------------------------------------------------------

namespace {

bool wants_format(const std::vector<std::string>& formats, const std::string& f) {
    return std::find(formats.begin(), formats.end(), f) != formats.end();
}

json report_to_json(const MetricReport& r) {
    json j;
    j["metric"] = r.metric_name;
    j["property"] = property_name(r.property);
    j["overall"] = r.overall;
    j["seed"] = r.seed;
    if (!r.per_factor.empty()) j["per_factor"] = r.per_factor;
    if (!r.per_code.empty()) j["per_code"] = r.per_code;
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

struct MetricFamily {
    std::string name;
    std::vector<std::string> columns;
};

const std::vector<MetricFamily> kFamilies = {
    {"intervention", {"z_diff", "z_min_variance", "z_max_variance", "irs"}},
    {"predictor",
     {"dci_lasso_modularity", "dci_lasso_compactness", "dci_lasso_explicitness", "dci_rf_modularity",
      "dci_rf_compactness", "dci_rf_explicitness", "explicitness_score", "sap"}},
    {"information", {"mig_rmig", "mig_sup", "jemmig", "modularity_score", "dcimig"}}};


json parameter_defaults() {
    json j;
    j["bins"] = 10;
    j["intervention"] = {{"num_batches", 5000}, {"pairs_per_batch", 64}, {"samples_per_subset", 64}};
    j["dci_lasso"] = {{"lambda_grid", "log grid {0.25, 0.5, 1, 1.5} x 1/sqrt(n_train) on standardized data"},
                      {"cv_folds", 3},
                      {"holdout_fraction", 0.3}};
    j["dci_rf"] = {{"num_trees", 10},   {"cv_trees", 3},
                   {"depth_grid", json::array({2, 4, 8, 0})},
                   {"min_leaf", 5},     {"features_per_split", "all"},
                   {"cv_folds", 3},     {"holdout_fraction", 0.3}};
    j["explicitness_score"] = {{"epochs", 120}, {"lr", 1.4}, {"l2", 1e-4}, {"balanced", true}};
    j["z_diff_classifier"] = {{"epochs", 400}, {"lr", 1.0}, {"l2", 1e-5}};
    j["sap"] = {{"dead_code_threshold", 1e-6}, {"tree_depth_grid", json::array({2, 4, 8})}};
    return j;
}

std::string default_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    const char* env = std::getenv(kOutputDirEnvVar);
    if (env != nullptr && env[0] != '\0') return env;
    return "dismet_out";
}

}  // namespace

// ---------------------------------------------------------------------------
// score command
// ---------------------------------------------------------------------------

int run_score_command(const std::string& factors_file, const std::string& codes_file,
                      const std::string& config_file, const CommonOptions& opts) {
    auto started = std::chrono::steady_clock::now();
    FactorMatrix factors;
    CodeMatrix codes;
    RunConfig cfg;
    try {
        factors = load_factors_csv(factors_file);
        codes = load_codes_csv(codes_file);
        if (!config_file.empty()) {
            std::ifstream in(config_file);
            if (!in) throw error("cannot open '" + config_file + "'");
            cfg = parse_run_config(json::parse(in));
        }
        if (opts.seed) {
            cfg.seeds.clear();
            cfg.seeds.push_back(*opts.seed);
        }
        if (opts.jobs > 1) cfg.jobs = opts.jobs;
        if (!opts.formats.empty()) cfg.formats = opts.formats;
        validate_pair(factors, codes);
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    }

    BinningSpec fbins = cfg.binning == "fixed01" ? BinningSpec::fixed(cfg.bins, 0.0, 1.0)
                                                 : BinningSpec::empirical(cfg.bins);
    BinningSpec zbins = fbins;

    std::vector<MetricRunResult> per_seed(cfg.seeds.size());
    parallel_for(cfg.seeds.size(), cfg.jobs, [&](std::size_t s) {
        per_seed[s] = run_metrics(factors, codes, cfg, fbins, zbins, cfg.seeds[s]);
    });

    // Group reports by metric name across seeds, keeping canonical order.
    std::vector<std::string> columns;
    for (const std::string& col : kScoreColumns) columns.push_back(col);
    std::map<std::string, std::vector<MetricReport>> grouped;
    for (const MetricRunResult& r : per_seed) {
        for (const MetricReport& rep : r.reports) grouped[rep.metric_name].push_back(rep);
    }

    std::string out_dir = default_out_dir(opts.out_dir);
    std::filesystem::create_directories(out_dir);

    std::ostringstream csv;
    csv << "metric,property,mean,std\n";
    json jm = json::array();
    std::vector<std::string> bar_labels;
    std::vector<double> bar_values;
    for (const std::string& col : columns) {
        auto it = grouped.find(col);
        if (it == grouped.end()) continue;
        SeedAggregate agg = aggregate_seeds(it->second);
        csv << col << ',' << property_name(agg.property) << ',' << format_double(agg.mean) << ','
            << format_double(agg.stddev) << '\n';
        json entry;
        entry["metric"] = col;
        entry["property"] = property_name(agg.property);
        entry["mean"] = agg.mean;
        entry["std"] = agg.stddev;
        entry["per_seed"] = agg.values;
        if (!agg.per_factor_mean.empty()) entry["per_factor_mean"] = agg.per_factor_mean;
        if (!agg.per_code_mean.empty()) entry["per_code_mean"] = agg.per_code_mean;
        json details = json::array();
        for (const MetricReport& rep : it->second) details.push_back(report_to_json(rep));
        entry["per_seed_reports"] = details;
        jm.push_back(entry);
        bar_labels.push_back(col);
        bar_values.push_back(std::max(0.0, agg.mean));
    }

    json failures = json::array();
    long long failure_count = 0;
    for (std::size_t s = 0; s < per_seed.size(); ++s) {
        for (const MetricFailure& f : per_seed[s].failures) {
            json jf;
            jf["seed"] = cfg.seeds[s];
            jf["metric"] = f.metric;
            jf["message"] = f.message;
            failures.push_back(jf);
            ++failure_count;
        }
    }

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    json report;
    report["command"] = "score";
    report["factors_file"] = factors_file;
    report["codes_file"] = codes_file;
    report["num_samples"] = factors.num_samples();
    report["num_factors"] = factors.num_factors();
    report["num_codes"] = codes.num_dims();
    report["seeds"] = cfg.seeds;
    report["bins"] = cfg.bins;
    report["binning"] = cfg.binning;
    report["metric_params"] = cfg.metric_params.is_null() ? json::object() : cfg.metric_params;
    report["parameter_defaults"] = parameter_defaults();
    report["metrics"] = jm;
    report["failures"] = failures;
    report["wall_time_seconds"] = wall;

    try {
        if (wants_format(cfg.formats, "csv")) write_text_file(out_dir + "/scores.csv", csv.str());
        if (wants_format(cfg.formats, "json")) {
            write_text_file(out_dir + "/report.json", report.dump(2) + "\n");
        }
        if (wants_format(cfg.formats, "svg")) {
            write_text_file(out_dir + "/scores.svg",
                            svg_bar_chart("metric scores (mean over seeds)", bar_labels, bar_values));
        }
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return 1;
    }

    if (failure_count > 0) {
        std::cerr << failure_count << " metric evaluation(s) failed; partial results written\n";
        return 2;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// experiment command
// ---------------------------------------------------------------------------

namespace {

struct GridPoint {
    std::string label;
    double x = 0.0;
    ExperimentSpec spec;
};

struct ExperimentPlan {
    std::string name;
    std::string x_label;
    std::vector<GridPoint> grid;
    GeneratorKind kind = GeneratorKind::NoiseMix;
};

ExperimentPlan build_plan(const std::string& name, std::size_t num_samples) {
    ExperimentPlan plan;
    plan.name = name;
    auto alpha_point = [&](GeneratorKind kind, double alpha) {
        GridPoint p;
        p.spec.generator = kind;
        p.spec.alpha = alpha;
        p.spec.num_factors = 8;
        p.spec.num_samples = num_samples;
        p.x = alpha;
        p.label = format_double(alpha);
        return p;
    };
    if (name == "noise") {
        plan.kind = GeneratorKind::NoiseMix;
        plan.x_label = "noise level";
        for (int k = 0; k <= 5; ++k) plan.grid.push_back(alpha_point(plan.kind, k * 0.2));
    } else if (name == "rotation") {
        plan.kind = GeneratorKind::Rotation;
        plan.x_label = "mixing level";
        for (int k = 0; k <= 5; ++k) plan.grid.push_back(alpha_point(plan.kind, k * 0.1));
    } else if (name == "tangent") {
        plan.kind = GeneratorKind::Tangent;
        plan.x_label = "nonlinearity level";
        for (int k = 0; k <= 5; ++k) plan.grid.push_back(alpha_point(plan.kind, k * 0.2));
    } else if (name == "angles") {
        plan.kind = GeneratorKind::AngleTrig;
        plan.x_label = "dataset";
        GridPoint trig;
        trig.spec.generator = GeneratorKind::AngleTrig;
        trig.spec.num_samples = num_samples;
        trig.label = "trig";
        trig.x = 0.0;
        plan.grid.push_back(trig);
        GridPoint red2;
        red2.spec.generator = GeneratorKind::AngleRedundant;
        red2.spec.redundancy = 2;
        red2.spec.num_samples = num_samples;
        red2.label = "redundant2";
        red2.x = 1.0;
        plan.grid.push_back(red2);
        GridPoint red4;
        red4.spec.generator = GeneratorKind::AngleRedundant;
        red4.spec.redundancy = 4;
        red4.spec.num_samples = num_samples;
        red4.label = "redundant4";
        red4.x = 2.0;
        plan.grid.push_back(red4);
    } else if (name == "hidden") {
        plan.kind = GeneratorKind::HiddenFactors;
        plan.x_label = "measured factors";
        for (int k = 1; k <= 8; ++k) {
            GridPoint p;
            p.spec.generator = GeneratorKind::HiddenFactors;
            p.spec.fraction = static_cast<double>(k) / 8.0;
            p.spec.num_factors = 8;
            p.spec.num_samples = num_samples;
            p.x = static_cast<double>(k);
            p.label = std::to_string(k) + "of8";
            plan.grid.push_back(p);
        }
    } else {
        throw invalid_parameter_error("unknown experiment '" + name +
                                      "' (expected noise|rotation|angles|tangent|hidden)");
    }
    return plan;
}

}  // namespace

int run_experiment_command(const std::string& name, const std::string& profile,
                           const CommonOptions& opts) {
    std::size_t num_samples;
    std::size_t num_seeds;
    if (profile == "desk") {
        num_samples = 5000;
        num_seeds = 10;
    } else if (profile == "paper") {
        num_samples = 20000;
        num_seeds = 100;
    } else {
        std::cerr << "input error: unknown profile '" << profile << "' (expected desk|paper)\n";
        return 1;
    }

    ExperimentPlan plan;
    try {
        plan = build_plan(name, num_samples);
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    }

    std::uint64_t base_seed = opts.seed.value_or(0);
    std::vector<std::uint64_t> seeds(num_seeds);
    for (std::size_t s = 0; s < num_seeds; ++s) seeds[s] = mix_seed(base_seed, s);

    RunConfig cfg;
    cfg.metrics = {"all"};
    if (!opts.formats.empty()) cfg.formats = opts.formats;

    // binning is resolved per grid point inside the task loop

    const std::size_t num_tasks = plan.grid.size() * num_seeds;
    std::vector<MetricRunResult> results(num_tasks);
    parallel_for(num_tasks, opts.jobs, [&](std::size_t t) {
        std::size_t g = t / num_seeds;
        std::size_t s = t % num_seeds;
        Generated data = generate(plan.grid[g].spec, seeds[s]);
        BinningChoice local = recommended_binning(plan.grid[g].spec.generator, cfg.bins);
        results[t] = run_metrics(data.factors, data.codes, cfg, local.factor_bins, local.code_bins,
                                 mix_seed(seeds[s], 1000 + g));
    });

    // Aggregate per (grid point, metric column).
    std::string out_dir = default_out_dir(opts.out_dir);
    std::filesystem::create_directories(out_dir);

    json jmetrics = json::object();
    long long failure_count = 0;
    json jfailures = json::array();
    std::map<std::string, std::vector<SvgSeries>> family_series;

    std::ostringstream table_mean, table_std;
    table_mean << "dataset";
    table_std << "dataset";
    for (const std::string& col : kScoreColumns) {
        table_mean << ',' << col;
        table_std << ',' << col;
    }
    table_mean << '\n';
    table_std << '\n';
    std::vector<std::ostringstream> table_rows_mean(plan.grid.size());
    std::vector<std::ostringstream> table_rows_std(plan.grid.size());
    for (std::size_t g = 0; g < plan.grid.size(); ++g) {
        table_rows_mean[g] << plan.grid[g].label;
        table_rows_std[g] << plan.grid[g].label;
    }

    for (const std::string& col : kScoreColumns) {
        std::ostringstream curve;
        curve << "label,x,mean,std,num_seeds\n";
        json jpoints = json::array();
        SvgSeries series;
        series.label = col;
        for (std::size_t g = 0; g < plan.grid.size(); ++g) {
            std::vector<MetricReport> reps;
            for (std::size_t s = 0; s < num_seeds; ++s) {
                const MetricRunResult& r = results[g * num_seeds + s];
                for (const MetricReport& rep : r.reports) {
                    if (rep.metric_name == col) reps.push_back(rep);
                }
            }
            if (reps.empty()) {
                // Gap: the metric failed on every seed at this grid point.
                curve << plan.grid[g].label << ',' << format_double(plan.grid[g].x) << ",,,0\n";
                table_rows_mean[g] << ',';
                table_rows_std[g] << ',';
                json jp;
                jp["label"] = plan.grid[g].label;
                jp["x"] = plan.grid[g].x;
                jp["mean"] = nullptr;
                jp["std"] = nullptr;
                jp["num_seeds"] = 0;
                jpoints.push_back(jp);
                continue;
            }
            SeedAggregate agg = aggregate_seeds(reps);
            curve << plan.grid[g].label << ',' << format_double(plan.grid[g].x) << ','
                  << format_double(agg.mean) << ',' << format_double(agg.stddev) << ','
                  << reps.size() << '\n';
            table_rows_mean[g] << ',' << format_double(agg.mean);
            table_rows_std[g] << ',' << format_double(agg.stddev);
            series.x.push_back(plan.grid[g].x);
            series.y.push_back(agg.mean);
            json jp;
            jp["label"] = plan.grid[g].label;
            jp["x"] = plan.grid[g].x;
            jp["mean"] = agg.mean;
            jp["std"] = agg.stddev;
            jp["num_seeds"] = reps.size();
            jp["per_seed"] = agg.values;
            jpoints.push_back(jp);
        }
        jmetrics[col]["points"] = jpoints;
        if (wants_format(cfg.formats, "csv")) {
            write_text_file(out_dir + "/curve_" + col + ".csv", curve.str());
        }
        for (const MetricFamily& fam : kFamilies) {
            if (std::find(fam.columns.begin(), fam.columns.end(), col) != fam.columns.end()) {
                family_series[fam.name].push_back(series);
            }
        }
    }

    for (std::size_t g = 0; g < plan.grid.size(); ++g) {
        for (std::size_t s = 0; s < num_seeds; ++s) {
            for (const MetricFailure& f : results[g * num_seeds + s].failures) {
                json jf;
                jf["grid"] = plan.grid[g].label;
                jf["seed"] = seeds[s];
                jf["metric"] = f.metric;
                jf["message"] = f.message;
                jfailures.push_back(jf);
                ++failure_count;
            }
        }
    }

    try {
        if (wants_format(cfg.formats, "csv")) {
            for (std::size_t g = 0; g < plan.grid.size(); ++g) {
                table_mean << table_rows_mean[g].str() << '\n';
                table_std << table_rows_std[g].str() << '\n';
            }
            write_text_file(out_dir + "/table_mean.csv", table_mean.str());
            write_text_file(out_dir + "/table_std.csv", table_std.str());
        }

        // Bin-population profile of the first code dimension, one row per grid
        // point; shows how the map reshapes the discretization.
        if (wants_format(cfg.formats, "csv") && (name == "tangent" || name == "noise")) {
            std::ostringstream bins_csv;
            bins_csv << "label";
            for (int b = 0; b < cfg.bins; ++b) bins_csv << ",bin" << b;
            bins_csv << '\n';
            for (std::size_t g = 0; g < plan.grid.size(); ++g) {
                Generated data = generate(plan.grid[g].spec, seeds[0]);
                BinningChoice local = recommended_binning(plan.grid[g].spec.generator, cfg.bins);
                std::vector<int> idx = discretize_column(data.codes.values.column(0), local.code_bins);
                std::vector<long long> pops = bin_populations(idx, cfg.bins);
                bins_csv << plan.grid[g].label;
                for (long long c : pops) {
                    bins_csv << ',' << format_double(static_cast<double>(c) /
                                                     static_cast<double>(idx.size()));
                }
                bins_csv << '\n';
            }
            write_text_file(out_dir + "/bin_populations.csv", bins_csv.str());
        }

        if (wants_format(cfg.formats, "svg")) {
            for (const MetricFamily& fam : kFamilies) {
                auto it = family_series.find(fam.name);
                if (it == family_series.end()) continue;
                write_text_file(out_dir + "/family_" + fam.name + ".svg",
                                svg_line_chart(name + " experiment: " + fam.name + " metrics",
                                               plan.x_label, "score", it->second));
            }
        }

        if (wants_format(cfg.formats, "json")) {
            json report;
            report["command"] = "experiment";
            report["name"] = name;
            report["profile"] = profile;
            report["base_seed"] = base_seed;
            report["seeds"] = seeds;
            report["num_samples"] = num_samples;
            report["bins"] = cfg.bins;
            report["parameter_defaults"] = parameter_defaults();
            json jgrid = json::array();
            for (const GridPoint& p : plan.grid) {
                json jp;
                jp["label"] = p.label;
                jp["x"] = p.x;
                jgrid.push_back(jp);
            }
            report["grid"] = jgrid;
            report["metrics"] = jmetrics;
            report["failures"] = jfailures;
            write_text_file(out_dir + "/report.json", report.dump(2) + "\n");
        }
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return 1;
    }

    if (failure_count > 0) {
        std::cerr << failure_count << " metric evaluation(s) failed; partial results written\n";
        return 2;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// compare command
// ---------------------------------------------------------------------------

int run_compare_command(const std::string& table_file, const CommonOptions& opts) {
    ScoreTable table;
    Matrix corr;
    try {
        table = load_score_table(table_file);
        corr = correlation_matrix(table);
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    }

    std::string out_dir = default_out_dir(opts.out_dir);
    std::filesystem::create_directories(out_dir);
    const std::size_t K = table.metric_names.size();

    Matrix rounded(K, K, 0.0);
    for (std::size_t i = 0; i < K; ++i) {
        for (std::size_t j = 0; j < K; ++j) {
            rounded.at(i, j) = static_cast<double>(std::lround(corr.at(i, j)));
        }
    }

    try {
        if (wants_format(opts.formats, "csv")) {
            std::ostringstream csv;
            csv << "metric";
            for (const std::string& m : table.metric_names) csv << ',' << m;
            csv << '\n';
            for (std::size_t i = 0; i < K; ++i) {
                csv << table.metric_names[i];
                for (std::size_t j = 0; j < K; ++j) {
                    csv << ',' << static_cast<long long>(rounded.at(i, j));
                }
                csv << '\n';
            }
            write_text_file(out_dir + "/kendall_matrix.csv", csv.str());
        }
        if (wants_format(opts.formats, "svg")) {
            write_text_file(out_dir + "/kendall_heatmap.svg",
                            svg_heatmap("rank correlation between metrics (x100)",
                                        table.metric_names, rounded, -100.0, 100.0));
        }
        if (wants_format(opts.formats, "json")) {
            json report;
            report["command"] = "compare";
            report["table_file"] = table_file;
            report["metrics"] = table.metric_names;
            report["num_configurations"] = table.scores.rows;
            json jm = json::array();
            for (std::size_t i = 0; i < K; ++i) {
                json row = json::array();
                for (std::size_t j = 0; j < K; ++j) row.push_back(static_cast<int>(rounded.at(i, j)));
                jm.push_back(row);
            }
            report["kendall_tau_x100"] = jm;
            write_text_file(out_dir + "/report.json", report.dump(2) + "\n");
        }
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace dismet
