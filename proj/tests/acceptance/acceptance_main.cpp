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

// End-to-end acceptance suite, desk scale (N = 5000, 10 seeds). Each
// criterion prints a single PASS/FAIL line; the process exits nonzero when
// any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "dismet/analysis.hpp"
#include "dismet/harness.hpp"
#include "dismet/infotheory.hpp"
#include "dismet/predictors.hpp"
#include "dismet/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dismet;

namespace {

int g_failures = 0;

void verdict(int criterion, bool pass, const std::string& detail) {
    std::printf("CRITERION %d %s: %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

struct CurvePoint {
    double x = 0.0;
    double mean = 0.0;
    bool present = false;
};

// metric -> label -> point
using Curves = std::map<std::string, std::map<std::string, CurvePoint>>;

Curves load_curves(const std::string& report_path) {
    std::ifstream in(report_path);
    if (!in) throw error("missing report " + report_path);
    json report = json::parse(in);
    Curves out;
    for (auto& [metric, body] : report.at("metrics").items()) {
        for (const json& p : body.at("points")) {
            CurvePoint cp;
            cp.x = p.at("x").get<double>();
            if (p.contains("mean") && !p.at("mean").is_null()) {
                cp.mean = p.at("mean").get<double>();
                cp.present = true;
            }
            out[metric][p.at("label").get<std::string>()] = cp;
        }
    }
    return out;
}

double mean_of(const Curves& c, const std::string& metric, const std::string& label) {
    auto mit = c.find(metric);
    if (mit == c.end()) throw error("metric " + metric + " missing from curves");
    auto lit = mit->second.find(label);
    if (lit == mit->second.end() || !lit->second.present) {
        throw error("metric " + metric + " has no value at " + label);
    }
    return lit->second.mean;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

int experiment(const std::string& name, const std::string& out_dir, std::uint64_t seed) {
    CommonOptions opts;
    opts.out_dir = out_dir;
    opts.seed = seed;
    opts.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    opts.formats = {"csv", "json"};
    return run_experiment_command(name, "desk", opts);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------

void criterion_1_and_2(const Curves& noise) {
    // Calibrated metrics: high at alpha = 0, low at alpha = 1 for the
    // explicitness- and gap-flavored ones. Tolerance 0.05 on seed means.
    const std::vector<std::string> calibrated = {
        "z_diff",  "z_min_variance", "dci_rf_modularity", "dci_rf_compactness",
        "dci_rf_explicitness", "sap", "mig_rmig", "mig_sup", "jemmig", "dcimig"};
    const std::vector<std::string> low_at_noise = {
        "z_diff", "z_min_variance", "dci_rf_explicitness", "sap", "mig_rmig",
        "mig_sup", "jemmig", "dcimig"};

    bool pass = true;
    std::ostringstream detail;
    for (const std::string& m : calibrated) {
        double v = mean_of(noise, m, "0.000000");
        bool ok = v >= 0.95 - 0.05;
        if (!ok) pass = false;
        detail << m << "@0=" << fmt(v) << (ok ? " " : "(!) ");
    }
    for (const std::string& m : low_at_noise) {
        double v = mean_of(noise, m, "1.000000");
        bool ok = v <= 0.10 + 0.05;
        if (!ok) pass = false;
        detail << m << "@1=" << fmt(v) << (ok ? " " : "(!) ");
    }
    verdict(1, pass, detail.str());

    // Documented miscalibrations.
    bool pass2 = true;
    std::ostringstream d2;
    double lasso_mod = mean_of(noise, "dci_lasso_modularity", "1.000000");
    double lasso_comp = mean_of(noise, "dci_lasso_compactness", "1.000000");
    double zmax0 = mean_of(noise, "z_max_variance", "0.000000");
    double zmax1 = mean_of(noise, "z_max_variance", "1.000000");
    double irs0 = mean_of(noise, "irs", "0.000000");
    double mod_noise = mean_of(noise, "modularity_score", "1.000000");
    if (!(lasso_mod > 0.3)) pass2 = false;
    if (!(lasso_comp > 0.3)) pass2 = false;
    if (!(zmax0 < 1.0)) pass2 = false;
    if (!(zmax1 > 0.0)) pass2 = false;
    if (!(irs0 < 1.0)) pass2 = false;
    if (!(mod_noise > 0.5)) pass2 = false;
    d2 << "dci_lasso mod/comp on noise=" << fmt(lasso_mod) << "/" << fmt(lasso_comp)
       << " (>0.3), z_max@0=" << fmt(zmax0) << " (<1), z_max@1=" << fmt(zmax1)
       << " (>0), irs@0=" << fmt(irs0) << " (<1), modularity_score on noise=" << fmt(mod_noise)
       << " (>0.5)";
    verdict(2, pass2, d2.str());
}

void criterion_3(const Curves& rotation) {
    bool pass = true;
    std::ostringstream d;
    double zdiff = mean_of(rotation, "z_diff", "0.500000");
    if (std::abs(zdiff - 1.0) > 0.02) pass = false;
    d << "z_diff@0.5=" << fmt(zdiff) << " (1.00+/-0.02)";

    double migv = mean_of(rotation, "mig_rmig", "0.500000");
    double sapv = mean_of(rotation, "sap", "0.500000");
    if (migv > 0.05 || sapv > 0.05) pass = false;
    d << ", mig@0.5=" << fmt(migv) << ", sap@0.5=" << fmt(sapv) << " (<=0.05)";

    const std::vector<std::string> grid = {"0.000000", "0.100000", "0.200000",
                                           "0.300000", "0.400000", "0.500000"};
    for (const char* metric : {"dci_rf_modularity", "dci_rf_compactness"}) {
        d << ", " << metric << "=";
        double prev = 2.0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            double v = mean_of(rotation, metric, grid[k]);
            d << (k ? "," : "") << fmt(v);
            if (k > 0 && !(v < prev + 0.02)) pass = false;
            if (k > 0 && v >= prev) d << "(!)";
            prev = v;
        }
    }
    verdict(3, pass, d.str());
}

void criterion_4(const std::string& dir) {
    // Reference score table: rows trig / redundant2 / redundant4.
    const std::vector<std::string> cols = canonical_score_columns();
    const std::map<std::string, std::vector<double>> expected = {
        {"trig", {1.0, 1.0, 1.0, 0.8, 0.8, 1.0, 0.6, 1.0, 0.7, 1.0, 1.0, 0.6, 0.0, 0.7, 0.4, 1.0, 0.6}},
        {"redundant2", {1.0, 1.0, 1.0, 0.9, 1.0, 1.0, 1.0, 1.0, 0.7, 1.0, 1.0, 0.0, 0.0, 1.0, 0.5, 1.0, 1.0}},
        {"redundant4", {1.0, 1.0, 1.0, 0.9, 1.0, 1.0, 1.0, 1.0, 0.4, 1.0, 1.0, 0.0, 0.0, 1.0, 0.5, 1.0, 1.0}}};

    CsvTable table = read_csv(dir + "/table_mean.csv");
    bool pass = true;
    std::ostringstream d;
    int checked = 0;
    for (const auto& row : table.rows) {
        auto it = expected.find(row[0]);
        if (it == expected.end()) continue;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            double got = std::strtod(row[c + 1].c_str(), nullptr);
            double want = it->second[c];
            ++checked;
            if (std::abs(got - want) > 0.1 + 1e-9) {
                pass = false;
                d << row[0] << "/" << cols[c] << "=" << fmt(got) << " (want " << fmt(want) << ") ";
            }
        }
    }
    if (checked != 51) {
        pass = false;
        d << "checked " << checked << " of 51 cells";
    }
    if (pass) d << "all 51 cells within 0.1 of the reference values";
    verdict(4, pass, d.str());
}

void criterion_5(const Curves& tangent, const std::string& dir) {
    bool pass = true;
    std::ostringstream d;
    double lasso0 = mean_of(tangent, "dci_lasso_explicitness", "0.000000");
    double lasso1 = mean_of(tangent, "dci_lasso_explicitness", "1.000000");
    double sap0 = mean_of(tangent, "sap", "0.000000");
    double sap1 = mean_of(tangent, "sap", "1.000000");
    if (!(lasso0 - lasso1 >= 0.3)) pass = false;
    if (!(sap0 - sap1 >= 0.3)) pass = false;
    d << "dci_lasso_explicitness " << fmt(lasso0) << "->" << fmt(lasso1) << ", sap " << fmt(sap0)
      << "->" << fmt(sap1) << " (drop>=0.3)";

    for (const std::string& label :
         {std::string("0.000000"), std::string("0.200000"), std::string("0.400000"),
          std::string("0.600000"), std::string("0.800000"), std::string("1.000000")}) {
        double rf = mean_of(tangent, "dci_rf_explicitness", label);
        if (rf < 0.9) {
            pass = false;
            d << ", dci_rf_explicitness@" << label << "=" << fmt(rf) << "(!)";
        }
    }

    // Middle-bin concentration at the strongest nonlinearity.
    CsvTable bins = read_csv(dir + "/bin_populations.csv");
    bool found = false;
    for (const auto& row : bins.rows) {
        if (row[0] != "1.000000") continue;
        found = true;
        double b4 = std::strtod(row[5].c_str(), nullptr);
        double b5 = std::strtod(row[6].c_str(), nullptr);
        d << ", center bins@alpha=1 " << fmt(b4 + b5);
        if (!(b4 + b5 > 0.5)) pass = false;
    }
    if (!found) pass = false;
    verdict(5, pass, d.str());
}

void criterion_6(const Curves& hidden) {
    const std::vector<std::string> stay_high = {
        "z_diff", "z_min_variance", "dci_rf_modularity", "dci_rf_compactness",
        "dci_rf_explicitness", "sap", "mig_rmig", "jemmig", "dcimig", "explicitness_score"};
    const std::vector<std::string> degrade = {"mig_sup", "modularity_score", "irs",
                                              "z_max_variance"};
    bool pass = true;
    std::ostringstream d;
    for (const std::string& m : stay_high) {
        double v = mean_of(hidden, m, "4of8");
        if (v < 0.9) {
            pass = false;
            d << m << "=" << fmt(v) << "(!) ";
        }
    }
    d << "robust metrics >= 0.9; ";
    for (const std::string& m : degrade) {
        double v = mean_of(hidden, m, "4of8");
        d << m << "=" << fmt(v) << " ";
        if (!(v < 0.9)) pass = false;
    }
    d << "(each < 0.9)";
    verdict(6, pass, d.str());
}

// Criterion 7: the dual-route oracles, self-contained.

double brute_force_mi(const JointHistogram& h) {
    double n = static_cast<double>(h.total);
    double mi = 0.0;
    for (int r = 0; r < h.rows; ++r) {
        for (int c = 0; c < h.cols; ++c) {
            if (h.at(r, c) == 0) continue;
            double pij = h.at(r, c) / n;
            double pi = 0.0, pj = 0.0;
            for (int cc = 0; cc < h.cols; ++cc) pi += h.at(r, cc);
            for (int rr = 0; rr < h.rows; ++rr) pj += h.at(rr, c);
            mi += pij * std::log(pij * n * n / (pi * pj));
        }
    }
    return mi;
}

double tau_pair_counting(const std::vector<double>& a, const std::vector<double>& b) {
    long long concordant = 0, discordant = 0, ta = 0, tb = 0, tboth = 0;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dx = a[i] - a[j], dy = b[i] - b[j];
            if (dx == 0.0 && dy == 0.0) {
                ++tboth;
            } else if (dx == 0.0) {
                ++ta;
            } else if (dy == 0.0) {
                ++tb;
            } else if (dx * dy > 0.0) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    long long n0 = static_cast<long long>(n) * (static_cast<long long>(n) - 1) / 2;
    return static_cast<double>(concordant - discordant) /
           std::sqrt(static_cast<double>(n0 - ta - tboth) * static_cast<double>(n0 - tb - tboth));
}

void criterion_7() {
    bool pass = true;
    std::ostringstream d;
    Rng rng(20260811);

    // MI vs brute force, and the entropy identity, on random 4x4 tables.
    double worst_mi = 0.0, worst_identity = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        JointHistogram h;
        h.rows = 4;
        h.cols = 4;
        h.counts.resize(16);
        h.total = 0;
        for (long long& c : h.counts) {
            c = static_cast<long long>(rng.next_below(10));
            h.total += c;
        }
        if (h.total == 0) {
            h.counts[0] = 1;
            h.total = 1;
        }
        worst_mi = std::max(worst_mi, std::abs(mutual_information(h) - brute_force_mi(h)));
        double identity = entropy(h.row_marginal()) + entropy(h.col_marginal()) -
                          mutual_information(h) - joint_entropy(h);
        worst_identity = std::max(worst_identity, std::abs(identity));
    }
    if (worst_mi > 1e-10 || worst_identity > 1e-12) pass = false;
    d << "mi_vs_bruteforce<=" << worst_mi << ", entropy_identity<=" << worst_identity;

    // Kendall tau vs O(K^2) counting.
    double worst_tau = 0.0;
    for (int rep = 0; rep < 500; ++rep) {
        std::size_t n = 2 + rng.next_below(49);
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = static_cast<double>(rng.next_below(10));
            b[i] = static_cast<double>(rng.next_below(10));
        }
        bool a_tied = std::all_of(a.begin(), a.end(), [&](double v) { return v == a[0]; });
        bool b_tied = std::all_of(b.begin(), b.end(), [&](double v) { return v == b[0]; });
        if (a_tied || b_tied) continue;
        worst_tau = std::max(worst_tau, std::abs(kendall_tau(a, b) - tau_pair_counting(a, b)));
    }
    if (worst_tau > 1e-10) pass = false;
    d << ", tau_vs_paircount<=" << worst_tau;

    // Single-feature lasso vs the soft-threshold closed form.
    double worst_lasso = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 80;
        Matrix X(n, 1);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            X.at(i, 0) = rng.next_double();
            y[i] = 0.6 * X.at(i, 0) + 0.3 * rng.next_double();
        }
        double lambda = rng.next_double() * 0.4;
        LassoModel m = fit_lasso(X, y, lambda, 1e-12, 3000);
        std::vector<double> xs = X.column(0);
        double mx = mean(xs), my = mean(y);
        double sx = std::sqrt(variance(xs)), sy = std::sqrt(variance(y));
        double rho = 0.0;
        for (std::size_t i = 0; i < n; ++i) rho += ((xs[i] - mx) / sx) * ((y[i] - my) / sy);
        rho /= static_cast<double>(n);
        double closed = rho > lambda ? rho - lambda : (rho < -lambda ? rho + lambda : 0.0);
        worst_lasso = std::max(worst_lasso, std::abs(m.weights_standardized[0] - closed));
    }
    if (worst_lasso > 1e-6) pass = false;
    d << ", lasso_vs_closedform<=" << worst_lasso;

    // ROC AUC vs pairwise counting.
    double worst_auc = 0.0;
    int auc_checked = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        std::size_t n = 4 + rng.next_below(40);
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        bool has_pos = false, has_neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = static_cast<double>(rng.next_below(12)) / 4.0;
            labels[i] = rng.next_below(2) == 0 ? 0 : 1;
            (labels[i] == 1 ? has_pos : has_neg) = true;
        }
        if (!has_pos || !has_neg) continue;
        double pairs = 0.0;
        long long np = 0, nn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (labels[i] == 1) {
                ++np;
            } else {
                ++nn;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (labels[i] != 1) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (labels[j] != 0) continue;
                pairs += scores[i] > scores[j] ? 1.0 : (scores[i] == scores[j] ? 0.5 : 0.0);
            }
        }
        double oracle = pairs / (static_cast<double>(np) * static_cast<double>(nn));
        worst_auc = std::max(worst_auc, std::abs(roc_auc(scores, labels) - oracle));
        ++auc_checked;
    }
    if (worst_auc > 1e-12 || auc_checked < 900) pass = false;
    d << ", auc_vs_paircount<=" << worst_auc;

    verdict(7, pass, d.str());
}

void criterion_8(const std::string& dir_a, const std::string& dir_b) {
    bool pass = true;
    std::ostringstream d;
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(dir_a)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        if (ext != ".csv" && ext != ".json") continue;
        fs::path other = fs::path(dir_b) / entry.path().filename();
        if (!fs::exists(other)) {
            pass = false;
            d << "missing " << entry.path().filename().string() << " ";
            continue;
        }
        ++compared;
        if (slurp(entry.path()) != slurp(other)) {
            pass = false;
            d << entry.path().filename().string() << " differs ";
        }
    }
    if (compared == 0) pass = false;
    if (pass) d << compared << " csv/json outputs byte-identical across reruns";
    verdict(8, pass, d.str());
}

}  // namespace

int main(int argc, char** argv) {
    std::string work = argc > 1 ? argv[1] : (fs::temp_directory_path() / "dismet_acceptance").string();
    fs::remove_all(work);
    fs::create_directories(work);
    std::printf("acceptance working directory: %s\n", work.c_str());

    try {
        // Determinism pair doubles as the calibration run (criteria 1, 2, 8).
        std::printf("running noise experiment (run 1 of 2)...\n");
        std::fflush(stdout);
        if (experiment("noise", work + "/noise_a", 7) > 2) throw error("noise run failed");
        std::printf("running noise experiment (run 2 of 2)...\n");
        std::fflush(stdout);
        if (experiment("noise", work + "/noise_b", 7) > 2) throw error("noise rerun failed");
        Curves noise = load_curves(work + "/noise_a/report.json");
        criterion_1_and_2(noise);

        std::printf("running rotation experiment...\n");
        std::fflush(stdout);
        if (experiment("rotation", work + "/rotation", 7) > 2) throw error("rotation run failed");
        criterion_3(load_curves(work + "/rotation/report.json"));

        std::printf("running angles experiment...\n");
        std::fflush(stdout);
        if (experiment("angles", work + "/angles", 7) > 2) throw error("angles run failed");
        criterion_4(work + "/angles");

        std::printf("running tangent experiment...\n");
        std::fflush(stdout);
        if (experiment("tangent", work + "/tangent", 7) > 2) throw error("tangent run failed");
        criterion_5(load_curves(work + "/tangent/report.json"), work + "/tangent");

        std::printf("running hidden-factor experiment...\n");
        std::fflush(stdout);
        if (experiment("hidden", work + "/hidden", 7) > 2) throw error("hidden run failed");
        criterion_6(load_curves(work + "/hidden/report.json"));

        criterion_7();
        criterion_8(work + "/noise_a", work + "/noise_b");
    } catch (const std::exception& e) {
        std::printf("acceptance suite aborted: %s\n", e.what());
        return 99;
    }

    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
    } else {
        std::printf("acceptance: %d criterion/criteria failed\n", g_failures);
    }
    return g_failures;
}
