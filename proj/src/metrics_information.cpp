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

#include "dismet/metrics/information.hpp"

#include <algorithm>
#include <cmath>

namespace dismet {

namespace {

struct TopTwo {
    std::size_t best_index = 0;
    double best = 0.0;
    double second = 0.0;
};

TopTwo row_top_two(const ImportanceMatrix& mi, std::size_t i) {
    TopTwo t;
    t.best = -1.0;
    t.second = -1.0;
    for (std::size_t j = 0; j < mi.num_codes(); ++j) {
        double v = mi.at(i, j);
        if (v > t.best) {
            t.second = t.best;
            t.best = v;
            t.best_index = j;
        } else if (v > t.second) {
            t.second = v;
        }
    }
    if (t.second < 0.0) t.second = 0.0;
    return t;
}

TopTwo col_top_two(const ImportanceMatrix& mi, std::size_t j) {
    TopTwo t;
    t.best = -1.0;
    t.second = -1.0;
    for (std::size_t i = 0; i < mi.num_factors(); ++i) {
        double v = mi.at(i, j);
        if (v > t.best) {
            t.second = t.best;
            t.best = v;
            t.best_index = i;
        } else if (v > t.second) {
            t.second = v;
        }
    }
    if (t.second < 0.0) t.second = 0.0;
    return t;
}

}  // namespace

MetricReport mig(const ImportanceMatrix& mi, std::span<const double> factor_entropies) {
    const std::size_t M = mi.num_factors();
    if (factor_entropies.size() != M) throw dimension_mismatch_error("mig: entropy vector length mismatch");

    MetricReport report;
    report.metric_name = "mig_rmig";
    report.property = Property::Compactness;
    report.per_factor.assign(M, 0.0);
    for (std::size_t i = 0; i < M; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < mi.num_codes(); ++j) total += mi.at(i, j);
        if (total <= 0.0) {
            report.notes.push_back("factor " + std::to_string(i) +
                                   " shares no information with any code; per-factor score 0");
            continue;
        }
        TopTwo t = row_top_two(mi, i);
        report.per_factor[i] = (t.best - t.second) / total;
    }
    report.overall = mean(report.per_factor);
    return report;
}

MetricReport jemmig(const ImportanceMatrix& mi, const Matrix& joint_entropies,
                    std::span<const double> factor_entropies, int num_code_bins) {
    const std::size_t M = mi.num_factors();
    if (joint_entropies.rows != M || joint_entropies.cols != mi.num_codes()) {
        throw dimension_mismatch_error("jemmig: joint entropy matrix shape mismatch");
    }
    if (factor_entropies.size() != M) throw dimension_mismatch_error("jemmig: entropy vector length mismatch");
    if (num_code_bins < 2) throw invalid_parameter_error("jemmig: code bin count must be at least 2");

    MetricReport report;
    report.metric_name = "jemmig";
    report.property = Property::Holistic;
    report.per_factor.assign(M, 0.0);
    const double log_bz = std::log(static_cast<double>(num_code_bins));
    for (std::size_t i = 0; i < M; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < mi.num_codes(); ++j) total += mi.at(i, j);
        if (total <= 0.0 && factor_entropies[i] <= 0.0) {
            report.notes.push_back("factor " + std::to_string(i) +
                                   " is constant after binning; per-factor score 0");
            continue;
        }
        TopTwo t = row_top_two(mi, i);
        double raw = joint_entropies.at(i, t.best_index) - t.best + t.second;
        double bound = factor_entropies[i] + log_bz;
        double score = 1.0 - raw / bound;
        report.per_factor[i] = std::clamp(score, 0.0, 1.0);
    }
    report.overall = mean(report.per_factor);
    return report;
}

MetricReport mig_sup(const ImportanceMatrix& mi, std::span<const double> factor_entropies) {
    const std::size_t M = mi.num_factors();
    const std::size_t d = mi.num_codes();
    if (factor_entropies.size() != M) throw dimension_mismatch_error("mig-sup: entropy vector length mismatch");

    MetricReport report;
    report.metric_name = "mig_sup";
    report.property = Property::Modularity;
    report.per_code.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        // Entropy-normalized column; each entry uses its own factor's entropy.
        double best = -1.0, second = -1.0;
        for (std::size_t i = 0; i < M; ++i) {
            double h = factor_entropies[i];
            double v = h > 0.0 ? mi.at(i, j) / h : 0.0;
            if (v > best) {
                second = best;
                best = v;
            } else if (v > second) {
                second = v;
            }
        }
        if (second < 0.0) second = 0.0;
        if (best <= 0.0) {
            report.notes.push_back("code dimension " + std::to_string(j) +
                                   " informs on no factor (dead code); per-code score 0");
            continue;
        }
        report.per_code[j] = best - second;
    }
    report.overall = mean(report.per_code);
    return report;
}

MetricReport modularity_score(const ImportanceMatrix& mi) {
    const std::size_t M = mi.num_factors();
    const std::size_t d = mi.num_codes();

    MetricReport report;
    report.metric_name = "modularity_score";
    report.property = Property::Modularity;
    report.per_code.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        TopTwo t = col_top_two(mi, j);
        if (t.best <= 0.0) {
            report.notes.push_back("code dimension " + std::to_string(j) +
                                   " has zero maximal MI; per-code score 0");
            continue;
        }
        if (M == 1) {
            report.per_code[j] = 1.0;
            continue;
        }
        double off = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            if (i == t.best_index) continue;
            off += mi.at(i, j) * mi.at(i, j);
        }
        report.per_code[j] = 1.0 - off / (t.best * t.best * static_cast<double>(M - 1));
    }
    report.overall = mean(report.per_code);
    return report;
}

MetricReport dcimig(const ImportanceMatrix& mi, std::span<const double> factor_entropies) {
    const std::size_t M = mi.num_factors();
    const std::size_t d = mi.num_codes();
    if (factor_entropies.size() != M) throw dimension_mismatch_error("dcimig: entropy vector length mismatch");

    double total_entropy = 0.0;
    for (double h : factor_entropies) total_entropy += h;
    if (total_entropy <= 0.0) {
        throw insufficient_data_error("dcimig: total factor entropy is zero");
    }

    MetricReport report;
    report.metric_name = "dcimig";
    report.property = Property::Holistic;
    report.per_factor.assign(M, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        TopTwo t = col_top_two(mi, j);
        double gap = t.best - t.second;
        if (gap > report.per_factor[t.best_index]) report.per_factor[t.best_index] = gap;
    }
    double kept = 0.0;
    for (double s : report.per_factor) kept += s;
    report.overall = kept / total_entropy;
    report.notes.push_back("overall is the summed per-factor gap mass over the total factor entropy");
    return report;
}

}  // namespace dismet
