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

#include "dismet/metrics/intervention.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dismet/infotheory.hpp"
#include "dismet/predictors.hpp"
#include "dismet/rng.hpp"

namespace dismet {

namespace {

// Sample indices grouped by (factor, bin).
struct Strata {
    std::vector<std::vector<std::vector<std::size_t>>> groups;  // [factor][bin] -> indices
    BinnedFactors binned;
};

Strata build_strata(const FactorMatrix& factors, const BinningSpec& spec) {
    Strata s;
    s.binned = discretize_factors(factors, spec);
    const std::size_t M = factors.num_factors();
    s.groups.resize(M);
    for (std::size_t i = 0; i < M; ++i) {
        s.groups[i].resize(static_cast<std::size_t>(s.binned.num_bins[i]));
        const std::vector<int>& idx = s.binned.indices[i];
        for (std::size_t n = 0; n < idx.size(); ++n) {
            s.groups[i][static_cast<std::size_t>(idx[n])].push_back(n);
        }
    }
    return s;
}

// k distinct draws from `pool`, via partial Fisher-Yates on a scratch copy.
void sample_without_replacement(const std::vector<std::size_t>& pool, std::size_t k, Rng& rng,
                                std::vector<std::size_t>& out) {
    out = pool;
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + rng.next_below(out.size() - i);
        std::swap(out[i], out[j]);
    }
    out.resize(k);
}

std::vector<double> per_dim_stddev(const CodeMatrix& codes) {
    std::vector<double> sd(codes.num_dims());
    for (std::size_t j = 0; j < codes.num_dims(); ++j) {
        sd[j] = std::sqrt(variance(codes.values.column(j)));
    }
    return sd;
}

// Majority-vote accuracy over (dimension, label) pairs: each dimension
// answers with its most frequent label; ties resolve to the lower label.
double majority_vote_accuracy(const std::vector<std::vector<long long>>& votes, long long total) {
    long long correct = 0;
    for (const auto& row : votes) {
        long long best = 0;
        for (long long c : row) best = std::max(best, c);
        correct += best;
    }
    return static_cast<double>(correct) / static_cast<double>(total);
}

int argextremum_with_ties(const std::vector<double>& values, const std::vector<char>& usable,
                          bool take_max, Rng& rng) {
    double best = take_max ? -1e300 : 1e300;
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (!usable[j]) continue;
        if (take_max ? values[j] > best : values[j] < best) best = values[j];
    }
    int count = 0;
    int chosen = -1;
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (!usable[j] || values[j] != best) continue;
        ++count;
        if (rng.next_below(static_cast<std::size_t>(count)) == 0) chosen = static_cast<int>(j);
    }
    return chosen;
}

}  // namespace

MetricReport z_diff(const FactorMatrix& factors, const CodeMatrix& codes,
                    const InterventionParams& params) {
    validate_pair(factors, codes);
    const std::size_t M = factors.num_factors();
    const std::size_t d = codes.num_dims();
    const std::size_t N = factors.num_samples();
    Strata strata = build_strata(factors, params.factor_bins);

    // Every realized bin must be able to form pairs.
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t b = 0; b < strata.groups[i].size(); ++b) {
            if (strata.groups[i][b].size() == 1) {
                throw insufficient_data_error("z-diff: factor '" + factors.factor_names[i] + "' bin " +
                                              std::to_string(b) + " holds a single sample; cannot form pairs");
            }
        }
    }

    Rng rng = Rng(params.seed).split(11);
    const int points = params.num_train_points > 0 ? params.num_train_points : params.num_batches;

    Matrix train(static_cast<std::size_t>(points), d);
    std::vector<int> labels(static_cast<std::size_t>(points));
    std::vector<double> acc(d);
    for (int t = 0; t < points; ++t) {
        std::size_t i = rng.next_below(M);
        // Frequency-weighted bin draw: take the bin of a random sample.
        std::size_t anchor = rng.next_below(N);
        const auto& pool = strata.groups[i][static_cast<std::size_t>(strata.binned.indices[i][anchor])];
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int p = 0; p < params.pairs_per_batch; ++p) {
            std::size_t pa = rng.next_below(pool.size());
            std::size_t pb = rng.next_below(pool.size() - 1);
            if (pb >= pa) ++pb;  // distinct positions within the stratum
            std::size_t ia = pool[pa], ib = pool[pb];
            for (std::size_t k = 0; k < d; ++k) {
                acc[k] += std::abs(codes.values.at(ia, k) - codes.values.at(ib, k));
            }
        }
        for (std::size_t k = 0; k < d; ++k) {
            train.at(static_cast<std::size_t>(t), k) = acc[k] / params.pairs_per_batch;
        }
        labels[static_cast<std::size_t>(t)] = static_cast<int>(i);
    }

    LogisticParams lp;
    lp.epochs = 400;
    lp.lr = 1.0;
    lp.l2 = 1e-5;
    lp.seed = mix_seed(params.seed, 12);
    LogisticModel clf = fit_softmax(train, labels, lp);
    double raw = accuracy(clf, train, labels);

    MetricReport report;
    report.metric_name = "z_diff";
    report.property = Property::Holistic;
    report.seed = params.seed;
    report.overall = rescale_by_chance(raw, 1.0 / static_cast<double>(M));
    report.notes.push_back("raw accuracy " + std::to_string(raw));
    return report;
}

namespace {

MetricReport variance_vote_metric(const FactorMatrix& factors, const CodeMatrix& codes,
                                  const InterventionParams& params, bool take_max,
                                  const char* name) {
    validate_pair(factors, codes);
    const std::size_t M = factors.num_factors();
    const std::size_t d = codes.num_dims();
    const std::size_t N = factors.num_samples();
    Strata strata = build_strata(factors, params.factor_bins);
    std::vector<double> sd = per_dim_stddev(codes);

    MetricReport report;
    report.metric_name = name;
    report.property = Property::Holistic;
    report.seed = params.seed;

    std::vector<char> usable(d, 1);
    for (std::size_t j = 0; j < d; ++j) {
        if (sd[j] <= 0.0) {
            usable[j] = 0;
            report.notes.push_back("excluded zero-variance code dimension " + codes.dim_names[j]);
        }
    }
    if (std::none_of(usable.begin(), usable.end(), [](char u) { return u != 0; })) {
        throw insufficient_data_error(std::string(name) + ": all code dimensions have zero variance");
    }

    // For the all-but-one variant, group samples by the joint bin signature of
    // every factor except the free one.
    std::vector<std::vector<int>> group_of;          // [free factor][sample] -> group id
    std::vector<std::vector<std::vector<std::size_t>>> groups;  // [free factor][group] -> samples
    if (take_max) {
        group_of.assign(M, std::vector<int>(N, 0));
        groups.resize(M);
        std::vector<std::size_t> order(N);
        for (std::size_t i = 0; i < M; ++i) {
            std::iota(order.begin(), order.end(), 0);
            auto key_less = [&](std::size_t a, std::size_t b) {
                for (std::size_t f = 0; f < M; ++f) {
                    if (f == i) continue;
                    int da = strata.binned.indices[f][a];
                    int db = strata.binned.indices[f][b];
                    if (da != db) return da < db;
                }
                return false;
            };
            std::sort(order.begin(), order.end(), key_less);
            int gid = -1;
            for (std::size_t k = 0; k < N; ++k) {
                if (k == 0 || key_less(order[k - 1], order[k])) {
                    ++gid;
                    groups[i].emplace_back();
                }
                group_of[i][order[k]] = gid;
                groups[i][static_cast<std::size_t>(gid)].push_back(order[k]);
            }
        }
    }

    Rng rng = Rng(params.seed).split(take_max ? 23 : 22);
    std::vector<std::vector<long long>> votes(d, std::vector<long long>(M, 0));
    std::vector<std::size_t> subset;
    std::vector<double> var(d, 0.0);
    long long singleton_subsets = 0;

    for (int t = 0; t < params.num_batches; ++t) {
        std::size_t i = rng.next_below(M);
        if (take_max) {
            std::size_t anchor = rng.next_below(N);
            const auto& pool = groups[i][static_cast<std::size_t>(group_of[i][anchor])];
            if (pool.size() <= static_cast<std::size_t>(params.samples_per_subset)) {
                subset = pool;
            } else {
                sample_without_replacement(pool, static_cast<std::size_t>(params.samples_per_subset),
                                           rng, subset);
            }
            if (subset.size() < 2) ++singleton_subsets;
        } else {
            std::size_t anchor = rng.next_below(N);
            const auto& pool =
                strata.groups[i][static_cast<std::size_t>(strata.binned.indices[i][anchor])];
            if (pool.size() < static_cast<std::size_t>(params.samples_per_subset)) {
                throw insufficient_data_error(std::string(name) + ": stratum for factor '" +
                                              factors.factor_names[i] + "' holds " +
                                              std::to_string(pool.size()) + " samples, need " +
                                              std::to_string(params.samples_per_subset));
            }
            sample_without_replacement(pool, static_cast<std::size_t>(params.samples_per_subset), rng,
                                       subset);
        }

        for (std::size_t j = 0; j < d; ++j) {
            if (!usable[j]) continue;
            double s = 0.0, sq = 0.0;
            for (std::size_t idx : subset) {
                double v = codes.values.at(idx, j) / sd[j];
                s += v;
                sq += v * v;
            }
            double n = static_cast<double>(subset.size());
            var[j] = sq / n - (s / n) * (s / n);
        }
        int pick = argextremum_with_ties(var, usable, take_max, rng);
        ++votes[static_cast<std::size_t>(pick)][i];
    }

    if (take_max && singleton_subsets * 2 > params.num_batches) {
        report.notes.push_back("variance estimated from single-sample subsets in " +
                               std::to_string(singleton_subsets) + " of " +
                               std::to_string(params.num_batches) +
                               " subsets; scores are biased at this binning granularity");
    }

    double raw = majority_vote_accuracy(votes, params.num_batches);
    report.overall = rescale_by_chance(raw, 1.0 / static_cast<double>(M));
    report.notes.push_back("raw accuracy " + std::to_string(raw));
    return report;
}

}  // namespace

MetricReport z_min_variance(const FactorMatrix& factors, const CodeMatrix& codes,
                            const InterventionParams& params) {
    return variance_vote_metric(factors, codes, params, false, "z_min_variance");
}

MetricReport z_max_variance(const FactorMatrix& factors, const CodeMatrix& codes,
                            const InterventionParams& params) {
    return variance_vote_metric(factors, codes, params, true, "z_max_variance");
}

MetricReport irs(const FactorMatrix& factors, const CodeMatrix& codes,
                 const InterventionParams& params) {
    validate_pair(factors, codes);
    const std::size_t M = factors.num_factors();
    const std::size_t d = codes.num_dims();
    const std::size_t N = factors.num_samples();
    Strata strata = build_strata(factors, params.factor_bins);

    // Attribute each code dimension to the factor it shares the most
    // information with.
    MiBundle bundle = compute_mi_bundle(factors, codes, params.factor_bins, params.code_bins);
    std::vector<std::size_t> attributed(d, 0);
    for (std::size_t j = 0; j < d; ++j) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < M; ++i) {
            if (bundle.mi.at(i, j) > bundle.mi.at(best, j)) best = i;
        }
        attributed[j] = best;
    }

    MetricReport report;
    report.metric_name = "irs";
    report.property = Property::Modularity;
    report.seed = params.seed;
    report.per_code.assign(d, 0.0);

    std::vector<double> weight(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<double> col = codes.values.column(j);
        double mu = mean(col);
        double max_dev = 0.0;
        for (double v : col) max_dev = std::max(max_dev, std::abs(v - mu));
        weight[j] = max_dev;
        if (max_dev <= 0.0) {
            report.notes.push_back("code dimension " + codes.dim_names[j] +
                                   " is constant; scored 0 with zero weight");
            continue;
        }

        const std::size_t i = attributed[j];
        // Frequency-weighted mean over realizations of the worst deviation
        // from the realization's mean code value.
        double weighted = 0.0;
        for (const auto& pool : strata.groups[i]) {
            if (pool.empty()) continue;
            double s = 0.0;
            for (std::size_t idx : pool) s += col[idx];
            double mu_a = s / static_cast<double>(pool.size());
            double worst = 0.0;
            for (std::size_t idx : pool) worst = std::max(worst, std::abs(col[idx] - mu_a));
            weighted += worst * static_cast<double>(pool.size()) / static_cast<double>(N);
        }
        double score = 1.0 - weighted / max_dev;
        report.per_code[j] = std::clamp(score, 0.0, 1.0);
    }

    double wsum = std::accumulate(weight.begin(), weight.end(), 0.0);
    if (wsum <= 0.0) throw insufficient_data_error("irs: all code dimensions are constant");
    double overall = 0.0;
    for (std::size_t j = 0; j < d; ++j) overall += weight[j] * report.per_code[j];
    report.overall = overall / wsum;
    report.notes.push_back("overall is the deviation-weighted mean of per-code scores");
    return report;
}

}  // namespace dismet
