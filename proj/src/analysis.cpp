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

#include "dismet/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace dismet {

namespace {

// Counts pairwise ties: sum over groups of g*(g-1)/2.
long long tie_pairs(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    long long pairs = 0;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        long long g = static_cast<long long>(j - i);
        pairs += g * (g - 1) / 2;
        i = j;
    }
    return pairs;
}

// Merge-sort inversion count on b (strict inversions).
long long count_inversions(std::vector<double>& b, std::vector<double>& scratch,
                           std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    std::size_t mid = lo + (hi - lo) / 2;
    long long inv = count_inversions(b, scratch, lo, mid) + count_inversions(b, scratch, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (b[j] < b[i]) {
            inv += static_cast<long long>(mid - i);
            scratch[k++] = b[j++];
        } else {
            scratch[k++] = b[i++];
        }
    }
    while (i < mid) scratch[k++] = b[i++];
    while (j < hi) scratch[k++] = b[j++];
    std::copy(scratch.begin() + static_cast<long>(lo), scratch.begin() + static_cast<long>(hi),
              b.begin() + static_cast<long>(lo));
    return inv;
}

}  // namespace

double kendall_tau(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw dimension_mismatch_error("rank vectors differ in length");
    const std::size_t n = a.size();
    if (n < 2) throw insufficient_data_error("rank correlation needs at least 2 elements");

    // Knight's O(n log n) scheme: sort by (a, b), then discordant pairs are
    // strict b-inversions among pairs with distinct a.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (a[x] != a[y]) return a[x] < a[y];
        return b[x] < b[y];
    });

    std::vector<double> bs(n);
    for (std::size_t i = 0; i < n; ++i) bs[i] = b[order[i]];

    // Joint ties (same a and same b) must not count as discordant; with b
    // sorted ascending inside each a-group they never invert, so the plain
    // inversion count over the grouped sequence is exactly Q.
    std::vector<double> scratch(n);
    long long discordant = count_inversions(bs, scratch, 0, n);

    long long n0 = static_cast<long long>(n) * (static_cast<long long>(n) - 1) / 2;
    long long n1 = tie_pairs(std::vector<double>(a.begin(), a.end()));
    long long n2 = tie_pairs(std::vector<double>(b.begin(), b.end()));

    if (n1 == n0 || n2 == n0) {
        throw insufficient_data_error("kendall tau undefined: an input is entirely tied");
    }

    // Joint-tie pairs for the numerator.
    long long n3 = 0;
    {
        std::vector<std::pair<double, double>> ab(n);
        for (std::size_t i = 0; i < n; ++i) ab[i] = {a[i], b[i]};
        std::sort(ab.begin(), ab.end());
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j < n && ab[j] == ab[i]) ++j;
            long long g = static_cast<long long>(j - i);
            n3 += g * (g - 1) / 2;
            i = j;
        }
    }

    long long concordant = n0 - n1 - n2 + n3 - discordant;
    double denom = std::sqrt(static_cast<double>(n0 - n1)) * std::sqrt(static_cast<double>(n0 - n2));
    return static_cast<double>(concordant - discordant) / denom;
}

Matrix correlation_matrix(const ScoreTable& table) {
    const std::size_t K = table.metric_names.size();
    if (table.scores.cols != K) throw dimension_mismatch_error("score table columns do not match metric names");
    if (table.scores.rows < 2) throw insufficient_data_error("correlation matrix needs at least 2 configurations");

    Matrix out(K, K, 0.0);
    for (std::size_t i = 0; i < K; ++i) out.at(i, i) = 100.0;
    for (std::size_t i = 0; i < K; ++i) {
        std::vector<double> ci = table.scores.column(i);
        for (std::size_t j = i + 1; j < K; ++j) {
            std::vector<double> cj = table.scores.column(j);
            double tau = kendall_tau(ci, cj) * 100.0;
            out.at(i, j) = tau;
            out.at(j, i) = tau;
        }
    }
    return out;
}

SeedAggregate aggregate_seeds(std::span<const MetricReport> reports) {
    if (reports.empty()) throw insufficient_data_error("no reports to aggregate");
    SeedAggregate agg;
    agg.metric_name = reports.front().metric_name;
    agg.property = reports.front().property;
    for (const MetricReport& r : reports) {
        if (r.metric_name != agg.metric_name) {
            throw invalid_parameter_error("cannot aggregate mixed metrics: '" + agg.metric_name +
                                          "' vs '" + r.metric_name + "'");
        }
        agg.values.push_back(r.overall);
    }
    agg.mean = mean(agg.values);
    agg.stddev = sample_stddev(agg.values);

    auto average_vectors = [&](auto getter, std::vector<double>& out) {
        std::size_t len = getter(reports.front()).size();
        if (len == 0) return;
        for (const MetricReport& r : reports) {
            if (getter(r).size() != len) return;  // inconsistent detail, skip
        }
        out.assign(len, 0.0);
        for (const MetricReport& r : reports) {
            const auto& v = getter(r);
            for (std::size_t k = 0; k < len; ++k) out[k] += v[k];
        }
        for (double& v : out) v /= static_cast<double>(reports.size());
    };
    average_vectors([](const MetricReport& r) -> const std::vector<double>& { return r.per_factor; },
                    agg.per_factor_mean);
    average_vectors([](const MetricReport& r) -> const std::vector<double>& { return r.per_code; },
                    agg.per_code_mean);
    return agg;
}

}  // namespace dismet
