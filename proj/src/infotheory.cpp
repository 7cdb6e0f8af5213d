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

#include "dismet/infotheory.hpp"

#include <cmath>

namespace dismet {

JointHistogram JointHistogram::from_indices(std::span<const int> xi, std::span<const int> yi,
                                            int x_bins, int y_bins) {
    if (xi.size() != yi.size()) throw dimension_mismatch_error("joint histogram inputs differ in length");
    JointHistogram h;
    h.rows = x_bins;
    h.cols = y_bins;
    h.counts.assign(static_cast<std::size_t>(x_bins) * y_bins, 0);
    for (std::size_t n = 0; n < xi.size(); ++n) {
        int r = xi[n], c = yi[n];
        if (r < 0 || r >= x_bins || c < 0 || c >= y_bins) {
            throw invalid_parameter_error("joint histogram index out of range");
        }
        ++h.counts[static_cast<std::size_t>(r) * y_bins + c];
    }
    h.total = static_cast<long long>(xi.size());
    return h;
}

std::vector<long long> JointHistogram::row_marginal() const {
    std::vector<long long> out(static_cast<std::size_t>(rows), 0);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) out[static_cast<std::size_t>(r)] += at(r, c);
    }
    return out;
}

std::vector<long long> JointHistogram::col_marginal() const {
    std::vector<long long> out(static_cast<std::size_t>(cols), 0);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) out[static_cast<std::size_t>(c)] += at(r, c);
    }
    return out;
}

double entropy(std::span<const long long> populations) {
    long long total = 0;
    for (long long c : populations) total += c;
    if (total <= 0) throw insufficient_data_error("entropy of an empty histogram is undefined");
    double h = 0.0;
    const double n = static_cast<double>(total);
    for (long long c : populations) {
        if (c <= 0) continue;
        double p = static_cast<double>(c) / n;
        h -= p * std::log(p);
    }
    return h < 0.0 ? 0.0 : h;
}

double joint_entropy(const JointHistogram& hist) {
    if (hist.total <= 0) throw insufficient_data_error("entropy of an empty histogram is undefined");
    return entropy(hist.counts);
}

double mutual_information(const JointHistogram& hist) {
    if (hist.total <= 0) throw insufficient_data_error("mutual information of an empty histogram is undefined");
    const double n = static_cast<double>(hist.total);
    std::vector<long long> pr = hist.row_marginal();
    std::vector<long long> pc = hist.col_marginal();
    double mi = 0.0;
    for (int r = 0; r < hist.rows; ++r) {
        if (pr[static_cast<std::size_t>(r)] == 0) continue;
        for (int c = 0; c < hist.cols; ++c) {
            long long cnt = hist.at(r, c);
            if (cnt == 0) continue;
            double pij = static_cast<double>(cnt) / n;
            double pi = static_cast<double>(pr[static_cast<std::size_t>(r)]) / n;
            double pj = static_cast<double>(pc[static_cast<std::size_t>(c)]) / n;
            mi += pij * std::log(pij / (pi * pj));
        }
    }
    return mi < 0.0 ? 0.0 : mi;
}

MiBundle compute_mi_bundle(const FactorMatrix& factors, const CodeMatrix& codes,
                           const BinningSpec& factor_spec, const BinningSpec& code_spec) {
    validate_pair(factors, codes);
    BinnedFactors bf = discretize_factors(factors, factor_spec);
    BinnedCodes bz = discretize_codes(codes, code_spec);

    const std::size_t M = factors.num_factors();
    const std::size_t d = codes.num_dims();

    MiBundle out;
    out.mi.weights = Matrix(M, d);
    out.mi.source = ImportanceSource::MutualInformation;
    out.joint_entropies = Matrix(M, d);
    out.factor_entropies.resize(M);
    out.code_entropies.resize(d);
    out.code_bins = bz.num_bins;

    for (std::size_t i = 0; i < M; ++i) {
        out.factor_entropies[i] = entropy(bin_populations(bf.indices[i], bf.num_bins[i]));
    }
    for (std::size_t j = 0; j < d; ++j) {
        out.code_entropies[j] = entropy(bin_populations(bz.indices[j], bz.num_bins));
    }
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            JointHistogram h = JointHistogram::from_indices(bf.indices[i], bz.indices[j],
                                                            bf.num_bins[i], bz.num_bins);
            out.mi.weights.at(i, j) = mutual_information(h);
            out.joint_entropies.at(i, j) = joint_entropy(h);
        }
    }
    return out;
}

ImportanceMatrix pairwise_mi_matrix(const FactorMatrix& factors, const CodeMatrix& codes,
                                    const BinningSpec& spec) {
    return compute_mi_bundle(factors, codes, spec, spec).mi;
}

}  // namespace dismet
