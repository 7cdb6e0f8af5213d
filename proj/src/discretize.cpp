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

#include "dismet/discretize.hpp"

#include <algorithm>
#include <cmath>

namespace dismet {

std::vector<int> discretize_column(std::span<const double> x, const BinningSpec& spec) {
    if (x.empty()) throw insufficient_data_error("cannot discretize an empty column");
    if (spec.num_bins < 2) throw invalid_parameter_error("equal-width binning needs at least 2 bins");
    if (!all_finite(x)) throw non_finite_data_error("column to discretize contains non-finite values");

    double lo, hi;
    if (spec.strategy == BinningSpec::Strategy::EqualWidthEmpirical) {
        auto [mn, mx] = std::minmax_element(x.begin(), x.end());
        lo = *mn;
        hi = *mx;
    } else {
        lo = spec.lo;
        hi = spec.hi;
        if (!(hi > lo)) throw invalid_parameter_error("fixed binning bounds must satisfy hi > lo");
    }

    std::vector<int> out(x.size(), 0);
    if (hi <= lo) return out;  // constant column, everything in bin 0

    const double width = (hi - lo) / static_cast<double>(spec.num_bins);
    for (std::size_t i = 0; i < x.size(); ++i) {
        int b = static_cast<int>(std::floor((x[i] - lo) / width));
        if (b < 0) b = 0;
        if (b >= spec.num_bins) b = spec.num_bins - 1;
        out[i] = b;
    }
    return out;
}

std::vector<long long> bin_populations(std::span<const int> indices, int num_bins) {
    if (num_bins <= 0) throw invalid_parameter_error("bin count must be positive");
    std::vector<long long> counts(static_cast<std::size_t>(num_bins), 0);
    for (int idx : indices) {
        if (idx < 0 || idx >= num_bins) {
            throw invalid_parameter_error("bin index " + std::to_string(idx) + " out of range [0, " +
                                          std::to_string(num_bins) + ")");
        }
        ++counts[static_cast<std::size_t>(idx)];
    }
    return counts;
}

BinnedFactors discretize_factors(const FactorMatrix& factors, const BinningSpec& spec) {
    BinnedFactors out;
    out.indices.reserve(factors.num_factors());
    out.num_bins.reserve(factors.num_factors());
    for (std::size_t i = 0; i < factors.num_factors(); ++i) {
        std::vector<double> col = factors.values.column(i);
        if (factors.kinds[i] == FactorKind::Categorical) {
            std::vector<int> idx(col.size());
            int max_class = 0;
            for (std::size_t r = 0; r < col.size(); ++r) {
                idx[r] = static_cast<int>(col[r]);
                max_class = std::max(max_class, idx[r]);
            }
            out.indices.push_back(std::move(idx));
            out.num_bins.push_back(max_class + 1);
        } else {
            out.indices.push_back(discretize_column(col, spec));
            out.num_bins.push_back(spec.num_bins);
        }
    }
    return out;
}

BinnedCodes discretize_codes(const CodeMatrix& codes, const BinningSpec& spec) {
    BinnedCodes out;
    out.num_bins = spec.num_bins;
    out.indices.reserve(codes.num_dims());
    for (std::size_t j = 0; j < codes.num_dims(); ++j) {
        out.indices.push_back(discretize_column(codes.values.column(j), spec));
    }
    return out;
}

}  // namespace dismet
