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
#include <span>
#include <vector>

#include "dismet/core.hpp"

namespace dismet {

// Equal-width binning of a scalar column, either over the observed min/max or
// over fixed bounds. All interventions and information estimates run on the
// binned values.
struct BinningSpec {
    enum class Strategy { EqualWidthEmpirical, EqualWidthFixed };

    int num_bins = 10;
    Strategy strategy = Strategy::EqualWidthEmpirical;
    double lo = 0.0;
    double hi = 1.0;

    static BinningSpec empirical(int bins = 10) {
        BinningSpec s;
        s.num_bins = bins;
        s.strategy = Strategy::EqualWidthEmpirical;
        return s;
    }

    static BinningSpec fixed(int bins, double lo, double hi) {
        BinningSpec s;
        s.num_bins = bins;
        s.strategy = Strategy::EqualWidthFixed;
        s.lo = lo;
        s.hi = hi;
        return s;
    }
};

// Bin indices in [0, num_bins). Values exactly at the upper bound map to the
// last bin; a constant column maps entirely to bin 0. Values outside fixed
// bounds clamp to the edge bins.
std::vector<int> discretize_column(std::span<const double> x, const BinningSpec& spec);

// Histogram counts; sums to the number of indices.
std::vector<long long> bin_populations(std::span<const int> indices, int num_bins);

// Per-factor binning with the categorical bypass: categorical columns use the
// class index directly as the bin index. Returns one index vector per factor
// plus the effective bin count of each column.
struct BinnedFactors {
    std::vector<std::vector<int>> indices;  // one per factor column
    std::vector<int> num_bins;              // effective bins per column
};

BinnedFactors discretize_factors(const FactorMatrix& factors, const BinningSpec& spec);

// Column-wise binning of codes (always numeric, no bypass).
struct BinnedCodes {
    std::vector<std::vector<int>> indices;
    int num_bins = 0;
};

BinnedCodes discretize_codes(const CodeMatrix& codes, const BinningSpec& spec);

}  // namespace dismet
