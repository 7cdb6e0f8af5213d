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

#include "dismet/core.hpp"
#include "dismet/discretize.hpp"

namespace dismet {

// Shared knobs of the metrics that fix factors and compare code subsets.
// "Fixing" a continuous factor always means fixing its bin.
struct InterventionParams {
    int num_batches = 5000;       // batches (z-diff) or subsets (z-min / z-max)
    int pairs_per_batch = 64;     // z-diff
    int samples_per_subset = 64;  // z-min / z-max
    int num_train_points = 0;     // 0 = num_batches
    BinningSpec factor_bins = BinningSpec::empirical(10);
    BinningSpec code_bins = BinningSpec::empirical(10);  // IRS attribution
    std::uint64_t seed = 0;

    enum class Distance { L2 };
    Distance irs_distance = Distance::L2;
};

// Fixes one factor per batch, represents pairs by |z1 - z2|, and scores a
// multinomial linear classifier that recovers the fixed factor. Chance
// rescaled by 1/M.
MetricReport z_diff(const FactorMatrix& factors, const CodeMatrix& codes,
                    const InterventionParams& params);

// Fixes one factor at one binned value per subset; the lowest-variance
// normalized code dimension votes for the factor. Majority-vote accuracy,
// chance rescaled by 1/M.
MetricReport z_min_variance(const FactorMatrix& factors, const CodeMatrix& codes,
                            const InterventionParams& params);

// Fixes all factors but one per subset; the highest-variance normalized code
// dimension votes for the free factor. Majority-vote accuracy, chance
// rescaled by 1/M.
MetricReport z_max_variance(const FactorMatrix& factors, const CodeMatrix& codes,
                            const InterventionParams& params);

// Interventional robustness: per code dimension, how far codes move away from
// their per-realization mean when nuisance factors change, normalized by the
// dimension's maximal global deviation. Aggregated over dimensions weighted
// by those deviations.
MetricReport irs(const FactorMatrix& factors, const CodeMatrix& codes,
                 const InterventionParams& params);

}  // namespace dismet
