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

#include <span>
#include <vector>

#include "dismet/core.hpp"
#include "dismet/discretize.hpp"

namespace dismet {

// Joint occurrence counts of two discretized variables. Plug-in (maximum
// likelihood) probabilities only; no bias correction anywhere, so estimates
// inherit the usual small-sample bias.
struct JointHistogram {
    std::vector<long long> counts;  // rows x cols, row-major
    int rows = 0;
    int cols = 0;
    long long total = 0;

    long long at(int r, int c) const { return counts[static_cast<std::size_t>(r) * cols + c]; }

    static JointHistogram from_indices(std::span<const int> xi, std::span<const int> yi,
                                       int x_bins, int y_bins);

    std::vector<long long> row_marginal() const;
    std::vector<long long> col_marginal() const;
};

// Shannon entropy of a count vector, in nats. 0 log 0 := 0.
double entropy(std::span<const long long> populations);

// Entropy of the flattened joint table, in nats.
double joint_entropy(const JointHistogram& hist);

// Plug-in mutual information in nats, clamped at 0 against rounding.
double mutual_information(const JointHistogram& hist);

// All pairwise quantities between binned factors and binned codes, computed
// from one histogram pass per pair so every consumer sees identical estimates.
struct MiBundle {
    ImportanceMatrix mi;               // I(v_i, z_j), num_factors x num_codes
    Matrix joint_entropies;            // H(v_i, z_j)
    std::vector<double> factor_entropies;  // H(v_i)
    std::vector<double> code_entropies;    // H(z_j)
    int code_bins = 0;
};

MiBundle compute_mi_bundle(const FactorMatrix& factors, const CodeMatrix& codes,
                           const BinningSpec& factor_spec, const BinningSpec& code_spec);

// Convenience wrapper using the same spec for both spaces.
ImportanceMatrix pairwise_mi_matrix(const FactorMatrix& factors, const CodeMatrix& codes,
                                    const BinningSpec& spec);

}  // namespace dismet
