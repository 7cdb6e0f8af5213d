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

#include "dismet/core.hpp"
#include "dismet/infotheory.hpp"

namespace dismet {

// All metrics below consume a shared pairwise MI matrix (and entropies from
// the same discretization pass), so every score in a run sees identical
// estimates. Argmax ties break toward the lowest index; the resulting gap is
// then zero by construction.

// Per factor: (I(v_i, z*) - I(v_i, zo)) / sum_j I(v_i, z_j); mean over factors.
// Reported under the combined name mig_rmig.
MetricReport mig(const ImportanceMatrix& mi, std::span<const double> factor_entropies);

// Per factor: 1 - (H(v_i, z*) - I(v_i, z*) + I(v_i, zo)) / (H(v_i) + log B_z),
// the normalized joint-entropy variant; mean over factors.
MetricReport jemmig(const ImportanceMatrix& mi, const Matrix& joint_entropies,
                    std::span<const double> factor_entropies, int num_code_bins);

// Per code: gap of entropy-normalized MI from the code's point of view; mean
// over code dimensions.
MetricReport mig_sup(const ImportanceMatrix& mi, std::span<const double> factor_entropies);

// Per code: 1 - sum_{i != *} I(v_i, z_j)^2 / (I(v_*, z_j)^2 (M - 1)); mean
// over code dimensions.
MetricReport modularity_score(const ImportanceMatrix& mi);

// Per code gaps attributed to their argmax factor; each factor keeps its best
// attributed gap; score is the kept mass over the total factor entropy.
MetricReport dcimig(const ImportanceMatrix& mi, std::span<const double> factor_entropies);

}  // namespace dismet
