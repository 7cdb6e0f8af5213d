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
#include <string>
#include <vector>

#include "dismet/core.hpp"

namespace dismet {

// Tie-corrected Kendall rank correlation (tau-b) in [-1, 1]. Throws when
// either input is entirely tied (undefined denominator).
double kendall_tau(std::span<const double> a, std::span<const double> b);

// Scores of several metrics over the same set of configurations.
struct ScoreTable {
    std::vector<std::string> metric_names;    // columns
    std::vector<std::string> config_labels;   // rows
    Matrix scores;                            // configs x metrics
};

// Pairwise tau between metric rankings, scaled by 100. Symmetric, diagonal
// exactly 100.
Matrix correlation_matrix(const ScoreTable& table);

// Mean / sample standard deviation over per-seed reports of one metric.
struct SeedAggregate {
    std::string metric_name;
    Property property = Property::Holistic;
    double mean = 0.0;
    double stddev = 0.0;  // 0 by convention for a single report
    std::vector<double> per_factor_mean;
    std::vector<double> per_code_mean;
    std::vector<double> values;  // per-seed overall scores
};

SeedAggregate aggregate_seeds(std::span<const MetricReport> reports);

}  // namespace dismet
