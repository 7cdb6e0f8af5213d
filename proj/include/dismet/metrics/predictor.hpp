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
#include <vector>

#include "dismet/core.hpp"
#include "dismet/discretize.hpp"
#include "dismet/predictors.hpp"

namespace dismet {

enum class DciBackend { Lasso, RandomForest };

struct DciParams {
    DciBackend backend = DciBackend::Lasso;
    // Lambda grid for the lasso backend, on standardized data. Empty means
    // the default log grid {0.25, 0.5, 1, 1.5} scaled by the coordinate noise
    // level 1/sqrt(n_train); a fixed absolute grid either keeps every noise
    // weight or kills whole rows once N changes.
    std::vector<double> lambda_grid;
    // Depth grid for the random-forest backend; 0 = unbounded.
    std::vector<int> depth_grid = {2, 4, 8, 0};
    int cv_folds = 3;
    int cv_trees = 3;               // forest size during depth selection
    double holdout_fraction = 0.3;  // explicitness is measured on this split
    ForestParams forest;            // num_trees / min_leaf / mtry defaults
    std::uint64_t seed = 0;
};

// Modularity, compactness and explicitness read off one importance matrix.
struct DciReport {
    double modularity = 0.0;
    double compactness = 0.0;
    double explicitness = 0.0;
    ImportanceMatrix importance;
    DciBackend backend = DciBackend::Lasso;
    std::vector<double> per_factor_compactness;
    std::vector<double> per_factor_explicitness;
    std::vector<double> per_code_modularity;
    std::vector<double> code_weights;  // importance mass per code dimension
    std::vector<std::string> notes;
    std::uint64_t seed = 0;
};

DciReport dci(const FactorMatrix& factors, const CodeMatrix& codes, const DciParams& params);

// The three DCI parts as individual metric reports, named
// dci_<backend>_{modularity,compactness,explicitness}.
std::vector<MetricReport> dci_reports(const DciReport& report);

struct ExplicitnessParams {
    BinningSpec factor_bins = BinningSpec::empirical(10);  // classes for continuous factors
    LogisticParams logistic{1e-4, 120, 1.4, true, 0};
    std::uint64_t seed = 0;
};

// Multinomial logistic classifiers on the full codes, one per factor; score is
// the mean one-vs-rest ROC AUC of the class probabilities, rescaled from
// [0.5, 1] onto [0, 1].
MetricReport explicitness_score(const FactorMatrix& factors, const CodeMatrix& codes,
                                const ExplicitnessParams& params);

struct SapParams {
    double dead_code_threshold = 1e-6;  // column variance below this scores 0
    std::vector<int> tree_depth_grid = {2, 4, 8};
    int cv_folds = 3;
    double holdout_fraction = 0.3;  // categorical branch accuracy split
    std::uint64_t seed = 0;
};

// Single-dimension predictability gaps: R^2 for continuous factors, held-out
// balanced decision-tree accuracy for categorical ones; score is the mean gap
// between the two best code dimensions per factor.
MetricReport sap(const FactorMatrix& factors, const CodeMatrix& codes, const SapParams& params);

}  // namespace dismet
