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
#include <functional>
#include <span>
#include <vector>

#include "dismet/core.hpp"
#include "dismet/rng.hpp"

namespace dismet {

// ---------------------------------------------------------------------------
// Lasso regression via cyclic coordinate descent with soft thresholding.
// Inputs and target are standardized internally; weights are reported both on
// the standardized scale (importance reads) and the original scale.
// ---------------------------------------------------------------------------

struct LassoModel {
    std::vector<double> weights;       // original scale
    double intercept = 0.0;
    std::vector<double> weights_standardized;
    double lambda = 0.0;
    int sweeps_used = 0;
    bool converged = true;
    std::vector<double> objective_path;  // objective value after each sweep
};

LassoModel fit_lasso(const Matrix& X, std::span<const double> y, double lambda,
                     double tol = 1e-7, int max_sweeps = 500);

double predict(const LassoModel& model, std::span<const double> x);
std::vector<double> predict(const LassoModel& model, const Matrix& X);

double mse(std::span<const double> yhat, std::span<const double> y);

// ---------------------------------------------------------------------------
// Random forest with axis-aligned binary trees. Regression splits minimize
// child variance, classification splits minimize Gini impurity. Importances
// are mean impurity decrease per feature, normalized to sum to 1.
// ---------------------------------------------------------------------------

enum class ForestMode { Regression, Classification };

struct TreeNode {
    int feature = -1;        // -1 marks a leaf
    double threshold = 0.0;  // go left when x[feature] <= threshold
    int left = -1;
    int right = -1;
    double value = 0.0;      // leaf prediction (mean or majority class id)
};

struct DecisionTree {
    std::vector<TreeNode> nodes;
    double predict(std::span<const double> x) const;
};

struct ForestParams {
    int num_trees = 10;
    int max_depth = 0;          // 0 = unbounded
    int min_leaf = 5;
    int features_per_split = 0; // 0 = ceil(sqrt(d))
    bool bootstrap = true;
    std::uint64_t seed = 0;
    ForestMode mode = ForestMode::Regression;
};

struct ForestModel {
    std::vector<DecisionTree> trees;
    std::vector<double> importances;  // per feature, sums to 1 when any split exists
    ForestMode mode = ForestMode::Regression;
    int num_classes = 0;
    bool degenerate_target = false;   // constant y, stump returned
};

ForestModel fit_forest(const Matrix& X, std::span<const double> y, const ForestParams& params);

std::vector<double> predict(const ForestModel& model, const Matrix& X);

// Mean per-class recall; classes absent from y_true are skipped.
double balanced_accuracy(std::span<const double> yhat, std::span<const double> y_true);

// ---------------------------------------------------------------------------
// Linear classifiers trained with plain full-batch gradient descent on
// standardized features. The fixed epoch budget is deliberate; no line search
// or restarts.
// ---------------------------------------------------------------------------

struct LogisticParams {
    double l2 = 1e-4;
    int epochs = 200;
    double lr = 0.5;
    bool balanced = false;  // per-class loss weights proportional to inverse frequency
    std::uint64_t seed = 0;
};

struct LogisticModel {
    Matrix weights;                // num_classes x d, standardized feature space
    std::vector<double> biases;    // num_classes
    std::vector<double> feat_mean;
    std::vector<double> feat_std;
    std::vector<int> class_ids;    // original labels, ascending
    bool multinomial = false;

    // Per-class scores for one sample: softmax probabilities when multinomial,
    // sigmoid one-vs-rest scores otherwise.
    std::vector<double> class_scores(std::span<const double> x) const;
    int predict_class(std::span<const double> x) const;
};

// One binary one-vs-rest logistic model per class.
LogisticModel fit_logistic_ovr(const Matrix& X, std::span<const int> labels,
                               const LogisticParams& params);

// Single multinomial (softmax) model over all classes.
LogisticModel fit_softmax(const Matrix& X, std::span<const int> labels,
                          const LogisticParams& params);

double accuracy(const LogisticModel& model, const Matrix& X, std::span<const int> labels);

// Area under the ROC curve via the rank statistic; ties contribute 1/2.
double roc_auc(std::span<const double> scores, std::span<const int> binary_labels);

// ---------------------------------------------------------------------------
// K-fold cross-validation over an indexed parameter grid. The evaluator
// returns a loss for (train split, validation split, grid index); the result
// is the argmin with ties broken by first grid order. Fold assignment is a
// deterministic function of the seed.
// ---------------------------------------------------------------------------

struct CvResult {
    std::size_t best_index = 0;
    double best_loss = 0.0;
    std::vector<double> losses;  // mean validation loss per grid entry
};

using CvEvaluator = std::function<double(const std::vector<std::size_t>& train_idx,
                                         const std::vector<std::size_t>& val_idx,
                                         std::size_t grid_index)>;

CvResult cross_validate(const CvEvaluator& eval, std::size_t grid_size, std::size_t n,
                        int folds, std::uint64_t seed);

// Deterministic shuffled split helper shared by CV and hold-out evaluation.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

}  // namespace dismet
