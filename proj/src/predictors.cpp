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

#include "dismet/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace dismet {

namespace {

struct Standardized {
    Matrix X;                      // standardized copy
    std::vector<double> mean;
    std::vector<double> stddev;    // population std; 0 kept as 0 (column left centered)
};

Standardized standardize_columns(const Matrix& X) {
    Standardized s;
    s.X = X;
    s.mean.resize(X.cols);
    s.stddev.resize(X.cols);
    for (std::size_t j = 0; j < X.cols; ++j) {
        double m = 0.0;
        for (std::size_t r = 0; r < X.rows; ++r) m += X.at(r, j);
        m /= static_cast<double>(X.rows);
        double v = 0.0;
        for (std::size_t r = 0; r < X.rows; ++r) {
            double d = X.at(r, j) - m;
            v += d * d;
        }
        v /= static_cast<double>(X.rows);
        double sd = std::sqrt(v);
        s.mean[j] = m;
        s.stddev[j] = sd;
        for (std::size_t r = 0; r < X.rows; ++r) {
            s.X.at(r, j) = sd > 0.0 ? (X.at(r, j) - m) / sd : 0.0;
        }
    }
    return s;
}

double soft_threshold(double rho, double lambda) {
    if (rho > lambda) return rho - lambda;
    if (rho < -lambda) return rho + lambda;
    return 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Lasso
// ---------------------------------------------------------------------------

LassoModel fit_lasso(const Matrix& X, std::span<const double> y, double lambda,
                     double tol, int max_sweeps) {
    if (X.rows != y.size()) throw dimension_mismatch_error("lasso: X rows differ from y length");
    if (X.rows < 2) throw insufficient_data_error("lasso needs at least 2 samples");
    if (lambda < 0.0) throw invalid_parameter_error("lasso lambda must be nonnegative");

    const std::size_t n = X.rows, d = X.cols;
    Standardized sx = standardize_columns(X);
    double y_mean = mean(y);
    double y_sd = std::sqrt(variance(y));
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = y_sd > 0.0 ? (y[i] - y_mean) / y_sd : 0.0;

    LassoModel model;
    model.lambda = lambda;
    model.weights_standardized.assign(d, 0.0);
    std::vector<double> resid = ys;  // residual r = ys - X w

    const double inv_n = 1.0 / static_cast<double>(n);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            if (sx.stddev[j] == 0.0) continue;  // degenerate column stays at 0
            double w_old = model.weights_standardized[j];
            // With unit-variance columns, x_j . x_j / n == 1.
            double rho = 0.0;
            for (std::size_t i = 0; i < n; ++i) rho += sx.X.at(i, j) * resid[i];
            rho = rho * inv_n + w_old;
            double w_new = soft_threshold(rho, lambda);
            if (w_new != w_old) {
                double delta = w_old - w_new;
                for (std::size_t i = 0; i < n; ++i) resid[i] += delta * sx.X.at(i, j);
                model.weights_standardized[j] = w_new;
            }
            max_change = std::max(max_change, std::abs(w_new - w_old));
        }
        double sq = 0.0;
        for (double r : resid) sq += r * r;
        double l1 = 0.0;
        for (double w : model.weights_standardized) l1 += std::abs(w);
        model.objective_path.push_back(0.5 * sq * inv_n + lambda * l1);
        model.sweeps_used = sweep + 1;
        if (max_change < tol) {
            model.converged = true;
            break;
        }
        model.converged = false;
    }

    model.weights.assign(d, 0.0);
    double dot = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        if (sx.stddev[j] > 0.0 && y_sd > 0.0) {
            model.weights[j] = model.weights_standardized[j] * y_sd / sx.stddev[j];
        }
        dot += model.weights[j] * sx.mean[j];
    }
    model.intercept = y_mean - dot;
    return model;
}

double predict(const LassoModel& model, std::span<const double> x) {
    if (x.size() != model.weights.size()) throw dimension_mismatch_error("lasso predict: feature count mismatch");
    double out = model.intercept;
    for (std::size_t j = 0; j < x.size(); ++j) out += model.weights[j] * x[j];
    return out;
}

std::vector<double> predict(const LassoModel& model, const Matrix& X) {
    std::vector<double> out(X.rows);
    for (std::size_t r = 0; r < X.rows; ++r) out[r] = predict(model, X.row(r));
    return out;
}

double mse(std::span<const double> yhat, std::span<const double> y) {
    if (yhat.size() != y.size()) throw dimension_mismatch_error("mse inputs differ in length");
    if (y.empty()) throw insufficient_data_error("mse of empty vectors is undefined");
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double d = yhat[i] - y[i];
        s += d * d;
    }
    return s / static_cast<double>(y.size());
}

// ---------------------------------------------------------------------------
// Decision trees and forests
// ---------------------------------------------------------------------------

double DecisionTree::predict(std::span<const double> x) const {
    int node = 0;
    while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
        const TreeNode& nd = nodes[static_cast<std::size_t>(node)];
        node = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return nodes[static_cast<std::size_t>(node)].value;
}

namespace {

// Tree growth on pre-sorted per-feature index arrays: features are sorted
// once per tree, then each split stable-partitions every feature's segment so
// children stay sorted. Node scans are O(n) per candidate feature.
struct TreeBuilder {
    const std::vector<std::vector<double>>& cols;  // column-major feature copy
    std::span<const double> y;
    const ForestParams& params;
    int num_classes;
    Rng& rng;
    DecisionTree& tree;
    std::vector<double>& importance;

    // order[f] holds the tree's sample multiset sorted by feature f.
    std::vector<std::vector<std::size_t>> order = {};
    std::vector<std::size_t> scratch = {};
    std::vector<char> goes_left = {};           // indexed by sample id
    std::vector<int> feature_pool = {};
    std::vector<double> class_totals = {};      // classification scratch
    std::vector<double> class_left = {};

    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double gain = -1.0;
    };

    void init(std::vector<std::size_t> samples) {
        const std::size_t d = cols.size();
        order.assign(d, samples);
        std::vector<std::pair<double, std::size_t>> keyed(samples.size());
        for (std::size_t f = 0; f < d; ++f) {
            const std::vector<double>& col = cols[f];
            for (std::size_t k = 0; k < samples.size(); ++k) {
                keyed[k] = {col[samples[k]], samples[k]};
            }
            std::sort(keyed.begin(), keyed.end());
            for (std::size_t k = 0; k < samples.size(); ++k) order[f][k] = keyed[k].second;
        }
        scratch.resize(samples.size());
        goes_left.assign(cols[0].size(), 0);
        feature_pool.resize(d);
        if (num_classes > 0) {
            class_totals.resize(static_cast<std::size_t>(num_classes));
            class_left.resize(static_cast<std::size_t>(num_classes));
        }
    }

    double scaled_impurity(std::size_t start, std::size_t end) const {
        const double n = static_cast<double>(end - start);
        const std::vector<std::size_t>& seg = order[0];
        if (params.mode == ForestMode::Regression) {
            double s = 0.0, sq = 0.0;
            for (std::size_t k = start; k < end; ++k) {
                double v = y[seg[k]];
                s += v;
                sq += v * v;
            }
            return sq - s * s / n;
        }
        std::vector<double> counts(static_cast<std::size_t>(num_classes), 0.0);
        for (std::size_t k = start; k < end; ++k) counts[static_cast<std::size_t>(y[seg[k]])] += 1.0;
        double g = n;
        for (double c : counts) g -= c * c / n;
        return g;
    }

    double leaf_value(std::size_t start, std::size_t end) const {
        const std::vector<std::size_t>& seg = order[0];
        if (params.mode == ForestMode::Regression) {
            double s = 0.0;
            for (std::size_t k = start; k < end; ++k) s += y[seg[k]];
            return s / static_cast<double>(end - start);
        }
        std::vector<int> counts(static_cast<std::size_t>(num_classes), 0);
        for (std::size_t k = start; k < end; ++k) ++counts[static_cast<std::size_t>(y[seg[k]])];
        int best = 0;
        for (int k = 1; k < num_classes; ++k) {
            if (counts[static_cast<std::size_t>(k)] > counts[static_cast<std::size_t>(best)]) best = k;
        }
        return static_cast<double>(best);
    }

    void update_best(int f, double lo, double hi, double gain, Split& best, int& num_ties) {
        if (gain <= 1e-12) return;
        if (gain > best.gain + 1e-12) {
            best = Split{f, 0.5 * (lo + hi), gain};
            num_ties = 1;
        } else if (std::abs(gain - best.gain) <= 1e-12) {
            // Uniform choice among equal-gain splits keeps duplicated features
            // from always losing to the lower index.
            ++num_ties;
            if (rng.next_below(static_cast<std::size_t>(num_ties)) == 0) {
                best = Split{f, 0.5 * (lo + hi), gain};
            }
        }
    }

    void consider_feature(int f, std::size_t start, std::size_t end, double parent_impurity,
                          double node_sq, Split& best, int& num_ties) {
        const std::vector<std::size_t>& seg = order[static_cast<std::size_t>(f)];
        const std::vector<double>& col = cols[static_cast<std::size_t>(f)];
        const std::size_t n = end - start;
        const std::size_t min_leaf = static_cast<std::size_t>(params.min_leaf);
        if (col[seg[start]] == col[seg[end - 1]]) return;

        if (params.mode == ForestMode::Regression) {
            double total = 0.0;
            for (std::size_t k = start; k < end; ++k) total += y[seg[k]];
            double left_sum = 0.0;
            for (std::size_t k = 0; k + 1 < n; ++k) {
                left_sum += y[seg[start + k]];
                double xv = col[seg[start + k]];
                double xn = col[seg[start + k + 1]];
                if (k + 1 < min_leaf || n - k - 1 < min_leaf || xv == xn) continue;
                double nl = static_cast<double>(k + 1), nr = static_cast<double>(n - k - 1);
                double right_sum = total - left_sum;
                double score = left_sum * left_sum / nl + right_sum * right_sum / nr;
                update_best(f, xv, xn, parent_impurity - (node_sq - score), best, num_ties);
            }
        } else {
            std::fill(class_totals.begin(), class_totals.end(), 0.0);
            std::fill(class_left.begin(), class_left.end(), 0.0);
            for (std::size_t k = start; k < end; ++k) {
                class_totals[static_cast<std::size_t>(y[seg[k]])] += 1.0;
            }
            double left_sq = 0.0;
            double right_sq = 0.0;
            for (double c : class_totals) right_sq += c * c;
            for (std::size_t k = 0; k + 1 < n; ++k) {
                std::size_t cls = static_cast<std::size_t>(y[seg[start + k]]);
                left_sq += 2.0 * class_left[cls] + 1.0;
                right_sq += -2.0 * class_totals[cls] + 1.0;
                class_left[cls] += 1.0;
                class_totals[cls] -= 1.0;
                double xv = col[seg[start + k]];
                double xn = col[seg[start + k + 1]];
                if (k + 1 < min_leaf || n - k - 1 < min_leaf || xv == xn) continue;
                double nl = static_cast<double>(k + 1), nr = static_cast<double>(n - k - 1);
                double child = (nl - left_sq / nl) + (nr - right_sq / nr);
                update_best(f, xv, xn, parent_impurity - child, best, num_ties);
            }
            // Restore totals for the next feature scan.
            std::fill(class_totals.begin(), class_totals.end(), 0.0);
            for (std::size_t k = start; k < end; ++k) {
                class_totals[static_cast<std::size_t>(y[seg[k]])] += 1.0;
            }
        }
    }

    int build(std::size_t start, std::size_t end, int depth) {
        int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();

        const std::size_t n = end - start;
        double parent_impurity = scaled_impurity(start, end);
        bool depth_ok = params.max_depth == 0 || depth < params.max_depth;
        bool size_ok = n >= 2 * static_cast<std::size_t>(params.min_leaf);

        Split best;
        if (depth_ok && size_ok && parent_impurity > 1e-12) {
            double node_sq = 0.0;
            if (params.mode == ForestMode::Regression) {
                const std::vector<std::size_t>& seg = order[0];
                for (std::size_t k = start; k < end; ++k) node_sq += y[seg[k]] * y[seg[k]];
            }
            const std::size_t d = cols.size();
            int mtry = params.features_per_split;
            if (mtry <= 0) mtry = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d))));
            mtry = std::min<int>(mtry, static_cast<int>(d));
            std::iota(feature_pool.begin(), feature_pool.end(), 0);
            int num_ties = 0;
            for (int t = 0; t < mtry; ++t) {
                std::size_t pick = static_cast<std::size_t>(t) +
                                   rng.next_below(d - static_cast<std::size_t>(t));
                std::swap(feature_pool[static_cast<std::size_t>(t)], feature_pool[pick]);
                consider_feature(feature_pool[static_cast<std::size_t>(t)], start, end,
                                 parent_impurity, node_sq, best, num_ties);
            }
        }

        if (best.feature < 0) {
            tree.nodes[static_cast<std::size_t>(node_id)].value = leaf_value(start, end);
            return node_id;
        }

        importance[static_cast<std::size_t>(best.feature)] += best.gain;

        // Stable partition of every feature segment around the split.
        std::size_t left_count = 0;
        {
            const std::vector<std::size_t>& seg = order[static_cast<std::size_t>(best.feature)];
            const std::vector<double>& col = cols[static_cast<std::size_t>(best.feature)];
            for (std::size_t k = start; k < end; ++k) {
                bool left = col[seg[k]] <= best.threshold;
                goes_left[seg[k]] = left ? 1 : 0;
                if (left) ++left_count;
            }
        }
        for (std::size_t f = 0; f < cols.size(); ++f) {
            std::vector<std::size_t>& seg = order[f];
            std::size_t l = 0, r = left_count;
            for (std::size_t k = start; k < end; ++k) {
                if (goes_left[seg[k]]) {
                    scratch[l++] = seg[k];
                } else {
                    scratch[r++] = seg[k];
                }
            }
            std::copy(scratch.begin(), scratch.begin() + static_cast<long>(n),
                      seg.begin() + static_cast<long>(start));
        }

        int left = build(start, start + left_count, depth + 1);
        int right = build(start + left_count, end, depth + 1);
        TreeNode& nd = tree.nodes[static_cast<std::size_t>(node_id)];
        nd.feature = best.feature;
        nd.threshold = best.threshold;
        nd.left = left;
        nd.right = right;
        return node_id;
    }
};

}  // namespace

ForestModel fit_forest(const Matrix& X, std::span<const double> y, const ForestParams& params) {
    if (X.rows != y.size()) throw dimension_mismatch_error("forest: X rows differ from y length");
    if (X.rows < 2) throw insufficient_data_error("forest needs at least 2 samples");
    if (params.num_trees < 1 || params.min_leaf < 1) {
        throw invalid_parameter_error("forest needs at least one tree and min_leaf >= 1");
    }

    ForestModel model;
    model.mode = params.mode;
    model.importances.assign(X.cols, 0.0);

    if (params.mode == ForestMode::Classification) {
        int max_class = 0;
        for (double v : y) {
            if (v < 0.0 || v != std::floor(v)) {
                throw invalid_parameter_error("classification targets must be nonnegative integers");
            }
            max_class = std::max(max_class, static_cast<int>(v));
        }
        model.num_classes = max_class + 1;
    }

    bool constant = true;
    for (double v : y) {
        if (v != y[0]) {
            constant = false;
            break;
        }
    }

    std::vector<std::vector<double>> columns(X.cols);
    for (std::size_t f = 0; f < X.cols; ++f) columns[f] = X.column(f);

    Rng root(params.seed);
    std::vector<double> acc(X.cols, 0.0);
    for (int t = 0; t < params.num_trees; ++t) {
        Rng tree_rng = root.split(static_cast<std::uint64_t>(t));
        model.trees.emplace_back();
        if (constant) {
            TreeNode leaf;
            leaf.value = y[0];
            model.trees.back().nodes.push_back(leaf);
            continue;
        }
        std::vector<std::size_t> idx(X.rows);
        if (params.bootstrap) {
            for (std::size_t i = 0; i < X.rows; ++i) idx[i] = tree_rng.next_below(X.rows);
        } else {
            std::iota(idx.begin(), idx.end(), 0);
        }
        std::vector<double> tree_imp(X.cols, 0.0);
        TreeBuilder builder{columns, y, params, model.num_classes, tree_rng, model.trees.back(),
                            tree_imp};
        builder.init(std::move(idx));
        builder.build(0, builder.order[0].size(), 0);
        double total = std::accumulate(tree_imp.begin(), tree_imp.end(), 0.0);
        if (total > 0.0) {
            for (std::size_t j = 0; j < X.cols; ++j) acc[j] += tree_imp[j] / total;
        }
    }

    model.degenerate_target = constant;
    double total = std::accumulate(acc.begin(), acc.end(), 0.0);
    if (total > 0.0) {
        for (std::size_t j = 0; j < X.cols; ++j) model.importances[j] = acc[j] / total;
    }
    return model;
}

std::vector<double> predict(const ForestModel& model, const Matrix& X) {
    std::vector<double> out(X.rows, 0.0);
    if (model.mode == ForestMode::Regression) {
        for (std::size_t r = 0; r < X.rows; ++r) {
            double s = 0.0;
            for (const DecisionTree& t : model.trees) s += t.predict(X.row(r));
            out[r] = s / static_cast<double>(model.trees.size());
        }
    } else {
        std::vector<int> votes;
        for (std::size_t r = 0; r < X.rows; ++r) {
            votes.assign(static_cast<std::size_t>(model.num_classes), 0);
            for (const DecisionTree& t : model.trees) {
                ++votes[static_cast<std::size_t>(t.predict(X.row(r)))];
            }
            int best = 0;
            for (int k = 1; k < model.num_classes; ++k) {
                if (votes[static_cast<std::size_t>(k)] > votes[static_cast<std::size_t>(best)]) best = k;
            }
            out[r] = static_cast<double>(best);
        }
    }
    return out;
}

double balanced_accuracy(std::span<const double> yhat, std::span<const double> y_true) {
    if (yhat.size() != y_true.size()) throw dimension_mismatch_error("balanced accuracy inputs differ in length");
    std::map<int, std::pair<long long, long long>> per_class;  // class -> (correct, total)
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        auto& [correct, total] = per_class[static_cast<int>(y_true[i])];
        ++total;
        if (static_cast<int>(yhat[i]) == static_cast<int>(y_true[i])) ++correct;
    }
    if (per_class.empty()) throw insufficient_data_error("balanced accuracy of empty input");
    double s = 0.0;
    for (auto& [cls, ct] : per_class) s += static_cast<double>(ct.first) / static_cast<double>(ct.second);
    return s / static_cast<double>(per_class.size());
}

// ---------------------------------------------------------------------------
// Logistic / softmax classifiers
// ---------------------------------------------------------------------------

namespace {

std::vector<int> distinct_classes(std::span<const int> labels) {
    std::vector<int> cls(labels.begin(), labels.end());
    std::sort(cls.begin(), cls.end());
    cls.erase(std::unique(cls.begin(), cls.end()), cls.end());
    return cls;
}

}  // namespace

std::vector<double> LogisticModel::class_scores(std::span<const double> x) const {
    const std::size_t K = class_ids.size();
    const std::size_t d = feat_mean.size();
    std::vector<double> z(d);
    for (std::size_t j = 0; j < d; ++j) {
        z[j] = feat_std[j] > 0.0 ? (x[j] - feat_mean[j]) / feat_std[j] : 0.0;
    }
    std::vector<double> logits(K);
    for (std::size_t k = 0; k < K; ++k) {
        double s = biases[k];
        for (std::size_t j = 0; j < d; ++j) s += weights.at(k, j) * z[j];
        logits[k] = s;
    }
    if (multinomial) {
        double mx = *std::max_element(logits.begin(), logits.end());
        double sum = 0.0;
        for (double& v : logits) {
            v = std::exp(v - mx);
            sum += v;
        }
        for (double& v : logits) v /= sum;
    } else {
        for (double& v : logits) v = 1.0 / (1.0 + std::exp(-v));
    }
    return logits;
}

int LogisticModel::predict_class(std::span<const double> x) const {
    std::vector<double> s = class_scores(x);
    std::size_t best = 0;
    for (std::size_t k = 1; k < s.size(); ++k) {
        if (s[k] > s[best]) best = k;
    }
    return class_ids[best];
}

namespace {

LogisticModel fit_linear_classifier(const Matrix& X, std::span<const int> labels,
                                    const LogisticParams& params, bool multinomial) {
    if (X.rows != labels.size()) throw dimension_mismatch_error("classifier: X rows differ from labels");
    std::vector<int> classes = distinct_classes(labels);
    if (classes.size() < 2) throw single_class_error("classifier needs at least 2 classes present");

    const std::size_t n = X.rows, d = X.cols, K = classes.size();
    Standardized sx = standardize_columns(X);

    std::vector<std::size_t> class_index(n);
    std::vector<double> class_count(K, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t k = static_cast<std::size_t>(
            std::lower_bound(classes.begin(), classes.end(), labels[i]) - classes.begin());
        class_index[i] = k;
        class_count[k] += 1.0;
    }
    // Sample weights; sum to n in both modes.
    std::vector<double> sample_w(n, 1.0);
    if (params.balanced) {
        for (std::size_t i = 0; i < n; ++i) {
            sample_w[i] = static_cast<double>(n) / (static_cast<double>(K) * class_count[class_index[i]]);
        }
    }

    LogisticModel model;
    model.weights = Matrix(K, d, 0.0);
    model.biases.assign(K, 0.0);
    model.feat_mean = sx.mean;
    model.feat_std = sx.stddev;
    model.class_ids = classes;
    model.multinomial = multinomial;

    std::vector<double> probs(K);
    Matrix grad_w(K, d, 0.0);
    std::vector<double> grad_b(K, 0.0);
    const double inv_n = 1.0 / static_cast<double>(n);
    const double* Xd = sx.X.data.data();

    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        std::fill(grad_w.data.begin(), grad_w.data.end(), 0.0);
        std::fill(grad_b.begin(), grad_b.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* xi = Xd + i * d;
            if (multinomial) {
                double mx = -1e300;
                for (std::size_t k = 0; k < K; ++k) {
                    const double* wk = model.weights.data.data() + k * d;
                    double s = model.biases[k];
                    for (std::size_t j = 0; j < d; ++j) s += wk[j] * xi[j];
                    probs[k] = s;
                    mx = std::max(mx, s);
                }
                double sum = 0.0;
                for (std::size_t k = 0; k < K; ++k) {
                    probs[k] = std::exp(probs[k] - mx);
                    sum += probs[k];
                }
                for (std::size_t k = 0; k < K; ++k) probs[k] /= sum;
                for (std::size_t k = 0; k < K; ++k) {
                    double err = sample_w[i] * (probs[k] - (class_index[i] == k ? 1.0 : 0.0));
                    grad_b[k] += err;
                    double* gk = grad_w.data.data() + k * d;
                    for (std::size_t j = 0; j < d; ++j) gk[j] += err * xi[j];
                }
            } else {
                for (std::size_t k = 0; k < K; ++k) {
                    const double* wk = model.weights.data.data() + k * d;
                    double s = model.biases[k];
                    for (std::size_t j = 0; j < d; ++j) s += wk[j] * xi[j];
                    double p = 1.0 / (1.0 + std::exp(-s));
                    double target = class_index[i] == k ? 1.0 : 0.0;
                    // One-vs-rest balancing: weight by the binary problem's
                    // positive/negative frequencies.
                    double w = 1.0;
                    if (params.balanced) {
                        double pos = class_count[k];
                        double neg = static_cast<double>(n) - pos;
                        w = target > 0.5 ? static_cast<double>(n) / (2.0 * pos)
                                         : static_cast<double>(n) / (2.0 * neg);
                    }
                    double err = w * (p - target);
                    grad_b[k] += err;
                    double* gk = grad_w.data.data() + k * d;
                    for (std::size_t j = 0; j < d; ++j) gk[j] += err * xi[j];
                }
            }
        }
        for (std::size_t k = 0; k < K; ++k) {
            model.biases[k] -= params.lr * grad_b[k] * inv_n;
            double* wk = model.weights.data.data() + k * d;
            const double* gk = grad_w.data.data() + k * d;
            for (std::size_t j = 0; j < d; ++j) {
                wk[j] -= params.lr * (gk[j] * inv_n + params.l2 * wk[j]);
            }
        }
    }
    return model;
}

}  // namespace

LogisticModel fit_logistic_ovr(const Matrix& X, std::span<const int> labels,
                               const LogisticParams& params) {
    return fit_linear_classifier(X, labels, params, false);
}

LogisticModel fit_softmax(const Matrix& X, std::span<const int> labels,
                          const LogisticParams& params) {
    return fit_linear_classifier(X, labels, params, true);
}

double accuracy(const LogisticModel& model, const Matrix& X, std::span<const int> labels) {
    if (X.rows != labels.size()) throw dimension_mismatch_error("accuracy: X rows differ from labels");
    long long correct = 0;
    for (std::size_t i = 0; i < X.rows; ++i) {
        if (model.predict_class(X.row(i)) == labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(X.rows);
}

double roc_auc(std::span<const double> scores, std::span<const int> binary_labels) {
    if (scores.size() != binary_labels.size()) {
        throw dimension_mismatch_error("roc_auc inputs differ in length");
    }
    const std::size_t n = scores.size();
    long long n_pos = 0;
    for (int l : binary_labels) n_pos += l != 0 ? 1 : 0;
    long long n_neg = static_cast<long long>(n) - n_pos;
    if (n_pos == 0 || n_neg == 0) throw single_class_error("roc_auc needs both classes present");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Tie-averaged ranks, 1-based.
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        double avg = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1 .. j
        for (std::size_t k = i; k < j; ++k) rank[order[k]] = avg;
        i = j;
    }
    double rank_sum_pos = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (binary_labels[k] != 0) rank_sum_pos += rank[k];
    }
    double u = rank_sum_pos - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

// ---------------------------------------------------------------------------
// Cross-validation
// ---------------------------------------------------------------------------

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = rng.next_below(i);
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

CvResult cross_validate(const CvEvaluator& eval, std::size_t grid_size, std::size_t n,
                        int folds, std::uint64_t seed) {
    if (grid_size == 0) throw invalid_parameter_error("cross-validation needs a non-empty grid");
    if (folds < 2) throw invalid_parameter_error("cross-validation needs at least 2 folds");
    if (n < static_cast<std::size_t>(folds)) {
        throw insufficient_data_error("fewer samples than folds");
    }

    std::vector<std::size_t> perm = shuffled_indices(n, seed);
    CvResult result;
    result.losses.assign(grid_size, 0.0);

    for (int f = 0; f < folds; ++f) {
        std::vector<std::size_t> train_idx, val_idx;
        for (std::size_t i = 0; i < n; ++i) {
            if (static_cast<int>(i % static_cast<std::size_t>(folds)) == f) {
                val_idx.push_back(perm[i]);
            } else {
                train_idx.push_back(perm[i]);
            }
        }
        for (std::size_t g = 0; g < grid_size; ++g) {
            result.losses[g] += eval(train_idx, val_idx, g);
        }
    }
    for (double& l : result.losses) l /= static_cast<double>(folds);

    result.best_index = 0;
    result.best_loss = result.losses[0];
    for (std::size_t g = 1; g < grid_size; ++g) {
        if (result.losses[g] < result.best_loss) {  // strict: ties keep first grid order
            result.best_loss = result.losses[g];
            result.best_index = g;
        }
    }
    return result;
}

}  // namespace dismet
