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

#include "dismet/metrics/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dismet/rng.hpp"

namespace dismet {

namespace {

Matrix rows_subset(const Matrix& X, const std::vector<std::size_t>& idx) {
    Matrix out(idx.size(), X.cols);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        for (std::size_t c = 0; c < X.cols; ++c) out.at(r, c) = X.at(idx[r], c);
    }
    return out;
}

std::vector<double> values_subset(std::span<const double> y, const std::vector<std::size_t>& idx) {
    std::vector<double> out(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) out[r] = y[idx[r]];
    return out;
}

// Prediction quality on held-out data, on the scale where an uninformative
// predictor scores 0 and a perfect one scores 1: one minus the held-out MSE of
// variance-normalized targets (equivalently, held-out R^2), clamped to [0, 1].
double normalized_explicitness(std::span<const double> yhat, std::span<const double> y,
                               double y_var) {
    if (y_var <= 0.0) return 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double d = yhat[i] - y[i];
        err += d * d;
    }
    double score = 1.0 - err / (static_cast<double>(y.size()) * y_var);
    return std::clamp(score, 0.0, 1.0);
}

}  // namespace

DciReport dci(const FactorMatrix& factors, const CodeMatrix& codes, const DciParams& params) {
    validate_pair(factors, codes);
    const std::size_t M = factors.num_factors();
    const std::size_t d = codes.num_dims();
    const std::size_t N = factors.num_samples();
    if (N < 10) throw insufficient_data_error("dci needs at least 10 samples");

    DciReport report;
    report.backend = params.backend;
    report.seed = params.seed;
    report.importance.weights = Matrix(M, d, 0.0);
    report.importance.source = params.backend == DciBackend::Lasso ? ImportanceSource::Lasso
                                                                   : ImportanceSource::RandomForest;
    report.per_factor_compactness.assign(M, 0.0);
    report.per_factor_explicitness.assign(M, 0.0);

    for (std::size_t i = 0; i < M; ++i) {
        std::uint64_t factor_seed = mix_seed(params.seed, 100 + i);
        std::vector<std::size_t> perm = shuffled_indices(N, factor_seed);
        std::size_t holdout = std::max<std::size_t>(1, static_cast<std::size_t>(
            std::floor(params.holdout_fraction * static_cast<double>(N))));
        std::vector<std::size_t> test_idx(perm.begin(), perm.begin() + static_cast<long>(holdout));
        std::vector<std::size_t> train_idx(perm.begin() + static_cast<long>(holdout), perm.end());

        std::vector<double> y = factors.values.column(i);
        Matrix X_train = rows_subset(codes.values, train_idx);
        std::vector<double> y_train = values_subset(y, train_idx);
        Matrix X_test = rows_subset(codes.values, test_idx);
        std::vector<double> y_test = values_subset(y, test_idx);
        double y_var_train = variance(y_train);

        std::vector<double> importances(d, 0.0);
        std::vector<double> yhat;

        if (params.backend == DciBackend::Lasso) {
            std::vector<double> grid = params.lambda_grid;
            if (grid.empty()) {
                double noise_scale = 1.0 / std::sqrt(static_cast<double>(train_idx.size()));
                for (double m : {0.25, 0.5, 1.0, 1.5}) grid.push_back(m * noise_scale);
            }
            CvEvaluator eval = [&](const std::vector<std::size_t>& tr,
                                   const std::vector<std::size_t>& va, std::size_t g) {
                LassoModel m = fit_lasso(rows_subset(X_train, tr), values_subset(y_train, tr),
                                         grid[g]);
                std::vector<double> pred = predict(m, rows_subset(X_train, va));
                return mse(pred, values_subset(y_train, va));
            };
            CvResult cv = cross_validate(eval, grid.size(), train_idx.size(),
                                         params.cv_folds, mix_seed(factor_seed, 1));
            LassoModel model = fit_lasso(X_train, y_train, grid[cv.best_index]);
            for (std::size_t j = 0; j < d; ++j) importances[j] = std::abs(model.weights_standardized[j]);
            yhat = predict(model, X_test);
        } else {
            ForestParams fp = params.forest;
            fp.mode = ForestMode::Regression;
            // Importance extraction needs every feature in contention at every
            // split; subsampling features leaks importance mass onto
            // uninformative dimensions and miscalibrates modularity and
            // compactness on clean data.
            if (fp.features_per_split == 0) fp.features_per_split = static_cast<int>(d);
            CvEvaluator eval = [&](const std::vector<std::size_t>& tr,
                                   const std::vector<std::size_t>& va, std::size_t g) {
                ForestParams cfg = fp;
                cfg.num_trees = std::min(params.cv_trees, fp.num_trees);
                cfg.max_depth = params.depth_grid[g];
                cfg.seed = mix_seed(factor_seed, 1000 + g);
                ForestModel m = fit_forest(rows_subset(X_train, tr), values_subset(y_train, tr), cfg);
                std::vector<double> pred = predict(m, rows_subset(X_train, va));
                return mse(pred, values_subset(y_train, va));
            };
            CvResult cv = cross_validate(eval, params.depth_grid.size(), train_idx.size(),
                                         params.cv_folds, mix_seed(factor_seed, 2));
            ForestParams cfg = fp;
            cfg.max_depth = params.depth_grid[cv.best_index];
            cfg.seed = mix_seed(factor_seed, 3);
            ForestModel model = fit_forest(X_train, y_train, cfg);
            importances = model.importances;
            yhat = predict(model, X_test);
        }

        for (std::size_t j = 0; j < d; ++j) report.importance.weights.at(i, j) = importances[j];
        report.per_factor_explicitness[i] = normalized_explicitness(yhat, y_test, y_var_train);
    }

    // Compactness: per-factor entropy deficit of row-normalized importances.
    const double log_d = std::log(static_cast<double>(d));
    for (std::size_t i = 0; i < M; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < d; ++j) row_sum += report.importance.at(i, j);
        if (row_sum <= 0.0) {
            report.per_factor_compactness[i] = 0.0;
            report.notes.push_back("factor '" + factors.factor_names[i] +
                                   "' has an all-zero importance row; compactness for it set to 0");
            continue;
        }
        double h = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            double p = report.importance.at(i, j) / row_sum;
            if (p > 0.0) h -= p * std::log(p);
        }
        report.per_factor_compactness[i] = d > 1 ? 1.0 - h / log_d : 1.0;
    }

    // Modularity: per-code entropy deficit of column-normalized importances,
    // weighted by each code's share of the total importance mass.
    const double log_m = std::log(static_cast<double>(M));
    report.per_code_modularity.assign(d, 0.0);
    report.code_weights.assign(d, 0.0);
    double total = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double col_sum = 0.0;
        for (std::size_t i = 0; i < M; ++i) col_sum += report.importance.at(i, j);
        report.code_weights[j] = col_sum;
        total += col_sum;
        if (col_sum <= 0.0) continue;  // dead code: weight 0 removes it from the average
        double h = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            double p = report.importance.at(i, j) / col_sum;
            if (p > 0.0) h -= p * std::log(p);
        }
        report.per_code_modularity[j] = M > 1 ? 1.0 - h / log_m : 1.0;
    }
    if (total > 0.0) {
        double mod = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            mod += report.code_weights[j] / total * report.per_code_modularity[j];
        }
        report.modularity = mod;
        for (double& w : report.code_weights) w /= total;
    } else {
        report.modularity = 0.0;
        report.notes.push_back("importance matrix is all-zero; modularity set to 0");
    }

    report.compactness = mean(report.per_factor_compactness);
    report.explicitness = mean(report.per_factor_explicitness);
    return report;
}

std::vector<MetricReport> dci_reports(const DciReport& report) {
    const char* backend = report.backend == DciBackend::Lasso ? "dci_lasso" : "dci_rf";
    std::vector<MetricReport> out(3);

    out[0].metric_name = std::string(backend) + "_modularity";
    out[0].property = Property::Modularity;
    out[0].overall = report.modularity;
    out[0].per_code = report.per_code_modularity;
    out[0].notes.push_back("overall is the importance-weighted mean of per-code scores");

    out[1].metric_name = std::string(backend) + "_compactness";
    out[1].property = Property::Compactness;
    out[1].overall = report.compactness;
    out[1].per_factor = report.per_factor_compactness;

    out[2].metric_name = std::string(backend) + "_explicitness";
    out[2].property = Property::Explicitness;
    out[2].overall = report.explicitness;
    out[2].per_factor = report.per_factor_explicitness;

    for (MetricReport& r : out) {
        r.seed = report.seed;
        r.notes.insert(r.notes.end(), report.notes.begin(), report.notes.end());
    }
    return out;
}

MetricReport explicitness_score(const FactorMatrix& factors, const CodeMatrix& codes,
                                const ExplicitnessParams& params) {
    validate_pair(factors, codes);
    const std::size_t M = factors.num_factors();
    BinnedFactors binned = discretize_factors(factors, params.factor_bins);

    MetricReport report;
    report.metric_name = "explicitness_score";
    report.property = Property::Explicitness;
    report.seed = params.seed;
    report.per_factor.assign(M, 0.0);

    double auc_sum = 0.0;
    std::size_t auc_count = 0;
    for (std::size_t i = 0; i < M; ++i) {
        const std::vector<int>& labels = binned.indices[i];
        std::vector<int> present(labels.begin(), labels.end());
        std::sort(present.begin(), present.end());
        present.erase(std::unique(present.begin(), present.end()), present.end());
        if (present.size() < 2) {
            throw single_class_error("explicitness score: factor '" + factors.factor_names[i] +
                                     "' exposes a single class after binning");
        }

        LogisticParams lp = params.logistic;
        lp.seed = mix_seed(params.seed, 200 + i);
        LogisticModel clf = fit_softmax(codes.values, labels, lp);

        // Per-class probabilities, scored one-vs-rest.
        const std::size_t N = codes.num_samples();
        Matrix probs(N, present.size());
        for (std::size_t n = 0; n < N; ++n) {
            std::vector<double> p = clf.class_scores(codes.values.row(n));
            for (std::size_t k = 0; k < present.size(); ++k) probs.at(n, k) = p[k];
        }
        double factor_auc = 0.0;
        for (std::size_t k = 0; k < present.size(); ++k) {
            std::vector<int> indicator(N, 0);
            for (std::size_t n = 0; n < N; ++n) indicator[n] = labels[n] == present[k] ? 1 : 0;
            factor_auc += roc_auc(probs.column(k), indicator);
        }
        factor_auc /= static_cast<double>(present.size());
        report.per_factor[i] = std::clamp((factor_auc - 0.5) / 0.5, 0.0, 1.0);
        auc_sum += factor_auc * static_cast<double>(present.size());
        auc_count += present.size();
    }

    double mean_auc = auc_sum / static_cast<double>(auc_count);
    report.overall = std::clamp((mean_auc - 0.5) / 0.5, 0.0, 1.0);
    report.notes.push_back("mean ROC AUC over all per-class classifiers " + std::to_string(mean_auc));
    report.notes.push_back("overall rescales the class-weighted mean AUC; per-factor entries rescale per-factor means");
    return report;
}

MetricReport sap(const FactorMatrix& factors, const CodeMatrix& codes, const SapParams& params) {
    validate_pair(factors, codes);
    const std::size_t M = factors.num_factors();
    const std::size_t d = codes.num_dims();
    const std::size_t N = factors.num_samples();

    // Dead-code columns score 0 against every factor.
    std::vector<char> alive(d, 1);
    for (std::size_t j = 0; j < d; ++j) {
        if (variance(codes.values.column(j)) < params.dead_code_threshold) alive[j] = 0;
    }

    MetricReport report;
    report.metric_name = "sap";
    report.property = Property::Compactness;
    report.seed = params.seed;
    report.per_factor.assign(M, 0.0);

    Matrix S(M, d, 0.0);
    for (std::size_t i = 0; i < M; ++i) {
        std::vector<double> y = factors.values.column(i);
        if (factors.kinds[i] == FactorKind::Categorical) {
            std::uint64_t factor_seed = mix_seed(params.seed, 300 + i);
            std::vector<std::size_t> perm = shuffled_indices(N, factor_seed);
            std::size_t holdout = std::max<std::size_t>(1, static_cast<std::size_t>(
                std::floor(params.holdout_fraction * static_cast<double>(N))));
            std::vector<std::size_t> test_idx(perm.begin(), perm.begin() + static_cast<long>(holdout));
            std::vector<std::size_t> train_idx(perm.begin() + static_cast<long>(holdout), perm.end());
            std::vector<double> y_train = values_subset(y, train_idx);
            std::vector<double> y_test = values_subset(y, test_idx);

            for (std::size_t j = 0; j < d; ++j) {
                if (!alive[j]) continue;
                Matrix col(N, 1);
                for (std::size_t n = 0; n < N; ++n) col.at(n, 0) = codes.values.at(n, j);
                Matrix col_train = rows_subset(col, train_idx);
                Matrix col_test = rows_subset(col, test_idx);

                ForestParams tp;
                tp.num_trees = 1;
                tp.min_leaf = 5;
                tp.features_per_split = 1;
                tp.bootstrap = false;
                tp.mode = ForestMode::Classification;
                CvEvaluator eval = [&](const std::vector<std::size_t>& tr,
                                       const std::vector<std::size_t>& va, std::size_t g) {
                    ForestParams cfg = tp;
                    cfg.max_depth = params.tree_depth_grid[g];
                    cfg.seed = mix_seed(factor_seed, 10 + g);
                    ForestModel m = fit_forest(rows_subset(col_train, tr), values_subset(y_train, tr), cfg);
                    std::vector<double> pred = predict(m, rows_subset(col_train, va));
                    return 1.0 - balanced_accuracy(pred, values_subset(y_train, va));
                };
                CvResult cv = cross_validate(eval, params.tree_depth_grid.size(), train_idx.size(),
                                             params.cv_folds, mix_seed(factor_seed, 20 + j));
                ForestParams cfg = tp;
                cfg.max_depth = params.tree_depth_grid[cv.best_index];
                cfg.seed = mix_seed(factor_seed, 30 + j);
                ForestModel m = fit_forest(col_train, y_train, cfg);
                std::vector<double> pred = predict(m, col_test);
                S.at(i, j) = balanced_accuracy(pred, y_test);
            }
        } else {
            for (std::size_t j = 0; j < d; ++j) {
                if (!alive[j]) continue;
                double r = pearson_correlation(y, codes.values.column(j));
                S.at(i, j) = r * r;
            }
        }

        // Gap between the two best dimensions; exact ties give a zero gap.
        double best = -1.0, second = -1.0;
        for (std::size_t j = 0; j < d; ++j) {
            double s = S.at(i, j);
            if (s > best) {
                second = best;
                best = s;
            } else if (s > second) {
                second = s;
            }
        }
        if (second < 0.0) second = 0.0;  // single code dimension
        report.per_factor[i] = best - second;
    }

    report.overall = mean(report.per_factor);
    return report;
}

}  // namespace dismet
