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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dismet {

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct dimension_mismatch_error : error {
    using error::error;
};

struct non_finite_data_error : error {
    using error::error;
};

struct insufficient_data_error : error {
    using error::error;
};

struct invalid_parameter_error : error {
    using error::error;
};

struct single_class_error : error {
    using error::error;
};

// Dense row-major matrix of doubles. Sizes here stay small (N up to ~20k rows,
// at most a few dozen columns), so no sparse or blocked storage.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(data.data() + r * cols, cols);
    }

    std::vector<double> column(std::size_t c) const {
        std::vector<double> out(rows);
        for (std::size_t r = 0; r < rows; ++r) out[r] = at(r, c);
        return out;
    }
};

enum class FactorKind { Continuous, Categorical };

// Ground-truth generative factors, one row per sample, one column per factor.
struct FactorMatrix {
    Matrix values;
    std::vector<std::string> factor_names;
    std::vector<FactorKind> kinds;

    std::size_t num_samples() const { return values.rows; }
    std::size_t num_factors() const { return values.cols; }
};

// Learned representation, one row per sample, one column per code dimension.
struct CodeMatrix {
    Matrix values;
    std::vector<std::string> dim_names;

    std::size_t num_samples() const { return values.rows; }
    std::size_t num_dims() const { return values.cols; }
};

FactorMatrix make_factor_matrix(Matrix values,
                                std::vector<std::string> names = {},
                                std::vector<FactorKind> kinds = {});
CodeMatrix make_code_matrix(Matrix values, std::vector<std::string> names = {});

enum class ImportanceSource { MutualInformation, Lasso, RandomForest, RSquared };

// Nonnegative factor-by-code relevance weights (MI values or predictor
// importances). Entry (i, j) relates factor i to code dimension j.
struct ImportanceMatrix {
    Matrix weights;  // num_factors x num_codes
    ImportanceSource source = ImportanceSource::MutualInformation;

    std::size_t num_factors() const { return weights.rows; }
    std::size_t num_codes() const { return weights.cols; }
    double at(std::size_t i, std::size_t j) const { return weights.at(i, j); }
};

enum class Property { Modularity, Compactness, Explicitness, Holistic };

std::string property_name(Property p);

// Result of one metric evaluation on one seed. `overall` is in [0, 1] unless
// documented otherwise; when per-factor scores exist, overall is their mean
// (or the weighted mean recorded in `notes`).
struct MetricReport {
    std::string metric_name;
    Property property = Property::Holistic;
    double overall = 0.0;
    std::vector<double> per_factor;  // empty when not applicable
    std::vector<double> per_code;    // empty when not applicable
    std::uint64_t seed = 0;
    std::vector<std::string> notes;  // warnings, exclusions, aggregation rule
};

// Validated, read-only view over a factor/code pair with matching row counts.
struct ValidatedPair {
    const FactorMatrix& factors;
    const CodeMatrix& codes;
};

// Checks row-count agreement and rejects non-finite entries. Returns the pair
// untouched; never normalizes or copies data.
ValidatedPair validate_pair(const FactorMatrix& factors, const CodeMatrix& codes);

// Maps a classifier accuracy from [chance, 1] onto [0, 1]; accuracies below
// chance clamp to 0.
double rescale_by_chance(double raw, double chance);

// --- small numeric helpers shared across modules ---

double mean(std::span<const double> x);
double variance(std::span<const double> x);           // population (1/N)
double sample_stddev(std::span<const double> x);      // 1/(N-1), 0 for N < 2
double pearson_correlation(std::span<const double> x, std::span<const double> y);

bool all_finite(std::span<const double> x);

}  // namespace dismet
