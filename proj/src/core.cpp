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

#include "dismet/core.hpp"

#include <cmath>
#include <cstdio>

namespace dismet {

namespace {

std::string default_name(const char* prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%zu", prefix, i);
    return buf;
}

void check_finite(const Matrix& m, const char* what) {
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            if (!std::isfinite(m.at(r, c))) {
                throw non_finite_data_error(std::string(what) + " contains a non-finite value at row " +
                                            std::to_string(r) + ", column " + std::to_string(c));
            }
        }
    }
}

}  // namespace

FactorMatrix make_factor_matrix(Matrix values, std::vector<std::string> names,
                                std::vector<FactorKind> kinds) {
    if (values.rows == 0 || values.cols == 0) {
        throw insufficient_data_error("factor matrix must have at least one row and one column");
    }
    FactorMatrix f;
    f.values = std::move(values);
    if (names.empty()) {
        for (std::size_t i = 0; i < f.values.cols; ++i) names.push_back(default_name("v", i));
    }
    if (kinds.empty()) kinds.assign(f.values.cols, FactorKind::Continuous);
    if (names.size() != f.values.cols || kinds.size() != f.values.cols) {
        throw dimension_mismatch_error("factor names/kinds do not match the column count");
    }
    f.factor_names = std::move(names);
    f.kinds = std::move(kinds);
    for (std::size_t c = 0; c < f.values.cols; ++c) {
        if (f.kinds[c] != FactorKind::Categorical) continue;
        for (std::size_t r = 0; r < f.values.rows; ++r) {
            double v = f.values.at(r, c);
            if (!std::isfinite(v) || v < 0.0 || v != std::floor(v)) {
                throw invalid_parameter_error("categorical factor '" + f.factor_names[c] +
                                              "' must hold nonnegative integer class indices (row " +
                                              std::to_string(r) + ")");
            }
        }
    }
    return f;
}

CodeMatrix make_code_matrix(Matrix values, std::vector<std::string> names) {
    if (values.rows == 0 || values.cols == 0) {
        throw insufficient_data_error("code matrix must have at least one row and one column");
    }
    CodeMatrix z;
    z.values = std::move(values);
    if (names.empty()) {
        for (std::size_t i = 0; i < z.values.cols; ++i) names.push_back(default_name("z", i));
    }
    if (names.size() != z.values.cols) {
        throw dimension_mismatch_error("code dimension names do not match the column count");
    }
    z.dim_names = std::move(names);
    return z;
}

std::string property_name(Property p) {
    switch (p) {
        case Property::Modularity: return "modularity";
        case Property::Compactness: return "compactness";
        case Property::Explicitness: return "explicitness";
        case Property::Holistic: return "holistic";
    }
    return "holistic";
}

ValidatedPair validate_pair(const FactorMatrix& factors, const CodeMatrix& codes) {
    if (factors.num_samples() != codes.num_samples()) {
        throw dimension_mismatch_error("factor rows (" + std::to_string(factors.num_samples()) +
                                       ") differ from code rows (" + std::to_string(codes.num_samples()) + ")");
    }
    check_finite(factors.values, "factor matrix");
    check_finite(codes.values, "code matrix");
    return ValidatedPair{factors, codes};
}

double rescale_by_chance(double raw, double chance) {
    if (!(chance >= 0.0 && chance < 1.0)) {
        throw invalid_parameter_error("chance level must lie in [0, 1)");
    }
    double scaled = (raw - chance) / (1.0 - chance);
    if (scaled < 0.0) return 0.0;
    if (scaled > 1.0) return 1.0;
    return scaled;
}

double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size());
}

double sample_stddev(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(x.size() - 1));
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw dimension_mismatch_error("correlation inputs differ in length");
    if (x.size() < 2) return 0.0;
    double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

bool all_finite(std::span<const double> x) {
    for (double v : x) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

}  // namespace dismet
