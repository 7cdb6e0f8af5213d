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

#include "dismet/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dismet/rng.hpp"

namespace dismet {

namespace {

constexpr double kPi = 3.14159265358979323846;

Matrix uniform_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rng.next_double();
    }
    return m;
}

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw invalid_parameter_error("alpha must lie in [0, 1]");
}

}  // namespace

Generated gen_noise_mix(std::size_t num_factors, std::size_t num_samples, double alpha,
                        std::uint64_t seed) {
    check_alpha(alpha);
    if (num_factors == 0 || num_samples == 0) throw invalid_parameter_error("M and N must be positive");
    Rng factor_rng = Rng(seed).split(1);
    Rng noise_rng = Rng(seed).split(2);
    Matrix v = uniform_matrix(num_samples, num_factors, factor_rng);
    Matrix n = uniform_matrix(num_samples, num_factors, noise_rng);
    Matrix z(num_samples, num_factors);
    for (std::size_t r = 0; r < num_samples; ++r) {
        for (std::size_t c = 0; c < num_factors; ++c) {
            z.at(r, c) = (1.0 - alpha) * v.at(r, c) + alpha * n.at(r, c);
        }
    }
    return Generated{make_factor_matrix(std::move(v)), make_code_matrix(std::move(z))};
}

Generated gen_rotation(std::size_t num_factors, std::size_t num_samples, double alpha,
                       std::uint64_t seed) {
    check_alpha(alpha);
    if (num_factors < 2) throw invalid_parameter_error("rotation mix needs at least 2 factors");
    Rng factor_rng = Rng(seed).split(1);
    Matrix v = uniform_matrix(num_samples, num_factors, factor_rng);
    // Circulant R: row i has 1-alpha at column i and alpha at column i+1
    // (wrapping), so z_j = (1-alpha) v_j + alpha v_{j-1}.
    Matrix z(num_samples, num_factors);
    for (std::size_t r = 0; r < num_samples; ++r) {
        for (std::size_t j = 0; j < num_factors; ++j) {
            std::size_t prev = (j + num_factors - 1) % num_factors;
            z.at(r, j) = (1.0 - alpha) * v.at(r, j) + alpha * v.at(r, prev);
        }
    }
    return Generated{make_factor_matrix(std::move(v)), make_code_matrix(std::move(z))};
}

Generated gen_angles(std::size_t num_samples, AngleMode mode, int redundancy, std::uint64_t seed) {
    if (num_samples == 0) throw invalid_parameter_error("N must be positive");
    std::size_t num_factors;
    if (mode == AngleMode::Trig) {
        num_factors = 4;
    } else {
        if (redundancy != 2 && redundancy != 4) {
            throw invalid_parameter_error("redundant angle encoding supports redundancy 2 or 4");
        }
        num_factors = static_cast<std::size_t>(8 / redundancy);
    }
    const std::size_t d = 8;

    Rng angle_rng = Rng(seed).split(1);
    Matrix v(num_samples, num_factors);
    Matrix z(num_samples, d);
    const double level = kPi / 5.0;
    for (std::size_t r = 0; r < num_samples; ++r) {
        for (std::size_t i = 0; i < num_factors; ++i) {
            double theta = 2.0 * kPi * angle_rng.next_double();
            // Recorded factor value is the angle quantized to 10 levels; the
            // code sees the raw angle.
            double q = std::floor(theta / level);
            if (q > 9.0) q = 9.0;
            v.at(r, i) = q * level;
            if (mode == AngleMode::Trig) {
                z.at(r, 2 * i) = std::cos(theta);
                z.at(r, 2 * i + 1) = std::sin(theta);
            } else {
                for (int k = 0; k < redundancy; ++k) {
                    z.at(r, i * static_cast<std::size_t>(redundancy) + static_cast<std::size_t>(k)) = theta;
                }
            }
        }
    }
    return Generated{make_factor_matrix(std::move(v)), make_code_matrix(std::move(z))};
}

Generated gen_tangent(std::size_t num_factors, std::size_t num_samples, double alpha,
                      std::uint64_t seed) {
    check_alpha(alpha);
    if (num_factors == 0 || num_samples == 0) throw invalid_parameter_error("M and N must be positive");
    Rng factor_rng = Rng(seed).split(1);
    Matrix v = uniform_matrix(num_samples, num_factors, factor_rng);

    const double k = std::pow(1000.0, alpha - 0.25);
    const double scale = 1.0 / k;  // 1000^(0.25 - alpha)
    const double omega = 2.0 * std::atan(k / 2.0);

    Matrix z(num_samples, num_factors);
    for (std::size_t r = 0; r < num_samples; ++r) {
        for (std::size_t c = 0; c < num_factors; ++c) {
            z.at(r, c) = scale * std::tan(omega * (v.at(r, c) - 0.5)) + 0.5;
        }
    }
    return Generated{make_factor_matrix(std::move(v)), make_code_matrix(std::move(z))};
}

FactorMatrix mask_factors(const FactorMatrix& factors, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw invalid_parameter_error("fraction of measured factors must lie in (0, 1]");
    }
    const std::size_t M = factors.num_factors();
    std::size_t keep = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(M) - 1e-12));
    if (keep == 0) throw invalid_parameter_error("masking would keep zero factor columns");
    if (keep >= M) return factors;

    std::vector<std::size_t> cols(M);
    std::iota(cols.begin(), cols.end(), 0);
    Rng rng = Rng(seed).split(3);
    for (std::size_t i = 0; i < keep; ++i) {
        std::size_t j = i + rng.next_below(M - i);
        std::swap(cols[i], cols[j]);
    }
    cols.resize(keep);
    std::sort(cols.begin(), cols.end());

    Matrix values(factors.num_samples(), keep);
    std::vector<std::string> names(keep);
    std::vector<FactorKind> kinds(keep);
    for (std::size_t k = 0; k < keep; ++k) {
        names[k] = factors.factor_names[cols[k]];
        kinds[k] = factors.kinds[cols[k]];
        for (std::size_t r = 0; r < factors.num_samples(); ++r) {
            values.at(r, k) = factors.values.at(r, cols[k]);
        }
    }
    return make_factor_matrix(std::move(values), std::move(names), std::move(kinds));
}

Generated generate(const ExperimentSpec& spec, std::uint64_t seed) {
    switch (spec.generator) {
        case GeneratorKind::NoiseMix:
            return gen_noise_mix(spec.num_factors, spec.num_samples, spec.alpha, seed);
        case GeneratorKind::Rotation:
            return gen_rotation(spec.num_factors, spec.num_samples, spec.alpha, seed);
        case GeneratorKind::AngleTrig:
            return gen_angles(spec.num_samples, AngleMode::Trig, 2, seed);
        case GeneratorKind::AngleRedundant:
            return gen_angles(spec.num_samples, AngleMode::Redundant, spec.redundancy, seed);
        case GeneratorKind::Tangent:
            return gen_tangent(spec.num_factors, spec.num_samples, spec.alpha, seed);
        case GeneratorKind::HiddenFactors: {
            Generated g = gen_noise_mix(spec.num_factors, spec.num_samples, 0.0, seed);
            g.factors = mask_factors(g.factors, spec.fraction, seed);
            return g;
        }
    }
    throw invalid_parameter_error("unknown generator kind");
}

BinningChoice recommended_binning(GeneratorKind kind, int bins) {
    BinningChoice c;
    switch (kind) {
        case GeneratorKind::NoiseMix:
        case GeneratorKind::Rotation:
        case GeneratorKind::Tangent:
        case GeneratorKind::HiddenFactors:
            c.factor_bins = BinningSpec::fixed(bins, 0.0, 1.0);
            c.code_bins = BinningSpec::fixed(bins, 0.0, 1.0);
            break;
        case GeneratorKind::AngleTrig:
        case GeneratorKind::AngleRedundant:
            c.factor_bins = BinningSpec::empirical(bins);
            c.code_bins = BinningSpec::empirical(bins);
            break;
    }
    return c;
}

}  // namespace dismet
