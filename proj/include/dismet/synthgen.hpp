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
#include <string>
#include <vector>

#include "dismet/core.hpp"
#include "dismet/discretize.hpp"

namespace dismet {

// Fully controlled factor/code pairs: the representation map z = f(v) is
// defined directly, so every property of the representation is known exactly.
struct Generated {
    FactorMatrix factors;
    CodeMatrix codes;
};

// z = (1 - alpha) * v + alpha * n with n fresh uniform noise, d = M.
// The factor draw depends only on the seed, so an alpha sweep at a fixed seed
// scores the same factor realizations throughout.
Generated gen_noise_mix(std::size_t num_factors, std::size_t num_samples, double alpha,
                        std::uint64_t seed);

// z = v R for the circulant mix matrix with 1-alpha on the diagonal and alpha
// on the next off-diagonal (wrapping), so each code blends two factors.
Generated gen_rotation(std::size_t num_factors, std::size_t num_samples, double alpha,
                       std::uint64_t seed);

enum class AngleMode { Trig, Redundant };

// Angle-valued factors. Underlying angles are continuous uniform on [0, 2*pi);
// the recorded factor value is the angle quantized to the 10 levels
// {0, pi/5, ..., 9pi/5} while codes are built from the continuous angle.
//   Trig:         4 factors -> [cos t1, sin t1, ..., cos t4, sin t4]
//   Redundant(2): 4 factors -> [t1, t1, t2, t2, t3, t3, t4, t4]
//   Redundant(4): 2 factors -> [t1, t1, t1, t1, t2, t2, t2, t2]
Generated gen_angles(std::size_t num_samples, AngleMode mode, int redundancy, std::uint64_t seed);

// Elementwise monotone map z = s * tan(w * (v - 0.5)) + 0.5 with
// s = 1000^(0.25 - alpha) and w = 2 * atan(1000^(alpha - 0.25) / 2); near
// linear at alpha = 0, tangent-shaped at alpha = 1, and exactly fixing
// {0, 0.5, 1}.
Generated gen_tangent(std::size_t num_factors, std::size_t num_samples, double alpha,
                      std::uint64_t seed);

// Keeps ceil(fraction * M) factor columns (seeded deterministic choice,
// original order preserved); codes are untouched. Emulates generative factors
// the metrics cannot see.
FactorMatrix mask_factors(const FactorMatrix& factors, double fraction, std::uint64_t seed);

enum class GeneratorKind { NoiseMix, Rotation, AngleTrig, AngleRedundant, Tangent, HiddenFactors };

// Declarative description of one controlled experiment run.
struct ExperimentSpec {
    GeneratorKind generator = GeneratorKind::NoiseMix;
    double alpha = 0.0;          // noise / rotation / tangent sweeps
    int redundancy = 2;          // angle redundant variants
    double fraction = 1.0;       // hidden-factor variant
    std::size_t num_factors = 8;
    std::size_t num_samples = 20000;
    int bins = 10;
    std::vector<std::uint64_t> seeds;
};

Generated generate(const ExperimentSpec& spec, std::uint64_t seed);

// Binning suited to each generator: fixed [0, 1] bounds where the data lives
// there by construction, empirical range otherwise.
struct BinningChoice {
    BinningSpec factor_bins;
    BinningSpec code_bins;
};

BinningChoice recommended_binning(GeneratorKind kind, int bins);

}  // namespace dismet
