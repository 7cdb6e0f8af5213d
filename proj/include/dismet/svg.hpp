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

#include <string>
#include <vector>

#include "dismet/core.hpp"

namespace dismet {

// Native SVG emission: polyline charts and heatmaps with no plotting
// dependency. All coordinates print with 6 fixed decimals so output is
// byte-stable across runs.

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<SvgSeries>& series);

std::string svg_heatmap(const std::string& title, const std::vector<std::string>& labels,
                        const Matrix& values, double vmin, double vmax);

std::string svg_bar_chart(const std::string& title, const std::vector<std::string>& labels,
                          const std::vector<double>& values);

}  // namespace dismet
