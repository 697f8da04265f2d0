// Copyright 2026 The gcnseg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>

#include "gcnseg/preprocess.hpp"
#include "gcnseg/scene.hpp"

namespace gcnseg {

/// Statistics extracted per pixel and band, in output order.
enum PixelStat : std::size_t {
    kStatMin = 0,
    kStatMax,
    kStatMean,
    kStatMedian,
    kStatStd,
    kStatQ1,
    kStatQ3,
    kStatSpan,
    kStatCount  // 8
};

/// Per-pixel statistical features over a spatial window and the whole
/// time axis: for every band, the 8 statistics above are computed from
/// all (frame, neighbor) samples in the window x window neighborhood,
/// skipping samples the validity mask flags as unusable.
///
/// Windows clip at the image border. Quantiles interpolate linearly
/// between order statistics and the standard deviation is the population
/// form. A cell whose samples are all invalid yields eight zeros.
///
/// Output is height x width x (8 * bands), channel index b * 8 + stat.
FeatureGrid extract_stat_features(const SceneSeries& scene, std::size_t window = 5);

}  // namespace gcnseg
