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
#include <cstdint>
#include <vector>

namespace gcnseg {

/// Label raster values.
constexpr std::uint8_t kBackground = 0;
constexpr std::uint8_t kCultivated = 1;
constexpr std::uint8_t kExcluded = 255;

/// A co-registered multitemporal multispectral raster stack: `frames`
/// acquisitions of `bands` bands over a height x width pixel grid.
/// Reflectance is stored as 64-bit floats in memory (files hold 32-bit).
///
/// `validity` (optional) marks usable, cloud-free samples per frame and
/// pixel. `label` (optional) is the ground truth at kLabelScale times the
/// spatial resolution, with kExcluded marking pixels outside evaluation.
struct SceneSeries {
    std::size_t frames = 0;  // T
    std::size_t bands = 0;   // B
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> reflectance;       // [t][b][y][x]
    std::vector<std::uint8_t> validity;    // [t][y][x]; empty = all valid
    std::vector<std::uint8_t> label;       // [4h][4w]; empty = unlabeled

    static constexpr std::size_t kLabelScale = 4;

    double at(std::size_t t, std::size_t b, std::size_t y, std::size_t x) const {
        return reflectance[((t * bands + b) * height + y) * width + x];
    }
    double& at(std::size_t t, std::size_t b, std::size_t y, std::size_t x) {
        return reflectance[((t * bands + b) * height + y) * width + x];
    }

    bool valid_at(std::size_t t, std::size_t y, std::size_t x) const {
        return validity.empty() || validity[(t * height + y) * width + x] != 0;
    }

    bool has_validity() const { return !validity.empty(); }
    bool has_label() const { return !label.empty(); }

    std::size_t label_height() const { return height * kLabelScale; }
    std::size_t label_width() const { return width * kLabelScale; }

    /// Throws InputError when buffer sizes disagree with the dimensions,
    /// reflectance is non-finite, or label bytes are out of range.
    void validate() const;
};

}  // namespace gcnseg
