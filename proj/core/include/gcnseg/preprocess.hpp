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
#include <span>
#include <string>
#include <vector>

#include "gcnseg/numerics.hpp"
#include "gcnseg/scene.hpp"

namespace gcnseg {

enum class Interpolation { Bicubic, NearestNeighbor, Lanczos, InterArea };

Interpolation interpolation_from_name(const std::string& name);
std::string interpolation_name(Interpolation method);

/// Feature-pipeline settings: channel count after pooling, spatial
/// upsampling factor and method, and the low-resolution patch size.
struct PreprocConfig {
    std::size_t pooled_channels = 80;  // k
    std::size_t scale = 4;
    Interpolation interpolation = Interpolation::Bicubic;
    std::size_t patch_size = 100;  // low-res pixels

    void validate() const;
};

/// A height x width grid of per-pixel feature vectors, stored [y][x][c].
/// The same memory read as (height * width) x channels is the row-major
/// node-feature matrix with node index y * width + x.
struct FeatureGrid {
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t channels = 0;
    std::vector<double> data;

    FeatureGrid() = default;
    FeatureGrid(std::size_t h, std::size_t w, std::size_t c)
        : height(h), width(w), channels(c), data(h * w * c, 0.0) {}

    double operator()(std::size_t y, std::size_t x, std::size_t c) const {
        return data[(y * width + x) * channels + c];
    }
    double& operator()(std::size_t y, std::size_t x, std::size_t c) {
        return data[(y * width + x) * channels + c];
    }

    DenseMatrix to_node_matrix() &&;
};

/// Flattens a series into per-pixel channel rows: row y * W + x holds the
/// T*B stacked values with channel index t * B + b (time-major).
DenseMatrix stack_series(const SceneSeries& scene);

/// Reduces a length-L row to k values: output[i] is the maximum of
/// input[floor(i*L/k) .. ceil((i+1)*L/k)). Windows cover the input and may
/// overlap when k does not divide L. Requires L >= k >= 1.
std::vector<double> adaptive_max_pool(std::span<const double> input, std::size_t k);

/// adaptive_max_pool applied to every row of the stacked matrix.
FeatureGrid pool_features(const DenseMatrix& stacked, std::size_t height,
                          std::size_t width, std::size_t k);

/// Resamples every channel to (scale*height) x (scale*width). The source
/// coordinate of output pixel d is (d + 0.5) / scale - 0.5 and taps outside
/// the grid replicate the border sample.
///
/// Bicubic uses the Keys kernel (a = -0.5), Lanczos a 3-lobe window,
/// NearestNeighbor rounds halves toward the lower index, and InterArea,
/// which has no enlargement rule of its own, degenerates to bilinear
/// interpolation of pixel centers. Weights are renormalized and applied
/// relative to the nearest tap, so constant inputs reproduce exactly.
FeatureGrid upsample(const FeatureGrid& grid, const PreprocConfig& cfg);

struct PatchRect {
    std::size_t y = 0;
    std::size_t x = 0;
    std::size_t height = 0;
    std::size_t width = 0;
};

/// Non-overlapping tiling of a height x width grid in low-res coordinates,
/// in raster order. Right/bottom patches may be smaller than patch_size.
struct PatchIndex {
    std::size_t scene_height = 0;
    std::size_t scene_width = 0;
    std::vector<PatchRect> rects;
};

PatchIndex split_patches(std::size_t height, std::size_t width, std::size_t patch_size);

FeatureGrid extract_patch(const FeatureGrid& grid, const PatchRect& rect);

/// Inverse of splitting: stitches per-patch maps (each scale*rect sized)
/// back into the full scale*scene map. Throws InputError on any overlap,
/// gap, or size mismatch.
std::vector<std::uint8_t> reassemble(const std::vector<std::vector<std::uint8_t>>& patch_maps,
                                     const PatchIndex& index, std::size_t scale);

}  // namespace gcnseg
