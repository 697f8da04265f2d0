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

#include "gcnseg/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gcnseg/errors.hpp"
#include "gcnseg/parallel.hpp"

namespace gcnseg {

Interpolation interpolation_from_name(const std::string& name) {
    if (name == "bicubic") return Interpolation::Bicubic;
    if (name == "nearest" || name == "nearest-neighbor") return Interpolation::NearestNeighbor;
    if (name == "lanczos") return Interpolation::Lanczos;
    if (name == "inter-area" || name == "area") return Interpolation::InterArea;
    throw InputError("unknown interpolation '" + name +
                     "' (expected bicubic, nearest, lanczos, or inter-area)");
}

std::string interpolation_name(Interpolation method) {
    switch (method) {
        case Interpolation::Bicubic: return "bicubic";
        case Interpolation::NearestNeighbor: return "nearest";
        case Interpolation::Lanczos: return "lanczos";
        case Interpolation::InterArea: return "inter-area";
    }
    return "?";
}

void PreprocConfig::validate() const {
    if (pooled_channels == 0) throw InputError("preproc: pooled channel count must be >= 1");
    if (scale == 0) throw InputError("preproc: scale must be >= 1");
    if (patch_size == 0) throw InputError("preproc: patch size must be >= 1");
}

DenseMatrix FeatureGrid::to_node_matrix() && {
    DenseMatrix m;
    m.rows = height * width;
    m.cols = channels;
    m.data = std::move(data);
    return m;
}

DenseMatrix stack_series(const SceneSeries& scene) {
    scene.validate();
    const std::size_t pixels = scene.height * scene.width;
    const std::size_t stacked_channels = scene.frames * scene.bands;
    DenseMatrix out(pixels, stacked_channels);
    for (std::size_t t = 0; t < scene.frames; ++t) {
        for (std::size_t b = 0; b < scene.bands; ++b) {
            const std::size_t c = t * scene.bands + b;
            const double* plane =
                scene.reflectance.data() + (t * scene.bands + b) * pixels;
            for (std::size_t p = 0; p < pixels; ++p) out.data[p * stacked_channels + c] = plane[p];
        }
    }
    return out;
}

std::vector<double> adaptive_max_pool(std::span<const double> input, std::size_t k) {
    const std::size_t length = input.size();
    if (k == 0) throw InputError("adaptive_max_pool: k must be >= 1");
    if (length < k)
        throw InputError("adaptive_max_pool: input length " + std::to_string(length) +
                         " is shorter than k = " + std::to_string(k));
    std::vector<double> out(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t start = i * length / k;
        const std::size_t end = ((i + 1) * length + k - 1) / k;
        double best = input[start];
        for (std::size_t j = start + 1; j < end; ++j) best = std::max(best, input[j]);
        out[i] = best;
    }
    return out;
}

FeatureGrid pool_features(const DenseMatrix& stacked, std::size_t height,
                          std::size_t width, std::size_t k) {
    if (stacked.rows != height * width)
        throw InputError("pool_features: row count does not match grid dimensions");
    FeatureGrid out(height, width, k);
    parallel_for(stacked.rows, 1024, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            const auto pooled = adaptive_max_pool(stacked.row(p), k);
            std::copy(pooled.begin(), pooled.end(), out.data.begin() + p * k);
        }
    });
    return out;
}

namespace {

// Keys cubic convolution kernel, a = -0.5.
double keys_weight(double t) {
    const double x = std::abs(t);
    if (x <= 1.0) return (1.5 * x - 2.5) * x * x + 1.0;
    if (x < 2.0) return ((-0.5 * x + 2.5) * x - 4.0) * x + 2.0;
    return 0.0;
}

// sin(pi * t) with argument reduction, exactly zero at integers.
double sin_pi(double t) {
    const double n = std::round(t);
    const double s = std::sin(std::numbers::pi * (t - n));
    return static_cast<long long>(n) % 2 == 0 ? s : -s;
}

// 3-lobe Lanczos window.
double lanczos3_weight(double t) {
    const double x = std::abs(t);
    if (x >= 3.0) return 0.0;
    if (x == 0.0) return 1.0;
    const double px = std::numbers::pi * x;
    return 3.0 * sin_pi(x) * sin_pi(x / 3.0) / (px * px);
}

struct AxisTaps {
    std::vector<long long> index;  // clamped source indices
    std::vector<double> weight;    // normalized
    std::size_t anchor = 0;        // position of the nearest tap
};

AxisTaps make_taps(std::size_t dst, std::size_t scale, std::size_t extent,
                   Interpolation method) {
    const double src =
        (static_cast<double>(dst) + 0.5) / static_cast<double>(scale) - 0.5;
    const long long base = static_cast<long long>(std::floor(src));
    const double frac = src - static_cast<double>(base);

    AxisTaps taps;
    switch (method) {
        case Interpolation::NearestNeighbor: {
            // Halves round toward the lower index.
            taps.index.push_back(static_cast<long long>(std::ceil(src - 0.5)));
            taps.weight.push_back(1.0);
            break;
        }
        case Interpolation::InterArea: {
            // No enlargement rule of its own: bilinear between centers.
            taps.index = {base, base + 1};
            taps.weight = {1.0 - frac, frac};
            taps.anchor = frac < 0.5 ? 0 : 1;
            break;
        }
        case Interpolation::Bicubic: {
            for (long long i = base - 1; i <= base + 2; ++i) {
                taps.index.push_back(i);
                taps.weight.push_back(keys_weight(src - static_cast<double>(i)));
            }
            taps.anchor = frac < 0.5 ? 1 : 2;
            break;
        }
        case Interpolation::Lanczos: {
            for (long long i = base - 2; i <= base + 3; ++i) {
                taps.index.push_back(i);
                taps.weight.push_back(lanczos3_weight(src - static_cast<double>(i)));
            }
            taps.anchor = frac < 0.5 ? 2 : 3;
            break;
        }
    }
    double sum = 0.0;
    for (double w : taps.weight) sum += w;
    for (double& w : taps.weight) w /= sum;
    // Border replication: clamp after the weights are fixed.
    const long long last = static_cast<long long>(extent) - 1;
    for (long long& i : taps.index) i = std::clamp(i, 0LL, last);
    return taps;
}

}  // namespace

FeatureGrid upsample(const FeatureGrid& grid, const PreprocConfig& cfg) {
    cfg.validate();
    if (grid.height == 0 || grid.width == 0 || grid.channels == 0)
        throw InputError("upsample: empty feature grid");
    const std::size_t out_h = grid.height * cfg.scale;
    const std::size_t out_w = grid.width * cfg.scale;
    const std::size_t nch = grid.channels;

    std::vector<AxisTaps> rows_taps(out_h), cols_taps(out_w);
    for (std::size_t y = 0; y < out_h; ++y)
        rows_taps[y] = make_taps(y, cfg.scale, grid.height, cfg.interpolation);
    for (std::size_t x = 0; x < out_w; ++x)
        cols_taps[x] = make_taps(x, cfg.scale, grid.width, cfg.interpolation);

    FeatureGrid out(out_h, out_w, nch);
    parallel_for(out_h, 16, [&](std::size_t y_begin, std::size_t y_end) {
        for (std::size_t y = y_begin; y < y_end; ++y) {
            const AxisTaps& ty = rows_taps[y];
            for (std::size_t x = 0; x < out_w; ++x) {
                const AxisTaps& tx = cols_taps[x];
                // Anchored form: value = v_a + sum w * (v - v_a). A constant
                // input therefore reproduces bit-exactly.
                const double* anchor = grid.data.data() +
                    (static_cast<std::size_t>(ty.index[ty.anchor]) * grid.width +
                     static_cast<std::size_t>(tx.index[tx.anchor])) * nch;
                double* dst = out.data.data() + (y * out_w + x) * nch;
                std::copy(anchor, anchor + nch, dst);
                for (std::size_t j = 0; j < ty.index.size(); ++j) {
                    const std::size_t src_row = static_cast<std::size_t>(ty.index[j]);
                    for (std::size_t i = 0; i < tx.index.size(); ++i) {
                        const double w = ty.weight[j] * tx.weight[i];
                        if (w == 0.0) continue;
                        const double* src = grid.data.data() +
                            (src_row * grid.width + static_cast<std::size_t>(tx.index[i])) * nch;
                        for (std::size_t c = 0; c < nch; ++c)
                            dst[c] += w * (src[c] - anchor[c]);
                    }
                }
            }
        }
    });
    return out;
}

PatchIndex split_patches(std::size_t height, std::size_t width, std::size_t patch_size) {
    if (patch_size == 0) throw InputError("split_patches: patch size must be >= 1");
    if (height == 0 || width == 0) throw InputError("split_patches: empty grid");
    PatchIndex index;
    index.scene_height = height;
    index.scene_width = width;
    for (std::size_t y = 0; y < height; y += patch_size) {
        const std::size_t h = std::min(patch_size, height - y);
        for (std::size_t x = 0; x < width; x += patch_size) {
            const std::size_t w = std::min(patch_size, width - x);
            index.rects.push_back({y, x, h, w});
        }
    }
    return index;
}

FeatureGrid extract_patch(const FeatureGrid& grid, const PatchRect& rect) {
    if (rect.y + rect.height > grid.height || rect.x + rect.width > grid.width)
        throw InputError("extract_patch: rect outside the grid");
    FeatureGrid out(rect.height, rect.width, grid.channels);
    for (std::size_t y = 0; y < rect.height; ++y) {
        const double* src =
            grid.data.data() + ((rect.y + y) * grid.width + rect.x) * grid.channels;
        std::copy(src, src + rect.width * grid.channels,
                  out.data.begin() + y * rect.width * grid.channels);
    }
    return out;
}

std::vector<std::uint8_t> reassemble(const std::vector<std::vector<std::uint8_t>>& patch_maps,
                                     const PatchIndex& index, std::size_t scale) {
    if (patch_maps.size() != index.rects.size())
        throw InputError("reassemble: patch count does not match the index");
    if (scale == 0) throw InputError("reassemble: scale must be >= 1");
    const std::size_t out_h = index.scene_height * scale;
    const std::size_t out_w = index.scene_width * scale;
    std::vector<std::uint8_t> covered(index.scene_height * index.scene_width, 0);
    std::vector<std::uint8_t> out(out_h * out_w, 0);
    for (std::size_t p = 0; p < index.rects.size(); ++p) {
        const PatchRect& r = index.rects[p];
        if (r.y + r.height > index.scene_height || r.x + r.width > index.scene_width)
            throw InputError("reassemble: rect outside the scene");
        if (patch_maps[p].size() != r.height * scale * r.width * scale)
            throw InputError("reassemble: patch map size does not match its rect");
        for (std::size_t y = 0; y < r.height; ++y)
            for (std::size_t x = 0; x < r.width; ++x) {
                std::uint8_t& c = covered[(r.y + y) * index.scene_width + (r.x + x)];
                if (c) throw InputError("reassemble: overlapping patches");
                c = 1;
            }
        const std::size_t pw = r.width * scale;
        for (std::size_t y = 0; y < r.height * scale; ++y) {
            std::copy(patch_maps[p].begin() + y * pw, patch_maps[p].begin() + (y + 1) * pw,
                      out.begin() + (r.y * scale + y) * out_w + r.x * scale);
        }
    }
    for (std::uint8_t c : covered)
        if (!c) throw InputError("reassemble: gap in patch coverage");
    return out;
}

}  // namespace gcnseg
