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

#include "gcnseg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gcnseg/errors.hpp"
#include "gcnseg/rng.hpp"

namespace gcnseg {

namespace {

constexpr std::size_t kScale = SceneSeries::kLabelScale;

std::vector<double> default_spectrum(std::size_t bands, double base, double gap_share) {
    // A mild slope plus a per-band ripple keeps the bands distinct.
    std::vector<double> s(bands);
    for (std::size_t b = 0; b < bands; ++b)
        s[b] = base + 0.015 * static_cast<double>(b) +
               gap_share * (1.0 + 0.3 * std::sin(1.7 * static_cast<double>(b)));
    return s;
}

}  // namespace

void SynthConfig::validate() const {
    if (frames == 0 || bands == 0 || height == 0 || width == 0)
        throw InputError("synth: all dimensions must be positive");
    if (parcels_min == 0 || parcels_min > parcels_max)
        throw InputError("synth: parcel count range is empty");
    if (parcel_extent_min == 0 || parcel_extent_min > parcel_extent_max)
        throw InputError("synth: parcel extent range is empty");
    if (parcel_extent_max > height || parcel_extent_max > width)
        throw InputError("synth: parcels may not be larger than the scene");
    if (!background_spectrum.empty() && background_spectrum.size() != bands)
        throw InputError("synth: background spectrum length != bands");
    if (!cultivated_spectrum.empty() && cultivated_spectrum.size() != bands)
        throw InputError("synth: cultivated spectrum length != bands");
    if (noise_std < 0.0) throw InputError("synth: noise std must be >= 0");
    if (cloud_fraction < 0.0 || cloud_fraction >= 1.0)
        throw InputError("synth: cloud fraction must be in [0, 1)");
    if (2 * excluded_border >= height || 2 * excluded_border >= width)
        throw InputError("synth: excluded border swallows the whole scene");
}

std::vector<double> SynthConfig::effective_background() const {
    return background_spectrum.empty() ? default_spectrum(bands, base_reflectance, 0.0)
                                       : background_spectrum;
}

std::vector<double> SynthConfig::effective_cultivated() const {
    if (!cultivated_spectrum.empty()) return cultivated_spectrum;
    const auto bg = effective_background();
    std::vector<double> fg(bands);
    for (std::size_t b = 0; b < bands; ++b) fg[b] = bg[b] + spectral_gap;
    return fg;
}

SceneSeries generate_synthetic(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const std::size_t hi_h = cfg.height * kScale;
    const std::size_t hi_w = cfg.width * kScale;

    // Hi-res binary class map: union of randomly placed rectangles with
    // corners at arbitrary hi-res positions.
    std::vector<std::uint8_t> class_map(hi_h * hi_w, 0);
    const std::size_t parcel_count = rng.between(cfg.parcels_min, cfg.parcels_max);
    for (std::size_t p = 0; p < parcel_count; ++p) {
        const std::size_t ph = std::min(
            hi_h, kScale * rng.between(cfg.parcel_extent_min, cfg.parcel_extent_max) +
                      rng.below(kScale));
        const std::size_t pw = std::min(
            hi_w, kScale * rng.between(cfg.parcel_extent_min, cfg.parcel_extent_max) +
                      rng.below(kScale));
        const std::size_t y0 = rng.below(hi_h - ph + 1);
        const std::size_t x0 = rng.below(hi_w - pw + 1);
        for (std::size_t y = y0; y < y0 + ph; ++y)
            std::fill(class_map.begin() + y * hi_w + x0, class_map.begin() + y * hi_w + x0 + pw,
                      std::uint8_t{1});
    }

    // Cultivated fraction per low-res pixel (exact 4x4 box average).
    std::vector<double> fraction(cfg.height * cfg.width);
    for (std::size_t y = 0; y < cfg.height; ++y)
        for (std::size_t x = 0; x < cfg.width; ++x) {
            std::size_t hits = 0;
            for (std::size_t sy = 0; sy < kScale; ++sy)
                for (std::size_t sx = 0; sx < kScale; ++sx)
                    hits += class_map[(y * kScale + sy) * hi_w + (x * kScale + sx)];
            fraction[y * cfg.width + x] =
                static_cast<double>(hits) / static_cast<double>(kScale * kScale);
        }

    SceneSeries scene;
    scene.frames = cfg.frames;
    scene.bands = cfg.bands;
    scene.height = cfg.height;
    scene.width = cfg.width;
    scene.reflectance.resize(cfg.frames * cfg.bands * cfg.height * cfg.width);
    scene.validity.assign(cfg.frames * cfg.height * cfg.width, 1);

    const std::vector<double> bg = cfg.effective_background();
    const std::vector<double> fg = cfg.effective_cultivated();
    const std::size_t pixels = cfg.height * cfg.width;

    for (std::size_t t = 0; t < cfg.frames; ++t) {
        const double season =
            1.0 + cfg.seasonal_amplitude *
                      std::sin(2.0 * std::numbers::pi * static_cast<double>(t) /
                               static_cast<double>(cfg.frames));
        for (std::size_t b = 0; b < cfg.bands; ++b) {
            double* plane = scene.reflectance.data() + (t * cfg.bands + b) * pixels;
            for (std::size_t p = 0; p < pixels; ++p) {
                const double f = fraction[p];
                const double value = (1.0 - f) * bg[b] + f * fg[b] * season;
                plane[p] = value + cfg.noise_std * rng.next_gaussian();
            }
        }
        // Cloud cover: random rectangles until the target fraction is hit.
        if (cfg.cloud_fraction > 0.0) {
            std::uint8_t* valid = scene.validity.data() + t * pixels;
            const std::size_t target = static_cast<std::size_t>(
                std::ceil(cfg.cloud_fraction * static_cast<double>(pixels)));
            std::size_t masked = 0;
            while (masked < target) {
                // Rectangles may clip at the border so every pixel is reachable.
                const std::size_t ch = rng.between(2, std::max<std::size_t>(3, cfg.height / 4));
                const std::size_t cw = rng.between(2, std::max<std::size_t>(3, cfg.width / 4));
                const std::size_t cy = rng.below(cfg.height);
                const std::size_t cx = rng.below(cfg.width);
                for (std::size_t y = cy; y < std::min(cfg.height, cy + ch); ++y)
                    for (std::size_t x = cx; x < std::min(cfg.width, cx + cw); ++x) {
                        std::uint8_t& v = valid[y * cfg.width + x];
                        if (v) {
                            v = 0;
                            ++masked;
                            for (std::size_t b = 0; b < cfg.bands; ++b)
                                scene.reflectance[((t * cfg.bands + b) * cfg.height + y) *
                                                      cfg.width + x] = 0.0;
                        }
                    }
            }
        }
    }

    // Ground truth: the hi-res class map with the evaluation border blanked.
    scene.label = std::move(class_map);
    const std::size_t border = cfg.excluded_border * kScale;
    for (std::size_t y = 0; y < hi_h; ++y)
        for (std::size_t x = 0; x < hi_w; ++x)
            if (y < border || x < border || y >= hi_h - border || x >= hi_w - border)
                scene.label[y * hi_w + x] = kExcluded;

    scene.validate();
    return scene;
}

}  // namespace gcnseg
