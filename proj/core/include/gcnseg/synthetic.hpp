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

#include <cstdint>
#include <vector>

#include "gcnseg/scene.hpp"

namespace gcnseg {

/// Parameters of the synthetic cultivated-land scene generator.
///
/// Parcels are axis-aligned rectangles placed at arbitrary *high-res*
/// positions, so their boundaries genuinely cut through low-res pixels.
/// The binary class map is rasterized at 4x the image resolution, becomes
/// the ground-truth label (with an excluded border), and is box-averaged
/// 4x down to per-pixel cultivated fractions that drive the reflectance.
struct SynthConfig {
    std::uint64_t seed = 0;
    std::size_t frames = 8;   // T
    std::size_t bands = 12;   // B
    std::size_t height = 64;  // low-res pixels
    std::size_t width = 64;

    std::size_t parcels_min = 4;
    std::size_t parcels_max = 7;
    std::size_t parcel_extent_min = 12;  // low-res pixels
    std::size_t parcel_extent_max = 28;

    /// Per-band reflectance of pure background / cultivated surfaces.
    /// Leave empty to derive defaults from `base_reflectance` and
    /// `spectral_gap`.
    std::vector<double> background_spectrum;
    std::vector<double> cultivated_spectrum;
    double base_reflectance = 0.18;
    double spectral_gap = 0.25;

    /// Cultivated reflectance is modulated by 1 + a * sin(2*pi*t/T).
    double seasonal_amplitude = 0.35;
    double noise_std = 0.02;
    double cloud_fraction = 0.0;   // expected masked fraction per frame
    std::size_t excluded_border = 2;  // low-res pixels marked 255 in the label

    void validate() const;

    /// The spectra actually used (defaults filled in).
    std::vector<double> effective_background() const;
    std::vector<double> effective_cultivated() const;
};

/// Deterministic under the seed: identical configs produce byte-identical
/// scenes, labels, and validity masks.
SceneSeries generate_synthetic(const SynthConfig& cfg);

}  // namespace gcnseg
