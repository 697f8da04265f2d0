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

#include "gcnseg/stat_features.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gcnseg/errors.hpp"
#include "gcnseg/parallel.hpp"

namespace gcnseg {

namespace {

// Linear interpolation between order statistics of a sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double p) {
    const double h = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

void fill_stats(std::vector<double>& samples, double* out) {
    if (samples.empty()) {
        std::fill(out, out + kStatCount, 0.0);
        return;
    }
    std::sort(samples.begin(), samples.end());
    double sum = 0.0;
    for (double v : samples) sum += v;
    const double mean = sum / static_cast<double>(samples.size());
    double sq = 0.0;
    for (double v : samples) sq += (v - mean) * (v - mean);
    out[kStatMin] = samples.front();
    out[kStatMax] = samples.back();
    out[kStatMean] = mean;
    out[kStatMedian] = quantile_sorted(samples, 0.5);
    out[kStatStd] = std::sqrt(sq / static_cast<double>(samples.size()));
    out[kStatQ1] = quantile_sorted(samples, 0.25);
    out[kStatQ3] = quantile_sorted(samples, 0.75);
    out[kStatSpan] = samples.back() - samples.front();
}

}  // namespace

FeatureGrid extract_stat_features(const SceneSeries& scene, std::size_t window) {
    scene.validate();
    if (window == 0 || window % 2 == 0)
        throw InputError("extract_stat_features: window must be odd and >= 1");
    const std::size_t radius = window / 2;
    FeatureGrid out(scene.height, scene.width, kStatCount * scene.bands);

    parallel_for(scene.height, 4, [&](std::size_t y_begin, std::size_t y_end) {
        std::vector<double> samples;
        samples.reserve(window * window * scene.frames);
        for (std::size_t y = y_begin; y < y_end; ++y) {
            const std::size_t y0 = y >= radius ? y - radius : 0;
            const std::size_t y1 = std::min(scene.height - 1, y + radius);
            for (std::size_t x = 0; x < scene.width; ++x) {
                const std::size_t x0 = x >= radius ? x - radius : 0;
                const std::size_t x1 = std::min(scene.width - 1, x + radius);
                for (std::size_t b = 0; b < scene.bands; ++b) {
                    samples.clear();
                    for (std::size_t t = 0; t < scene.frames; ++t)
                        for (std::size_t ny = y0; ny <= y1; ++ny)
                            for (std::size_t nx = x0; nx <= x1; ++nx)
                                if (scene.valid_at(t, ny, nx))
                                    samples.push_back(scene.at(t, b, ny, nx));
                    fill_stats(samples, &out(y, x, b * kStatCount));
                }
            }
        }
    });
    return out;
}

}  // namespace gcnseg
