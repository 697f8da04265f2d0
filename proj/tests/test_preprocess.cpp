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

#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "gcnseg/errors.hpp"
#include "gcnseg/preprocess.hpp"
#include "gcnseg/rng.hpp"
#include "oracles.hpp"

using namespace gcnseg;
namespace oracle = gcnseg::testing;

namespace {

SceneSeries make_scene(std::size_t t, std::size_t b, std::size_t h, std::size_t w) {
    SceneSeries s;
    s.frames = t;
    s.bands = b;
    s.height = h;
    s.width = w;
    s.reflectance.assign(t * b * h * w, 0.0);
    return s;
}

FeatureGrid constant_grid(std::size_t h, std::size_t w, std::size_t c, double value) {
    FeatureGrid g(h, w, c);
    std::fill(g.data.begin(), g.data.end(), value);
    return g;
}

constexpr Interpolation kAllMethods[] = {Interpolation::Bicubic, Interpolation::NearestNeighbor,
                                         Interpolation::Lanczos, Interpolation::InterArea};

}  // namespace

TEST_SUITE("preprocess") {

TEST_CASE("stack_series layouts") {
    SUBCASE("single frame is an identity reshape") {
        SceneSeries s = make_scene(1, 2, 2, 3);
        for (std::size_t i = 0; i < s.reflectance.size(); ++i)
            s.reflectance[i] = static_cast<double>(i);
        const DenseMatrix m = stack_series(s);
        CHECK(m.rows == 6);
        CHECK(m.cols == 2);
        // channel c of pixel p is plane c at pixel p
        for (std::size_t p = 0; p < 6; ++p)
            for (std::size_t c = 0; c < 2; ++c) CHECK(m(p, c) == s.reflectance[c * 6 + p]);
    }
    SUBCASE("time-major channel order") {
        SceneSeries s = make_scene(2, 1, 1, 1);
        s.at(0, 0, 0, 0) = 3.0;
        s.at(1, 0, 0, 0) = 7.0;
        const DenseMatrix m = stack_series(s);
        CHECK(m.rows == 1);
        CHECK(m(0, 0) == 3.0);
        CHECK(m(0, 1) == 7.0);
    }
    SUBCASE("challenge-sized shape contract") {
        const SceneSeries s = make_scene(19, 12, 500, 500);
        const DenseMatrix m = stack_series(s);
        CHECK(m.rows == 250000);
        CHECK(m.cols == 228);
    }
    SUBCASE("empty series is an input error") {
        CHECK_THROWS_AS((void)stack_series(make_scene(0, 1, 1, 1)), InputError);
    }
}

TEST_CASE("adaptive max pooling") {
    SUBCASE("identity when lengths match") {
        const std::vector<double> v{4, 1, 3};
        CHECK(adaptive_max_pool(v, 3) == v);
    }
    SUBCASE("hand windows") {
        CHECK(adaptive_max_pool(std::vector<double>{1, 3, 2, 5}, 2) ==
              std::vector<double>{3, 5});
        CHECK(adaptive_max_pool(std::vector<double>{1, 9, 2, 3, 4}, 2) ==
              std::vector<double>{9, 4});
    }
    SUBCASE("short input is an input error") {
        CHECK_THROWS_AS((void)adaptive_max_pool(std::vector<double>{1, 2}, 3), InputError);
        CHECK_THROWS_AS((void)adaptive_max_pool(std::vector<double>{1, 2}, 0), InputError);
    }
    SUBCASE("brute-force window oracle for every length up to 64") {
        Rng rng(5);
        for (std::size_t length = 1; length <= 64; ++length) {
            std::vector<double> input(length);
            for (double& v : input) v = rng.uniform(-10, 10);
            for (std::size_t k = 1; k <= length; ++k)
                CHECK(adaptive_max_pool(input, k) == oracle::naive_adaptive_pool(input, k));
        }
    }
    SUBCASE("monotonicity") {
        Rng rng(6);
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t length = 1 + rng.below(40);
            const std::size_t k = 1 + rng.below(length);
            std::vector<double> lo(length), hi(length);
            for (std::size_t i = 0; i < length; ++i) {
                lo[i] = rng.uniform(-5, 5);
                hi[i] = lo[i] + rng.uniform(0, 3);
            }
            const auto plo = adaptive_max_pool(lo, k);
            const auto phi = adaptive_max_pool(hi, k);
            for (std::size_t i = 0; i < k; ++i) CHECK(plo[i] <= phi[i]);
        }
    }
}

TEST_CASE("upsampling reproduces constants exactly for every method and scale") {
    Rng rng(8);
    for (const Interpolation method : kAllMethods) {
        for (std::size_t scale = 1; scale <= 8; ++scale) {
            const double value = rng.uniform(-3, 3);
            const FeatureGrid g = constant_grid(3, 4, 2, value);
            PreprocConfig cfg;
            cfg.scale = scale;
            cfg.interpolation = method;
            const FeatureGrid up = upsample(g, cfg);
            CHECK(up.height == 3 * scale);
            CHECK(up.width == 4 * scale);
            for (double v : up.data) CHECK(v == value);
        }
    }
}

TEST_CASE("scale 1 is the identity for every method") {
    Rng rng(9);
    FeatureGrid g(5, 6, 3);
    for (double& v : g.data) v = rng.uniform(-2, 2);
    for (const Interpolation method : kAllMethods) {
        PreprocConfig cfg;
        cfg.scale = 1;
        cfg.interpolation = method;
        const FeatureGrid up = upsample(g, cfg);
        CHECK(up.data == g.data);
    }
}

TEST_CASE("bicubic reproduces interior linear ramps to 1e-9") {
    const std::size_t w = 16, scale = 4;
    FeatureGrid g(1, w, 1);
    const double intercept = 0.7, slope = 0.35;
    for (std::size_t x = 0; x < w; ++x)
        g(0, x, 0) = intercept + slope * static_cast<double>(x);
    PreprocConfig cfg;
    cfg.scale = scale;
    cfg.interpolation = Interpolation::Bicubic;
    const FeatureGrid up = upsample(g, cfg);
    for (std::size_t x = 0; x < w * scale; ++x) {
        const double src = (static_cast<double>(x) + 0.5) / static_cast<double>(scale) - 0.5;
        const long long base = static_cast<long long>(std::floor(src));
        if (base - 1 < 0 || base + 2 >= static_cast<long long>(w)) continue;  // border taps
        const double expected = intercept + slope * src;
        CHECK(std::abs(up(0, x, 0) - expected) <= 1e-9);
    }
}

TEST_CASE("nearest neighbor picks centers, inter-area blends them") {
    FeatureGrid g(1, 2, 1);
    g(0, 0, 0) = 0.0;
    g(0, 1, 0) = 1.0;
    PreprocConfig cfg;
    cfg.scale = 2;
    cfg.interpolation = Interpolation::NearestNeighbor;
    const FeatureGrid nn = upsample(g, cfg);  // 2x4: both rows replicate
    CHECK(nn.data == std::vector<double>{0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0});

    cfg.interpolation = Interpolation::InterArea;
    const FeatureGrid bl = upsample(g, cfg);
    for (std::size_t row = 0; row < 2; ++row) {
        CHECK(bl(row, 0, 0) == 0.0);  // clamped left
        CHECK(bl(row, 1, 0) == 0.25);
        CHECK(bl(row, 2, 0) == 0.75);
        CHECK(bl(row, 3, 0) == 1.0);  // clamped right
    }
}

TEST_CASE("patch tiling") {
    SUBCASE("whole scene in one patch") {
        const PatchIndex idx = split_patches(100, 100, 100);
        CHECK(idx.rects.size() == 1);
        CHECK(idx.rects[0].height == 100);
    }
    SUBCASE("challenge tiling yields 25 patches") {
        CHECK(split_patches(500, 500, 100).rects.size() == 25);
    }
    SUBCASE("ragged bottom-right corner") {
        const PatchIndex idx = split_patches(250, 130, 100);
        CHECK(idx.rects.size() == 6);
        const PatchRect& corner = idx.rects.back();
        CHECK(corner.y == 200);
        CHECK(corner.x == 100);
        CHECK(corner.height == 50);
        CHECK(corner.width == 30);
    }
}

TEST_CASE("split and reassemble round-trips exactly") {
    Rng rng(10);
    SUBCASE("random tilings") {
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t h = 1 + rng.below(24);
            const std::size_t w = 1 + rng.below(24);
            const std::size_t ps = 1 + rng.below(12);
            const std::size_t scale = 1 + rng.below(4);
            std::vector<std::uint8_t> map(h * scale * w * scale);
            for (auto& v : map) v = static_cast<std::uint8_t>(rng.below(2));
            const PatchIndex idx = split_patches(h, w, ps);
            std::vector<std::vector<std::uint8_t>> pieces;
            for (const PatchRect& r : idx.rects) {
                std::vector<std::uint8_t> piece(r.height * scale * r.width * scale);
                for (std::size_t y = 0; y < r.height * scale; ++y)
                    for (std::size_t x = 0; x < r.width * scale; ++x)
                        piece[y * r.width * scale + x] =
                            map[(r.y * scale + y) * w * scale + r.x * scale + x];
                pieces.push_back(std::move(piece));
            }
            CHECK(reassemble(pieces, idx, scale) == map);
        }
    }
    SUBCASE("overlap is rejected") {
        PatchIndex idx;
        idx.scene_height = 2;
        idx.scene_width = 2;
        idx.rects = {{0, 0, 2, 2}, {0, 0, 1, 1}};
        std::vector<std::vector<std::uint8_t>> pieces{std::vector<std::uint8_t>(4),
                                                      std::vector<std::uint8_t>(1)};
        CHECK_THROWS_AS((void)reassemble(pieces, idx, 1), InputError);
    }
    SUBCASE("gap is rejected") {
        PatchIndex idx;
        idx.scene_height = 2;
        idx.scene_width = 2;
        idx.rects = {{0, 0, 1, 2}};
        std::vector<std::vector<std::uint8_t>> pieces{std::vector<std::uint8_t>(2)};
        CHECK_THROWS_AS((void)reassemble(pieces, idx, 1), InputError);
    }
    SUBCASE("wrong piece size is rejected") {
        PatchIndex idx;
        idx.scene_height = 1;
        idx.scene_width = 1;
        idx.rects = {{0, 0, 1, 1}};
        std::vector<std::vector<std::uint8_t>> pieces{std::vector<std::uint8_t>(3)};
        CHECK_THROWS_AS((void)reassemble(pieces, idx, 1), InputError);
    }
}

TEST_CASE("pipeline shape contract") {
    SceneSeries s = make_scene(3, 4, 6, 5);  // 12 stacked channels
    Rng rng(11);
    for (double& v : s.reflectance) v = rng.uniform(0, 1);
    const DenseMatrix stacked = stack_series(s);
    const FeatureGrid pooled = pool_features(stacked, s.height, s.width, 7);
    CHECK(pooled.channels == 7);
    PreprocConfig cfg;
    cfg.scale = 4;
    cfg.pooled_channels = 7;
    const DenseMatrix nodes = upsample(pooled, cfg).to_node_matrix();
    CHECK(nodes.rows == (4 * 6) * (4 * 5));
    CHECK(nodes.cols == 7);
}

TEST_CASE("config validation") {
    PreprocConfig cfg;
    cfg.pooled_channels = 0;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg = {};
    cfg.scale = 0;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg = {};
    cfg.patch_size = 0;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    CHECK_THROWS_AS((void)interpolation_from_name("cubic?"), InputError);
    CHECK(interpolation_from_name("lanczos") == Interpolation::Lanczos);
    CHECK(interpolation_name(Interpolation::InterArea) == "inter-area");
}

}  // TEST_SUITE
