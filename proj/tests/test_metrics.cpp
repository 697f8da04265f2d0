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

#include <cmath>

#include <doctest.h>

#include "gcnseg/errors.hpp"
#include "gcnseg/metrics.hpp"
#include "gcnseg/rng.hpp"
#include "oracles.hpp"

using namespace gcnseg;
namespace oracle = gcnseg::testing;

TEST_SUITE("metrics") {

TEST_CASE("confusion hand cases") {
    const std::vector<std::uint8_t> pred{1, 1, 0, 0};
    const std::vector<std::uint8_t> gt{1, 1, 0, 0};
    const ConfusionCounts c = confusion(pred, gt, ScoringMode::Full);
    CHECK(c.tp == 2);
    CHECK(c.tn == 2);
    CHECK(c.fp == 0);
    CHECK(c.fn == 0);

    const std::vector<std::uint8_t> all_excluded{255, 255, 255, 255};
    const ConfusionCounts empty =
        confusion(pred, gt, ScoringMode::Mask, all_excluded);
    CHECK(empty.total() == 0);

    CHECK_THROWS_AS((void)confusion(pred, std::vector<std::uint8_t>{1, 0}, ScoringMode::Full),
                    InputError);
    CHECK_THROWS_AS(
        (void)confusion(pred, gt, ScoringMode::Mask, std::vector<std::uint8_t>{255}),
        InputError);
}

TEST_CASE("confusion matches the per-pixel oracle on random maps") {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::uint8_t> pred(256), gt(256), excl(256);
        for (std::size_t i = 0; i < 256; ++i) {
            pred[i] = static_cast<std::uint8_t>(rng.below(2));
            const auto roll = rng.below(10);
            gt[i] = roll < 4 ? 0 : (roll < 8 ? 1 : 255);
            excl[i] = rng.below(4) == 0 ? 255 : 0;
        }
        const ConfusionCounts full = confusion(pred, gt, ScoringMode::Full, excl);
        const ConfusionCounts mask = confusion(pred, gt, ScoringMode::Mask, excl);
        const ConfusionCounts full_oracle = oracle::naive_confusion(pred, gt, false, excl);
        const ConfusionCounts mask_oracle = oracle::naive_confusion(pred, gt, true, excl);
        CHECK(full.tp == full_oracle.tp);
        CHECK(full.fp == full_oracle.fp);
        CHECK(full.tn == full_oracle.tn);
        CHECK(full.fn == full_oracle.fn);
        CHECK(mask.tp == mask_oracle.tp);
        CHECK(mask.fp == mask_oracle.fp);
        CHECK(mask.tn == mask_oracle.tn);
        CHECK(mask.fn == mask_oracle.fn);
    }
}

TEST_CASE("mcc values") {
    CHECK(mcc({10, 0, 10, 0}) == 1.0);
    CHECK(mcc({0, 10, 0, 10}) == -1.0);
    CHECK(mcc({1, 1, 1, 1}) == 0.0);
    CHECK(mcc({0, 0, 0, 0}) == 0.0);   // all marginals empty
    CHECK(mcc({5, 0, 0, 0}) == 0.0);   // degenerate marginals
}

TEST_CASE("mcc is invariant under a simultaneous class swap") {
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const ConfusionCounts c{rng.below(50), rng.below(50), rng.below(50), rng.below(50)};
        const ConfusionCounts swapped{c.tn, c.fn, c.tp, c.fp};
        CHECK(mcc(c) == doctest::Approx(mcc(swapped)).epsilon(1e-14));
    }
}

TEST_CASE("f-score and accuracy") {
    CHECK(f_score({10, 0, 5, 0}) == 1.0);
    CHECK(accuracy({10, 0, 5, 0}) == 1.0);
    CHECK(f_score({0, 3, 2, 4}) == 0.0);  // no true positives
    CHECK(f_score({0, 0, 0, 0}) == 0.0);
    CHECK(accuracy({0, 0, 0, 0}) == 0.0);
    const ConfusionCounts c{3, 1, 4, 2};
    CHECK(f_score(c) == doctest::Approx(2.0 * 3 / (6 + 1 + 2)).epsilon(1e-15));
    CHECK(accuracy(c) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("full report with an all-included exclusion equals the mask report exactly") {
    Rng rng(14);
    std::vector<std::uint8_t> pred(64), gt(64);
    for (std::size_t i = 0; i < 64; ++i) {
        pred[i] = static_cast<std::uint8_t>(rng.below(2));
        gt[i] = rng.below(5) == 0 ? 255 : static_cast<std::uint8_t>(rng.below(2));
    }
    const std::vector<std::uint8_t> none(64, 0);
    const EvalReport report = evaluate(pred, gt, none);
    CHECK(report.mcc_full == report.mcc_mask);
    CHECK(report.f1_full == report.f1_mask);
    CHECK(report.acc_full == report.acc_mask);
    CHECK(report.full.total() == report.mask.total());

    const EvalReport no_raster = evaluate(pred, gt);
    CHECK(no_raster.mcc_full == no_raster.mcc_mask);
}

TEST_CASE("turning a false positive into a true negative never hurts") {
    for (std::uint64_t tp = 0; tp <= 6; ++tp)
        for (std::uint64_t fp = 1; fp <= 6; ++fp)
            for (std::uint64_t tn = 0; tn <= 6; ++tn)
                for (std::uint64_t fn = 0; fn <= 6; ++fn) {
                    const ConfusionCounts before{tp, fp, tn, fn};
                    const ConfusionCounts after{tp, fp - 1, tn + 1, fn};
                    CHECK(mcc(after) >= mcc(before) - 1e-12);
                    CHECK(f_score(after) >= f_score(before) - 1e-12);
                    CHECK(accuracy(after) >= accuracy(before) - 1e-12);
                }
}

}  // TEST_SUITE
