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
#include <span>

namespace gcnseg {

/// Full scores every pixel with a defined ground truth; Mask additionally
/// drops pixels flagged by a separate exclusion raster. Ground-truth
/// pixels valued 255 are outside evaluation in both schemes.
enum class ScoringMode { Full, Mask };

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }

    ConfusionCounts& operator+=(const ConfusionCounts& other) {
        tp += other.tp;
        fp += other.fp;
        tn += other.tn;
        fn += other.fn;
        return *this;
    }
};

/// Tallies a binary prediction against a ternary ground truth. `exclusion`
/// may be empty; when present, pixels valued 255 there are skipped in Mask
/// mode (Full ignores the raster entirely).
ConfusionCounts confusion(std::span<const std::uint8_t> prediction,
                          std::span<const std::uint8_t> ground_truth, ScoringMode mode,
                          std::span<const std::uint8_t> exclusion = {});

/// Matthews correlation coefficient; 0 when any marginal is empty.
double mcc(const ConfusionCounts& c);

/// F1 = 2tp / (2tp + fp + fn); 0 when the denominator is 0.
double f_score(const ConfusionCounts& c);

/// (tp + tn) / total; 0 when no pixel was evaluated.
double accuracy(const ConfusionCounts& c);

/// Both scoring schemes of each metric for one prediction/ground-truth pair.
struct EvalReport {
    ConfusionCounts full;
    ConfusionCounts mask;
    double mcc_full = 0.0, mcc_mask = 0.0;
    double f1_full = 0.0, f1_mask = 0.0;
    double acc_full = 0.0, acc_mask = 0.0;
};

EvalReport evaluate(std::span<const std::uint8_t> prediction,
                    std::span<const std::uint8_t> ground_truth,
                    std::span<const std::uint8_t> exclusion = {});

}  // namespace gcnseg
