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

#include "gcnseg/metrics.hpp"

#include <cmath>
#include <string>

#include "gcnseg/errors.hpp"
#include "gcnseg/scene.hpp"

namespace gcnseg {

ConfusionCounts confusion(std::span<const std::uint8_t> prediction,
                          std::span<const std::uint8_t> ground_truth, ScoringMode mode,
                          std::span<const std::uint8_t> exclusion) {
    if (prediction.size() != ground_truth.size())
        throw InputError("confusion: prediction and ground truth sizes differ (" +
                         std::to_string(prediction.size()) + " vs " +
                         std::to_string(ground_truth.size()) + ")");
    if (!exclusion.empty() && exclusion.size() != ground_truth.size())
        throw InputError("confusion: exclusion raster size differs from the maps");

    ConfusionCounts counts;
    const bool honor_exclusion = mode == ScoringMode::Mask && !exclusion.empty();
    for (std::size_t i = 0; i < prediction.size(); ++i) {
        const std::uint8_t gt = ground_truth[i];
        if (gt == kExcluded) continue;  // no truth to score against
        if (honor_exclusion && exclusion[i] == kExcluded) continue;
        const bool predicted = prediction[i] != 0;
        if (gt == kCultivated)
            predicted ? ++counts.tp : ++counts.fn;
        else
            predicted ? ++counts.fp : ++counts.tn;
    }
    return counts;
}

double mcc(const ConfusionCounts& c) {
    const double tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
    const double tn = static_cast<double>(c.tn), fn = static_cast<double>(c.fn);
    const double f1 = tp + fp, f2 = tp + fn, f3 = tn + fp, f4 = tn + fn;
    if (f1 == 0.0 || f2 == 0.0 || f3 == 0.0 || f4 == 0.0) return 0.0;
    return (tp * tn - fp * fn) / std::sqrt(f1 * f2 * f3 * f4);
}

double f_score(const ConfusionCounts& c) {
    const double denom = static_cast<double>(2 * c.tp + c.fp + c.fn);
    if (denom == 0.0) return 0.0;
    return 2.0 * static_cast<double>(c.tp) / denom;
}

double accuracy(const ConfusionCounts& c) {
    const std::uint64_t total = c.total();
    if (total == 0) return 0.0;
    return static_cast<double>(c.tp + c.tn) / static_cast<double>(total);
}

EvalReport evaluate(std::span<const std::uint8_t> prediction,
                    std::span<const std::uint8_t> ground_truth,
                    std::span<const std::uint8_t> exclusion) {
    EvalReport report;
    report.full = confusion(prediction, ground_truth, ScoringMode::Full, exclusion);
    report.mask = confusion(prediction, ground_truth, ScoringMode::Mask, exclusion);
    report.mcc_full = mcc(report.full);
    report.mcc_mask = mcc(report.mask);
    report.f1_full = f_score(report.full);
    report.f1_mask = f_score(report.mask);
    report.acc_full = accuracy(report.full);
    report.acc_mask = accuracy(report.mask);
    return report;
}

}  // namespace gcnseg
