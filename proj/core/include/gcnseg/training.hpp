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
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gcnseg/model.hpp"
#include "gcnseg/preprocess.hpp"
#include "gcnseg/scene.hpp"

namespace gcnseg {

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t batch_size = 100;  // patches per optimizer step
    std::size_t patience = 12;     // epochs without validation improvement
    std::size_t max_epochs = 100;
    double validation_fraction = 0.10;
    std::uint64_t seed = 0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    PreprocConfig preproc;
    double threshold = 0.5;
    std::vector<std::size_t> hidden_dims = {64, 32, 16, 8};

    void validate() const;
};

struct EpochRecord {
    std::size_t epoch = 0;
    double train_bce = 0.0;
    double val_bce = 0.0;
    double val_mcc = 0.0;
    double seconds = 0.0;  // wall time; not part of the reproducible outputs
};

struct TrainLog {
    std::vector<EpochRecord> epochs;
    std::size_t best_epoch = 0;
};

/// CSV columns: epoch,train_bce,val_bce,val_mcc,seconds. The seconds
/// column is written as 0.000 unless `include_timing` is set, so default
/// logs are byte-identical across reruns.
void write_train_log_csv(const TrainLog& log, const std::filesystem::path& path,
                         bool include_timing = false);

/// A scene paired with the identifier used for canonical ordering (file
/// stem, typically). Splitting and shuffling key off the sorted ids, so
/// results do not depend on directory enumeration order.
struct LabeledScene {
    std::string id;
    SceneSeries scene;
};

/// Seeded split into (train, validation) index lists over the id-sorted
/// scene order. Validation size is fraction rounded to nearest, at least
/// 1 and at most n - 1. Requires at least 2 scenes.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_dataset(
    std::span<const LabeledScene> scenes, double fraction, std::uint64_t seed);

/// Adam first/second moments, one tensor pair per parameter tensor.
struct AdamState {
    std::vector<GcnLayer> first_moment;
    std::vector<GcnLayer> second_moment;
    std::size_t step = 0;

    static AdamState like(const GcnModel& model);
};

/// One bias-corrected Adam update in place. Throws NumericError on a
/// non-finite gradient, naming the offending layer.
void adam_step(GcnModel& model, const Gradients& grads, AdamState& state,
               const TrainConfig& cfg);

struct TrainResult {
    GcnModel model;
    TrainLog log;
};

/// Full training protocol: preprocess every scene, shuffle patches each
/// epoch (keyed on seed + epoch only), run batched forward/backward/Adam
/// with the loss averaged per node across the whole batch, evaluate
/// validation BCE and masked MCC after each epoch, stop after `patience`
/// epochs without a strict BCE improvement, and return the parameters of
/// the best-validation epoch.
///
/// With a single scene the validation set is that same scene (the split
/// needs at least two).
TrainResult train(const std::vector<LabeledScene>& scenes, const TrainConfig& cfg);

/// Preprocess, run the model patch by patch, threshold, and stitch the
/// full (scale*H) x (scale*W) binary map.
std::vector<std::uint8_t> infer_scene(const GcnModel& model, const SceneSeries& scene,
                                      const PreprocConfig& preproc, double threshold = 0.5);

}  // namespace gcnseg
