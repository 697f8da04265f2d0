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

#include "gcnseg/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <numeric>

#include "gcnseg/errors.hpp"
#include "gcnseg/grid_graph.hpp"
#include "gcnseg/metrics.hpp"
#include "gcnseg/parallel.hpp"
#include "gcnseg/rng.hpp"

namespace gcnseg {

namespace {

std::uint64_t epoch_seed(std::uint64_t seed, std::size_t epoch) {
    return seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(epoch) + 1);
}

/// Per-scene data reused across epochs: pooled low-res features plus the
/// patch tiling.
struct PreparedScene {
    const SceneSeries* scene = nullptr;
    FeatureGrid pooled;
    PatchIndex patches;
};

PreparedScene prepare_scene(const SceneSeries& scene, const std::string& id,
                            const PreprocConfig& cfg) {
    PreparedScene prepared;
    prepared.scene = &scene;
    const DenseMatrix stacked = stack_series(scene);
    if (stacked.cols < cfg.pooled_channels)
        throw InputError("scene '" + id + "' provides " + std::to_string(stacked.cols) +
                         " stacked channels, fewer than the pooled channel count " +
                         std::to_string(cfg.pooled_channels));
    prepared.pooled = pool_features(stacked, scene.height, scene.width, cfg.pooled_channels);
    prepared.patches = split_patches(scene.height, scene.width, cfg.patch_size);
    return prepared;
}

DenseMatrix patch_node_features(const PreparedScene& scene, const PatchRect& rect,
                                const PreprocConfig& cfg) {
    FeatureGrid low = extract_patch(scene.pooled, rect);
    return upsample(low, cfg).to_node_matrix();
}

/// Node labels and sample weights for one patch; excluded pixels get
/// weight 0 (and a dummy 0 label).
void patch_labels(const SceneSeries& scene, const PatchRect& rect, std::size_t scale,
                  std::vector<std::uint8_t>& labels, std::vector<double>& weights) {
    const std::size_t lw = scene.label_width();
    labels.assign(rect.height * scale * rect.width * scale, 0);
    weights.assign(labels.size(), 0.0);
    for (std::size_t y = 0; y < rect.height * scale; ++y) {
        const std::uint8_t* src = scene.label.data() + (rect.y * scale + y) * lw + rect.x * scale;
        std::uint8_t* dst = labels.data() + y * rect.width * scale;
        double* wdst = weights.data() + y * rect.width * scale;
        for (std::size_t x = 0; x < rect.width * scale; ++x) {
            if (src[x] == kExcluded) continue;
            dst[x] = src[x];
            wdst[x] = 1.0;
        }
    }
}

/// Graphs keyed by hi-res patch dimensions; patches overwhelmingly share
/// a handful of shapes.
class GraphCache {
public:
    const GridGraph& get(std::size_t height, std::size_t width) {
        const auto key = std::make_pair(height, width);
        auto it = cache_.find(key);
        if (it == cache_.end())
            it = cache_.emplace(key, std::make_unique<GridGraph>(
                                          GridGraph::build(height, width))).first;
        return *it->second;
    }

private:
    std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<GridGraph>> cache_;
};

struct PatchRef {
    std::size_t scene = 0;
    std::size_t rect = 0;
};

std::vector<PatchRef> list_patches(std::span<const PreparedScene> scenes,
                                   std::span<const std::size_t> subset) {
    std::vector<PatchRef> refs;
    for (std::size_t s : subset)
        for (std::size_t r = 0; r < scenes[s].patches.rects.size(); ++r)
            refs.push_back({s, r});
    return refs;
}

double stable_bce(double probability, double label) {
    const double p = std::clamp(probability, 1e-15, 1.0 - 1e-15);
    return -(label * std::log(p) + (1.0 - label) * std::log1p(-p));
}

}  // namespace

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw InputError("train: learning rate must be > 0");
    if (batch_size == 0) throw InputError("train: batch size must be >= 1");
    if (patience == 0) throw InputError("train: patience must be >= 1");
    if (max_epochs == 0) throw InputError("train: max epochs must be >= 1");
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
        throw InputError("train: validation fraction must be inside (0, 1)");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw InputError("train: threshold must be inside (0, 1)");
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0))
        throw InputError("train: Adam betas must be inside [0, 1)");
    if (!(adam_epsilon > 0.0)) throw InputError("train: Adam epsilon must be > 0");
    for (std::size_t d : hidden_dims)
        if (d == 0) throw InputError("train: zero hidden width");
    preproc.validate();
}

void write_train_log_csv(const TrainLog& log, const std::filesystem::path& path,
                         bool include_timing) {
    std::string text = "epoch,train_bce,val_bce,val_mcc,seconds\n";
    char line[192];
    for (const EpochRecord& r : log.epochs) {
        std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g,%.17g,%.3f\n", r.epoch, r.train_bce,
                      r.val_bce, r.val_mcc, include_timing ? r.seconds : 0.0);
        text += line;
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    FILE* f = std::fopen(tmp.string().c_str(), "wb");
    if (!f) throw InputError("cannot open '" + tmp.string() + "' for writing");
    const std::size_t written = std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
    if (written != text.size()) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw InputError("failed writing '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_dataset(
    std::span<const LabeledScene> scenes, double fraction, std::uint64_t seed) {
    if (scenes.size() < 2) throw InputError("split_dataset: need at least 2 scenes");
    if (!(fraction > 0.0 && fraction < 1.0))
        throw InputError("split_dataset: fraction must be inside (0, 1)");

    std::vector<std::size_t> order(scenes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scenes[a].id < scenes[b].id;
    });

    std::size_t val_count = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(scenes.size())));
    val_count = std::clamp<std::size_t>(val_count, 1, scenes.size() - 1);

    Rng rng(seed);
    rng.shuffle(order);
    std::vector<std::size_t> validation(order.begin(), order.begin() + val_count);
    std::vector<std::size_t> training(order.begin() + val_count, order.end());
    std::sort(validation.begin(), validation.end());
    std::sort(training.begin(), training.end());
    return {training, validation};
}

AdamState AdamState::like(const GcnModel& model) {
    AdamState state;
    for (const GcnLayer& layer : model.layers) {
        GcnLayer zero;
        zero.weight = DenseMatrix(layer.weight.rows, layer.weight.cols);
        zero.bias.assign(layer.bias.size(), 0.0);
        state.first_moment.push_back(zero);
        state.second_moment.push_back(std::move(zero));
    }
    return state;
}

namespace {

void adam_update_span(std::span<double> params, std::span<const double> grads,
                      std::span<double> m, std::span<double> v, double lr, double beta1,
                      double beta2, double epsilon, double bc1, double bc2) {
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        m[i] = beta1 * m[i] + (1.0 - beta1) * g;
        v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
        const double m_hat = m[i] / bc1;
        const double v_hat = v[i] / bc2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + epsilon);
    }
}

}  // namespace

void adam_step(GcnModel& model, const Gradients& grads, AdamState& state,
               const TrainConfig& cfg) {
    if (grads.layers.size() != model.layers.size())
        throw InputError("adam_step: gradient layer count does not match the model");
    for (std::size_t l = 0; l < grads.layers.size(); ++l) {
        if (grads.layers[l].weight.rows != model.layers[l].weight.rows ||
            grads.layers[l].weight.cols != model.layers[l].weight.cols ||
            grads.layers[l].bias.size() != model.layers[l].bias.size())
            throw InputError("adam_step: gradient shapes do not match layer " + std::to_string(l));
        if (!grads.layers[l].weight.all_finite())
            throw NumericError("adam_step: non-finite weight gradient in layer " +
                               std::to_string(l));
        for (double b : grads.layers[l].bias)
            if (!std::isfinite(b))
                throw NumericError("adam_step: non-finite bias gradient in layer " +
                                   std::to_string(l));
    }

    ++state.step;
    const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(state.step));
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        adam_update_span(model.layers[l].weight.data, grads.layers[l].weight.data,
                         state.first_moment[l].weight.data, state.second_moment[l].weight.data,
                         cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_epsilon,
                         bc1, bc2);
        adam_update_span(model.layers[l].bias, grads.layers[l].bias, state.first_moment[l].bias,
                         state.second_moment[l].bias, cfg.learning_rate, cfg.adam_beta1,
                         cfg.adam_beta2, cfg.adam_epsilon, bc1, bc2);
    }
}

TrainResult train(const std::vector<LabeledScene>& scenes, const TrainConfig& cfg) {
    cfg.validate();
    if (scenes.empty()) throw InputError("train: no scenes");
    if (cfg.preproc.scale != SceneSeries::kLabelScale)
        throw InputError("train: labels are defined at scale " +
                         std::to_string(SceneSeries::kLabelScale) +
                         ", so training requires that upsampling scale");
    for (const LabeledScene& s : scenes)
        if (!s.scene.has_label()) throw InputError("train: scene '" + s.id + "' has no label");

    // Canonical scene order, then train/validation scene indices.
    std::vector<std::size_t> train_idx, val_idx;
    if (scenes.size() == 1) {
        train_idx = {0};
        val_idx = {0};
    } else {
        std::tie(train_idx, val_idx) = split_dataset(scenes, cfg.validation_fraction, cfg.seed);
    }

    std::vector<PreparedScene> prepared;
    prepared.reserve(scenes.size());
    for (const LabeledScene& s : scenes)
        prepared.push_back(prepare_scene(s.scene, s.id, cfg.preproc));

    std::vector<PatchRef> train_patches = list_patches(prepared, train_idx);
    const std::vector<PatchRef> val_patches = list_patches(prepared, val_idx);
    if (train_patches.empty()) throw InputError("train: empty patch list");

    GraphCache graphs;
    for (const PreparedScene& scene : prepared)
        for (const PatchRect& r : scene.patches.rects)
            graphs.get(r.height * cfg.preproc.scale, r.width * cfg.preproc.scale);

    GcnModel model = [&] {
        std::vector<std::size_t> dims;
        dims.push_back(cfg.preproc.pooled_channels);
        dims.insert(dims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
        dims.push_back(1);
        return init_model(dims, cfg.seed);
    }();
    AdamState adam = AdamState::like(model);

    TrainLog log;
    GcnModel best_model = model;
    double best_val_bce = std::numeric_limits<double>::infinity();
    std::size_t epochs_without_improvement = 0;

    std::vector<std::uint8_t> labels_buf;
    std::vector<double> weights_buf;

    for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        const auto tick = std::chrono::steady_clock::now();

        Rng shuffle_rng(epoch_seed(cfg.seed, epoch));
        shuffle_rng.shuffle(train_patches);

        double epoch_loss_sum = 0.0;
        double epoch_weight_sum = 0.0;
        for (std::size_t start = 0; start < train_patches.size(); start += cfg.batch_size) {
            const std::size_t count = std::min(cfg.batch_size, train_patches.size() - start);
            std::vector<Gradients> per_patch(count);
            // Patches evaluate in parallel; the reduction below is a fixed
            // ascending order, so results match any thread count.
            parallel_for(count, 1, [&](std::size_t begin, std::size_t end) {
                std::vector<std::uint8_t> labels;
                std::vector<double> weights;
                for (std::size_t p = begin; p < end; ++p) {
                    const PatchRef ref = train_patches[start + p];
                    const PreparedScene& scene = prepared[ref.scene];
                    const PatchRect& rect = scene.patches.rects[ref.rect];
                    const DenseMatrix features = patch_node_features(scene, rect, cfg.preproc);
                    const GridGraph& graph = graphs.get(rect.height * cfg.preproc.scale,
                                                        rect.width * cfg.preproc.scale);
                    patch_labels(*scene.scene, rect, cfg.preproc.scale, labels, weights);
                    ForwardTrace trace;
                    forward(model, graph, features, &trace);
                    per_patch[p] = backward(model, graph, trace, labels, weights);
                }
            });

            Gradients batch;
            batch.layers.resize(model.layers.size());
            for (std::size_t l = 0; l < model.layers.size(); ++l) {
                batch.layers[l].weight =
                    DenseMatrix(model.layers[l].weight.rows, model.layers[l].weight.cols);
                batch.layers[l].bias.assign(model.layers[l].bias.size(), 0.0);
            }
            for (const Gradients& g : per_patch) {
                batch.weight_sum += g.weight_sum;
                batch.loss += g.loss * g.weight_sum;
                for (std::size_t l = 0; l < batch.layers.size(); ++l) {
                    for (std::size_t i = 0; i < batch.layers[l].weight.data.size(); ++i)
                        batch.layers[l].weight.data[i] +=
                            g.layers[l].weight.data[i] * g.weight_sum;
                    for (std::size_t i = 0; i < batch.layers[l].bias.size(); ++i)
                        batch.layers[l].bias[i] += g.layers[l].bias[i] * g.weight_sum;
                }
            }
            if (batch.weight_sum > 0.0) {
                for (GcnLayer& layer : batch.layers) {
                    for (double& w : layer.weight.data) w /= batch.weight_sum;
                    for (double& b : layer.bias) b /= batch.weight_sum;
                }
                batch.loss /= batch.weight_sum;
            }
            epoch_loss_sum += batch.loss * batch.weight_sum;
            epoch_weight_sum += batch.weight_sum;
            adam_step(model, batch, adam, cfg);
        }

        // Validation sweep: weighted BCE plus masked confusion counts.
        double val_loss_sum = 0.0;
        double val_weight_sum = 0.0;
        ConfusionCounts val_counts;
        for (const PatchRef& ref : val_patches) {
            const PreparedScene& scene = prepared[ref.scene];
            const PatchRect& rect = scene.patches.rects[ref.rect];
            const DenseMatrix features = patch_node_features(scene, rect, cfg.preproc);
            const GridGraph& graph = graphs.get(rect.height * cfg.preproc.scale,
                                                rect.width * cfg.preproc.scale);
            const std::vector<double> probabilities = forward(model, graph, features);
            patch_labels(*scene.scene, rect, cfg.preproc.scale, labels_buf, weights_buf);
            std::vector<std::uint8_t> pred(probabilities.size());
            for (std::size_t i = 0; i < probabilities.size(); ++i) {
                pred[i] = probabilities[i] >= cfg.threshold ? 1 : 0;
                if (weights_buf[i] == 0.0) continue;
                val_loss_sum +=
                    weights_buf[i] * stable_bce(probabilities[i], static_cast<double>(labels_buf[i]));
                val_weight_sum += weights_buf[i];
                if (labels_buf[i] == kCultivated)
                    pred[i] ? ++val_counts.tp : ++val_counts.fn;
                else
                    pred[i] ? ++val_counts.fp : ++val_counts.tn;
            }
        }

        EpochRecord record;
        record.epoch = epoch;
        record.train_bce = epoch_weight_sum > 0.0 ? epoch_loss_sum / epoch_weight_sum : 0.0;
        record.val_bce = val_weight_sum > 0.0 ? val_loss_sum / val_weight_sum : 0.0;
        record.val_mcc = mcc(val_counts);
        record.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - tick).count();
        log.epochs.push_back(record);

        if (record.val_bce < best_val_bce) {
            best_val_bce = record.val_bce;
            best_model = model;
            log.best_epoch = epoch;
            epochs_without_improvement = 0;
        } else if (++epochs_without_improvement >= cfg.patience) {
            break;
        }
    }

    return {std::move(best_model), std::move(log)};
}

std::vector<std::uint8_t> infer_scene(const GcnModel& model, const SceneSeries& scene,
                                      const PreprocConfig& preproc, double threshold) {
    preproc.validate();
    if (model.input_dim() != preproc.pooled_channels)
        throw InputError("infer: model expects " + std::to_string(model.input_dim()) +
                         " input channels but the pipeline pools to " +
                         std::to_string(preproc.pooled_channels));
    const PreparedScene prep = prepare_scene(scene, "scene", preproc);
    GraphCache graphs;
    std::vector<std::vector<std::uint8_t>> maps(prep.patches.rects.size());
    for (std::size_t p = 0; p < prep.patches.rects.size(); ++p) {
        const PatchRect& rect = prep.patches.rects[p];
        const DenseMatrix features = patch_node_features(prep, rect, preproc);
        const GridGraph& graph =
            graphs.get(rect.height * preproc.scale, rect.width * preproc.scale);
        maps[p] = predict_map(model, graph, features, threshold);
    }
    return reassemble(maps, prep.patches, preproc.scale);
}

}  // namespace gcnseg
