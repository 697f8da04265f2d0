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
#include <vector>

#include "gcnseg/grid_graph.hpp"
#include "gcnseg/numerics.hpp"

namespace gcnseg {

struct GcnLayer {
    DenseMatrix weight;        // in x out
    std::vector<double> bias;  // out
};

/// Graph-convolutional stack. Every layer aggregates over the normalized
/// adjacency, applies one shared weight matrix plus bias, then ReLU on
/// hidden layers and sigmoid on the single-unit output layer.
struct GcnModel {
    std::vector<GcnLayer> layers;

    std::size_t layer_count() const { return layers.size(); }
    std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().weight.rows; }
    std::vector<std::size_t> dims() const;

    /// Throws InputError when the layer dims do not chain or a parameter
    /// is non-finite.
    void validate() const;
};

/// Default architecture: 80 pooled input channels, hidden widths
/// 64/32/16/8, one output unit.
std::vector<std::size_t> default_dims(std::size_t input_channels = 80);

/// Glorot-uniform weights (bounds +-sqrt(6 / (in + out))), zero biases.
GcnModel init_model(const std::vector<std::size_t>& dims, std::uint64_t seed);

/// Total trainable parameters: sum over layers of in*out + out.
std::size_t count_parameters(const GcnModel& model);

/// Per-layer intermediates retained for the backward pass.
struct ForwardTrace {
    std::vector<DenseMatrix> aggregated;      // adjacency * input of each layer
    std::vector<DenseMatrix> preactivation;   // aggregated * W + b
};

/// Runs the stack over one graph. `features` is nodes x input_dim with the
/// graph's node order; returns per-node probabilities in (0, 1). When
/// `trace` is non-null the intermediates needed by backward() are kept.
std::vector<double> forward(const GcnModel& model, const GridGraph& graph,
                            const DenseMatrix& features, ForwardTrace* trace = nullptr);

/// Parameter gradients of the weighted-mean binary cross-entropy, plus the
/// loss value and the total sample weight (so batches can be combined with
/// exact mean-over-nodes semantics).
struct Gradients {
    std::vector<GcnLayer> layers;
    double loss = 0.0;
    double weight_sum = 0.0;
};

/// Analytic backprop through the trace. Labels must be 0 or 1; a node with
/// sample weight 0 contributes nothing. The sigmoid/cross-entropy pair is
/// fused at the output, so the output-layer residual is p - y.
Gradients backward(const GcnModel& model, const GridGraph& graph, const ForwardTrace& trace,
                   std::span<const std::uint8_t> labels, std::span<const double> sample_weights);

/// Thresholded probabilities; ties count as cultivated (p >= threshold).
std::vector<std::uint8_t> predict_map(const GcnModel& model, const GridGraph& graph,
                                      const DenseMatrix& features, double threshold);

// Model container ".gcm", little-endian: magic "GCM1", u32 layer_count,
// u32 dims[layer_count + 1], then per layer f32 weights (row-major in x out)
// and f32 biases. Size = 8 + 4 * (layer_count + 1) + 4 * parameter_count.
void save_model(const GcnModel& model, const std::filesystem::path& path);
GcnModel load_model(const std::filesystem::path& path);
std::size_t model_file_size(const GcnModel& model);

}  // namespace gcnseg
