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

#include "gcnseg/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gcnseg/errors.hpp"
#include "gcnseg/io.hpp"
#include "gcnseg/rng.hpp"

namespace gcnseg {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + e^z) without overflow.
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

void add_bias_rows(DenseMatrix& m, const std::vector<double>& bias) {
    for (std::size_t i = 0; i < m.rows; ++i) {
        double* row = m.data.data() + i * m.cols;
        for (std::size_t j = 0; j < m.cols; ++j) row[j] += bias[j];
    }
}

DenseMatrix relu(const DenseMatrix& m) {
    DenseMatrix out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.data.size(); ++i) out.data[i] = std::max(m.data[i], 0.0);
    return out;
}

}  // namespace

std::vector<std::size_t> GcnModel::dims() const {
    std::vector<std::size_t> d;
    if (layers.empty()) return d;
    d.push_back(layers.front().weight.rows);
    for (const GcnLayer& layer : layers) d.push_back(layer.weight.cols);
    return d;
}

void GcnModel::validate() const {
    if (layers.empty()) throw InputError("model: no layers");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const GcnLayer& layer = layers[l];
        if (layer.weight.rows == 0 || layer.weight.cols == 0)
            throw InputError("model: layer " + std::to_string(l) + " has an empty weight matrix");
        if (layer.bias.size() != layer.weight.cols)
            throw InputError("model: layer " + std::to_string(l) + " bias length mismatch");
        if (l + 1 < layers.size() && layer.weight.cols != layers[l + 1].weight.rows)
            throw InputError("model: dimension chain broken between layers " +
                             std::to_string(l) + " and " + std::to_string(l + 1));
        if (!layer.weight.all_finite())
            throw InputError("model: layer " + std::to_string(l) + " has non-finite weights");
        for (double b : layer.bias)
            if (!std::isfinite(b))
                throw InputError("model: layer " + std::to_string(l) + " has non-finite biases");
    }
}

std::vector<std::size_t> default_dims(std::size_t input_channels) {
    return {input_channels, 64, 32, 16, 8, 1};
}

GcnModel init_model(const std::vector<std::size_t>& dims, std::uint64_t seed) {
    if (dims.size() < 2) throw InputError("init_model: need at least input and output dims");
    for (std::size_t d : dims)
        if (d == 0) throw InputError("init_model: zero layer width");
    Rng rng(seed);
    GcnModel model;
    model.layers.reserve(dims.size() - 1);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        GcnLayer layer;
        layer.weight = DenseMatrix(dims[l], dims[l + 1]);
        const double bound = std::sqrt(6.0 / static_cast<double>(dims[l] + dims[l + 1]));
        for (double& w : layer.weight.data) w = rng.uniform(-bound, bound);
        layer.bias.assign(dims[l + 1], 0.0);
        model.layers.push_back(std::move(layer));
    }
    return model;
}

std::size_t count_parameters(const GcnModel& model) {
    model.validate();
    std::size_t total = 0;
    for (const GcnLayer& layer : model.layers)
        total += layer.weight.rows * layer.weight.cols + layer.bias.size();
    return total;
}

std::vector<double> forward(const GcnModel& model, const GridGraph& graph,
                            const DenseMatrix& features, ForwardTrace* trace) {
    model.validate();
    if (features.rows != graph.node_count())
        throw InputError("forward: feature rows (" + std::to_string(features.rows) +
                         ") do not match the graph node count (" +
                         std::to_string(graph.node_count()) + ")");
    if (features.cols != model.input_dim())
        throw InputError("forward: feature width (" + std::to_string(features.cols) +
                         ") does not match the model input dim (" +
                         std::to_string(model.input_dim()) + ")");
    if (trace) {
        trace->aggregated.clear();
        trace->preactivation.clear();
    }

    const DenseMatrix* input = &features;
    DenseMatrix hidden;
    DenseMatrix preact;
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        DenseMatrix aggregated = spmm(graph.adjacency, *input);
        preact = gemm(aggregated, model.layers[l].weight);
        add_bias_rows(preact, model.layers[l].bias);
        if (!preact.all_finite())
            throw NumericError("forward: non-finite activation in layer " + std::to_string(l));
        if (trace) {
            trace->aggregated.push_back(std::move(aggregated));
            trace->preactivation.push_back(preact);
        }
        if (l + 1 < model.layers.size()) {
            hidden = relu(preact);
            input = &hidden;
        }
    }

    // Output layer is a single sigmoid unit; keep probabilities strictly
    // inside (0, 1) even for saturated pre-activations.
    const double lo = std::numeric_limits<double>::min();
    const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2;
    std::vector<double> probabilities(preact.rows);
    for (std::size_t i = 0; i < preact.rows; ++i)
        probabilities[i] = std::clamp(sigmoid(preact(i, 0)), lo, hi);
    return probabilities;
}

Gradients backward(const GcnModel& model, const GridGraph& graph, const ForwardTrace& trace,
                   std::span<const std::uint8_t> labels, std::span<const double> sample_weights) {
    const std::size_t layer_count = model.layers.size();
    if (trace.aggregated.size() != layer_count || trace.preactivation.size() != layer_count)
        throw InputError("backward: trace does not match the model");
    const std::size_t nodes = graph.node_count();
    if (labels.size() != nodes || sample_weights.size() != nodes)
        throw InputError("backward: labels/weights length does not match the node count");
    for (std::uint8_t y : labels)
        if (y != 0 && y != 1) throw InputError("backward: label outside {0, 1}");

    Gradients grads;
    grads.layers.resize(layer_count);
    for (std::size_t l = 0; l < layer_count; ++l) {
        grads.layers[l].weight =
            DenseMatrix(model.layers[l].weight.rows, model.layers[l].weight.cols);
        grads.layers[l].bias.assign(model.layers[l].bias.size(), 0.0);
    }

    double weight_sum = 0.0;
    for (double w : sample_weights) weight_sum += w;
    grads.weight_sum = weight_sum;
    if (weight_sum == 0.0) return grads;  // nothing contributes

    // Output residual of the fused sigmoid + cross-entropy: (p - y), scaled
    // by the node weight and the mean normalizer.
    const DenseMatrix& out_preact = trace.preactivation.back();
    DenseMatrix residual(nodes, 1);
    double loss = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) {
        const double z = out_preact(i, 0);
        const double w = sample_weights[i];
        const double y = static_cast<double>(labels[i]);
        loss += w * (softplus(z) - y * z);
        residual(i, 0) = w * (sigmoid(z) - y) / weight_sum;
    }
    grads.loss = loss / weight_sum;

    for (std::size_t l = layer_count; l-- > 0;) {
        // dW = aggregated^T * residual; db = column sums of the residual.
        grads.layers[l].weight = gemm_tn(trace.aggregated[l], residual);
        for (std::size_t i = 0; i < residual.rows; ++i) {
            const double* row = residual.data.data() + i * residual.cols;
            for (std::size_t j = 0; j < residual.cols; ++j) grads.layers[l].bias[j] += row[j];
        }
        if (l == 0) break;
        // Through the aggregation (adjacency is symmetric) and the previous
        // layer's ReLU gate.
        DenseMatrix back = gemm(residual, model.layers[l].weight.transposed());
        residual = transpose_spmm(graph.adjacency, back);
        const DenseMatrix& gate = trace.preactivation[l - 1];
        for (std::size_t i = 0; i < residual.data.size(); ++i)
            if (gate.data[i] <= 0.0) residual.data[i] = 0.0;
    }
    return grads;
}

std::vector<std::uint8_t> predict_map(const GcnModel& model, const GridGraph& graph,
                                      const DenseMatrix& features, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw InputError("predict_map: threshold must be inside (0, 1)");
    const std::vector<double> probabilities = forward(model, graph, features);
    std::vector<std::uint8_t> map(probabilities.size());
    for (std::size_t i = 0; i < probabilities.size(); ++i)
        map[i] = probabilities[i] >= threshold ? 1 : 0;
    return map;
}

void save_model(const GcnModel& model, const std::filesystem::path& path) {
    model.validate();
    ByteWriter out;
    out.magic("GCM1");
    out.u32(static_cast<std::uint32_t>(model.layer_count()));
    for (std::size_t d : model.dims()) out.u32(static_cast<std::uint32_t>(d));
    for (const GcnLayer& layer : model.layers) {
        for (double w : layer.weight.data) out.f32(static_cast<float>(w));
        for (double b : layer.bias) out.f32(static_cast<float>(b));
    }
    out.save(path);
}

GcnModel load_model(const std::filesystem::path& path) {
    ByteReader in(path);
    in.expect_magic("GCM1");
    const std::uint32_t layer_count = in.u32();
    if (layer_count == 0) throw FormatError("'" + path.string() + "' declares zero layers", 4);
    std::vector<std::size_t> dims(layer_count + 1);
    for (auto& d : dims) {
        const std::size_t at = in.offset();
        d = in.u32();
        if (d == 0) throw FormatError("'" + path.string() + "' declares a zero layer width", at);
    }
    GcnModel model;
    model.layers.resize(layer_count);
    for (std::uint32_t l = 0; l < layer_count; ++l) {
        GcnLayer& layer = model.layers[l];
        layer.weight = DenseMatrix(dims[l], dims[l + 1]);
        for (double& w : layer.weight.data) w = static_cast<double>(in.f32());
        layer.bias.resize(dims[l + 1]);
        for (double& b : layer.bias) b = static_cast<double>(in.f32());
    }
    in.expect_end();
    model.validate();
    return model;
}

std::size_t model_file_size(const GcnModel& model) {
    return 8 + 4 * (model.layer_count() + 1) + 4 * count_parameters(model);
}

}  // namespace gcnseg
