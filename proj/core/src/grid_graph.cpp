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

#include "gcnseg/grid_graph.hpp"

#include <array>
#include <cmath>

#include "gcnseg/errors.hpp"

namespace gcnseg {

namespace {

constexpr std::array<std::pair<int, int>, 4> kFourOffsets{
    {{-1, 0}, {0, -1}, {0, 1}, {1, 0}}};
constexpr std::array<std::pair<int, int>, 8> kEightOffsets{
    {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}}};

}  // namespace

CsrMatrix build_adjacency(std::size_t height, std::size_t width, Connectivity connectivity) {
    if (height == 0 || width == 0)
        throw InputError("build_adjacency: grid dimensions must be positive");
    const std::span<const std::pair<int, int>> offsets =
        connectivity == Connectivity::Four
            ? std::span<const std::pair<int, int>>(kFourOffsets)
            : std::span<const std::pair<int, int>>(kEightOffsets);

    const std::size_t n = height * width;
    CsrMatrix a(n, n);
    a.col_idx.reserve(n * offsets.size());
    a.values.reserve(n * offsets.size());
    // Offsets are listed in raster order, so neighbor indices come out
    // strictly increasing within each row.
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            const std::size_t node = y * width + x;
            for (const auto& [dy, dx] : offsets) {
                const long long ny = static_cast<long long>(y) + dy;
                const long long nx = static_cast<long long>(x) + dx;
                if (ny < 0 || nx < 0 || ny >= static_cast<long long>(height) ||
                    nx >= static_cast<long long>(width))
                    continue;
                a.col_idx.push_back(static_cast<std::size_t>(ny) * width +
                                    static_cast<std::size_t>(nx));
                a.values.push_back(1.0);
            }
            a.row_ptr[node + 1] = a.col_idx.size();
        }
    }
    return a;
}

CsrMatrix normalize_adjacency(const CsrMatrix& adjacency) {
    if (adjacency.rows != adjacency.cols)
        throw InputError("normalize_adjacency: matrix must be square");
    adjacency.validate();
    const std::size_t n = adjacency.rows;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = adjacency.row_ptr[r]; k < adjacency.row_ptr[r + 1]; ++k) {
            if (adjacency.col_idx[k] == r)
                throw InputError("normalize_adjacency: adjacency must have a zero diagonal");
            if (adjacency.values[k] != 1.0)
                throw InputError("normalize_adjacency: adjacency must be binary");
        }
    }

    // Self-loop-augmented degrees are small integers, so computing each
    // entry as 1 / sqrt(d_i * d_j) is a single rounding: symmetry holds at
    // the bit level and diagonal entries come out as exact 1 / d_i.
    std::vector<double> degree(n);
    for (std::size_t r = 0; r < n; ++r)
        degree[r] =
            static_cast<double>(adjacency.row_ptr[r + 1] - adjacency.row_ptr[r]) + 1.0;
    const auto entry = [&](std::size_t r, std::size_t c) {
        return 1.0 / std::sqrt(degree[r] * degree[c]);
    };

    CsrMatrix out(n, n);
    out.col_idx.reserve(adjacency.nnz() + n);
    out.values.reserve(adjacency.nnz() + n);
    for (std::size_t r = 0; r < n; ++r) {
        bool diagonal_emitted = false;
        for (std::size_t k = adjacency.row_ptr[r]; k < adjacency.row_ptr[r + 1]; ++k) {
            const std::size_t c = adjacency.col_idx[k];
            if (!diagonal_emitted && c > r) {
                out.col_idx.push_back(r);
                out.values.push_back(entry(r, r));
                diagonal_emitted = true;
            }
            out.col_idx.push_back(c);
            out.values.push_back(entry(r, c));
        }
        if (!diagonal_emitted) {
            out.col_idx.push_back(r);
            out.values.push_back(entry(r, r));
        }
        out.row_ptr[r + 1] = out.col_idx.size();
    }
    return out;
}

double max_eigenvalue(const CsrMatrix& matrix, double tolerance, std::size_t max_iterations) {
    if (matrix.rows != matrix.cols)
        throw InputError("max_eigenvalue: matrix must be square");
    const std::size_t n = matrix.rows;
    DenseMatrix v(n, 1);
    for (std::size_t i = 0; i < n; ++i) v(i, 0) = 1.0 / std::sqrt(static_cast<double>(n));

    double eigenvalue = 0.0;
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        DenseMatrix w = spmm(matrix, v);
        double norm_sq = 0.0;
        double rayleigh = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            norm_sq += w(i, 0) * w(i, 0);
            rayleigh += v(i, 0) * w(i, 0);
        }
        if (norm_sq == 0.0) return 0.0;  // v in the null space; zero operator
        const double norm = std::sqrt(norm_sq);
        for (std::size_t i = 0; i < n; ++i) w(i, 0) /= norm;
        const double change = std::abs(rayleigh - eigenvalue);
        eigenvalue = rayleigh;
        v = std::move(w);
        if (iter > 0 && change <= tolerance * std::max(1.0, std::abs(eigenvalue)))
            return eigenvalue;
    }
    throw NumericError("max_eigenvalue: power iteration did not converge after " +
                       std::to_string(max_iterations) + " iterations");
}

GridGraph GridGraph::build(std::size_t height, std::size_t width, Connectivity connectivity) {
    GridGraph g;
    g.height = height;
    g.width = width;
    g.connectivity = connectivity;
    g.adjacency = normalize_adjacency(build_adjacency(height, width, connectivity));
    return g;
}

}  // namespace gcnseg
