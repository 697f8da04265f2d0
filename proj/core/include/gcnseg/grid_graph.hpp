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

#include <cstddef>

#include "gcnseg/numerics.hpp"

namespace gcnseg {

enum class Connectivity { Four, Eight };

/// Binary adjacency of the height x width pixel lattice. Node index is
/// y * width + x; edges join pixels at Manhattan distance 1 (Four) or
/// Chebyshev distance 1 (Eight). Zero diagonal, symmetric.
CsrMatrix build_adjacency(std::size_t height, std::size_t width, Connectivity connectivity);

/// Symmetric normalization with self-loops: given a binary symmetric
/// zero-diagonal adjacency A, returns D^{-1/2} (A + I) D^{-1/2} where the
/// degrees are recomputed from A + I. Entry (i, j) is 1 / sqrt(d_i * d_j),
/// so the result is exactly symmetric and every diagonal entry is present.
CsrMatrix normalize_adjacency(const CsrMatrix& adjacency);

/// Largest-magnitude eigenvalue by power iteration on a symmetric matrix.
/// Throws NumericError when the iteration has not converged to `tolerance`
/// after `max_iterations` steps.
double max_eigenvalue(const CsrMatrix& matrix, double tolerance = 1e-9,
                      std::size_t max_iterations = 10000);

/// Pixel-lattice graph with its normalized adjacency, ready for the model.
struct GridGraph {
    std::size_t height = 0;
    std::size_t width = 0;
    Connectivity connectivity = Connectivity::Eight;
    CsrMatrix adjacency;  // normalized, with self-loops

    static GridGraph build(std::size_t height, std::size_t width,
                           Connectivity connectivity = Connectivity::Eight);

    std::size_t node_count() const { return height * width; }
};

}  // namespace gcnseg
