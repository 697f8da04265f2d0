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
#include "gcnseg/grid_graph.hpp"
#include "oracles.hpp"

using namespace gcnseg;
namespace oracle = gcnseg::testing;

namespace {

std::size_t row_degree(const CsrMatrix& m, std::size_t r) {
    return m.row_ptr[r + 1] - m.row_ptr[r];
}

double entry(const CsrMatrix& m, std::size_t r, std::size_t c) {
    for (std::size_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k)
        if (m.col_idx[k] == c) return m.values[k];
    return 0.0;
}

}  // namespace

TEST_SUITE("grid_graph") {

TEST_CASE("adjacency of tiny grids") {
    const CsrMatrix single = build_adjacency(1, 1, Connectivity::Eight);
    CHECK(single.rows == 1);
    CHECK(single.nnz() == 0);

    const CsrMatrix pair = build_adjacency(1, 2, Connectivity::Eight);
    CHECK(pair.nnz() == 2);
    CHECK(entry(pair, 0, 1) == 1.0);
    CHECK(entry(pair, 1, 0) == 1.0);
    CHECK(entry(pair, 0, 0) == 0.0);
}

TEST_CASE("3x3 degrees for both connectivities") {
    const CsrMatrix eight = build_adjacency(3, 3, Connectivity::Eight);
    CHECK(row_degree(eight, 4) == 8);  // center
    CHECK(row_degree(eight, 0) == 3);  // corner
    CHECK(row_degree(eight, 1) == 5);  // edge midpoint

    const CsrMatrix four = build_adjacency(3, 3, Connectivity::Four);
    CHECK(row_degree(four, 4) == 4);
    CHECK(row_degree(four, 0) == 2);
    CHECK(row_degree(four, 1) == 3);
}

TEST_CASE("zero dimension is an input error") {
    CHECK_THROWS_AS((void)build_adjacency(0, 3, Connectivity::Eight), InputError);
    CHECK_THROWS_AS((void)build_adjacency(3, 0, Connectivity::Four), InputError);
}

TEST_CASE("normalization hand cases") {
    SUBCASE("singleton") {
        const CsrMatrix n = normalize_adjacency(build_adjacency(1, 1, Connectivity::Eight));
        CHECK(n.nnz() == 1);
        CHECK(entry(n, 0, 0) == 1.0);
    }
    SUBCASE("1x2 grid gives exact halves") {
        const CsrMatrix n = normalize_adjacency(build_adjacency(1, 2, Connectivity::Eight));
        CHECK(entry(n, 0, 0) == 0.5);
        CHECK(entry(n, 0, 1) == 0.5);
        CHECK(entry(n, 1, 0) == 0.5);
        CHECK(entry(n, 1, 1) == 0.5);
    }
    SUBCASE("3x3 interior self-loop is exactly 1/9") {
        const CsrMatrix n = normalize_adjacency(build_adjacency(3, 3, Connectivity::Eight));
        CHECK(entry(n, 4, 4) == 1.0 / 9.0);
    }
}

TEST_CASE("normalization input validation") {
    CHECK_THROWS_AS((void)normalize_adjacency(CsrMatrix(2, 3)), InputError);
    // nonzero diagonal
    CHECK_THROWS_AS((void)normalize_adjacency(CsrMatrix::identity(2)), InputError);
    // non-binary values
    const CsrMatrix weighted =
        CsrMatrix::from_triplets(2, 2, {{0, 1, 0.5}, {1, 0, 0.5}});
    CHECK_THROWS_AS((void)normalize_adjacency(weighted), InputError);
}

TEST_CASE("normalized matrix matches the dense oracle on all grids up to 5x5") {
    for (const Connectivity conn : {Connectivity::Four, Connectivity::Eight}) {
        for (std::size_t h = 1; h <= 5; ++h)
            for (std::size_t w = 1; w <= 5; ++w) {
                const CsrMatrix a = build_adjacency(h, w, conn);
                const CsrMatrix n = normalize_adjacency(a);
                const DenseMatrix expected = oracle::naive_normalize(oracle::naive_densify(a));
                const DenseMatrix got = oracle::naive_densify(n);
                double worst = 0.0;
                for (std::size_t i = 0; i < got.data.size(); ++i)
                    worst = std::max(worst, std::abs(got.data[i] - expected.data[i]));
                CHECK(worst <= 1e-12);
            }
    }
}

TEST_CASE("normalized matrix is exactly symmetric with positive values and full diagonal") {
    const CsrMatrix n = normalize_adjacency(build_adjacency(4, 5, Connectivity::Eight));
    const CsrMatrix nt = n.transposed();
    CHECK(n.row_ptr == nt.row_ptr);
    CHECK(n.col_idx == nt.col_idx);
    CHECK(n.values == nt.values);
    for (std::size_t r = 0; r < n.rows; ++r) CHECK(entry(n, r, r) > 0.0);
    for (double v : n.values) CHECK(v > 0.0);
    // interior nodes carry 8 neighbors + the self-loop
    CHECK(row_degree(n, 1 * 5 + 2) == 9);
}

TEST_CASE("degree-scaled ones vector is a fixed point of the normalized matrix") {
    const CsrMatrix a = build_adjacency(4, 4, Connectivity::Eight);
    const CsrMatrix n = normalize_adjacency(a);
    DenseMatrix v(n.rows, 1);
    for (std::size_t r = 0; r < n.rows; ++r)
        v(r, 0) = std::sqrt(static_cast<double>(row_degree(a, r)) + 1.0);
    const DenseMatrix image = spmm(n, v);
    for (std::size_t r = 0; r < n.rows; ++r)
        CHECK(std::abs(image(r, 0) - v(r, 0)) <= 1e-12 * std::abs(v(r, 0)));
}

TEST_CASE("torus grid is 9-regular with all values exactly 1/9") {
    // Wraparound variant used only here: every node has all 8 neighbors.
    const std::size_t h = 4, w = 5;
    std::vector<Triplet> entries;
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dy == 0 && dx == 0) continue;
                    const std::size_t ny = (y + h + static_cast<std::size_t>(dy + 1) - 1) % h;
                    const std::size_t nx = (x + w + static_cast<std::size_t>(dx + 1) - 1) % w;
                    entries.push_back({y * w + x, ny * w + nx, 1.0});
                }
    const CsrMatrix torus = CsrMatrix::from_triplets(h * w, h * w, entries);
    const CsrMatrix n = normalize_adjacency(torus);
    for (std::size_t r = 0; r < n.rows; ++r) CHECK(row_degree(n, r) == 9);
    for (double v : n.values) CHECK(v == 1.0 / 9.0);
}

TEST_CASE("power iteration") {
    SUBCASE("identity gives exactly 1") {
        CHECK(max_eigenvalue(CsrMatrix::identity(6)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("rank-one half matrix") {
        const CsrMatrix m = CsrMatrix::from_triplets(
            2, 2, {{0, 0, 0.5}, {0, 1, 0.5}, {1, 0, 0.5}, {1, 1, 0.5}});
        CHECK(std::abs(max_eigenvalue(m) - 1.0) <= 1e-9);
    }
    SUBCASE("normalized grids have top eigenvalue 1") {
        for (std::size_t h : {2, 3, 5})
            for (std::size_t w : {2, 4}) {
                const double ev =
                    max_eigenvalue(normalize_adjacency(build_adjacency(h, w, Connectivity::Eight)));
                CHECK(std::abs(ev - 1.0) <= 1e-6);
            }
    }
    SUBCASE("iteration budget exhaustion raises a numeric error") {
        const CsrMatrix n = normalize_adjacency(build_adjacency(3, 3, Connectivity::Eight));
        CHECK_THROWS_AS((void)max_eigenvalue(n, 1e-9, 1), NumericError);
    }
    SUBCASE("non-square input") {
        CHECK_THROWS_AS((void)max_eigenvalue(CsrMatrix(2, 3)), InputError);
    }
}

TEST_CASE("GridGraph::build wires everything together") {
    const GridGraph g = GridGraph::build(3, 4);
    CHECK(g.node_count() == 12);
    CHECK(g.adjacency.rows == 12);
    CHECK(g.connectivity == Connectivity::Eight);
    g.adjacency.validate();
}

}  // TEST_SUITE
