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
#include <limits>

#include <doctest.h>

#include "gcnseg/errors.hpp"
#include "gcnseg/numerics.hpp"
#include "gcnseg/parallel.hpp"
#include "oracles.hpp"

using namespace gcnseg;
namespace oracle = gcnseg::testing;

namespace {

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    REQUIRE(a.rows == b.rows);
    REQUIRE(a.cols == b.cols);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
    return worst;
}

bool same_structure(const CsrMatrix& a, const CsrMatrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.row_ptr == b.row_ptr &&
           a.col_idx == b.col_idx && a.values == b.values;
}

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("spmm identity and annihilator") {
    const DenseMatrix b = DenseMatrix::from_rows({{1, 2}, {3, 4}});
    CHECK(max_abs_diff(spmm(CsrMatrix::identity(2), b), b) == 0.0);

    const CsrMatrix zero(3, 2);  // nnz = 0
    const DenseMatrix any = DenseMatrix::from_rows({{5, -1}, {2, 7}});
    const DenseMatrix out = spmm(zero, any);
    for (double v : out.data) CHECK(v == 0.0);
}

TEST_CASE("spmm equals the densified brute-force product bit for bit") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t rows = 1 + rng.below(8);
        const std::size_t inner = 1 + rng.below(8);
        const std::size_t cols = 1 + rng.below(6);
        const CsrMatrix a = oracle::random_csr(rng, rows, inner, 0.4);
        const DenseMatrix b = oracle::random_dense(rng, inner, cols);
        const DenseMatrix expected = oracle::naive_matmul(oracle::naive_densify(a), b);
        CHECK(max_abs_diff(spmm(a, b), expected) == 0.0);
    }
}

TEST_CASE("gemm hand cases") {
    const DenseMatrix a = DenseMatrix::from_rows({{1, 2}, {3, 4}});
    CHECK(max_abs_diff(gemm(a, DenseMatrix::identity(2)), a) == 0.0);
    const DenseMatrix swap = DenseMatrix::from_rows({{0, 1}, {1, 0}});
    const DenseMatrix expected = DenseMatrix::from_rows({{2, 1}, {4, 3}});
    CHECK(max_abs_diff(gemm(a, swap), expected) == 0.0);
}

TEST_CASE("gemm matches the naive triple loop bit for bit") {
    Rng rng(7);
    const DenseMatrix a = oracle::random_dense(rng, 5, 7);
    const DenseMatrix b = oracle::random_dense(rng, 7, 3);
    CHECK(max_abs_diff(gemm(a, b), oracle::naive_matmul(a, b)) == 0.0);
}

TEST_CASE("gemm_tn matches transpose-then-multiply bit for bit") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng.below(16);
        const std::size_t in = 1 + rng.below(6);
        const std::size_t out = 1 + rng.below(5);
        const DenseMatrix a = oracle::random_dense(rng, n, in);
        const DenseMatrix b = oracle::random_dense(rng, n, out);
        CHECK(max_abs_diff(gemm_tn(a, b), oracle::naive_matmul(a.transposed(), b)) == 0.0);
    }
}

TEST_CASE("transpose_spmm") {
    Rng rng(3);
    SUBCASE("identity") {
        const DenseMatrix b = oracle::random_dense(rng, 4, 3);
        CHECK(max_abs_diff(transpose_spmm(CsrMatrix::identity(4), b), b) == 0.0);
    }
    SUBCASE("symmetric input equals spmm") {
        // Symmetrize a random square CSR: a + a^T has symmetric structure.
        std::vector<Triplet> entries;
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j)
                if (rng.next_double() < 0.4) {
                    const double v = rng.uniform(-1, 1);
                    entries.push_back({i, j, v});
                    entries.push_back({j, i, v});
                }
        const CsrMatrix sym = CsrMatrix::from_triplets(5, 5, entries);
        const DenseMatrix b = oracle::random_dense(rng, 5, 2);
        CHECK(max_abs_diff(transpose_spmm(sym, b), spmm(sym, b)) == 0.0);
    }
    SUBCASE("random rectangular vs densified oracle") {
        for (int trial = 0; trial < 30; ++trial) {
            const CsrMatrix a = oracle::random_csr(rng, 4, 3, 0.5);
            const DenseMatrix b = oracle::random_dense(rng, 4, 2);
            const DenseMatrix expected =
                oracle::naive_matmul(oracle::naive_densify(a).transposed(), b);
            CHECK(max_abs_diff(transpose_spmm(a, b), expected) == 0.0);
        }
    }
}

TEST_CASE("dimension mismatches are input errors") {
    const DenseMatrix d23 = DenseMatrix(2, 3);
    const DenseMatrix d23b = DenseMatrix(2, 3);
    CHECK_THROWS_AS((void)gemm(d23, d23b), InputError);
    CHECK_THROWS_AS((void)spmm(CsrMatrix::identity(2), DenseMatrix(3, 2)), InputError);
    CHECK_THROWS_AS((void)transpose_spmm(CsrMatrix::identity(2), DenseMatrix(3, 2)), InputError);
    CHECK_THROWS_AS((void)gemm_tn(DenseMatrix(2, 3), DenseMatrix(3, 2)), InputError);
}

TEST_CASE("non-finite inputs are rejected") {
    DenseMatrix bad(2, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    const DenseMatrix good = DenseMatrix::identity(2);
    CHECK_THROWS_AS((void)gemm(bad, good), InputError);
    CHECK_THROWS_AS((void)gemm(good, bad), InputError);
    CHECK_THROWS_AS((void)spmm(CsrMatrix::identity(2), bad), InputError);

    CsrMatrix sparse_bad = CsrMatrix::identity(2);
    sparse_bad.values[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS((void)spmm(sparse_bad, good), InputError);
    CHECK_THROWS_AS((void)sparse_bad.validate(), InputError);
}

TEST_CASE("csr canonicalization is idempotent") {
    // Hand-built non-canonical matrix: unsorted columns and a duplicate.
    CsrMatrix raw(2, 4);
    raw.row_ptr = {0, 3, 5};
    raw.col_idx = {2, 0, 2, 3, 1};
    raw.values = {1.0, 2.0, 0.25, -1.0, 4.0};
    const CsrMatrix once = raw.canonicalized();
    const CsrMatrix twice = once.canonicalized();
    CHECK(same_structure(once, twice));
    once.validate();
    CHECK(once.nnz() == 4);  // duplicate (0,2) merged
    CHECK(oracle::naive_densify(once)(0, 2) == 1.25);
}

TEST_CASE("from_triplets sums duplicates and validates bounds") {
    const CsrMatrix m = CsrMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 0, 2.5}, {1, 1, -1.0}});
    CHECK(m.nnz() == 2);
    CHECK(oracle::naive_densify(m)(0, 0) == 3.5);
    CHECK_THROWS_AS((void)CsrMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), InputError);
}

TEST_CASE("validate rejects broken structures") {
    CsrMatrix m = CsrMatrix::identity(3);
    SUBCASE("row_ptr decreasing") {
        m.row_ptr = {0, 2, 1, 3};
        CHECK_THROWS_AS(m.validate(), InputError);
    }
    SUBCASE("column out of range") {
        m.col_idx[1] = 9;
        CHECK_THROWS_AS(m.validate(), InputError);
    }
    SUBCASE("unsorted columns") {
        m.row_ptr = {0, 2, 3, 3};
        m.col_idx = {1, 0, 2};
        CHECK_THROWS_AS(m.validate(), InputError);
    }
}

TEST_CASE("results are identical across thread counts") {
    Rng rng(99);
    const CsrMatrix a = oracle::random_csr(rng, 600, 500, 0.02);
    const DenseMatrix b = oracle::random_dense(rng, 500, 17);
    const DenseMatrix big_a = oracle::random_dense(rng, 700, 40);
    const DenseMatrix big_b = oracle::random_dense(rng, 40, 23);

    set_max_threads(1);
    const DenseMatrix s1 = spmm(a, b);
    const DenseMatrix g1 = gemm(big_a, big_b);
    const DenseMatrix t1 = gemm_tn(big_a, oracle::random_dense(rng, 700, 5));
    set_max_threads(4);
    Rng rng2(99);
    (void)rng2;
    const DenseMatrix s2 = spmm(a, b);
    const DenseMatrix g2 = gemm(big_a, big_b);
    set_max_threads(1);
    CHECK(max_abs_diff(s1, s2) == 0.0);
    CHECK(max_abs_diff(g1, g2) == 0.0);
    CHECK(t1.rows == 40);
}

}  // TEST_SUITE
