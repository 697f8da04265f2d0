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
#include <initializer_list>
#include <span>
#include <vector>

namespace gcnseg {

/// Row-major dense matrix of 64-bit floats.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // length rows * cols

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static DenseMatrix identity(std::size_t n);

    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }

    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }

    DenseMatrix transposed() const;

    bool all_finite() const;
};

struct Triplet {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

/// Compressed-sparse-row matrix of 64-bit floats.
///
/// Canonical form: row_ptr non-decreasing with row_ptr[0] = 0 and
/// row_ptr[rows] = nnz, and column indices strictly increasing within
/// each row. All operations assume (and produce) canonical inputs;
/// validate() checks the structure explicitly.
struct CsrMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> row_ptr;  // length rows + 1
    std::vector<std::size_t> col_idx;
    std::vector<double> values;

    CsrMatrix() = default;
    CsrMatrix(std::size_t r, std::size_t c)
        : rows(r), cols(c), row_ptr(r + 1, 0) {}

    static CsrMatrix identity(std::size_t n);

    /// Builds a canonical matrix from an arbitrary triplet list; duplicate
    /// (row, col) entries are summed in list order.
    static CsrMatrix from_triplets(std::size_t rows, std::size_t cols,
                                   std::vector<Triplet> entries);

    std::size_t nnz() const { return values.size(); }

    /// Throws InputError when the structural invariants do not hold or a
    /// stored value is non-finite.
    void validate() const;

    /// Sorts columns within each row and merges duplicates. Idempotent.
    CsrMatrix canonicalized() const;

    CsrMatrix transposed() const;

    DenseMatrix densified() const;
};

/// result = a * b with ascending-k summation per output element.
DenseMatrix spmm(const CsrMatrix& a, const DenseMatrix& b);

/// result = a * b, same summation order as spmm.
DenseMatrix gemm(const DenseMatrix& a, const DenseMatrix& b);

/// result = transpose(a) * b.
DenseMatrix transpose_spmm(const CsrMatrix& a, const DenseMatrix& b);

/// result = transpose(a) * b for dense a; summation ascends over a's rows.
DenseMatrix gemm_tn(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace gcnseg
