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

#include "gcnseg/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gcnseg/errors.hpp"
#include "gcnseg/parallel.hpp"

namespace gcnseg {

namespace {

void require_finite(const DenseMatrix& m, const char* what) {
    if (!m.all_finite())
        throw InputError(std::string(what) + ": matrix contains non-finite entries");
}

void require_finite(const CsrMatrix& m, const char* what) {
    for (double v : m.values)
        if (!std::isfinite(v))
            throw InputError(std::string(what) + ": sparse matrix contains non-finite entries");
}

void require_result_finite(const DenseMatrix& m, const char* what) {
    if (!m.all_finite())
        throw NumericError(std::string(what) + ": result contains non-finite entries");
}

}  // namespace

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    DenseMatrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
    std::size_t i = 0;
    for (const auto& r : rows) {
        if (r.size() != m.cols) throw InputError("from_rows: ragged row lengths");
        std::copy(r.begin(), r.end(), m.data.begin() + i * m.cols);
        ++i;
    }
    return m;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) t(j, i) = data[i * cols + j];
    return t;
}

bool DenseMatrix::all_finite() const {
    for (double v : data)
        if (!std::isfinite(v)) return false;
    return true;
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
    CsrMatrix m(n, n);
    m.col_idx.resize(n);
    m.values.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        m.row_ptr[i] = i;
        m.col_idx[i] = i;
    }
    m.row_ptr[n] = n;
    return m;
}

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                   std::vector<Triplet> entries) {
    for (const Triplet& t : entries) {
        if (t.row >= rows || t.col >= cols)
            throw InputError("from_triplets: entry outside matrix bounds");
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    CsrMatrix m(rows, cols);
    m.col_idx.reserve(entries.size());
    m.values.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size();) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < entries.size() && entries[j].row == entries[i].row &&
               entries[j].col == entries[i].col) {
            sum += entries[j].value;
            ++j;
        }
        m.col_idx.push_back(entries[i].col);
        m.values.push_back(sum);
        ++m.row_ptr[entries[i].row + 1];
        i = j;
    }
    for (std::size_t r = 0; r < rows; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
    return m;
}

void CsrMatrix::validate() const {
    if (row_ptr.size() != rows + 1) throw InputError("csr: row_ptr length != rows + 1");
    if (row_ptr.front() != 0) throw InputError("csr: row_ptr[0] != 0");
    if (row_ptr.back() != values.size() || col_idx.size() != values.size())
        throw InputError("csr: row_ptr[rows] != nnz");
    for (std::size_t r = 0; r < rows; ++r) {
        if (row_ptr[r] > row_ptr[r + 1]) throw InputError("csr: row_ptr not non-decreasing");
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
            if (col_idx[k] >= cols) throw InputError("csr: column index out of range");
            if (k > row_ptr[r] && col_idx[k - 1] >= col_idx[k])
                throw InputError("csr: columns not strictly increasing within a row");
        }
    }
    for (double v : values)
        if (!std::isfinite(v)) throw InputError("csr: non-finite stored value");
}

CsrMatrix CsrMatrix::canonicalized() const {
    std::vector<Triplet> entries;
    entries.reserve(nnz());
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
            entries.push_back({r, col_idx[k], values[k]});
    return from_triplets(rows, cols, std::move(entries));
}

CsrMatrix CsrMatrix::transposed() const {
    CsrMatrix t(cols, rows);
    t.col_idx.resize(nnz());
    t.values.resize(nnz());
    std::vector<std::size_t> counts(cols, 0);
    for (std::size_t c : col_idx) ++counts[c];
    for (std::size_t c = 0; c < cols; ++c) t.row_ptr[c + 1] = t.row_ptr[c] + counts[c];
    std::vector<std::size_t> cursor(t.row_ptr.begin(), t.row_ptr.end() - 1);
    // Walking rows in order keeps each transposed row sorted by column.
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
            const std::size_t pos = cursor[col_idx[k]]++;
            t.col_idx[pos] = r;
            t.values[pos] = values[k];
        }
    }
    return t;
}

DenseMatrix CsrMatrix::densified() const {
    DenseMatrix d(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
            d(r, col_idx[k]) = values[k];
    return d;
}

DenseMatrix spmm(const CsrMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.rows)
        throw InputError("spmm: dimension mismatch (" + std::to_string(a.rows) + "x" +
                         std::to_string(a.cols) + " * " + std::to_string(b.rows) + "x" +
                         std::to_string(b.cols) + ")");
    require_finite(a, "spmm");
    require_finite(b, "spmm");
    DenseMatrix out(a.rows, b.cols);
    const std::size_t width = b.cols;
    parallel_for(a.rows, 256, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            double* dst = out.data.data() + i * width;
            for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
                const double av = a.values[k];
                const double* src = b.data.data() + a.col_idx[k] * width;
                for (std::size_t j = 0; j < width; ++j) dst[j] += av * src[j];
            }
        }
    });
    require_result_finite(out, "spmm");
    return out;
}

DenseMatrix gemm(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.rows)
        throw InputError("gemm: dimension mismatch (" + std::to_string(a.rows) + "x" +
                         std::to_string(a.cols) + " * " + std::to_string(b.rows) + "x" +
                         std::to_string(b.cols) + ")");
    require_finite(a, "gemm");
    require_finite(b, "gemm");
    DenseMatrix out(a.rows, b.cols);
    const std::size_t inner = a.cols;
    const std::size_t width = b.cols;
    parallel_for(a.rows, 128, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            double* dst = out.data.data() + i * width;
            const double* arow = a.data.data() + i * inner;
            for (std::size_t k = 0; k < inner; ++k) {
                const double av = arow[k];
                const double* src = b.data.data() + k * width;
                for (std::size_t j = 0; j < width; ++j) dst[j] += av * src[j];
            }
        }
    });
    require_result_finite(out, "gemm");
    return out;
}

DenseMatrix transpose_spmm(const CsrMatrix& a, const DenseMatrix& b) {
    if (a.rows != b.rows)
        throw InputError("transpose_spmm: dimension mismatch (" + std::to_string(a.rows) +
                         "x" + std::to_string(a.cols) + "^T * " + std::to_string(b.rows) +
                         "x" + std::to_string(b.cols) + ")");
    require_finite(a, "transpose_spmm");
    require_finite(b, "transpose_spmm");
    // Gather through the materialized transpose; per output row the
    // summation then ascends over a's row index, matching spmm's order.
    const CsrMatrix at = a.transposed();
    DenseMatrix out(a.cols, b.cols);
    const std::size_t width = b.cols;
    parallel_for(at.rows, 256, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            double* dst = out.data.data() + i * width;
            for (std::size_t k = at.row_ptr[i]; k < at.row_ptr[i + 1]; ++k) {
                const double av = at.values[k];
                const double* src = b.data.data() + at.col_idx[k] * width;
                for (std::size_t j = 0; j < width; ++j) dst[j] += av * src[j];
            }
        }
    });
    require_result_finite(out, "transpose_spmm");
    return out;
}

DenseMatrix gemm_tn(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows != b.rows)
        throw InputError("gemm_tn: dimension mismatch (" + std::to_string(a.rows) + "x" +
                         std::to_string(a.cols) + "^T * " + std::to_string(b.rows) + "x" +
                         std::to_string(b.cols) + ")");
    require_finite(a, "gemm_tn");
    require_finite(b, "gemm_tn");
    DenseMatrix out(a.cols, b.cols);
    const std::size_t width = b.cols;
    const std::size_t inner = a.rows;
    // Output is small (parameter-shaped); keep it hot and stream a and b.
    parallel_for(a.cols, 16, [&](std::size_t begin, std::size_t end) {
        for (std::size_t n = 0; n < inner; ++n) {
            const double* arow = a.data.data() + n * a.cols;
            const double* brow = b.data.data() + n * width;
            for (std::size_t i = begin; i < end; ++i) {
                double* dst = out.data.data() + i * width;
                const double av = arow[i];
                for (std::size_t j = 0; j < width; ++j) dst[j] += av * brow[j];
            }
        }
    });
    require_result_finite(out, "gemm_tn");
    return out;
}

}  // namespace gcnseg
