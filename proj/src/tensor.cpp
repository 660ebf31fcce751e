#include "nids/tensor.hpp"

#include <cmath>
#include <string>

#include "nids/errors.hpp"

namespace nids {

namespace {

void check_dims(const char* op, int got_r, int got_c, int want_r, int want_c) {
    if (got_r != want_r || got_c != want_c) {
        throw DimensionMismatchError(std::string(op) + ": got " + std::to_string(got_r) + "x" +
                                     std::to_string(got_c) + ", expected " + std::to_string(want_r) +
                                     "x" + std::to_string(want_c));
    }
}

}  // namespace

Tensor2::Tensor2(int r, int c, std::vector<double> values) : rows(r), cols(c), data(std::move(values)) {
    if (data.size() != static_cast<std::size_t>(r) * c) {
        throw DimensionMismatchError("Tensor2: data length does not match rows*cols");
    }
}

Tensor2 matmul(const Tensor2& a, const Tensor2& b) {
    if (a.cols != b.rows) {
        throw DimensionMismatchError("matmul: inner dimensions " + std::to_string(a.cols) + " vs " +
                                     std::to_string(b.rows));
    }
    Tensor2 c(a.rows, b.cols);
    // i-k-j order: the inner loop runs over contiguous rows of B and C.
    for (int i = 0; i < a.rows; ++i) {
        const double* arow = a.data.data() + static_cast<std::size_t>(i) * a.cols;
        double* crow = c.data.data() + static_cast<std::size_t>(i) * c.cols;
        for (int k = 0; k < a.cols; ++k) {
            const double av = arow[k];
            if (av == 0.0) continue;
            const double* brow = b.data.data() + static_cast<std::size_t>(k) * b.cols;
            for (int j = 0; j < b.cols; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

Tensor2 matmul_at_b(const Tensor2& a, const Tensor2& b) {
    if (a.rows != b.rows) {
        throw DimensionMismatchError("matmul_at_b: row counts " + std::to_string(a.rows) + " vs " +
                                     std::to_string(b.rows));
    }
    Tensor2 c(a.cols, b.cols);
    for (int k = 0; k < a.rows; ++k) {
        const double* arow = a.data.data() + static_cast<std::size_t>(k) * a.cols;
        const double* brow = b.data.data() + static_cast<std::size_t>(k) * b.cols;
        for (int i = 0; i < a.cols; ++i) {
            const double av = arow[i];
            if (av == 0.0) continue;
            double* crow = c.data.data() + static_cast<std::size_t>(i) * c.cols;
            for (int j = 0; j < b.cols; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

Tensor2 matmul_a_bt(const Tensor2& a, const Tensor2& b) {
    if (a.cols != b.cols) {
        throw DimensionMismatchError("matmul_a_bt: column counts " + std::to_string(a.cols) +
                                     " vs " + std::to_string(b.cols));
    }
    Tensor2 c(a.rows, b.rows);
    for (int i = 0; i < a.rows; ++i) {
        const double* arow = a.data.data() + static_cast<std::size_t>(i) * a.cols;
        double* crow = c.data.data() + static_cast<std::size_t>(i) * c.cols;
        for (int j = 0; j < b.rows; ++j) {
            const double* brow = b.data.data() + static_cast<std::size_t>(j) * b.cols;
            double sum = 0.0;
            for (int k = 0; k < a.cols; ++k) sum += arow[k] * brow[k];
            crow[j] = sum;
        }
    }
    return c;
}

void add_row_vector(Tensor2& m, std::span<const double> v) {
    check_dims("add_row_vector", m.rows, m.cols, m.rows, static_cast<int>(v.size()));
    for (int i = 0; i < m.rows; ++i) {
        double* row = m.data.data() + static_cast<std::size_t>(i) * m.cols;
        for (int j = 0; j < m.cols; ++j) row[j] += v[static_cast<std::size_t>(j)];
    }
}

std::vector<double> col_sums(const Tensor2& m) {
    std::vector<double> sums(static_cast<std::size_t>(m.cols), 0.0);
    for (int i = 0; i < m.rows; ++i) {
        const double* row = m.data.data() + static_cast<std::size_t>(i) * m.cols;
        for (int j = 0; j < m.cols; ++j) sums[static_cast<std::size_t>(j)] += row[j];
    }
    return sums;
}

Tensor2 gather_rows(const Tensor2& m, std::span<const std::size_t> indices) {
    Tensor2 out(static_cast<int>(indices.size()), m.cols);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const std::size_t src = indices[i];
        for (int j = 0; j < m.cols; ++j) out.at(static_cast<int>(i), j) = m.at(static_cast<int>(src), j);
    }
    return out;
}

bool all_finite(const Tensor2& m) {
    for (double v : m.data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

}  // namespace nids
