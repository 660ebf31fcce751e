#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nids {

// Dense row-major matrix of doubles. Rows also double as batches of
// feature vectors; a 1xN tensor is used where a plain vector is needed
// in matrix expressions.
struct Tensor2 {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Tensor2() = default;
    Tensor2(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
    Tensor2(int r, int c, std::vector<double> values);

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    std::span<double> row(int r) { return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)}; }
    std::span<const double> row(int r) const { return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)}; }

    std::size_t size() const { return data.size(); }

    bool same_shape(const Tensor2& other) const { return rows == other.rows && cols == other.cols; }
    bool operator==(const Tensor2& other) const = default;
};

// C = A * B
Tensor2 matmul(const Tensor2& a, const Tensor2& b);
// C = A^T * B
Tensor2 matmul_at_b(const Tensor2& a, const Tensor2& b);
// C = A * B^T
Tensor2 matmul_a_bt(const Tensor2& a, const Tensor2& b);

// out[r] += v for every row r.
void add_row_vector(Tensor2& m, std::span<const double> v);
// Column sums as a vector of length m.cols.
std::vector<double> col_sums(const Tensor2& m);

// Copies the selected rows (in the given order) into a new tensor.
Tensor2 gather_rows(const Tensor2& m, std::span<const std::size_t> indices);

bool all_finite(const Tensor2& m);

}  // namespace nids
