#pragma once

#include <cstdint>
#include <cstddef>
#include <utility>
#include <vector>

namespace tlog {

// Sparse 0/1 matrix in compressed-row form. Column indices are sorted and
// unique within each row, so two matrices with equal entry sets compare equal
// regardless of insertion order.
class SparseBoolMatrix {
   public:
    SparseBoolMatrix() : rows_(0), cols_(0), row_ptr_(1, 0) {}
    SparseBoolMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

    // Builds from coordinate pairs; duplicates merged, indices bounds-checked.
    static SparseBoolMatrix from_entries(std::size_t rows, std::size_t cols,
                                         std::vector<std::pair<int32_t, int32_t>> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(col_idx_.size()); }

    bool contains(int32_t r, int32_t c) const;

    // Sorted column indices of row r.
    const int32_t* row_begin(int32_t r) const { return col_idx_.data() + row_ptr_[r]; }
    const int32_t* row_end(int32_t r) const { return col_idx_.data() + row_ptr_[r + 1]; }
    std::size_t row_size(int32_t r) const { return row_ptr_[r + 1] - row_ptr_[r]; }

    std::vector<std::pair<int32_t, int32_t>> entries() const;

    // Entry count on the main diagonal.
    std::int64_t diagonal_count() const;

    bool operator==(const SparseBoolMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && row_ptr_ == o.row_ptr_ &&
               col_idx_ == o.col_idx_;
    }
    bool operator!=(const SparseBoolMatrix& o) const { return !(*this == o); }

   private:
    std::size_t rows_, cols_;
    std::vector<std::size_t> row_ptr_;
    std::vector<int32_t> col_idx_;
};

// Sparse integer matrix holding witness counts (64-bit, N <= 2^31 assumed).
class SparseCountMatrix {
   public:
    SparseCountMatrix() : rows_(0), cols_(0), row_ptr_(1, 0) {}
    SparseCountMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(col_idx_.size()); }

    std::int64_t count_at(int32_t r, int32_t c) const;

    friend SparseCountMatrix bool_matmul_count(const SparseBoolMatrix&, const SparseBoolMatrix&);
    friend SparseBoolMatrix heaviside(const SparseCountMatrix&);
    friend SparseCountMatrix lift_to_counts(const SparseBoolMatrix&);

   private:
    std::size_t rows_, cols_;
    std::vector<std::size_t> row_ptr_;
    std::vector<int32_t> col_idx_;
    std::vector<std::int64_t> counts_;
};

// Exact witness counts of the Boolean product: entry (x,z) counts the y with
// A[x,y] = 1 and B[y,z] = 1. Throws on inner-dimension mismatch.
SparseCountMatrix bool_matmul_count(const SparseBoolMatrix& a, const SparseBoolMatrix& b);

// Keeps entries with count > 0 as Boolean 1s.
SparseBoolMatrix heaviside(const SparseCountMatrix& m);

// Boolean matrix viewed as a count matrix of ones.
SparseCountMatrix lift_to_counts(const SparseBoolMatrix& m);

// Boolean product with the step fused: heaviside(bool_matmul_count(a, b)).
SparseBoolMatrix bool_matmul(const SparseBoolMatrix& a, const SparseBoolMatrix& b);

// Set union; shapes must match.
SparseBoolMatrix bool_union(const SparseBoolMatrix& a, const SparseBoolMatrix& b);

// Entries of a that are absent from b.
std::vector<std::pair<int32_t, int32_t>> entries_minus(const SparseBoolMatrix& a,
                                                       const SparseBoolMatrix& b);

SparseBoolMatrix sparse_transpose(const SparseBoolMatrix& a);

}  // namespace tlog
