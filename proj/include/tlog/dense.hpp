#pragma once

#include <cstddef>
#include <vector>

namespace tlog {

// Row-major float64 matrix. All public operations keep entries finite.
class DenseMatrix {
   public:
    DenseMatrix() : rows_(0), cols_(0) {}
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& at(std::size_t r, std::size_t c) { return v_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }

    double* row(std::size_t r) { return v_.data() + r * cols_; }
    const double* row(std::size_t r) const { return v_.data() + r * cols_; }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::size_t size() const { return v_.size(); }

    bool same_shape(const DenseMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    static DenseMatrix identity(std::size_t n);

    bool all_finite() const;

   private:
    std::size_t rows_, cols_;
    std::vector<double> v_;
};

// C = A * B. Throws on inner-dimension mismatch.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix transpose(const DenseMatrix& a);

// Row i of the result is row i of `rows` times mats[i]. All mats must be d x d
// with d = rows.cols(). Throws on a ragged batch.
DenseMatrix batched_transform(const DenseMatrix& rows, const std::vector<const DenseMatrix*>& mats);

// Scales every row to unit L2 norm. Rows with norm below `eps` are returned
// unchanged so zero rows never produce NaN.
DenseMatrix row_normalize(const DenseMatrix& m, double eps = 1e-12);
void row_normalize_inplace(DenseMatrix& m, double eps = 1e-12);

// v * M for a row vector v of length M.rows().
std::vector<double> vec_matmul(const std::vector<double>& v, const DenseMatrix& m);
// v * M^T, i.e. dot of v with every row of M.
std::vector<double> vec_matmul_t(const std::vector<double>& v, const DenseMatrix& m);

double dot(const double* a, const double* b, std::size_t n);
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace tlog
