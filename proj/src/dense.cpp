#include "tlog/dense.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tlog {

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

bool DenseMatrix::all_finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) return false;
    return true;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: shape mismatch " + std::to_string(a.rows()) + "x" +
                                    std::to_string(a.cols()) + " * " + std::to_string(b.rows()) +
                                    "x" + std::to_string(b.cols()));
    DenseMatrix c(a.rows(), b.cols());
    // i-k-j order: streams through b rows, accumulation order fixed per output cell.
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* ai = a.row(i);
        double* ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = ai[k];
            if (aik == 0.0) continue;
            const double* bk = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t.at(j, i) = a.at(i, j);
    return t;
}

DenseMatrix batched_transform(const DenseMatrix& rows, const std::vector<const DenseMatrix*>& mats) {
    if (mats.size() != rows.rows())
        throw std::invalid_argument("batched_transform: batch " + std::to_string(rows.rows()) +
                                    " rows but " + std::to_string(mats.size()) + " matrices");
    const std::size_t d = rows.cols();
    DenseMatrix out(rows.rows(), d);
    for (std::size_t i = 0; i < rows.rows(); ++i) {
        const DenseMatrix& m = *mats[i];
        if (m.rows() != d || m.cols() != d)
            throw std::invalid_argument("batched_transform: matrix " + std::to_string(i) +
                                        " is not " + std::to_string(d) + "x" + std::to_string(d));
        const double* ri = rows.row(i);
        double* oi = out.row(i);
        for (std::size_t k = 0; k < d; ++k) {
            const double rk = ri[k];
            if (rk == 0.0) continue;
            const double* mk = m.row(k);
            for (std::size_t j = 0; j < d; ++j) oi[j] += rk * mk[j];
        }
    }
    return out;
}

void row_normalize_inplace(DenseMatrix& m, double eps) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double* r = m.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += r[j] * r[j];
        const double norm = std::sqrt(s);
        if (norm < eps) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) r[j] /= norm;
    }
}

DenseMatrix row_normalize(const DenseMatrix& m, double eps) {
    DenseMatrix out = m;
    row_normalize_inplace(out, eps);
    return out;
}

std::vector<double> vec_matmul(const std::vector<double>& v, const DenseMatrix& m) {
    if (v.size() != m.rows()) throw std::invalid_argument("vec_matmul: length mismatch");
    std::vector<double> out(m.cols(), 0.0);
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double vk = v[k];
        if (vk == 0.0) continue;
        const double* mk = m.row(k);
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += vk * mk[j];
    }
    return out;
}

std::vector<double> vec_matmul_t(const std::vector<double>& v, const DenseMatrix& m) {
    if (v.size() != m.cols()) throw std::invalid_argument("vec_matmul_t: length mismatch");
    std::vector<double> out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) out[i] = dot(v.data(), m.row(i), v.size());
    return out;
}

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::fabs(a.data()[i] - b.data()[i]);
        if (d > m) m = d;
    }
    return m;
}

}  // namespace tlog
