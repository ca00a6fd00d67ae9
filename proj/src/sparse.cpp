#include "tlog/sparse.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tlog {

SparseBoolMatrix SparseBoolMatrix::from_entries(std::size_t rows, std::size_t cols,
                                                std::vector<std::pair<int32_t, int32_t>> entries) {
    for (const auto& [r, c] : entries) {
        if (r < 0 || static_cast<std::size_t>(r) >= rows || c < 0 ||
            static_cast<std::size_t>(c) >= cols)
            throw std::out_of_range("sparse entry (" + std::to_string(r) + "," +
                                    std::to_string(c) + ") outside " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
    std::sort(entries.begin(), entries.end());
    entries.erase(std::unique(entries.begin(), entries.end()), entries.end());

    SparseBoolMatrix m(rows, cols);
    m.col_idx_.reserve(entries.size());
    std::size_t e = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        while (e < entries.size() && static_cast<std::size_t>(entries[e].first) == r) {
            m.col_idx_.push_back(entries[e].second);
            ++e;
        }
        m.row_ptr_[r + 1] = m.col_idx_.size();
    }
    return m;
}

bool SparseBoolMatrix::contains(int32_t r, int32_t c) const {
    if (r < 0 || static_cast<std::size_t>(r) >= rows_) return false;
    return std::binary_search(row_begin(r), row_end(r), c);
}

std::vector<std::pair<int32_t, int32_t>> SparseBoolMatrix::entries() const {
    std::vector<std::pair<int32_t, int32_t>> out;
    out.reserve(col_idx_.size());
    for (std::size_t r = 0; r < rows_; ++r)
        for (const int32_t* p = row_begin(static_cast<int32_t>(r));
             p != row_end(static_cast<int32_t>(r)); ++p)
            out.emplace_back(static_cast<int32_t>(r), *p);
    return out;
}

std::int64_t SparseBoolMatrix::diagonal_count() const {
    std::int64_t n = 0;
    const std::size_t lim = std::min(rows_, cols_);
    for (std::size_t r = 0; r < lim; ++r)
        if (contains(static_cast<int32_t>(r), static_cast<int32_t>(r))) ++n;
    return n;
}

std::int64_t SparseCountMatrix::count_at(int32_t r, int32_t c) const {
    if (r < 0 || static_cast<std::size_t>(r) >= rows_) return 0;
    const auto b = col_idx_.begin() + row_ptr_[r];
    const auto e = col_idx_.begin() + row_ptr_[r + 1];
    const auto it = std::lower_bound(b, e, c);
    if (it == e || *it != c) return 0;
    return counts_[static_cast<std::size_t>(it - col_idx_.begin())];
}

SparseCountMatrix bool_matmul_count(const SparseBoolMatrix& a, const SparseBoolMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("bool_matmul_count: shape mismatch " +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                    " * " + std::to_string(b.rows()) + "x" +
                                    std::to_string(b.cols()));
    SparseCountMatrix out(a.rows(), b.cols());
    std::vector<std::int64_t> acc(b.cols(), 0);
    std::vector<int32_t> touched;
    for (std::size_t x = 0; x < a.rows(); ++x) {
        touched.clear();
        for (const int32_t* y = a.row_begin(static_cast<int32_t>(x));
             y != a.row_end(static_cast<int32_t>(x)); ++y) {
            for (const int32_t* z = b.row_begin(*y); z != b.row_end(*y); ++z) {
                if (acc[*z] == 0) touched.push_back(*z);
                ++acc[*z];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (int32_t z : touched) {
            out.col_idx_.push_back(z);
            out.counts_.push_back(acc[z]);
            acc[z] = 0;
        }
        out.row_ptr_[x + 1] = out.col_idx_.size();
    }
    return out;
}

SparseBoolMatrix heaviside(const SparseCountMatrix& m) {
    SparseBoolMatrix out(m.rows_, m.cols_);
    std::vector<std::pair<int32_t, int32_t>> kept;
    kept.reserve(m.col_idx_.size());
    for (std::size_t r = 0; r < m.rows_; ++r)
        for (std::size_t k = m.row_ptr_[r]; k < m.row_ptr_[r + 1]; ++k)
            if (m.counts_[k] > 0) kept.emplace_back(static_cast<int32_t>(r), m.col_idx_[k]);
    return SparseBoolMatrix::from_entries(m.rows_, m.cols_, std::move(kept));
}

SparseCountMatrix lift_to_counts(const SparseBoolMatrix& m) {
    SparseCountMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (const int32_t* p = m.row_begin(static_cast<int32_t>(r));
             p != m.row_end(static_cast<int32_t>(r)); ++p) {
            out.col_idx_.push_back(*p);
            out.counts_.push_back(1);
        }
        out.row_ptr_[r + 1] = out.col_idx_.size();
    }
    return out;
}

SparseBoolMatrix bool_matmul(const SparseBoolMatrix& a, const SparseBoolMatrix& b) {
    return heaviside(bool_matmul_count(a, b));
}

SparseBoolMatrix bool_union(const SparseBoolMatrix& a, const SparseBoolMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("bool_union: shape mismatch");
    auto ea = a.entries();
    auto eb = b.entries();
    ea.insert(ea.end(), eb.begin(), eb.end());
    return SparseBoolMatrix::from_entries(a.rows(), a.cols(), std::move(ea));
}

std::vector<std::pair<int32_t, int32_t>> entries_minus(const SparseBoolMatrix& a,
                                                       const SparseBoolMatrix& b) {
    std::vector<std::pair<int32_t, int32_t>> out;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (const int32_t* p = a.row_begin(static_cast<int32_t>(r));
             p != a.row_end(static_cast<int32_t>(r)); ++p)
            if (!b.contains(static_cast<int32_t>(r), *p))
                out.emplace_back(static_cast<int32_t>(r), *p);
    return out;
}

SparseBoolMatrix sparse_transpose(const SparseBoolMatrix& a) {
    auto es = a.entries();
    for (auto& e : es) std::swap(e.first, e.second);
    return SparseBoolMatrix::from_entries(a.cols(), a.rows(), std::move(es));
}

}  // namespace tlog
