#pragma once

// Shared helpers for the test suites: oracle implementations kept independent
// of the library's computation paths, plus small synthetic dataset builders.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "tlog/dense.hpp"
#include "tlog/rng.hpp"
#include "tlog/sparse.hpp"
#include "tlog/triples.hpp"

namespace testutil {

using tlog::DenseMatrix;
using tlog::Rng;
using tlog::SparseBoolMatrix;
using tlog::Triple;

// Naive triple-loop product, the dense-matmul oracle.
inline DenseMatrix matmul_oracle(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += a.at(i, k) * b.at(k, j);
            c.at(i, j) = s;
        }
    return c;
}

// Nested-loop relational join-project: {(x,z) | exists y: A(x,y) and B(y,z)}.
inline std::set<std::pair<int32_t, int32_t>> join_oracle(const SparseBoolMatrix& a,
                                                         const SparseBoolMatrix& b) {
    std::set<std::pair<int32_t, int32_t>> out;
    for (const auto& [x, y] : a.entries())
        for (const auto& [y2, z] : b.entries())
            if (y == y2) out.insert({x, z});
    return out;
}

// DFS reachability through at least one edge; the transitive-closure oracle.
inline std::set<std::pair<int32_t, int32_t>> reachability_oracle(const SparseBoolMatrix& g) {
    const std::size_t n = g.rows();
    std::set<std::pair<int32_t, int32_t>> out;
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<char> seen(n, 0);
        std::vector<int32_t> stack;
        for (const int32_t* p = g.row_begin(static_cast<int32_t>(s));
             p != g.row_end(static_cast<int32_t>(s)); ++p)
            stack.push_back(*p);
        while (!stack.empty()) {
            const int32_t v = stack.back();
            stack.pop_back();
            if (seen[v]) continue;
            seen[v] = 1;
            out.insert({static_cast<int32_t>(s), v});
            for (const int32_t* p = g.row_begin(v); p != g.row_end(v); ++p)
                if (!seen[*p]) stack.push_back(*p);
        }
    }
    return out;
}

// Longest path length (in edges) of a DAG; -1 signals a cycle.
inline int longest_path_oracle(const SparseBoolMatrix& g) {
    const std::size_t n = g.rows();
    std::vector<int> indeg(n, 0);
    for (const auto& [u, v] : g.entries()) ++indeg[v];
    std::vector<int32_t> order;
    for (std::size_t i = 0; i < n; ++i)
        if (indeg[i] == 0) order.push_back(static_cast<int32_t>(i));
    std::vector<int> dist(n, 0);
    int best = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const int32_t u = order[k];
        for (const int32_t* p = g.row_begin(u); p != g.row_end(u); ++p) {
            dist[*p] = std::max(dist[*p], dist[u] + 1);
            best = std::max(best, dist[*p]);
            if (--indeg[*p] == 0) order.push_back(*p);
        }
    }
    if (order.size() != n) return -1;
    return best;
}

inline SparseBoolMatrix random_graph(std::size_t n, double density, Rng& rng) {
    std::vector<std::pair<int32_t, int32_t>> es;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && rng.next_double() < density)
                es.emplace_back(static_cast<int32_t>(i), static_cast<int32_t>(j));
    return SparseBoolMatrix::from_entries(n, n, std::move(es));
}

// Random DAG: edges only from lower to higher index.
inline SparseBoolMatrix random_dag(std::size_t n, double density, Rng& rng) {
    std::vector<std::pair<int32_t, int32_t>> es;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.next_double() < density)
                es.emplace_back(static_cast<int32_t>(i), static_cast<int32_t>(j));
    return SparseBoolMatrix::from_entries(n, n, std::move(es));
}

// Sort-based rank oracle: pessimistic filtered rank computed by re-sorting.
inline std::int64_t rank_oracle(const std::vector<double>& scores, int32_t target,
                                const std::vector<int32_t>& mask) {
    std::vector<char> masked(scores.size(), 0);
    for (int32_t e : mask)
        if (e >= 0 && static_cast<std::size_t>(e) < scores.size()) masked[e] = 1;
    masked[target] = 0;
    std::vector<std::pair<double, int32_t>> rows;
    for (std::size_t e = 0; e < scores.size(); ++e)
        if (!masked[e]) rows.emplace_back(scores[e], static_cast<int32_t>(e));
    // Descending by score; ties put the target last.
    std::sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return (a.second == target) < (b.second == target);
    });
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].second == target) return static_cast<std::int64_t>(i + 1);
    return -1;
}

}  // namespace testutil
