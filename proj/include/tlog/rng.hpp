#pragma once

#include <cstdint>
#include <vector>

#include "tlog/dense.hpp"

namespace tlog {

// splitmix64 stream. The algorithm is fixed here and documented in the README;
// identical seed and call sequence give bit-identical output on any platform.
// Child streams for independent consumers come from split(), keyed by a tag.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    // Uniform in [0, 1), 53-bit mantissa.
    double next_double();

    double uniform(double lo, double hi);

    // Uniform integer in [0, n), rejection-sampled so the law is exact.
    std::uint64_t next_below(std::uint64_t n);

    // Independent child stream; deterministic function of (state, tag).
    Rng split(std::uint64_t tag) const;

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

   private:
    std::uint64_t state_;
};

// Entries uniform in [-sqrt(6/(rows+cols)), +sqrt(6/(rows+cols))], row-major
// fill order, deterministic per seed.
DenseMatrix xavier_uniform(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace tlog
