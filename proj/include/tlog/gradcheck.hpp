#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tlog/dense.hpp"

namespace tlog {

struct GradCheckReport {
    double max_rel_err = 0.0;
    std::size_t coords_checked = 0;
};

// Central-difference check of analytic gradients. `loss` must be a pure,
// deterministic function of the matrices behind `params`; each coordinate is
// perturbed by +/-eps in place and restored. When max_coords_per_block > 0,
// that many coordinates per block are sampled (seeded); otherwise all are
// checked. Relative error per coordinate is
//   |analytic - fd| / max(|analytic|, |fd|, 1e-8).
// Throws if the loss comes back non-finite.
GradCheckReport finite_diff_check(const std::function<double()>& loss,
                                  const std::vector<DenseMatrix*>& params,
                                  const std::vector<const DenseMatrix*>& analytic, double eps,
                                  std::size_t max_coords_per_block = 0, std::uint64_t seed = 42);

}  // namespace tlog
