#include "tlog/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tlog/rng.hpp"

namespace tlog {

GradCheckReport finite_diff_check(const std::function<double()>& loss,
                                  const std::vector<DenseMatrix*>& params,
                                  const std::vector<const DenseMatrix*>& analytic, double eps,
                                  std::size_t max_coords_per_block, std::uint64_t seed) {
    if (eps <= 0.0) throw std::invalid_argument("finite_diff_check: eps must be > 0");
    if (params.size() != analytic.size())
        throw std::invalid_argument("finite_diff_check: params/grads count mismatch");

    Rng rng(seed);
    GradCheckReport rep;
    for (std::size_t b = 0; b < params.size(); ++b) {
        DenseMatrix& p = *params[b];
        const DenseMatrix& g = *analytic[b];
        if (!p.same_shape(g))
            throw std::invalid_argument("finite_diff_check: grad block shape mismatch");

        std::vector<std::size_t> coords;
        if (max_coords_per_block == 0 || max_coords_per_block >= p.size()) {
            coords.resize(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) coords[i] = i;
        } else {
            for (std::size_t i = 0; i < max_coords_per_block; ++i)
                coords.push_back(static_cast<std::size_t>(rng.next_below(p.size())));
            std::sort(coords.begin(), coords.end());
            coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
        }

        for (std::size_t idx : coords) {
            const double orig = p.data()[idx];
            p.data()[idx] = orig + eps;
            const double lp = loss();
            p.data()[idx] = orig - eps;
            const double lm = loss();
            p.data()[idx] = orig;
            if (!std::isfinite(lp) || !std::isfinite(lm))
                throw std::runtime_error("finite_diff_check: non-finite loss during perturbation");
            const double fd = (lp - lm) / (2.0 * eps);
            const double an = g.data()[idx];
            const double denom = std::max({std::fabs(an), std::fabs(fd), 1e-8});
            const double rel = std::fabs(an - fd) / denom;
            rep.max_rel_err = std::max(rep.max_rel_err, rel);
            ++rep.coords_checked;
        }
    }
    return rep;
}

}  // namespace tlog
