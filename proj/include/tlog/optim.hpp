#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tlog/dense.hpp"

namespace tlog {

// Adam with optional decoupled weight decay (AdamW). One instance owns the
// moment buffers for a fixed set of parameter blocks.
class AdamOptimizer {
   public:
    AdamOptimizer(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8,
                  double weight_decay = 0.0)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), wd_(weight_decay) {}

    void step(const std::vector<DenseMatrix*>& params,
              const std::vector<const DenseMatrix*>& grads) {
        if (params.size() != grads.size())
            throw std::invalid_argument("AdamOptimizer: params/grads count mismatch");
        if (m_.empty()) {
            for (const DenseMatrix* p : params) {
                m_.emplace_back(p->rows(), p->cols());
                v_.emplace_back(p->rows(), p->cols());
            }
        }
        ++t_;
        const double bc1 = 1.0 - std::pow(beta1_, t_);
        const double bc2 = 1.0 - std::pow(beta2_, t_);
        for (std::size_t b = 0; b < params.size(); ++b) {
            DenseMatrix& p = *params[b];
            const DenseMatrix& g = *grads[b];
            DenseMatrix& m = m_[b];
            DenseMatrix& v = v_[b];
            for (std::size_t i = 0; i < p.size(); ++i) {
                const double gi = g.data()[i];
                m.data()[i] = beta1_ * m.data()[i] + (1.0 - beta1_) * gi;
                v.data()[i] = beta2_ * v.data()[i] + (1.0 - beta2_) * gi * gi;
                const double mhat = m.data()[i] / bc1;
                const double vhat = v.data()[i] / bc2;
                double upd = mhat / (std::sqrt(vhat) + eps_);
                if (wd_ > 0.0) upd += wd_ * p.data()[i];
                p.data()[i] -= lr_ * upd;
            }
        }
    }

   private:
    double lr_, beta1_, beta2_, eps_, wd_;
    long t_ = 0;
    std::vector<DenseMatrix> m_, v_;
};

// Scales grads in place so the global L2 norm is at most clip_norm.
// Returns the pre-clip norm.
inline double clip_global_norm(const std::vector<DenseMatrix*>& grads, double clip_norm) {
    double sq = 0.0;
    for (const DenseMatrix* g : grads)
        for (std::size_t i = 0; i < g->size(); ++i) sq += g->data()[i] * g->data()[i];
    const double norm = std::sqrt(sq);
    if (norm > clip_norm && norm > 0.0) {
        const double scale = clip_norm / norm;
        for (DenseMatrix* g : grads)
            for (std::size_t i = 0; i < g->size(); ++i) g->data()[i] *= scale;
    }
    return norm;
}

}  // namespace tlog
