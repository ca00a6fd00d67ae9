#pragma once

#include <cstdint>
#include <vector>

#include "tlog/dense.hpp"
#include "tlog/eval.hpp"
#include "tlog/sparse.hpp"
#include "tlog/triples.hpp"

namespace tlog {

// Entity embeddings whose relation matrices are derived on the fly from the
// training adjacencies: R_r is the sum of outer products of (normalized)
// head and tail embeddings over every training fact of r. E is the only
// learnable parameter; it enters every forward pass row-normalized.
struct SuperpositionModel {
    DenseMatrix E;                            // N x d, raw parameters
    std::vector<SparseBoolMatrix> adjacency;  // per relation, N x N, train facts
    std::size_t d = 0;

    std::size_t num_entities() const { return E.rows(); }
    std::size_t num_relations() const { return adjacency.size(); }
};

SuperpositionModel init_superposition(const std::vector<Triple>& train_facts,
                                      std::size_t num_entities, std::size_t num_relations,
                                      std::size_t d, std::uint64_t seed);

// R = M^T A N over arbitrary dense matrices, evaluated fact-by-fact; the
// building block behind relation_matrix and the gradient path through it.
DenseMatrix gram_through_adjacency(const DenseMatrix& left, const SparseBoolMatrix& adj,
                                   const DenseMatrix& right);

// R_r from the model's normalized embeddings.
DenseMatrix relation_matrix(const SuperpositionModel& model, int32_t r);

std::vector<double> predict_tail(const SuperpositionModel& model, int32_t h, int32_t r);
std::vector<double> predict_head(const SuperpositionModel& model, int32_t t, int32_t r);
std::vector<double> compose_predict(const SuperpositionModel& model, int32_t a, int32_t r1,
                                    int32_t r2);

struct SuperTrainConfig {
    std::size_t d = 256;
    double learning_rate = 5e-4;
    double weight_decay = 1e-5;
    std::size_t batch_size = 1024;
    double temperature = 0.1;
    double clip_norm = 1.0;
    int epochs = 50;
    int validate_every = 10;
    std::uint64_t seed = 42;
    std::size_t valid_sample = 0;  // 0 = rank the full validation split
};

// Mean over the batch of (tail CE + head CE) / 2 with temperature-scaled
// softmax. The gradient flows through E in all three roles: query embedding,
// relation-matrix construction, and scoring matrix.
double bidirectional_loss_and_grads(const SuperpositionModel& model,
                                    const std::vector<Triple>& batch, double temperature,
                                    DenseMatrix& grad_E);

struct ValidationPoint {
    int epoch;
    double mrr;
};

struct SuperTrainResult {
    SuperpositionModel model;  // parameters from the best validation epoch
    std::vector<double> epoch_losses;
    std::vector<ValidationPoint> validation_history;
    int best_epoch = 0;
    double best_mrr = 0.0;
};

SuperTrainResult train_superposition(const DatasetSplit& split, const SuperTrainConfig& config);

// All R_r at once, for evaluation loops that score many queries.
std::vector<DenseMatrix> materialize_relation_matrices(const SuperpositionModel& model);

// LinkScorer over precomputed relation matrices.
class SuperpositionScorer : public LinkScorer {
   public:
    explicit SuperpositionScorer(const SuperpositionModel& model);

    std::size_t num_entities() const override { return norm_E_.rows(); }
    std::vector<double> tail_scores(int32_t h, int32_t r) const override;
    std::vector<double> head_scores(int32_t t, int32_t r) const override;
    std::vector<double> compose_scores(int32_t a, int32_t r1, int32_t r2) const;

   private:
    DenseMatrix norm_E_;
    std::vector<DenseMatrix> rel_;
};

}  // namespace tlog
