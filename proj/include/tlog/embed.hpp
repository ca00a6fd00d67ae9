#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tlog/dense.hpp"
#include "tlog/triples.hpp"

namespace tlog {

// Learnable entity embeddings with one dense transformation matrix per
// relation. Scoring is by dot product against every entity embedding.
struct EmbedModel {
    DenseMatrix E;               // num_entities x d
    std::vector<DenseMatrix> M;  // one d x d matrix per relation
    std::size_t d = 0;

    std::size_t num_entities() const { return E.rows(); }
    std::size_t num_relations() const { return M.size(); }
};

EmbedModel init_embed_model(std::size_t num_entities, std::size_t num_relations, std::size_t d,
                            std::uint64_t seed);

struct TrainConfig {
    double learning_rate = 0.005;
    int epochs = 500;
    std::size_t d = 64;
    std::uint64_t seed = 42;
    bool normalize_embeddings = true;
};

struct LossCurve {
    std::vector<double> values;  // one entry per epoch, recorded before the step
};

// Row i of the result is E[subj[i]] * M[rel[i]].
DenseMatrix forward(const EmbedModel& model, const std::vector<int32_t>& subj_ids,
                    const std::vector<int32_t>& rel_ids);

// scores[i][o] = pred[i] . E[o]
DenseMatrix score_all(const DenseMatrix& pred, const EmbedModel& model);

struct EmbedGrads {
    DenseMatrix dE;
    std::vector<DenseMatrix> dM;
};

// Mean cross-entropy over facts, objects as targets. Gradients are exact for
// the unnormalized forward graph; embedding normalization is applied as a
// projection after each optimizer step instead (REN-AFTER-STEP).
double ce_loss_and_grads(const EmbedModel& model, const std::vector<Triple>& facts,
                         EmbedGrads& grads);

std::pair<EmbedModel, LossCurve> train_embed(const std::vector<Triple>& facts,
                                             std::size_t num_entities, std::size_t num_relations,
                                             const TrainConfig& config);

// Fraction of facts whose argmax score hits the target object.
double embed_accuracy(const EmbedModel& model, const std::vector<Triple>& facts);

// v = E[subj] * M[chain[0]] * ... * M[chain.back()], entities ranked by
// v . E[o] descending; ties break toward the lower entity ordinal.
std::vector<int32_t> compose_infer(const EmbedModel& model, int32_t subj,
                                   const std::vector<int32_t>& rel_chain);

}  // namespace tlog
