#include "tlog/embed.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "tlog/optim.hpp"
#include "tlog/rng.hpp"

namespace tlog {

EmbedModel init_embed_model(std::size_t num_entities, std::size_t num_relations, std::size_t d,
                            std::uint64_t seed) {
    EmbedModel m;
    m.d = d;
    Rng root(seed);
    Rng re = root.split(0);
    m.E = xavier_uniform(num_entities, d, re);
    for (std::size_t r = 0; r < num_relations; ++r) {
        Rng rm = root.split(1 + r);
        m.M.push_back(xavier_uniform(d, d, rm));
    }
    return m;
}

namespace {

void check_ids(const EmbedModel& model, const std::vector<int32_t>& subj,
               const std::vector<int32_t>& rel) {
    if (subj.size() != rel.size())
        throw std::invalid_argument("forward: subject/relation id sequences differ in length");
    for (std::size_t i = 0; i < subj.size(); ++i) {
        if (subj[i] < 0 || static_cast<std::size_t>(subj[i]) >= model.num_entities())
            throw std::out_of_range("forward: entity id " + std::to_string(subj[i]) +
                                    " out of range");
        if (rel[i] < 0 || static_cast<std::size_t>(rel[i]) >= model.num_relations())
            throw std::out_of_range("forward: relation id " + std::to_string(rel[i]) +
                                    " out of range");
    }
}

}  // namespace

DenseMatrix forward(const EmbedModel& model, const std::vector<int32_t>& subj_ids,
                    const std::vector<int32_t>& rel_ids) {
    check_ids(model, subj_ids, rel_ids);
    DenseMatrix rows(subj_ids.size(), model.d);
    std::vector<const DenseMatrix*> mats(subj_ids.size());
    for (std::size_t i = 0; i < subj_ids.size(); ++i) {
        const double* e = model.E.row(static_cast<std::size_t>(subj_ids[i]));
        std::copy(e, e + model.d, rows.row(i));
        mats[i] = &model.M[static_cast<std::size_t>(rel_ids[i])];
    }
    return batched_transform(rows, mats);
}

DenseMatrix score_all(const DenseMatrix& pred, const EmbedModel& model) {
    if (pred.cols() != model.d)
        throw std::invalid_argument("score_all: prediction width != embedding dimension");
    DenseMatrix scores(pred.rows(), model.num_entities());
    for (std::size_t i = 0; i < pred.rows(); ++i)
        for (std::size_t o = 0; o < model.num_entities(); ++o)
            scores.at(i, o) = dot(pred.row(i), model.E.row(o), model.d);
    return scores;
}

double ce_loss_and_grads(const EmbedModel& model, const std::vector<Triple>& facts,
                         EmbedGrads& grads) {
    if (facts.empty()) throw std::invalid_argument("ce_loss_and_grads: empty fact set");
    const std::size_t b = facts.size();
    const std::size_t n = model.num_entities();
    const std::size_t d = model.d;

    std::vector<int32_t> subj(b), rel(b);
    for (std::size_t i = 0; i < b; ++i) {
        subj[i] = facts[i].h;
        rel[i] = facts[i].r;
        if (facts[i].t < 0 || static_cast<std::size_t>(facts[i].t) >= n)
            throw std::out_of_range("ce_loss_and_grads: object id out of range at fact " +
                                    std::to_string(i));
    }

    const DenseMatrix v = forward(model, subj, rel);
    DenseMatrix scores = score_all(v, model);

    grads.dE = DenseMatrix(n, d);
    grads.dM.assign(model.num_relations(), DenseMatrix(d, d));
    DenseMatrix dv(b, d);

    // Per-fact losses are reduced in canonical (h,r,t) order so permuting the
    // batch cannot change the result.
    std::vector<std::pair<std::uint64_t, double>> fact_losses(b);
    const double inv_b = 1.0 / static_cast<double>(b);
    for (std::size_t i = 0; i < b; ++i) {
        double* si = scores.row(i);
        const std::size_t target = static_cast<std::size_t>(facts[i].t);
        double mx = si[0];
        for (std::size_t o = 1; o < n; ++o) mx = std::max(mx, si[o]);
        double sum = 0.0;
        for (std::size_t o = 0; o < n; ++o) sum += std::exp(si[o] - mx);
        const double lse = mx + std::log(sum);
        const double li = lse - si[target];
        if (!std::isfinite(li))
            throw std::runtime_error("ce_loss_and_grads: non-finite loss at fact " +
                                     std::to_string(i));
        fact_losses[i] = {i, li};

        // dscores in place: (softmax - onehot) / b
        for (std::size_t o = 0; o < n; ++o) si[o] = std::exp(si[o] - lse) * inv_b;
        si[target] -= inv_b;

        // scoring backward: dv_i = dscores . E ; dE += outer(dscores, v_i)
        double* dvi = dv.row(i);
        for (std::size_t o = 0; o < n; ++o) {
            const double g = si[o];
            if (g == 0.0) continue;
            const double* eo = model.E.row(o);
            double* deo = grads.dE.row(o);
            const double* vi = v.row(i);
            for (std::size_t j = 0; j < d; ++j) {
                dvi[j] += g * eo[j];
                deo[j] += g * vi[j];
            }
        }
    }

    // transform backward: dE[s] += dv_i M_r^T ; dM_r += outer(E[s], dv_i)
    for (std::size_t i = 0; i < b; ++i) {
        const std::size_t s = static_cast<std::size_t>(subj[i]);
        const std::size_t r = static_cast<std::size_t>(rel[i]);
        const DenseMatrix& mr = model.M[r];
        DenseMatrix& dmr = grads.dM[r];
        const double* es = model.E.row(s);
        double* des = grads.dE.row(s);
        const double* dvi = dv.row(i);
        for (std::size_t k = 0; k < d; ++k) {
            des[k] += dot(dvi, mr.row(k), d);
            const double ek = es[k];
            if (ek == 0.0) continue;
            double* dmk = dmr.row(k);
            for (std::size_t j = 0; j < d; ++j) dmk[j] += ek * dvi[j];
        }
    }

    std::sort(fact_losses.begin(), fact_losses.end(),
              [&](const std::pair<std::uint64_t, double>& a,
                  const std::pair<std::uint64_t, double>& b2) {
                  const Triple& x = facts[a.first];
                  const Triple& y = facts[b2.first];
                  return std::tie(x.h, x.r, x.t) < std::tie(y.h, y.r, y.t);
              });
    double loss = 0.0;
    for (const auto& [idx, li] : fact_losses) loss += li;
    return loss * inv_b;
}

std::pair<EmbedModel, LossCurve> train_embed(const std::vector<Triple>& facts,
                                             std::size_t num_entities, std::size_t num_relations,
                                             const TrainConfig& config) {
    if (config.epochs < 1) throw std::invalid_argument("train_embed: epochs must be >= 1");
    if (config.learning_rate <= 0.0)
        throw std::invalid_argument("train_embed: learning rate must be > 0");

    EmbedModel model = init_embed_model(num_entities, num_relations, config.d, config.seed);
    AdamOptimizer opt(config.learning_rate);
    LossCurve curve;
    curve.values.reserve(static_cast<std::size_t>(config.epochs));

    EmbedGrads grads;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        const double loss = ce_loss_and_grads(model, facts, grads);
        if (!std::isfinite(loss))
            throw std::runtime_error("train_embed: diverged (non-finite loss) at epoch " +
                                     std::to_string(epoch));
        curve.values.push_back(loss);

        std::vector<DenseMatrix*> params{&model.E};
        std::vector<const DenseMatrix*> gs{&grads.dE};
        for (std::size_t r = 0; r < model.M.size(); ++r) {
            params.push_back(&model.M[r]);
            gs.push_back(&grads.dM[r]);
        }
        opt.step(params, gs);
        if (config.normalize_embeddings) row_normalize_inplace(model.E);
        if (!model.E.all_finite())
            throw std::runtime_error("train_embed: diverged (non-finite parameters) at epoch " +
                                     std::to_string(epoch));
    }
    return {std::move(model), std::move(curve)};
}

double embed_accuracy(const EmbedModel& model, const std::vector<Triple>& facts) {
    if (facts.empty()) return 0.0;
    std::vector<int32_t> subj, rel;
    for (const Triple& f : facts) {
        subj.push_back(f.h);
        rel.push_back(f.r);
    }
    const DenseMatrix scores = score_all(forward(model, subj, rel), model);
    std::size_t hit = 0;
    for (std::size_t i = 0; i < facts.size(); ++i) {
        const double* si = scores.row(i);
        std::size_t best = 0;
        for (std::size_t o = 1; o < model.num_entities(); ++o)
            if (si[o] > si[best]) best = o;
        if (best == static_cast<std::size_t>(facts[i].t)) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(facts.size());
}

std::vector<int32_t> compose_infer(const EmbedModel& model, int32_t subj,
                                   const std::vector<int32_t>& rel_chain) {
    if (rel_chain.empty()) throw std::invalid_argument("compose_infer: empty relation chain");
    if (subj < 0 || static_cast<std::size_t>(subj) >= model.num_entities())
        throw std::out_of_range("compose_infer: entity id out of range");
    std::vector<double> v(model.E.row(static_cast<std::size_t>(subj)),
                          model.E.row(static_cast<std::size_t>(subj)) + model.d);
    for (int32_t r : rel_chain) {
        if (r < 0 || static_cast<std::size_t>(r) >= model.num_relations())
            throw std::out_of_range("compose_infer: relation id out of range");
        v = vec_matmul(v, model.M[static_cast<std::size_t>(r)]);
    }
    const std::vector<double> scores = vec_matmul_t(v, model.E);
    std::vector<int32_t> order(model.num_entities());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int32_t a, int32_t b) { return scores[a] > scores[b]; });
    return order;
}

}  // namespace tlog
