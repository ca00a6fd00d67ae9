#include "tlog/superpos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tlog/optim.hpp"
#include "tlog/rng.hpp"

namespace tlog {

namespace {

constexpr double kNormEps = 1e-12;

void check_entity(const SuperpositionModel& m, int32_t e, const char* what) {
    if (e < 0 || static_cast<std::size_t>(e) >= m.num_entities())
        throw std::out_of_range(std::string(what) + " id " + std::to_string(e) + " out of range");
}

void check_relation(const SuperpositionModel& m, int32_t r) {
    if (r < 0 || static_cast<std::size_t>(r) >= m.num_relations())
        throw std::out_of_range("relation id " + std::to_string(r) + " out of range");
}

// v / max(||v||, eps); zero rows stay zero. Returns the norm actually used
// (0 when guarded) so backward can branch the same way.
double normalize_vec(std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    const double norm = std::sqrt(s);
    if (norm < kNormEps) return 0.0;
    for (double& x : v) x /= norm;
    return norm;
}

}  // namespace

SuperpositionModel init_superposition(const std::vector<Triple>& train_facts,
                                      std::size_t num_entities, std::size_t num_relations,
                                      std::size_t d, std::uint64_t seed) {
    SuperpositionModel m;
    m.d = d;
    Rng root(seed);
    Rng re = root.split(0);
    m.E = xavier_uniform(num_entities, d, re);
    m.adjacency = all_adjacencies(train_facts, num_entities, num_relations);
    return m;
}

DenseMatrix gram_through_adjacency(const DenseMatrix& left, const SparseBoolMatrix& adj,
                                   const DenseMatrix& right) {
    if (left.rows() != adj.rows() || right.rows() != adj.cols())
        throw std::invalid_argument("gram_through_adjacency: shape mismatch");
    // R = left^T (A right): the inner product is accumulated per head row, so
    // the cost is O(nnz * d + heads * d^2) instead of O(nnz * d^2).
    DenseMatrix out(left.cols(), right.cols());
    std::vector<double> acc(right.cols());
    for (std::size_t h = 0; h < adj.rows(); ++h) {
        if (adj.row_size(static_cast<int32_t>(h)) == 0) continue;
        std::fill(acc.begin(), acc.end(), 0.0);
        for (const int32_t* t = adj.row_begin(static_cast<int32_t>(h));
             t != adj.row_end(static_cast<int32_t>(h)); ++t) {
            const double* rt = right.row(static_cast<std::size_t>(*t));
            for (std::size_t b = 0; b < right.cols(); ++b) acc[b] += rt[b];
        }
        const double* lh = left.row(h);
        for (std::size_t a = 0; a < left.cols(); ++a) {
            const double la = lh[a];
            if (la == 0.0) continue;
            double* oa = out.row(a);
            for (std::size_t b = 0; b < right.cols(); ++b) oa[b] += la * acc[b];
        }
    }
    return out;
}

DenseMatrix relation_matrix(const SuperpositionModel& model, int32_t r) {
    check_relation(model, r);
    const DenseMatrix norm_e = row_normalize(model.E);
    return gram_through_adjacency(norm_e, model.adjacency[static_cast<std::size_t>(r)], norm_e);
}

namespace {

std::vector<double> scores_against(const DenseMatrix& norm_e, const std::vector<double>& v) {
    return vec_matmul_t(v, norm_e);
}

std::vector<double> predict_dir(const SuperpositionModel& model, int32_t query, int32_t r,
                                bool transpose_r) {
    check_entity(model, query, "entity");
    check_relation(model, r);
    const DenseMatrix norm_e = row_normalize(model.E);
    const DenseMatrix rel =
        gram_through_adjacency(norm_e, model.adjacency[static_cast<std::size_t>(r)], norm_e);
    std::vector<double> q(norm_e.row(static_cast<std::size_t>(query)),
                          norm_e.row(static_cast<std::size_t>(query)) + model.d);
    std::vector<double> u(model.d, 0.0);
    if (transpose_r) {
        for (std::size_t j = 0; j < model.d; ++j) u[j] = dot(q.data(), rel.row(j), model.d);
    } else {
        u = vec_matmul(q, rel);
    }
    normalize_vec(u);
    return scores_against(norm_e, u);
}

}  // namespace

std::vector<double> predict_tail(const SuperpositionModel& model, int32_t h, int32_t r) {
    return predict_dir(model, h, r, /*transpose_r=*/false);
}

std::vector<double> predict_head(const SuperpositionModel& model, int32_t t, int32_t r) {
    return predict_dir(model, t, r, /*transpose_r=*/true);
}

std::vector<double> compose_predict(const SuperpositionModel& model, int32_t a, int32_t r1,
                                    int32_t r2) {
    check_entity(model, a, "entity");
    check_relation(model, r1);
    check_relation(model, r2);
    const DenseMatrix norm_e = row_normalize(model.E);
    const DenseMatrix rel1 =
        gram_through_adjacency(norm_e, model.adjacency[static_cast<std::size_t>(r1)], norm_e);
    const DenseMatrix rel2 =
        gram_through_adjacency(norm_e, model.adjacency[static_cast<std::size_t>(r2)], norm_e);
    std::vector<double> v(norm_e.row(static_cast<std::size_t>(a)),
                          norm_e.row(static_cast<std::size_t>(a)) + model.d);
    v = vec_matmul(v, rel1);
    v = vec_matmul(v, rel2);
    normalize_vec(v);
    return scores_against(norm_e, v);
}

double bidirectional_loss_and_grads(const SuperpositionModel& model,
                                    const std::vector<Triple>& batch, double temperature,
                                    DenseMatrix& grad_E) {
    if (batch.empty())
        throw std::invalid_argument("bidirectional_loss_and_grads: empty batch");
    if (temperature <= 0.0)
        throw std::invalid_argument("bidirectional_loss_and_grads: temperature must be > 0");
    const std::size_t n = model.num_entities();
    const std::size_t d = model.d;

    // Normalized embeddings plus raw row norms for the normalization backward.
    DenseMatrix norm_e = model.E;
    std::vector<double> row_norm(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        const double* r = norm_e.row(i);
        for (std::size_t j = 0; j < d; ++j) s += r[j] * r[j];
        row_norm[i] = std::sqrt(s);
        if (row_norm[i] >= kNormEps) {
            double* w = norm_e.row(i);
            for (std::size_t j = 0; j < d; ++j) w[j] /= row_norm[i];
        }
    }

    // Relation matrices for the relations present in this batch, built once.
    std::vector<int32_t> rel_ids;
    for (const Triple& x : batch) {
        check_entity(model, x.h, "head");
        check_entity(model, x.t, "tail");
        check_relation(model, x.r);
        rel_ids.push_back(x.r);
    }
    std::sort(rel_ids.begin(), rel_ids.end());
    rel_ids.erase(std::unique(rel_ids.begin(), rel_ids.end()), rel_ids.end());
    std::vector<int32_t> rel_slot(model.num_relations(), -1);
    std::vector<DenseMatrix> rel_mats, rel_grads;
    for (std::size_t k = 0; k < rel_ids.size(); ++k) {
        rel_slot[static_cast<std::size_t>(rel_ids[k])] = static_cast<int32_t>(k);
        rel_mats.push_back(gram_through_adjacency(
            norm_e, model.adjacency[static_cast<std::size_t>(rel_ids[k])], norm_e));
        rel_grads.emplace_back(d, d);
    }

    DenseMatrix grad_norm_e(n, d);
    const double weight = 1.0 / (2.0 * static_cast<double>(batch.size()));
    double loss = 0.0;

    // One direction of one batch item: query row q through R (optionally
    // transposed), normalize, score against every entity, temperature CE.
    auto run_direction = [&](std::size_t query, std::size_t target, std::size_t slot,
                             bool transpose_r) {
        const DenseMatrix& rel = rel_mats[slot];
        DenseMatrix& drel = rel_grads[slot];
        const double* q = norm_e.row(query);

        std::vector<double> u(d, 0.0);
        if (transpose_r) {
            for (std::size_t j = 0; j < d; ++j) u[j] = dot(q, rel.row(j), d);
        } else {
            for (std::size_t k = 0; k < d; ++k) {
                const double qk = q[k];
                if (qk == 0.0) continue;
                const double* rk = rel.row(k);
                for (std::size_t j = 0; j < d; ++j) u[j] += qk * rk[j];
            }
        }
        std::vector<double> v = u;
        const double unorm = normalize_vec(v);

        std::vector<double> scores = vec_matmul_t(v, norm_e);
        double mx = scores[0];
        for (std::size_t o = 1; o < n; ++o) mx = std::max(mx, scores[o]);
        double sum = 0.0;
        for (std::size_t o = 0; o < n; ++o) sum += std::exp((scores[o] - mx) / temperature);
        const double lse = mx / temperature + std::log(sum);
        const double li = lse - scores[target] / temperature;
        if (!std::isfinite(li))
            throw std::runtime_error("bidirectional_loss_and_grads: non-finite loss");
        loss += li * weight;

        // dscores = (softmax - onehot) * weight / T
        std::vector<double> dscores(n);
        for (std::size_t o = 0; o < n; ++o)
            dscores[o] = std::exp((scores[o] - mx) / temperature - std::log(sum)) * weight /
                         temperature;
        dscores[target] -= weight / temperature;

        // scores = v . norm_e rows
        std::vector<double> dv(d, 0.0);
        for (std::size_t o = 0; o < n; ++o) {
            const double g = dscores[o];
            if (g == 0.0) continue;
            const double* eo = norm_e.row(o);
            double* geo = grad_norm_e.row(o);
            for (std::size_t j = 0; j < d; ++j) {
                dv[j] += g * eo[j];
                geo[j] += g * v[j];
            }
        }

        // v = u / ||u|| (identity when guarded)
        std::vector<double> du(d);
        if (unorm == 0.0) {
            du = dv;
        } else {
            const double dv_dot_v = dot(dv.data(), v.data(), d);
            for (std::size_t j = 0; j < d; ++j) du[j] = (dv[j] - dv_dot_v * v[j]) / unorm;
        }

        // u = q * R (or q * R^T)
        double* gq = grad_norm_e.row(query);
        if (transpose_r) {
            // u_j = sum_k q_k R[j,k]  =>  dq_k += sum_j du_j R[j,k]; dR[j,k] += du_j q_k
            for (std::size_t j = 0; j < d; ++j) {
                const double duj = du[j];
                if (duj == 0.0) continue;
                const double* rj = rel.row(j);
                double* drj = drel.row(j);
                for (std::size_t k = 0; k < d; ++k) {
                    gq[k] += duj * rj[k];
                    drj[k] += duj * q[k];
                }
            }
        } else {
            // u_j = sum_k q_k R[k,j]  =>  dq_k += du . R[k,:]; dR[k,j] += q_k du_j
            for (std::size_t k = 0; k < d; ++k) {
                gq[k] += dot(du.data(), rel.row(k), d);
                const double qk = q[k];
                if (qk == 0.0) continue;
                double* drk = drel.row(k);
                for (std::size_t j = 0; j < d; ++j) drk[j] += qk * du[j];
            }
        }
    };

    for (const Triple& x : batch) {
        const std::size_t slot = static_cast<std::size_t>(rel_slot[static_cast<std::size_t>(x.r)]);
        run_direction(static_cast<std::size_t>(x.h), static_cast<std::size_t>(x.t), slot, false);
        run_direction(static_cast<std::size_t>(x.t), static_cast<std::size_t>(x.h), slot, true);
    }

    // R_r = sum over facts (h,t) of outer(norm_e[h], norm_e[t]):
    //   d norm_e[h] += norm_e[t] dR^T,  d norm_e[t] += norm_e[h] dR.
    // The per-entity products are cached over distinct heads/tails so each
    // fact costs O(d) on top of O((heads + tails) * d^2) per relation.
    std::vector<int32_t> cache_slot(n, -1);
    DenseMatrix cache;
    for (std::size_t k = 0; k < rel_ids.size(); ++k) {
        const SparseBoolMatrix& adj = model.adjacency[static_cast<std::size_t>(rel_ids[k])];
        if (adj.nnz() == 0) continue;
        const DenseMatrix& drel = rel_grads[k];

        std::vector<int32_t> heads, tails;
        std::vector<char> is_tail(n, 0);
        for (std::size_t h = 0; h < n; ++h) {
            if (adj.row_size(static_cast<int32_t>(h)) > 0) heads.push_back(static_cast<int32_t>(h));
            for (const int32_t* t = adj.row_begin(static_cast<int32_t>(h));
                 t != adj.row_end(static_cast<int32_t>(h)); ++t)
                if (!is_tail[*t]) {
                    is_tail[*t] = 1;
                    tails.push_back(*t);
                }
        }
        // cache rows: for tails, X[t] = norm_e[t] dR^T; for heads, Y[h] = norm_e[h] dR
        cache = DenseMatrix(heads.size() + tails.size(), d);
        std::fill(cache_slot.begin(), cache_slot.end(), -1);
        int32_t slot = 0;
        for (int32_t t : tails) {
            const double* et = norm_e.row(static_cast<std::size_t>(t));
            double* x = cache.row(static_cast<std::size_t>(slot));
            for (std::size_t a = 0; a < d; ++a) x[a] = dot(drel.row(a), et, d);
            cache_slot[static_cast<std::size_t>(t)] = slot++;
        }
        std::vector<int32_t> head_slot(n, -1);
        for (int32_t h : heads) {
            const double* eh = norm_e.row(static_cast<std::size_t>(h));
            double* y = cache.row(static_cast<std::size_t>(slot));
            for (std::size_t b = 0; b < d; ++b) {
                double s = 0.0;
                for (std::size_t a = 0; a < d; ++a) s += eh[a] * drel.at(a, b);
                y[b] = s;
            }
            head_slot[static_cast<std::size_t>(h)] = slot++;
        }
        for (int32_t h : heads) {
            double* gh = grad_norm_e.row(static_cast<std::size_t>(h));
            const double* y = cache.row(static_cast<std::size_t>(head_slot[h]));
            for (const int32_t* t = adj.row_begin(h); t != adj.row_end(h); ++t) {
                const double* x = cache.row(static_cast<std::size_t>(cache_slot[*t]));
                double* gt = grad_norm_e.row(static_cast<std::size_t>(*t));
                for (std::size_t a = 0; a < d; ++a) {
                    gh[a] += x[a];
                    gt[a] += y[a];
                }
            }
        }
    }

    // Through the row normalization of E.
    grad_E = DenseMatrix(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        const double* gn = grad_norm_e.row(i);
        double* g = grad_E.row(i);
        if (row_norm[i] < kNormEps) {
            std::copy(gn, gn + d, g);
            continue;
        }
        const double* ei = norm_e.row(i);
        const double gdote = dot(gn, ei, d);
        for (std::size_t j = 0; j < d; ++j) g[j] = (gn[j] - gdote * ei[j]) / row_norm[i];
    }
    return loss;
}

SuperTrainResult train_superposition(const DatasetSplit& split, const SuperTrainConfig& config) {
    if (config.epochs < 1) throw std::invalid_argument("train_superposition: epochs must be >= 1");
    if (config.learning_rate <= 0.0)
        throw std::invalid_argument("train_superposition: learning rate must be > 0");
    if (config.temperature <= 0.0)
        throw std::invalid_argument("train_superposition: temperature must be > 0");
    if (config.clip_norm <= 0.0)
        throw std::invalid_argument("train_superposition: clip_norm must be > 0");
    if (config.batch_size < 1)
        throw std::invalid_argument("train_superposition: batch size must be >= 1");
    if (split.train.empty()) throw std::invalid_argument("train_superposition: empty train split");

    SuperTrainResult res;
    res.model = init_superposition(split.train, split.entities.size(), split.relations.size(),
                                   config.d, config.seed);

    FilterIndex filter;
    filter.add(split.train);
    filter.add(split.valid);
    filter.add(split.test);
    filter.finalize();

    Rng root(config.seed);
    Rng shuffle_rng = root.split(1);
    std::vector<Triple> valid_eval = split.valid;
    if (config.valid_sample > 0 && config.valid_sample < valid_eval.size()) {
        Rng sample_rng = root.split(2);
        sample_rng.shuffle(valid_eval);
        valid_eval.resize(config.valid_sample);
    }

    AdamOptimizer opt(config.learning_rate, 0.9, 0.999, 1e-8, config.weight_decay);
    std::vector<Triple> order = split.train;
    DenseMatrix best_E = res.model.E;
    DenseMatrix grad;

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            const std::vector<Triple> batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                                            order.begin() + static_cast<std::ptrdiff_t>(end));
            const double loss =
                bidirectional_loss_and_grads(res.model, batch, config.temperature, grad);
            if (!std::isfinite(loss))
                throw std::runtime_error("train_superposition: diverged at epoch " +
                                         std::to_string(epoch));
            epoch_loss += loss;
            ++batches;
            clip_global_norm({&grad}, config.clip_norm);
            opt.step({&res.model.E}, {&grad});
            if (!res.model.E.all_finite())
                throw std::runtime_error(
                    "train_superposition: diverged (non-finite parameters) at epoch " +
                    std::to_string(epoch));
        }
        res.epoch_losses.push_back(epoch_loss / static_cast<double>(batches));

        const bool validate = !valid_eval.empty() && (epoch % config.validate_every == 0 ||
                                                      epoch == config.epochs);
        if (validate) {
            SuperpositionScorer scorer(res.model);
            const Metrics m = evaluate_lp(scorer, valid_eval, filter);
            res.validation_history.push_back(ValidationPoint{epoch, m.mrr});
            if (m.mrr > res.best_mrr) {  // strict: ties keep the earlier epoch
                res.best_mrr = m.mrr;
                res.best_epoch = epoch;
                best_E = res.model.E;
            }
        }
    }

    if (res.best_epoch > 0)
        res.model.E = std::move(best_E);
    return res;
}

std::vector<DenseMatrix> materialize_relation_matrices(const SuperpositionModel& model) {
    const DenseMatrix norm_e = row_normalize(model.E);
    std::vector<DenseMatrix> out;
    out.reserve(model.num_relations());
    for (std::size_t r = 0; r < model.num_relations(); ++r)
        out.push_back(gram_through_adjacency(norm_e, model.adjacency[r], norm_e));
    return out;
}

SuperpositionScorer::SuperpositionScorer(const SuperpositionModel& model)
    : norm_E_(row_normalize(model.E)), rel_(materialize_relation_matrices(model)) {}

std::vector<double> SuperpositionScorer::tail_scores(int32_t h, int32_t r) const {
    std::vector<double> q(norm_E_.row(static_cast<std::size_t>(h)),
                          norm_E_.row(static_cast<std::size_t>(h)) + norm_E_.cols());
    std::vector<double> u = vec_matmul(q, rel_[static_cast<std::size_t>(r)]);
    normalize_vec(u);
    return vec_matmul_t(u, norm_E_);
}

std::vector<double> SuperpositionScorer::head_scores(int32_t t, int32_t r) const {
    const DenseMatrix& rel = rel_[static_cast<std::size_t>(r)];
    const double* q = norm_E_.row(static_cast<std::size_t>(t));
    std::vector<double> u(norm_E_.cols(), 0.0);
    for (std::size_t j = 0; j < norm_E_.cols(); ++j) u[j] = dot(q, rel.row(j), norm_E_.cols());
    normalize_vec(u);
    return vec_matmul_t(u, norm_E_);
}

std::vector<double> SuperpositionScorer::compose_scores(int32_t a, int32_t r1, int32_t r2) const {
    std::vector<double> v(norm_E_.row(static_cast<std::size_t>(a)),
                          norm_E_.row(static_cast<std::size_t>(a)) + norm_E_.cols());
    v = vec_matmul(v, rel_[static_cast<std::size_t>(r1)]);
    v = vec_matmul(v, rel_[static_cast<std::size_t>(r2)]);
    normalize_vec(v);
    return vec_matmul_t(v, norm_E_);
}

}  // namespace tlog
