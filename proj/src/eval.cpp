#include "tlog/eval.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "tlog/rng.hpp"

namespace tlog {

void FilterIndex::add(const std::vector<Triple>& triples) {
    for (const Triple& x : triples) {
        tails_[key(x.h, x.r)].push_back(x.t);
        heads_[key(x.r, x.t)].push_back(x.h);
    }
    finalized_ = false;
}

void FilterIndex::finalize() {
    for (auto* m : {&tails_, &heads_}) {
        for (auto& [k, v] : *m) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
    }
    finalized_ = true;
}

namespace {
const std::vector<int32_t> kEmpty;
}

const std::vector<int32_t>& FilterIndex::tails(int32_t h, int32_t r) const {
    auto it = tails_.find(key(h, r));
    return it == tails_.end() ? kEmpty : it->second;
}

const std::vector<int32_t>& FilterIndex::heads(int32_t r, int32_t t) const {
    auto it = heads_.find(key(r, t));
    return it == heads_.end() ? kEmpty : it->second;
}

std::int64_t filtered_rank(const std::vector<double>& scores, int32_t target,
                           const std::vector<int32_t>& known_true) {
    if (target < 0 || static_cast<std::size_t>(target) >= scores.size())
        throw std::out_of_range("filtered_rank: target id out of range");
    std::vector<char> masked(scores.size(), 0);
    for (int32_t e : known_true)
        if (e >= 0 && static_cast<std::size_t>(e) < scores.size()) masked[e] = 1;
    masked[target] = 0;  // the target is exempt from masking

    const double ts = scores[static_cast<std::size_t>(target)];
    std::int64_t rank = 1;
    for (std::size_t e = 0; e < scores.size(); ++e) {
        if (masked[e] || e == static_cast<std::size_t>(target)) continue;
        if (scores[e] >= ts) ++rank;
    }
    return rank;
}

namespace {

struct RankAccum {
    double rr = 0.0;
    std::int64_t h1 = 0, h3 = 0, h10 = 0, n = 0;

    void add(std::int64_t rank) {
        rr += 1.0 / static_cast<double>(rank);
        if (rank <= 1) ++h1;
        if (rank <= 3) ++h3;
        if (rank <= 10) ++h10;
        ++n;
    }

    Metrics finish() const {
        Metrics m;
        m.queries = n;
        if (n == 0) return m;
        const double dn = static_cast<double>(n);
        m.mrr = rr / dn;
        m.hits1 = static_cast<double>(h1) / dn;
        m.hits3 = static_cast<double>(h3) / dn;
        m.hits10 = static_cast<double>(h10) / dn;
        return m;
    }
};

}  // namespace

Metrics evaluate_lp(const LinkScorer& scorer, const std::vector<Triple>& triples,
                    const FilterIndex& filter) {
    const std::size_t n = scorer.num_entities();
    for (const Triple& x : triples)
        if (x.h < 0 || static_cast<std::size_t>(x.h) >= n || x.t < 0 ||
            static_cast<std::size_t>(x.t) >= n)
            throw std::out_of_range("evaluate_lp: triple entity outside the scorer's vocabulary");

    // Queries are scored in parallel into fixed slots; the metric reduction
    // below runs in query order so results do not depend on thread timing.
    std::vector<std::int64_t> ranks(2 * triples.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(triples.size()); ++i) {
        const Triple& x = triples[static_cast<std::size_t>(i)];
        ranks[2 * static_cast<std::size_t>(i)] =
            filtered_rank(scorer.tail_scores(x.h, x.r), x.t, filter.tails(x.h, x.r));
        ranks[2 * static_cast<std::size_t>(i) + 1] =
            filtered_rank(scorer.head_scores(x.t, x.r), x.h, filter.heads(x.r, x.t));
    }
    RankAccum acc;
    for (std::int64_t r : ranks) acc.add(r);
    return acc.finish();
}

namespace {

std::uint64_t pair_key(int32_t a, int32_t b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

}  // namespace

BenchResult build_comp_bench(const std::vector<Triple>& train, std::size_t n_valid,
                             std::size_t n_test, std::uint64_t seed) {
    // Direct relations per (head, tail) pair, train insertion order.
    std::unordered_map<std::uint64_t, std::vector<int32_t>> rels_by_pair;
    // Outgoing (relation, tail) per head, train insertion order.
    std::unordered_map<int32_t, std::vector<std::pair<int32_t, int32_t>>> out_edges;
    for (const Triple& x : train) {
        rels_by_pair[pair_key(x.h, x.t)].push_back(x.r);
        out_edges[x.h].emplace_back(x.r, x.t);
    }

    std::unordered_set<Triple, TripleHash> in_train(train.begin(), train.end());

    auto find_witness = [&](int32_t a, int32_t c, int32_t r_direct,
                            const std::unordered_set<Triple, TripleHash>& universe,
                            CompPath& out) -> bool {
        auto oit = out_edges.find(a);
        if (oit == out_edges.end()) return false;
        for (const auto& [r1, b] : oit->second) {
            if (r1 == r_direct && b == c) continue;  // the direct edge is not a hop
            if (!universe.count(Triple{a, r1, b})) continue;
            auto rit = rels_by_pair.find(pair_key(b, c));
            if (rit == rels_by_pair.end()) continue;
            for (int32_t r2 : rit->second) {
                if (b == a && r2 == r_direct) continue;
                if (!universe.count(Triple{b, r2, c})) continue;
                out = CompPath{a, r1, b, r2, c, r_direct};
                return true;
            }
        }
        return false;
    };

    // Candidates: one per direct edge with a unique relation and a 2-hop witness.
    std::vector<CompPath> candidates;
    std::unordered_set<std::uint64_t> seen_pair;
    for (const Triple& x : train) {
        const auto& rels = rels_by_pair.at(pair_key(x.h, x.t));
        if (rels.size() != 1) continue;
        if (!seen_pair.insert(pair_key(x.h, x.t)).second) continue;
        CompPath p;
        if (find_witness(x.h, x.t, x.r, in_train, p)) candidates.push_back(p);
    }

    const std::size_t want = n_valid + n_test;
    if (want > candidates.size())
        throw std::runtime_error("build_comp_bench: requested " + std::to_string(want) +
                                 " paths but only " + std::to_string(candidates.size()) +
                                 " qualifying candidates exist");

    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    std::vector<CompPath> chosen;
    chosen.reserve(want);
    std::size_t next_candidate = 0;
    for (; next_candidate < order.size() && chosen.size() < want; ++next_candidate)
        chosen.push_back(candidates[order[next_candidate]]);

    // Removing direct edges can invalidate sampled witnesses (a hop may be
    // another record's removed edge). Re-pick witnesses against the reduced
    // store; records with no witness left are swapped for fresh candidates.
    for (int round = 0; round < 100; ++round) {
        std::unordered_set<Triple, TripleHash> reduced = in_train;
        for (const CompPath& p : chosen) reduced.erase(Triple{p.a, p.r_direct, p.c});

        bool stable = true;
        for (std::size_t i = 0; i < chosen.size(); ++i) {
            CompPath& p = chosen[i];
            if (reduced.count(Triple{p.a, p.r1, p.b}) && reduced.count(Triple{p.b, p.r2, p.c}))
                continue;
            CompPath fresh;
            if (find_witness(p.a, p.c, p.r_direct, reduced, fresh)) {
                p = fresh;
                continue;
            }
            if (next_candidate >= order.size())
                throw std::runtime_error("build_comp_bench: ran out of replacement candidates");
            p = candidates[order[next_candidate++]];
            stable = false;
        }
        if (stable) break;
        if (round == 99)
            throw std::runtime_error("build_comp_bench: witness fixup did not stabilize");
    }

    BenchResult res;
    res.bench.seed = seed;
    res.bench.valid.assign(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(n_valid));
    res.bench.test.assign(chosen.begin() + static_cast<std::ptrdiff_t>(n_valid), chosen.end());
    std::unordered_set<Triple, TripleHash> removed_set;
    for (const CompPath& p : chosen) {
        const Triple e{p.a, p.r_direct, p.c};
        res.bench.removed.push_back(e);
        removed_set.insert(e);
    }
    res.reduced_train.reserve(train.size() - removed_set.size());
    for (const Triple& x : train)
        if (!removed_set.count(x)) res.reduced_train.push_back(x);
    return res;
}

StoreBenchResult build_comp_bench(const TripleStore& train, std::size_t n_valid,
                                  std::size_t n_test, std::uint64_t seed) {
    BenchResult br = build_comp_bench(train.triples(), n_valid, n_test, seed);
    StoreBenchResult out;
    out.bench = std::move(br.bench);
    out.reduced_train.entities = train.entities;
    out.reduced_train.relations = train.relations;
    for (const Triple& x : br.reduced_train) out.reduced_train.add(x.h, x.r, x.t);
    return out;
}

Metrics evaluate_comp(const ComposeScoreFn& compose_scores, const std::vector<CompPath>& paths,
                      const FilterIndex& filter) {
    std::vector<std::int64_t> ranks(paths.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(paths.size()); ++i) {
        const CompPath& p = paths[static_cast<std::size_t>(i)];
        const std::vector<double> scores = compose_scores(p.a, p.r1, p.r2);
        ranks[static_cast<std::size_t>(i)] =
            filtered_rank(scores, p.c, filter.tails(p.a, p.r_direct));
    }
    RankAccum acc;
    for (std::int64_t r : ranks) acc.add(r);
    return acc.finish();
}

double harmonic_mrr(std::size_t num_entities) {
    double h = 0.0;
    for (std::size_t k = 1; k <= num_entities; ++k) h += 1.0 / static_cast<double>(k);
    return h / static_cast<double>(num_entities);
}

void save_comp_bench(const std::string& path, const CompBench& bench, const Vocabulary& entities,
                     const Vocabulary& relations) {
    std::ostringstream out;
    nlohmann::json meta{{"meta",
                         {{"seed", bench.seed},
                          {"dedup_rule", bench.dedup_rule},
                          {"n_valid", bench.valid.size()},
                          {"n_test", bench.test.size()}}}};
    out << meta.dump() << '\n';
    auto dump_split = [&](const std::vector<CompPath>& ps, const char* split) {
        for (const CompPath& p : ps) {
            nlohmann::json j{{"a", entities.name_of(p.a)},       {"r1", relations.name_of(p.r1)},
                             {"b", entities.name_of(p.b)},       {"r2", relations.name_of(p.r2)},
                             {"c", entities.name_of(p.c)},       {"r_direct", relations.name_of(p.r_direct)},
                             {"split", split}};
            out << j.dump() << '\n';
        }
    };
    dump_split(bench.valid, "valid");
    dump_split(bench.test, "test");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write file: " + path);
    f << out.str();
}

CompBench load_comp_bench(const std::string& path, const Vocabulary& entities,
                          const Vocabulary& relations) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    CompBench bench;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (j.contains("meta")) {
            bench.seed = j["meta"].value("seed", 0ULL);
            bench.dedup_rule = j["meta"].value("dedup_rule", bench.dedup_rule);
            continue;
        }
        CompPath p;
        p.a = entities.id_of(j.at("a").get<std::string>());
        p.r1 = relations.id_of(j.at("r1").get<std::string>());
        p.b = entities.id_of(j.at("b").get<std::string>());
        p.r2 = relations.id_of(j.at("r2").get<std::string>());
        p.c = entities.id_of(j.at("c").get<std::string>());
        p.r_direct = relations.id_of(j.at("r_direct").get<std::string>());
        const std::string split = j.value("split", "test");
        (split == "valid" ? bench.valid : bench.test).push_back(p);
        bench.removed.push_back(Triple{p.a, p.r_direct, p.c});
    }
    return bench;
}

}  // namespace tlog
