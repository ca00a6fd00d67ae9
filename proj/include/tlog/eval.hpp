#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tlog/triples.hpp"

namespace tlog {

// Known-true answer sets in both query directions, built over every split so
// filtered ranking never penalizes a correct prediction.
class FilterIndex {
   public:
    void add(const std::vector<Triple>& triples);
    void finalize();  // sorts and dedups the answer sets

    const std::vector<int32_t>& tails(int32_t h, int32_t r) const;
    const std::vector<int32_t>& heads(int32_t r, int32_t t) const;

   private:
    static std::uint64_t key(int32_t a, int32_t b) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
               static_cast<std::uint32_t>(b);
    }
    std::unordered_map<std::uint64_t, std::vector<int32_t>> tails_;
    std::unordered_map<std::uint64_t, std::vector<int32_t>> heads_;
    bool finalized_ = false;
};

struct Metrics {
    double mrr = 0.0;
    double hits1 = 0.0;
    double hits3 = 0.0;
    double hits10 = 0.0;
    std::int64_t queries = 0;
};

// Pessimistic filtered rank: 1 + number of unmasked entities scoring >= the
// target (ties count against it). The target itself is never masked.
std::int64_t filtered_rank(const std::vector<double>& scores, int32_t target,
                           const std::vector<int32_t>& known_true);

// Scoring interface the harness ranks against; both model families provide one.
class LinkScorer {
   public:
    virtual ~LinkScorer() = default;
    virtual std::size_t num_entities() const = 0;
    virtual std::vector<double> tail_scores(int32_t h, int32_t r) const = 0;
    virtual std::vector<double> head_scores(int32_t t, int32_t r) const = 0;
};

// Filtered link prediction over both directions; 2 * |triples| queries.
Metrics evaluate_lp(const LinkScorer& scorer, const std::vector<Triple>& triples,
                    const FilterIndex& filter);

struct CompPath {
    int32_t a, r1, b, r2, c, r_direct;
};

struct CompBench {
    std::vector<CompPath> valid;
    std::vector<CompPath> test;
    std::vector<Triple> removed;  // the direct edges dropped from train
    std::uint64_t seed = 0;
    std::string dedup_rule = "first_witness_per_direct_edge";
};

struct BenchResult {
    CompBench bench;
    std::vector<Triple> reduced_train;
};

// Candidate records are 2-hop train paths (a -r1-> b -r2-> c) whose endpoints
// are also linked by exactly one direct train relation; one record per direct
// edge (a, r_direct, c), witness chosen in train order. n_valid + n_test
// records are sampled without replacement (validation drawn first) and their
// direct edges removed from train. Witnesses are re-chosen from the reduced
// store if a removal invalidated them.
BenchResult build_comp_bench(const std::vector<Triple>& train, std::size_t n_valid,
                             std::size_t n_test, std::uint64_t seed);

// TripleStore-level convenience wrapper; the reduced store shares vocabularies.
struct StoreBenchResult {
    CompBench bench;
    TripleStore reduced_train;
};
StoreBenchResult build_comp_bench(const TripleStore& train, std::size_t n_valid,
                                  std::size_t n_test, std::uint64_t seed);

using ComposeScoreFn = std::function<std::vector<double>(int32_t a, int32_t r1, int32_t r2)>;

// Tail-direction-only metrics: rank path.c among compose scores, filtered by
// the known tails of (a, r_direct).
Metrics evaluate_comp(const ComposeScoreFn& compose_scores, const std::vector<CompPath>& paths,
                      const FilterIndex& filter);

// Expected MRR of uniformly random scores under pessimistic ranking: H_n / n.
double harmonic_mrr(std::size_t num_entities);

// JSON-lines serialization; first line is a metadata record.
void save_comp_bench(const std::string& path, const CompBench& bench, const Vocabulary& entities,
                     const Vocabulary& relations);
CompBench load_comp_bench(const std::string& path, const Vocabulary& entities,
                          const Vocabulary& relations);

}  // namespace tlog
