#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "tlog/sparse.hpp"
#include "tlog/vocab.hpp"

namespace tlog {

struct Triple {
    int32_t h, r, t;
    bool operator==(const Triple& o) const { return h == o.h && r == o.r && t == o.t; }
};

struct TripleHash {
    std::size_t operator()(const Triple& x) const {
        std::uint64_t z = static_cast<std::uint64_t>(static_cast<std::uint32_t>(x.h));
        z = z * 0x9E3779B97F4A7C15ULL + static_cast<std::uint32_t>(x.r);
        z = z * 0x9E3779B97F4A7C15ULL + static_cast<std::uint32_t>(x.t);
        z ^= z >> 29;
        z *= 0xBF58476D1CE4E5B9ULL;
        return static_cast<std::size_t>(z ^ (z >> 32));
    }
};

// (head, relation, tail) facts over interned vocabularies. Triples are a set:
// duplicates are dropped on insert, order of first insertion is preserved.
class TripleStore {
   public:
    Vocabulary entities;
    Vocabulary relations;

    // Returns false if the triple was already present.
    bool add(int32_t h, int32_t r, int32_t t);
    bool add_names(const std::string& h, const std::string& r, const std::string& t);

    bool contains(int32_t h, int32_t r, int32_t t) const {
        return set_.count(Triple{h, r, t}) > 0;
    }

    std::size_t size() const { return triples_.size(); }
    const std::vector<Triple>& triples() const { return triples_; }

    // Drops every triple in `gone`; insertion order of survivors preserved.
    void remove_all(const std::vector<Triple>& gone);

    void validate_ids() const;

   private:
    std::vector<Triple> triples_;
    std::unordered_set<Triple, TripleHash> set_;
};

// Train/valid/test views over one shared pair of vocabularies.
struct DatasetSplit {
    Vocabulary entities;
    Vocabulary relations;
    std::vector<Triple> train, valid, test;

    std::vector<const std::vector<Triple>*> all_splits() const { return {&train, &valid, &test}; }
};

// N x N adjacency of one relation: entry (h,t) present iff (h,r,t) is a fact.
SparseBoolMatrix adjacency(const TripleStore& store, int32_t relation);
SparseBoolMatrix adjacency(const std::vector<Triple>& triples, std::size_t num_entities,
                           int32_t relation);

// One adjacency per relation id, built in a single pass.
std::vector<SparseBoolMatrix> all_adjacencies(const std::vector<Triple>& triples,
                                              std::size_t num_entities, std::size_t num_relations);

}  // namespace tlog
