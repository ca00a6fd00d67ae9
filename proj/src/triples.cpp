#include "tlog/triples.hpp"

#include <stdexcept>

namespace tlog {

bool TripleStore::add(int32_t h, int32_t r, int32_t t) {
    const Triple x{h, r, t};
    if (!set_.insert(x).second) return false;
    triples_.push_back(x);
    return true;
}

bool TripleStore::add_names(const std::string& h, const std::string& r, const std::string& t) {
    // Sequenced explicitly: argument evaluation order must not decide ids.
    const int32_t hid = entities.intern(h);
    const int32_t rid = relations.intern(r);
    const int32_t tid = entities.intern(t);
    return add(hid, rid, tid);
}

void TripleStore::remove_all(const std::vector<Triple>& gone) {
    std::unordered_set<Triple, TripleHash> drop(gone.begin(), gone.end());
    std::vector<Triple> kept;
    kept.reserve(triples_.size());
    for (const Triple& x : triples_) {
        if (drop.count(x)) {
            set_.erase(x);
        } else {
            kept.push_back(x);
        }
    }
    triples_ = std::move(kept);
}

void TripleStore::validate_ids() const {
    const int32_t ne = static_cast<int32_t>(entities.size());
    const int32_t nr = static_cast<int32_t>(relations.size());
    for (const Triple& x : triples_) {
        if (x.h < 0 || x.h >= ne || x.t < 0 || x.t >= ne || x.r < 0 || x.r >= nr)
            throw std::out_of_range("triple id outside vocabulary");
    }
}

SparseBoolMatrix adjacency(const std::vector<Triple>& triples, std::size_t num_entities,
                           int32_t relation) {
    std::vector<std::pair<int32_t, int32_t>> es;
    for (const Triple& x : triples)
        if (x.r == relation) es.emplace_back(x.h, x.t);
    return SparseBoolMatrix::from_entries(num_entities, num_entities, std::move(es));
}

SparseBoolMatrix adjacency(const TripleStore& store, int32_t relation) {
    if (relation < 0 || static_cast<std::size_t>(relation) >= store.relations.size())
        throw std::out_of_range("adjacency: unknown relation id " + std::to_string(relation));
    return adjacency(store.triples(), store.entities.size(), relation);
}

std::vector<SparseBoolMatrix> all_adjacencies(const std::vector<Triple>& triples,
                                              std::size_t num_entities, std::size_t num_relations) {
    std::vector<std::vector<std::pair<int32_t, int32_t>>> per_rel(num_relations);
    for (const Triple& x : triples) {
        if (x.r < 0 || static_cast<std::size_t>(x.r) >= num_relations)
            throw std::out_of_range("all_adjacencies: relation id out of range");
        per_rel[static_cast<std::size_t>(x.r)].emplace_back(x.h, x.t);
    }
    std::vector<SparseBoolMatrix> out;
    out.reserve(num_relations);
    for (auto& es : per_rel)
        out.push_back(SparseBoolMatrix::from_entries(num_entities, num_entities, std::move(es)));
    return out;
}

}  // namespace tlog
