#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tlog/sparse.hpp"
#include "tlog/triples.hpp"
#include "tlog/vocab.hpp"

namespace tlog {

// --- TSV triples (head \t relation \t tail, no header, UTF-8) ---

// Appends one file into the store. Malformed lines (field count != 3) throw
// with the file and line number; duplicate lines are dropped.
void load_triple_file(const std::string& path, TripleStore& store);

// Loads canonical train/valid/test files over one shared vocabulary pair.
// Vocabularies are built in file-read order (train, then valid, then test).
// A triple appearing in two splits is an error.
DatasetSplit load_triples_tsv(const std::string& train_path, const std::string& valid_path,
                              const std::string& test_path);

void save_triples_tsv(const std::string& path, const std::vector<Triple>& triples,
                      const Vocabulary& entities, const Vocabulary& relations);

// --- Genealogy CSVs ---

struct GenealogyGraph {
    SparseBoolMatrix parent;  // edge (i,j): person i is a parent of person j
    Vocabulary persons;       // person ids, restricted to persons on at least one edge
    std::vector<std::string> display_names;  // person_name column; falls back to the id
    std::int64_t raw_person_rows = 0;
    std::int64_t raw_relationship_rows = 0;

    const std::string& display(int32_t id) const {
        return display_names[static_cast<std::size_t>(id)];
    }
};

// Resolves a query against person ids first, then display names. A display
// name shared by several persons is an error listing the candidate ids;
// a completely unknown name throws with nearest-id suggestions.
int32_t resolve_person(const GenealogyGraph& g, const std::string& query);

// Person CSV must carry a person_id column; relationship CSV must carry
// person_id_1, relationship_type, person_id_2. A row (p1, type, p2) reads
// "p1 is the <type> of p2": father/mother rows keep direction (p1 is the
// parent), son/daughter rows invert (p2 is the parent). Other relationship
// labels are ignored. Unknown person ids and parent self-loops are errors.
GenealogyGraph load_genealogy(const std::string& person_csv, const std::string& relationship_csv);

// --- Countries JSON (array of records with capital[], name.common, region) ---

// Produces facts (capital, is_capital_of, country) and
// (country, is_located_in, region). Records lacking a capital or region
// contribute no fact of that kind.
TripleStore load_countries(const std::string& json_path);

inline const char* kCapitalRelation = "is_capital_of";
inline const char* kLocatedRelation = "is_located_in";

// --- small shared helpers ---

std::string read_file(const std::string& path);
bool file_exists(const std::string& path);

// RFC-4180-style CSV: quoted fields, doubled quotes, newlines inside quotes.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace tlog
