#pragma once

#include <string>

#include "tlog/embed.hpp"
#include "tlog/superpos.hpp"
#include "tlog/vocab.hpp"

namespace tlog {

// Flat little-endian binary checkpoints, magic "TLOGCKP1". Layout:
//   magic[8], u32 kind (1 = relation-matrix model, 2 = superposition model),
//   u64 d, u64 num_entities, u64 num_relations,
//   entity names, relation names (u32 length + bytes each),
//   kind 1: E then every M_r as float64 row-major
//   kind 2: E as float64, then per relation u64 nnz + nnz * (u32 head, u32 tail)
// Writers refuse to run on big-endian hosts rather than silently byte-swap.

struct EmbedCheckpoint {
    Vocabulary entities;
    Vocabulary relations;
    EmbedModel model;
};

struct SuperposCheckpoint {
    Vocabulary entities;
    Vocabulary relations;
    SuperpositionModel model;
};

void save_checkpoint(const std::string& path, const EmbedCheckpoint& ckpt);
void save_checkpoint(const std::string& path, const SuperposCheckpoint& ckpt);

// Peeks at the kind field: 1 or 2.
int checkpoint_kind(const std::string& path);

EmbedCheckpoint load_embed_checkpoint(const std::string& path);
SuperposCheckpoint load_superpos_checkpoint(const std::string& path);

}  // namespace tlog
