#include "tlog/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tlog {

namespace {

constexpr char kMagic[8] = {'T', 'L', 'O', 'G', 'C', 'K', 'P', '1'};

void require_little_endian() {
    if constexpr (std::endian::native != std::endian::little)
        throw std::runtime_error("checkpoint format is little-endian only");
}

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("checkpoint truncated");
    return v;
}

void put_string(std::ostream& out, const std::string& s) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
    const std::uint32_t len = get<std::uint32_t>(in);
    std::string s(len, '\0');
    in.read(s.data(), len);
    if (!in) throw std::runtime_error("checkpoint truncated");
    return s;
}

void put_vocab(std::ostream& out, const Vocabulary& v) {
    for (const auto& n : v.names()) put_string(out, n);
}

Vocabulary get_vocab(std::istream& in, std::uint64_t count) {
    Vocabulary v;
    for (std::uint64_t i = 0; i < count; ++i) v.intern(get_string(in));
    if (v.size() != count) throw std::runtime_error("checkpoint has duplicate vocabulary names");
    return v;
}

void put_matrix(std::ostream& out, const DenseMatrix& m) {
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(m.size() * sizeof(double)));
}

DenseMatrix get_matrix(std::istream& in, std::size_t rows, std::size_t cols) {
    DenseMatrix m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(m.size() * sizeof(double)));
    if (!in) throw std::runtime_error("checkpoint truncated");
    return m;
}

void write_atomic(const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write file: " + tmp);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

std::ifstream open_checkpoint(const std::string& path, std::uint32_t expect_kind) {
    require_little_endian();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error(path + ": not a checkpoint file");
    const std::uint32_t kind = get<std::uint32_t>(in);
    if (expect_kind != 0 && kind != expect_kind)
        throw std::runtime_error(path + ": checkpoint kind " + std::to_string(kind) +
                                 ", expected " + std::to_string(expect_kind));
    return in;
}

}  // namespace

void save_checkpoint(const std::string& path, const EmbedCheckpoint& ckpt) {
    require_little_endian();
    std::ostringstream out(std::ios::binary);
    out.write(kMagic, 8);
    put<std::uint32_t>(out, 1);
    put<std::uint64_t>(out, ckpt.model.d);
    put<std::uint64_t>(out, ckpt.model.num_entities());
    put<std::uint64_t>(out, ckpt.model.num_relations());
    put_vocab(out, ckpt.entities);
    put_vocab(out, ckpt.relations);
    put_matrix(out, ckpt.model.E);
    for (const DenseMatrix& m : ckpt.model.M) put_matrix(out, m);
    write_atomic(path, out.str());
}

void save_checkpoint(const std::string& path, const SuperposCheckpoint& ckpt) {
    require_little_endian();
    std::ostringstream out(std::ios::binary);
    out.write(kMagic, 8);
    put<std::uint32_t>(out, 2);
    put<std::uint64_t>(out, ckpt.model.d);
    put<std::uint64_t>(out, ckpt.model.num_entities());
    put<std::uint64_t>(out, ckpt.model.num_relations());
    put_vocab(out, ckpt.entities);
    put_vocab(out, ckpt.relations);
    put_matrix(out, ckpt.model.E);
    for (const SparseBoolMatrix& adj : ckpt.model.adjacency) {
        put<std::uint64_t>(out, static_cast<std::uint64_t>(adj.nnz()));
        for (const auto& [h, t] : adj.entries()) {
            put<std::uint32_t>(out, static_cast<std::uint32_t>(h));
            put<std::uint32_t>(out, static_cast<std::uint32_t>(t));
        }
    }
    write_atomic(path, out.str());
}

int checkpoint_kind(const std::string& path) {
    std::ifstream in = open_checkpoint(path, 0);
    in.seekg(8, std::ios::beg);
    return static_cast<int>(get<std::uint32_t>(in));
}

EmbedCheckpoint load_embed_checkpoint(const std::string& path) {
    std::ifstream in = open_checkpoint(path, 1);
    EmbedCheckpoint c;
    const std::uint64_t d = get<std::uint64_t>(in);
    const std::uint64_t ne = get<std::uint64_t>(in);
    const std::uint64_t nr = get<std::uint64_t>(in);
    c.entities = get_vocab(in, ne);
    c.relations = get_vocab(in, nr);
    c.model.d = d;
    c.model.E = get_matrix(in, ne, d);
    for (std::uint64_t r = 0; r < nr; ++r) c.model.M.push_back(get_matrix(in, d, d));
    return c;
}

SuperposCheckpoint load_superpos_checkpoint(const std::string& path) {
    std::ifstream in = open_checkpoint(path, 2);
    SuperposCheckpoint c;
    const std::uint64_t d = get<std::uint64_t>(in);
    const std::uint64_t ne = get<std::uint64_t>(in);
    const std::uint64_t nr = get<std::uint64_t>(in);
    c.entities = get_vocab(in, ne);
    c.relations = get_vocab(in, nr);
    c.model.d = d;
    c.model.E = get_matrix(in, ne, d);
    for (std::uint64_t r = 0; r < nr; ++r) {
        const std::uint64_t nnz = get<std::uint64_t>(in);
        std::vector<std::pair<int32_t, int32_t>> es;
        es.reserve(nnz);
        for (std::uint64_t i = 0; i < nnz; ++i) {
            const std::uint32_t h = get<std::uint32_t>(in);
            const std::uint32_t t = get<std::uint32_t>(in);
            es.emplace_back(static_cast<int32_t>(h), static_cast<int32_t>(t));
        }
        c.model.adjacency.push_back(SparseBoolMatrix::from_entries(ne, ne, std::move(es)));
    }
    return c;
}

}  // namespace tlog
