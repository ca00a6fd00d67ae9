#include "tlog/loaders.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace tlog {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool file_exists(const std::string& path) {
    std::ifstream in(path);
    return in.good();
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string strip_bom(std::string s) {
    if (s.size() >= 3 && static_cast<unsigned char>(s[0]) == 0xEF &&
        static_cast<unsigned char>(s[1]) == 0xBB && static_cast<unsigned char>(s[2]) == 0xBF)
        return s.substr(3);
    return s;
}

}  // namespace

void load_triple_file(const std::string& path, TripleStore& store) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t t1 = line.find('\t');
        const std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        const std::size_t t3 = t2 == std::string::npos ? std::string::npos : line.find('\t', t2 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos || t3 != std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 3 tab-separated fields");
        store.add_names(line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), line.substr(t2 + 1));
    }
}

DatasetSplit load_triples_tsv(const std::string& train_path, const std::string& valid_path,
                              const std::string& test_path) {
    if (train_path.empty() && valid_path.empty() && test_path.empty())
        throw std::runtime_error("load_triples_tsv: no files given");

    DatasetSplit out;
    std::unordered_set<Triple, TripleHash> seen;
    auto load_one = [&](const std::string& path, std::vector<Triple>& dst) {
        if (path.empty()) return;
        TripleStore tmp;
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open file: " + path);
        std::string line;
        std::size_t lineno = 0;
        std::unordered_set<Triple, TripleHash> in_this_split;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            const std::size_t t1 = line.find('\t');
            const std::size_t t2 =
                t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
            const std::size_t t3 =
                t2 == std::string::npos ? std::string::npos : line.find('\t', t2 + 1);
            if (t1 == std::string::npos || t2 == std::string::npos || t3 != std::string::npos)
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": expected 3 tab-separated fields");
            const int32_t h = out.entities.intern(line.substr(0, t1));
            const int32_t r = out.relations.intern(line.substr(t1 + 1, t2 - t1 - 1));
            const int32_t t = out.entities.intern(line.substr(t2 + 1));
            const Triple x{h, r, t};
            if (in_this_split.count(x)) continue;  // duplicate line within a split: set semantics
            if (seen.count(x))
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": triple already present in another split");
            in_this_split.insert(x);
            seen.insert(x);
            dst.push_back(x);
        }
    };
    load_one(train_path, out.train);
    load_one(valid_path, out.valid);
    load_one(test_path, out.test);
    return out;
}

void save_triples_tsv(const std::string& path, const std::vector<Triple>& triples,
                      const Vocabulary& entities, const Vocabulary& relations) {
    std::ofstream outf(path, std::ios::binary);
    if (!outf) throw std::runtime_error("cannot write file: " + path);
    for (const Triple& x : triples)
        outf << entities.name_of(x.h) << '\t' << relations.name_of(x.r) << '\t'
             << entities.name_of(x.t) << '\n';
}

std::vector<std::vector<std::string>> parse_csv(const std::string& raw) {
    const std::string text = strip_bom(raw);
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    auto end_field = [&] {
        row.push_back(field);
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(row);
        row.clear();
    };
    while (i < text.size()) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            end_row();
        } else if (c == '\r') {
            // swallow; \r\n handled by the \n branch
        } else {
            field.push_back(c);
        }
        ++i;
    }
    if (!field.empty() || !row.empty()) end_row();
    return rows;
}

namespace {

std::size_t require_column(const std::vector<std::string>& header, const std::string& name,
                           const std::string& path) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (lower(trim(header[i])) == name) return i;
    throw std::runtime_error(path + ": missing required column '" + name + "'");
}

}  // namespace

GenealogyGraph load_genealogy(const std::string& person_csv, const std::string& relationship_csv) {
    GenealogyGraph g;

    const auto person_rows = parse_csv(read_file(person_csv));
    if (person_rows.empty()) throw std::runtime_error(person_csv + ": empty file");
    const std::size_t pid_col = require_column(person_rows[0], "person_id", person_csv);
    std::size_t name_col = person_rows[0].size();  // optional person_name column
    for (std::size_t i = 0; i < person_rows[0].size(); ++i)
        if (lower(trim(person_rows[0][i])) == "person_name") name_col = i;
    std::unordered_map<std::string, std::string> display_by_id;
    for (std::size_t i = 1; i < person_rows.size(); ++i) {
        if (pid_col >= person_rows[i].size()) continue;
        const std::string id = trim(person_rows[i][pid_col]);
        if (id.empty()) continue;
        std::string name;
        if (name_col < person_rows[i].size()) name = trim(person_rows[i][name_col]);
        display_by_id.emplace(id, name.empty() ? id : name);
    }
    g.raw_person_rows = static_cast<std::int64_t>(display_by_id.size());

    const auto rel_rows = parse_csv(read_file(relationship_csv));
    if (rel_rows.empty()) throw std::runtime_error(relationship_csv + ": empty file");
    const std::size_t p1_col = require_column(rel_rows[0], "person_id_1", relationship_csv);
    const std::size_t ty_col = require_column(rel_rows[0], "relationship_type", relationship_csv);
    const std::size_t p2_col = require_column(rel_rows[0], "person_id_2", relationship_csv);
    g.raw_relationship_rows = static_cast<std::int64_t>(rel_rows.size()) - 1;

    // (p1, type, p2) reads "p1 is the <type> of p2".
    std::vector<std::pair<std::string, std::string>> edges;  // parent -> child
    std::vector<std::string> unknown;
    for (std::size_t i = 1; i < rel_rows.size(); ++i) {
        const auto& row = rel_rows[i];
        if (p1_col >= row.size() || ty_col >= row.size() || p2_col >= row.size()) continue;
        const std::string type = lower(trim(row[ty_col]));
        std::string parent, child;
        if (type == "father" || type == "mother") {
            parent = trim(row[p1_col]);
            child = trim(row[p2_col]);
        } else if (type == "son" || type == "daughter") {
            parent = trim(row[p2_col]);
            child = trim(row[p1_col]);
        } else {
            continue;
        }
        if (parent.empty() || child.empty()) continue;
        for (const std::string& id : {parent, child})
            if (!display_by_id.count(id)) unknown.push_back(id);
        if (!unknown.empty()) continue;
        if (parent == child)
            throw std::runtime_error(relationship_csv + ": parent self-loop on '" + parent + "'");
        edges.emplace_back(parent, child);
    }
    if (!unknown.empty()) {
        std::sort(unknown.begin(), unknown.end());
        unknown.erase(std::unique(unknown.begin(), unknown.end()), unknown.end());
        std::string msg = relationship_csv + ": relationship references unknown person id(s):";
        for (std::size_t i = 0; i < unknown.size() && i < 10; ++i) msg += " " + unknown[i];
        if (unknown.size() > 10) msg += " ... (" + std::to_string(unknown.size()) + " total)";
        throw std::runtime_error(msg);
    }

    // Intern in edge order (parent first), then dedup merged edges.
    std::vector<std::pair<int32_t, int32_t>> idx_edges;
    idx_edges.reserve(edges.size());
    for (const auto& [p, c] : edges) {
        const int32_t pid = g.persons.intern(p);
        const int32_t cid = g.persons.intern(c);
        idx_edges.emplace_back(pid, cid);
    }
    g.parent = SparseBoolMatrix::from_entries(g.persons.size(), g.persons.size(),
                                              std::move(idx_edges));
    g.display_names.reserve(g.persons.size());
    for (const std::string& id : g.persons.names()) g.display_names.push_back(display_by_id.at(id));
    return g;
}

int32_t resolve_person(const GenealogyGraph& g, const std::string& query) {
    const int32_t direct = g.persons.try_id(query);
    if (direct >= 0) return direct;
    std::vector<int32_t> matches;
    for (std::size_t i = 0; i < g.display_names.size(); ++i)
        if (g.display_names[i] == query) matches.push_back(static_cast<int32_t>(i));
    if (matches.size() == 1) return matches[0];
    if (matches.size() > 1) {
        std::string msg = "person name '" + query + "' is ambiguous; candidate ids:";
        for (int32_t id : matches) msg += " '" + g.persons.name_of(id) + "'";
        throw std::out_of_range(msg);
    }
    std::string msg = "unknown person '" + query + "'; closest ids:";
    for (const auto& n : g.persons.nearest(query)) msg += " '" + n + "'";
    throw std::out_of_range(msg);
}

TripleStore load_countries(const std::string& json_path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(json_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(json_path + ": JSON parse error: " + e.what());
    }
    if (!doc.is_array()) throw std::runtime_error(json_path + ": expected a JSON array");

    TripleStore store;
    store.relations.intern(kCapitalRelation);
    store.relations.intern(kLocatedRelation);

    for (const auto& rec : doc) {
        std::string country;
        if (rec.contains("name")) {
            const auto& n = rec["name"];
            if (n.is_object() && n.contains("common"))
                country = n["common"].get<std::string>();
            else if (n.is_string())
                country = n.get<std::string>();
        }
        if (country.empty()) continue;

        std::vector<std::string> capitals;
        if (rec.contains("capital")) {
            const auto& cap = rec["capital"];
            if (cap.is_array()) {
                for (const auto& c : cap)
                    if (c.is_string() && !c.get<std::string>().empty())
                        capitals.push_back(c.get<std::string>());
            } else if (cap.is_string() && !cap.get<std::string>().empty()) {
                capitals.push_back(cap.get<std::string>());
            }
        }
        std::string region;
        if (rec.contains("region") && rec["region"].is_string())
            region = rec["region"].get<std::string>();

        for (const auto& cap : capitals) store.add_names(cap, kCapitalRelation, country);
        if (!region.empty()) store.add_names(country, kLocatedRelation, region);
    }
    return store;
}

}  // namespace tlog
