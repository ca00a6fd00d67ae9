#include "tlog/report.hpp"

#include <cstdio>
#include <fstream>

#include "tlog/loaders.hpp"
#include "tlog/sha1.hpp"

namespace tlog {

nlohmann::json metrics_to_json(const Metrics& m) {
    return {{"mrr", m.mrr},
            {"hits1", m.hits1},
            {"hits3", m.hits3},
            {"hits10", m.hits10},
            {"queries", m.queries}};
}

nlohmann::json trace_to_json(const ClosureTrace& t) {
    return {{"added_per_iteration", t.added_per_iteration},
            {"base_edges", t.base_edges},
            {"final_edges", t.final_edges},
            {"last_productive_iteration", t.last_productive_iteration},
            {"zero_progress_iteration", t.zero_progress_iteration}};
}

namespace {
nlohmann::json check_to_json(const CheckResult& c) {
    nlohmann::json sample = nlohmann::json::array();
    for (const auto& [r, col] : c.sample) sample.push_back({r, col});
    return {{"pass", c.pass}, {"violations", c.violations}, {"sample", sample}};
}
}  // namespace

nlohmann::json verification_to_json(const VerificationReport& r) {
    return {{"containment", check_to_json(r.containment)},
            {"closure", check_to_json(r.closure)},
            {"acyclicity", check_to_json(r.acyclicity)},
            {"all_pass", r.all_pass()}};
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j{{"experiment", c.experiment}, {"seed", c.seed}, {"out_dir", c.out_dir}};
    nlohmann::json data;
    if (!c.persons.empty()) data["persons"] = c.persons;
    if (!c.relationships.empty()) data["relationships"] = c.relationships;
    if (!c.countries.empty()) data["countries"] = c.countries;
    if (!c.train.empty()) data["train"] = c.train;
    if (!c.valid.empty()) data["valid"] = c.valid;
    if (!c.test.empty()) data["test"] = c.test;
    if (!c.bench.empty()) data["bench"] = c.bench;
    j["data"] = data;
    if (c.experiment == "exp1") {
        j["closure"] = {{"rule", c.rule}, {"engine", c.engine}};
    } else {
        nlohmann::json train{{"lr", c.lr}, {"epochs", c.epochs}, {"dim", c.dim}};
        if (c.experiment == "exp3a" || c.experiment == "exp3b") {
            train["weight_decay"] = c.weight_decay;
            train["batch_size"] = c.batch_size;
            train["temperature"] = c.temperature;
            train["clip_norm"] = c.clip_norm;
            train["validate_every"] = c.validate_every;
            train["valid_sample"] = c.valid_sample;
        }
        j["train"] = train;
    }
    if (c.experiment == "exp3b") j["bench"] = {{"n_valid", c.n_valid}, {"n_test", c.n_test}};
    return j;
}

nlohmann::json make_run_report(const ExperimentConfig& cfg) {
    nlohmann::json rep;
    rep["engine_version"] = kEngineVersion;
    rep["config"] = config_to_json(cfg);
    nlohmann::json hashes;
    for (const std::string& p : {cfg.persons, cfg.relationships, cfg.countries, cfg.train,
                                 cfg.valid, cfg.test, cfg.bench}) {
        if (!p.empty() && file_exists(p)) hashes[p] = git_blob_hash(p);
    }
    rep["input_hashes"] = hashes;
    rep["wall_clock_seconds"] = 0.0;
    return rep;
}

void atomic_write_text(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write file: " + tmp);
        out << text;
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

void write_report(const std::string& path, const nlohmann::json& report) {
    atomic_write_text(path, report.dump(2) + "\n");
}

}  // namespace tlog
