#include "tlog/config.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include "tlog/loaders.hpp"

namespace tlog {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw ValidationError("config key '" + key + "': '" + v + "' is not a number");
    }
}

std::int64_t parse_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw ValidationError("config key '" + key + "': '" + v + "' is not an integer");
    }
}

std::size_t parse_size(const std::string& v, const std::string& key) {
    const std::int64_t x = parse_int(v, key);
    if (x < 0) throw ValidationError("config key '" + key + "' must be >= 0");
    return static_cast<std::size_t>(x);
}

void apply_experiment_defaults(ExperimentConfig& c) {
    if (c.experiment == "exp2") {
        c.lr = 0.005;
        c.epochs = 500;
        c.dim = 64;
    } else if (c.experiment == "exp3a" || c.experiment == "exp3b") {
        c.lr = 5e-4;
        c.epochs = 50;
        c.dim = 256;
    }
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    // First pass just to find the experiment id so defaults land before
    // explicit keys override them.
    std::map<std::string, std::string> kv;  // "section.key" -> value
    std::vector<std::string> order;
    {
        std::istringstream in(text);
        std::string line, section;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ValidationError(origin + ":" + std::to_string(lineno) +
                                          ": malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ValidationError(origin + ":" + std::to_string(lineno) +
                                      ": expected key = value");
            std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            if (key.empty())
                throw ValidationError(origin + ":" + std::to_string(lineno) + ": empty key");
            if (!section.empty()) key = section + "." + key;
            if (kv.count(key))
                throw ValidationError(origin + ": duplicate key '" + key + "'");
            kv[key] = val;
            order.push_back(key);
        }
    }

    ExperimentConfig c;
    auto exp_it = kv.find("experiment");
    if (exp_it == kv.end())
        throw ValidationError(origin + ": missing required key 'experiment'");
    c.experiment = exp_it->second;
    if (c.experiment != "exp1" && c.experiment != "exp2" && c.experiment != "exp3a" &&
        c.experiment != "exp3b")
        throw ValidationError(origin + ": experiment must be one of exp1, exp2, exp3a, exp3b");
    apply_experiment_defaults(c);

    for (const std::string& key : order) {
        const std::string& v = kv[key];
        if (key == "experiment") continue;
        if (key == "seed")
            c.seed = static_cast<std::uint64_t>(parse_int(v, key));
        else if (key == "out_dir")
            c.out_dir = v;
        else if (key == "data.persons")
            c.persons = v;
        else if (key == "data.relationships")
            c.relationships = v;
        else if (key == "data.countries")
            c.countries = v;
        else if (key == "data.train")
            c.train = v;
        else if (key == "data.valid")
            c.valid = v;
        else if (key == "data.test")
            c.test = v;
        else if (key == "data.bench")
            c.bench = v;
        else if (key == "closure.rule")
            c.rule = v;
        else if (key == "closure.engine")
            c.engine = v;
        else if (key == "train.lr" || key == "train.learning_rate")
            c.lr = parse_double(v, key);
        else if (key == "train.epochs")
            c.epochs = static_cast<int>(parse_int(v, key));
        else if (key == "train.dim")
            c.dim = parse_size(v, key);
        else if (key == "train.weight_decay")
            c.weight_decay = parse_double(v, key);
        else if (key == "train.batch_size")
            c.batch_size = parse_size(v, key);
        else if (key == "train.temperature")
            c.temperature = parse_double(v, key);
        else if (key == "train.clip_norm")
            c.clip_norm = parse_double(v, key);
        else if (key == "train.validate_every")
            c.validate_every = static_cast<int>(parse_int(v, key));
        else if (key == "train.valid_sample")
            c.valid_sample = parse_size(v, key);
        else if (key == "bench.n_valid")
            c.n_valid = parse_size(v, key);
        else if (key == "bench.n_test")
            c.n_test = parse_size(v, key);
        else
            throw ValidationError(origin + ": unknown key '" + key + "'");
    }

    check_config_ranges(c);
    return c;
}

ExperimentConfig validate_config(const std::string& path) {
    if (!file_exists(path)) throw ValidationError("config file not found: " + path);
    return parse_config_text(read_file(path), path);
}

void check_config_ranges(const ExperimentConfig& c) {
    const bool trains = c.experiment == "exp2" || c.experiment == "exp3a" ||
                        c.experiment == "exp3b";
    if (trains) {
        if (c.lr <= 0.0) throw ValidationError("learning rate must be > 0");
        if (c.epochs < 1) throw ValidationError("epochs must be >= 1");
        if (c.dim < 1) throw ValidationError("dim must be >= 1");
    }
    if (c.experiment == "exp3a" || c.experiment == "exp3b") {
        if (c.weight_decay < 0.0) throw ValidationError("weight_decay must be >= 0");
        if (c.batch_size < 1) throw ValidationError("batch_size must be >= 1");
        if (c.temperature <= 0.0) throw ValidationError("temperature must be > 0");
        if (c.clip_norm <= 0.0) throw ValidationError("clip_norm must be > 0");
        if (c.validate_every < 1) throw ValidationError("validate_every must be >= 1");
    }
    if (c.experiment == "exp1" && c.engine != "naive" && c.engine != "seminaive")
        throw ValidationError("engine must be 'naive' or 'seminaive'");
}

}  // namespace tlog
