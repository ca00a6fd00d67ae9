#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tlog {

// User-input problems (bad config keys, missing files, out-of-range values).
// The CLI maps these to exit code 1; everything else exits 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One experiment run, parsed from an INI-style file ([section] headers,
// key = value lines, '#' comments). Defaults are the published
// hyperparameters for each experiment; unknown keys are rejected.
struct ExperimentConfig {
    std::string experiment;  // exp1 | exp2 | exp3a | exp3b
    std::uint64_t seed = 42;
    std::string out_dir = ".";

    // [data]
    std::string persons;
    std::string relationships;
    std::string countries;
    std::string train, valid, test;
    std::string bench;  // optional pre-built benchmark for exp3b

    // [closure] (exp1)
    std::string rule = "Ancestor(x,z) :- Ancestor(x,y), Parent(y,z).";
    std::string engine = "seminaive";  // naive | seminaive

    // [train] hyperparameters; defaults filled per experiment
    double lr = 0.0;
    int epochs = 0;
    std::size_t dim = 0;
    double weight_decay = 1e-5;
    std::size_t batch_size = 1024;
    double temperature = 0.1;
    double clip_norm = 1.0;
    int validate_every = 10;
    std::size_t valid_sample = 0;

    // [bench] (exp3b)
    std::size_t n_valid = 1000;
    std::size_t n_test = 1000;
};

// Parses and validates; experiment-appropriate defaults applied first.
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "config");

// Reads the file, then parse_config_text; missing file is a ValidationError.
ExperimentConfig validate_config(const std::string& path);

// Re-checks value ranges (used after CLI flag overrides).
void check_config_ranges(const ExperimentConfig& cfg);

}  // namespace tlog
