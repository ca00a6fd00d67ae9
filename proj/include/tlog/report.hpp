#pragma once

#include <string>

#include <json.hpp>

#include "tlog/config.hpp"
#include "tlog/datalog.hpp"
#include "tlog/eval.hpp"

namespace tlog {

inline constexpr const char* kEngineVersion = "tlog 0.1.0";

nlohmann::json metrics_to_json(const Metrics& m);
nlohmann::json trace_to_json(const ClosureTrace& t);
nlohmann::json verification_to_json(const VerificationReport& r);
nlohmann::json config_to_json(const ExperimentConfig& c);

// Skeleton report: config echo, engine version, input hashes, wall clock slot.
// Existing input paths get a git-style blob hash under input_hashes.
nlohmann::json make_run_report(const ExperimentConfig& cfg);

// Serializes with sorted keys and writes via temp file + rename.
void write_report(const std::string& path, const nlohmann::json& report);

void atomic_write_text(const std::string& path, const std::string& text);

}  // namespace tlog
