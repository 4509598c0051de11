#pragma once

// JSON documents written next to masks. Keys are emitted in sorted order
// and doubles in shortest round-trip form, so identical runs give identical bytes.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "roughchange/baselines.hpp"
#include "roughchange/eval.hpp"
#include "roughchange/pipeline.hpp"

namespace roughchange {

/// global_accuracy, changed_count, lower_count, upper_count, candidate_t0,
/// threshold_T, bins_B, candidate_rule, method = "rough" (+ warnings when present).
nlohmann::json to_json(const DetectionReport& report);

nlohmann::json to_json(const Metrics& metrics);

/// Summary of an hcm/fcm run: method, centers, iterations, converged, changed_count.
nlohmann::json cluster_report(const std::string& method, const ClusterModel& model, std::size_t changed_count);

/// Pretty-printed with a trailing newline. IoError when the file cannot be written.
void write_json(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace roughchange
