#include "roughchange/report.hpp"

#include <fstream>

#include "roughchange/errors.hpp"

namespace roughchange {

nlohmann::json to_json(const DetectionReport& report) {
    nlohmann::json doc = {
        {"method", "rough"},
        {"global_accuracy", report.global_accuracy},
        {"changed_count", report.changed_count},
        {"lower_count", report.lower_count},
        {"upper_count", report.upper_count},
        {"candidate_t0", report.candidate_t0},
        {"threshold_T", report.params.threshold},
        {"bins_B", report.params.bins},
        {"candidate_rule", report.params.candidate_rule.to_string()},
    };
    if (!report.warnings.empty()) doc["warnings"] = report.warnings;
    return doc;
}

nlohmann::json to_json(const Metrics& m) {
    return {
        {"true_positives", m.true_positives},
        {"false_positives", m.false_positives},
        {"false_negatives", m.false_negatives},
        {"true_negatives", m.true_negatives},
        {"total_error_rate", m.total_error_rate},
        {"precision", m.precision},
        {"recall", m.recall},
        {"f1", m.f1},
    };
}

nlohmann::json cluster_report(const std::string& method, const ClusterModel& model, std::size_t changed_count) {
    return {
        {"method", method},
        {"centers", model.centers},
        {"iterations", model.iterations_run},
        {"converged", model.converged},
        {"degenerate", model.degenerate},
        {"changed_count", changed_count},
    };
}

void write_json(const nlohmann::json& doc, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("error writing " + path.string());
}

}  // namespace roughchange
