#pragma once

// Run reports: solver statistics as a versioned JSON document, model
// fingerprints, and the aligned text tables printed by the CLI.

#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pbvi/cassandra.hpp"
#include "pbvi/solver.hpp"

namespace pbvi {

inline constexpr int kReportFormatVersion = 1;

/// FNV-1a 64 of the canonical serialization of the model, as 16 hex digits.
inline std::string model_fingerprint(const PomdpModel& model) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : write_pomdp(model)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct RunReport {
    std::string problem;
    std::string method;  // "vi" or "vi1"
    SolverConfig config;
    double discount = 0.0;
    SolverStats stats;
    double wall_clock_seconds = 0.0;
    std::string policy_path;
    std::string model_fingerprint;
};

inline const char* to_string(PointBasedVariant v) { return v == PointBasedVariant::lp ? "lp" : "nolp"; }
inline const char* to_string(BackupMode m) { return m == BackupMode::standard ? "standard" : "mpi"; }

inline nlohmann::json to_json(const SolverConfig& c, double discount) {
    return {{"epsilon", c.epsilon},
            {"delta1", c.delta1},
            {"discount", discount},
            {"tolerance", c.tolerance},
            {"variant", to_string(c.variant)},
            {"backup", to_string(c.backup_mode)},
            {"lp_backup_nonpositive", c.lp_backup_nonpositive},
            {"max_standard_updates", c.max_standard_updates},
            {"max_point_based_updates", c.max_point_based_updates},
            {"seed", c.seed}};
}

inline nlohmann::json to_json(const SolverStats& s) {
    nlohmann::json j = {{"standard_update_count", s.standard_update_count},
                        {"point_based_update_count", s.point_based_update_count},
                        {"standard_update_time", s.standard_update_time},
                        {"point_based_update_time", s.point_based_update_time},
                        {"residual_time", s.residual_time},
                        {"residual_history", s.residual_history},
                        {"vector_count_history", s.vector_count_history},
                        {"final_residual", s.final_residual},
                        {"final_residual_bound", s.final_residual_bound}};
    j["quality_ratio"] = s.quality_ratio ? nlohmann::json(*s.quality_ratio) : nlohmann::json(nullptr);
    j["complexity_ratio"] = s.complexity_ratio ? nlohmann::json(*s.complexity_ratio) : nlohmann::json(nullptr);
    return j;
}

inline SolverStats stats_from_json(const nlohmann::json& j) {
    SolverStats s;
    s.standard_update_count = j.at("standard_update_count").get<std::size_t>();
    s.point_based_update_count = j.at("point_based_update_count").get<std::size_t>();
    s.standard_update_time = j.at("standard_update_time").get<double>();
    s.point_based_update_time = j.at("point_based_update_time").get<double>();
    s.residual_time = j.value("residual_time", 0.0);
    s.residual_history = j.at("residual_history").get<std::vector<double>>();
    s.vector_count_history = j.at("vector_count_history").get<std::vector<std::size_t>>();
    s.final_residual = j.at("final_residual").get<double>();
    s.final_residual_bound = j.at("final_residual_bound").get<double>();
    if (j.contains("quality_ratio") && !j["quality_ratio"].is_null()) s.quality_ratio = j["quality_ratio"].get<double>();
    if (j.contains("complexity_ratio") && !j["complexity_ratio"].is_null())
        s.complexity_ratio = j["complexity_ratio"].get<double>();
    return s;
}

inline nlohmann::json to_json(const RunReport& r) {
    return {{"format_version", kReportFormatVersion},
            {"problem", r.problem},
            {"method", r.method},
            {"config", to_json(r.config, r.discount)},
            {"stats", to_json(r.stats)},
            {"wall_clock_seconds", r.wall_clock_seconds},
            {"policy_file", r.policy_path},
            {"model_fingerprint", r.model_fingerprint}};
}

/// Paired VI / VI1 result on one problem.
struct Comparison {
    RunReport vi;
    RunReport vi1;
    double quality_ratio = 0.0;
    double complexity_ratio = 0.0;
};

inline nlohmann::json to_json(const Comparison& c) {
    return {{"format_version", kReportFormatVersion},
            {"problem", c.vi.problem},
            {"vi", to_json(c.vi)},
            {"vi1", to_json(c.vi1)},
            {"quality_ratio", c.quality_ratio},
            {"complexity_ratio", c.complexity_ratio},
            {"policy_quality", {{"vi", c.vi.stats.final_residual_bound}, {"vi1", c.vi1.stats.final_residual_bound}}}};
}

namespace detail {

inline std::string fixed(double v, int digits) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << v;
    return out.str();
}

inline std::string significant(double v, int digits) {
    std::ostringstream out;
    out << std::setprecision(digits) << v;
    return out.str();
}

}  // namespace detail

/// Aligned text table with one column per problem: wall times, per-method
/// update counts and times, both ratios, and the certified policy quality.
inline std::string comparison_table(const std::vector<Comparison>& rows) {
    std::vector<std::vector<std::string>> cells = {{"Problem"},
                                                   {"Total time VI (s)"},
                                                   {"Total time VI1 (s)"},
                                                   {"VI   DPU #"},
                                                   {"VI   DPU time"},
                                                   {"VI1  DPU #"},
                                                   {"VI1  DPU time"},
                                                   {"VI1  PBDPU #"},
                                                   {"VI1  PBDPU time"},
                                                   {"Quality ratio"},
                                                   {"Complexity ratio"},
                                                   {"Policy quality VI"},
                                                   {"Policy quality VI1"}};
    for (const auto& c : rows) {
        using detail::fixed;
        using detail::significant;
        const std::vector<std::string> col = {c.vi.problem,
                                              fixed(c.vi.wall_clock_seconds, 3),
                                              fixed(c.vi1.wall_clock_seconds, 3),
                                              std::to_string(c.vi.stats.standard_update_count),
                                              fixed(c.vi.stats.standard_update_time, 3),
                                              std::to_string(c.vi1.stats.standard_update_count),
                                              fixed(c.vi1.stats.standard_update_time, 3),
                                              std::to_string(c.vi1.stats.point_based_update_count),
                                              fixed(c.vi1.stats.point_based_update_time, 3),
                                              fixed(c.quality_ratio, 2),
                                              significant(c.complexity_ratio, 2),
                                              significant(c.vi.stats.final_residual_bound, 2),
                                              significant(c.vi1.stats.final_residual_bound, 2)};
        for (std::size_t i = 0; i < cells.size(); ++i) {
            cells[i].push_back(col[i]);
        }
    }
    std::vector<std::size_t> widths(cells.front().size(), 0);
    for (const auto& row : cells) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            widths[j] = std::max(widths[j], row[j].size());
        }
    }
    std::ostringstream out;
    for (const auto& row : cells) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            out << (j == 0 ? "" : "  ") << (j == 0 ? std::left : std::right) << std::setw(static_cast<int>(widths[j]))
                << row[j];
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace pbvi
