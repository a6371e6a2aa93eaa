#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "wft/engine.hpp"

namespace wft {

/// Decimal text with 17 significant digits; infinities spelled out.
std::string format_number(double v);

/// Snapshot at time t: one row per constant piece, "x,<components>", where
/// x is the left end of the piece (-inf for the far-left state).
void write_snapshot_csv(const std::string& path, const Profile& profile,
                        const std::vector<std::string>& components);
/// One JSON object per interaction with the functionals before and after.
void write_interactions_jsonl(const std::string& path,
                              const std::vector<InteractionRecord>& log);
/// One JSON object per front segment (families counted from 1, 0 for
/// non-physical fronts and zero-waves).
void write_fronts_jsonl(const std::string& path, const Trajectory& traj);
void write_functionals_csv(const std::string& path,
                           const std::vector<FunctionalSample>& series);

/// Summary of a run as JSON.
nlohmann::json run_summary(const Engine& engine, const std::string& name, double h,
                           double wall_seconds);
void write_json(const std::string& path, const nlohmann::json& doc);

}  // namespace wft
