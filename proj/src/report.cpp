#include "wft/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "wft/error.hpp"

namespace wft {

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Config, "cannot write " + path);
  return out;
}

std::string json_number(double v) {
  return std::isfinite(v) ? format_number(v) : std::string("null");
}

std::string json_state(const State& u) {
  std::string s = "[";
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    if (k) s += ",";
    s += json_number(u(k));
  }
  return s + "]";
}

}  // namespace

void write_snapshot_csv(const std::string& path, const Profile& p,
                        const std::vector<std::string>& components) {
  std::ofstream out = open_out(path);
  out << "x";
  for (const auto& c : components) out << "," << c;
  out << "\n";
  auto row = [&](double x, const State& u) {
    out << format_number(x);
    for (Eigen::Index k = 0; k < u.size(); ++k) out << "," << format_number(u(k));
    out << "\n";
  };
  row(-std::numeric_limits<double>::infinity(), p.far_left);
  for (std::size_t k = 0; k < p.xs.size(); ++k) row(p.xs[k], p.values[k]);
}

void write_interactions_jsonl(const std::string& path,
                              const std::vector<InteractionRecord>& log) {
  std::ofstream out = open_out(path);
  auto kinds = [](const std::vector<FrontKind>& ks) {
    std::string s = "[";
    for (std::size_t k = 0; k < ks.size(); ++k) s += (k ? ",\"" : "\"") + to_string(ks[k]) + "\"";
    return s + "]";
  };
  auto numbers = [](const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + json_number(v[k]);
    return s + "]";
  };
  for (const auto& r : log) {
    out << "{\"t\":" << json_number(r.t) << ",\"x\":" << json_number(r.x) << ",\"in_kinds\":"
        << kinds({r.kind_left, r.kind_right}) << ",\"in_sizes\":"
        << numbers({r.size_left, r.size_right}) << ",\"out_kinds\":" << kinds(r.out_kinds)
        << ",\"out_sizes\":" << numbers(r.out_sizes)
        << ",\"accurate\":" << (r.accurate ? "true" : "false")
        << ",\"V_before\":" << json_number(r.before.V) << ",\"Q_before\":" << json_number(r.before.Q)
        << ",\"Upsilon_before\":" << json_number(r.before.Upsilon)
        << ",\"V_after\":" << json_number(r.after.V) << ",\"Q_after\":" << json_number(r.after.Q)
        << ",\"Upsilon_after\":" << json_number(r.after.Upsilon) << "}\n";
  }
}

void write_fronts_jsonl(const std::string& path, const Trajectory& traj) {
  std::ofstream out = open_out(path);
  for (const auto& seg : traj.segments) {
    const Front& f = seg.front;
    out << "{\"id\":" << f.id << ",\"kind\":\"" << to_string(f.kind) << "\",\"family\":"
        << (f.family >= 0 ? f.family + 1 : 0) << ",\"x0\":" << json_number(f.x0)
        << ",\"t0\":" << json_number(f.t0) << ",\"t_end\":" << json_number(seg.t_end)
        << ",\"speed\":" << json_number(f.speed) << ",\"size\":" << json_number(f.size)
        << ",\"left\":" << json_state(f.left) << ",\"right\":" << json_state(f.right) << "}\n";
  }
}

void write_functionals_csv(const std::string& path,
                           const std::vector<FunctionalSample>& series) {
  std::ofstream out = open_out(path);
  out << "time,V,Q,Upsilon\n";
  for (const auto& s : series)
    out << format_number(s.t) << "," << format_number(s.V) << "," << format_number(s.Q) << ","
        << format_number(s.Upsilon) << "\n";
}

nlohmann::json run_summary(const Engine& engine, const std::string& name, double h,
                           double wall_seconds) {
  const RunStats& s = engine.stats();
  const double tv_zeta = engine.zeta_h().total_variation();
  nlohmann::json j;
  j["schema_version"] = 1;
  j["name"] = name;
  j["h"] = h;
  j["epsilon"] = engine.options().epsilon;
  j["seed"] = engine.options().seed;
  j["horizon"] = engine.time();
  j["rho"] = engine.options().rho;
  j["lambda_hat"] = engine.options().lambda_hat;
  j["glimm_C"] = engine.options().glimm_C;
  j["interactions"] = s.interactions;
  j["accurate"] = s.accurate;
  j["simplified"] = s.simplified;
  j["tv_initial"] = s.tv_initial;
  j["tv_zeta_h"] = tv_zeta;
  j["tv_max"] = s.tv_max;
  j["tv_ratio"] = s.tv_max / std::max(s.tv_initial + tv_zeta, 1e-300);
  j["upsilon_monotone"] = s.upsilon_violations == 0;
  j["upsilon_violations"] = s.upsilon_violations;
  j["max_upsilon_increase"] =
      std::isfinite(s.max_upsilon_increase) ? s.max_upsilon_increase : 0.0;
  j["nonphysical_strength_max"] = s.np_strength_max;
  j["junction_defect_max"] = s.junction_defect_max;
  j["left_box"] = s.left_box;
  j["fronts_final"] = engine.fronts().size();
  j["wall_time_s"] = wall_seconds;
  return j;
}

void write_json(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out = open_out(path);
  out << doc.dump(2) << "\n";
}

}  // namespace wft
