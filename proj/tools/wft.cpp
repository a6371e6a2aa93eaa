#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wft/error.hpp"
#include "wft/report.hpp"
#include "wft/riemann.hpp"
#include "wft/scenario.hpp"
#include "wft/study.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wft;

namespace {

enum Exit { kOk = 0, kConfig = 2, kSmallBV = 3, kSolver = 4, kCap = 5 };

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config: return kConfig;
    case ErrorKind::SmallBV: return kSmallBV;
    case ErrorKind::InteractionCap: return kCap;
    default: return kSolver;
  }
}

// 0 quiet, 1 progress, 2 detail; from WFT_LOG.
int verbosity() {
  const char* v = std::getenv("WFT_LOG");
  if (!v) return 1;
  const std::string s(v);
  if (s == "quiet" || s == "0") return 0;
  if (s == "debug" || s == "2") return 2;
  return 1;
}

void log(int level, const std::string& msg) {
  if (verbosity() >= level) std::cerr << "wft: " << msg << "\n";
}

void prepare_dir(const std::string& dir, bool force) {
  if (dir.empty()) fail(ErrorKind::Config, "--out is required");
  if (fs::exists(dir)) {
    if (!force) fail(ErrorKind::Config, "output directory " + dir + " exists; pass --force to replace it");
    fs::remove_all(dir);
  }
  fs::create_directories(dir);
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, path + " is not valid JSON: " + e.what());
  }
}

State state_of(const json& doc, const char* key, int n) {
  if (!doc.contains(key) || !doc.at(key).is_array())
    fail(ErrorKind::Config, std::string("missing array '") + key + "'");
  const auto v = doc.at(key).get<std::vector<double>>();
  if (n > 0 && static_cast<int>(v.size()) != n)
    fail(ErrorKind::Config, std::string("'") + key + "' has the wrong dimension");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::string snapshot_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%03zu.csv", k);
  return buf;
}

int simulate(const std::string& config, const std::string& out, std::optional<std::uint64_t> seed,
             std::optional<double> h, bool force) {
  Scenario sc = load_scenario(config);
  if (seed) sc.seed = *seed;
  const double hv = h ? *h : sc.h;
  prepare_dir(out, force);
  log(1, "simulating " + sc.name + " with h = " + format_number(hv));
  const auto t0 = std::chrono::steady_clock::now();
  const auto engine = run_scenario(sc, hv);
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - t0;

  const auto names = sc.model->component_names();
  std::ofstream index(fs::path(out) / "snapshots.csv");
  index << "index,time,file\n";
  for (std::size_t k = 0; k < sc.snapshots.size(); ++k) {
    const double t = sc.snapshots[k];
    write_snapshot_csv((fs::path(out) / snapshot_name(k)).string(), engine->trajectory().profile(t),
                       names);
    index << k << "," << format_number(t) << "," << snapshot_name(k) << "\n";
  }
  write_fronts_jsonl((fs::path(out) / "fronts.jsonl").string(), engine->trajectory());
  write_interactions_jsonl((fs::path(out) / "interactions.jsonl").string(), engine->interactions());
  write_functionals_csv((fs::path(out) / "functionals.csv").string(), engine->functional_series());
  write_json((fs::path(out) / "summary.json").string(),
             run_summary(*engine, sc.name, hv, wall.count()));
  log(1, std::to_string(engine->stats().interactions) + " interactions, " +
             std::to_string(engine->trajectory().segments.size()) + " front segments");
  return kOk;
}

int riemann(const std::string& config, const std::string& out) {
  const json doc = read_json(config);
  if (doc.value("schema_version", 0) != kSchemaVersion)
    fail(ErrorKind::Config, "riemann config needs schema_version 1");
  if (!doc.contains("model")) fail(ErrorKind::Config, "riemann config needs a model");
  const ModelPtr model = parse_model_spec(doc.at("model"));
  const int n = model->dimension();
  const State ul = state_of(doc, "left", n), ur = state_of(doc, "right", n);
  WaveDecomposition sol;
  if (doc.contains("coupling")) {
    const Params zm = state_of(doc, "z_minus", 0), zp = state_of(doc, "z_plus", 0);
    if (zm.size() != zp.size()) fail(ErrorKind::Config, "z_minus and z_plus differ in dimension");
    const auto cs = parse_coupling_spec(doc.at("coupling"), model, static_cast<int>(zm.size()));
    sol = solve_generalized_riemann(*model, *cs.condition, zp, zm, ul, ur);
  } else {
    sol = solve_riemann(*model, ul, ur);
  }
  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) fail(ErrorKind::Config, "cannot write " + out);
  }
  std::ostream& os = out.empty() ? std::cout : file;
  const auto names = model->component_names();
  os << "family,size,speed";
  for (const auto& c : names) os << ",left_" << c;
  for (const auto& c : names) os << ",right_" << c;
  os << "\n";
  for (const Wave& w : sol.waves()) {
    os << w.family + 1 << "," << format_number(w.size) << "," << format_number(w.speed);
    for (Eigen::Index k = 0; k < n; ++k) os << "," << format_number(w.left(k));
    for (Eigen::Index k = 0; k < n; ++k) os << "," << format_number(w.right(k));
    os << "\n";
  }
  log(2, "residual " + format_number(sol.residual) + ", junction defect " +
             format_number(sol.junction_defect));
  return kOk;
}

json aggregate(const std::vector<std::string>& summaries) {
  json rows = json::array();
  for (const auto& path : summaries) rows.push_back(read_json(path));
  return rows;
}

int converge(const std::string& config, const std::string& out, std::optional<std::uint64_t> seed,
             bool with_oracle, bool monitor, bool force) {
  Scenario sc = load_scenario(config);
  if (seed) sc.seed = *seed;
  std::vector<double> hs = sc.h_list.empty() ? std::vector<double>{sc.h, sc.h / 2, sc.h / 4}
                                             : sc.h_list;
  prepare_dir(out, force);
  log(1, "convergence study of " + sc.name + " over " + std::to_string(hs.size()) + " values of h");
  const StudyResult study = convergence_study(sc, hs, with_oracle, monitor);

  std::vector<std::string> summaries;
  for (std::size_t k = 0; k < study.rows.size(); ++k) {
    const auto& r = study.rows[k];
    const fs::path dir = fs::path(out) / ("run_" + std::to_string(k));
    fs::create_directories(dir);
    write_snapshot_csv((dir / "final.csv").string(), study.profiles[k], sc.model->component_names());
    json s;
    s["schema_version"] = kSchemaVersion;
    s["name"] = sc.name;
    s["h"] = r.h;
    s["epsilon"] = r.epsilon;
    s["tv_max"] = r.tv_max;
    s["upsilon_final"] = r.upsilon_final;
    if (r.upsilon_violations >= 0) s["upsilon_monotone"] = r.upsilon_violations == 0;
    s["junction_defect_max"] = r.junction_defect_max;
    s["nonphysical_strength_max"] = r.nonphysical_max;
    s["interactions"] = r.interactions;
    s["wall_time_s"] = r.wall_seconds;
    summaries.push_back((dir / "summary.json").string());
    write_json(summaries.back(), s);
  }

  // The table is rebuilt from the emitted summaries.
  const json rows = aggregate(summaries);
  std::ofstream csv(fs::path(out) / "study.csv");
  csv << "h,epsilon,distance,oracle_distance,tv_max,upsilon_final,junction_defect_max\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    csv << format_number(rows[k].at("h").get<double>()) << ","
        << format_number(rows[k].at("epsilon").get<double>()) << ","
        << format_number(study.rows[k].distance) << ","
        << format_number(study.rows[k].oracle_distance) << ","
        << format_number(rows[k].at("tv_max").get<double>()) << ","
        << format_number(rows[k].at("upsilon_final").get<double>()) << ","
        << format_number(rows[k].at("junction_defect_max").get<double>()) << "\n";
  }
  json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["name"] = sc.name;
  summary["window"] = study.window;
  summary["cauchy_monotone"] = study.monotone();
  if (study.rows.size() >= 3) {
    summary["last_over_first"] =
        study.rows[study.rows.size() - 2].distance / study.rows.front().distance;
  }
  if (with_oracle) {
    bool mono = true;
    for (std::size_t k = 1; k < study.rows.size(); ++k)
      mono = mono && study.rows[k].oracle_distance < study.rows[k - 1].oracle_distance;
    summary["oracle_monotone"] = mono;
    summary["oracle_last_over_first"] =
        study.rows.back().oracle_distance / study.rows.front().oracle_distance;
  }
  if (monitor) {
    bool upsilon = true;
    for (const auto& r : rows) upsilon = upsilon && r.at("upsilon_monotone").get<bool>();
    summary["upsilon_monotone"] = upsilon;
  }
  write_json((fs::path(out) / "study.json").string(), summary);
  if (!study.monotone()) log(1, "successive distances are not monotone (reported, not an error)");
  return kOk;
}

int check_table(const std::string& out, int samples) {
  auto model = parse_model_spec(json{{"type", "p-system"}});
  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) fail(ErrorKind::Config, "cannot write " + out);
  }
  std::ostream& os = out.empty() ? std::cout : file;
  os << "variant,a,rho,q,finite_difference,formula,relative_error\n";
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ua(0.8, 1.5), ur(0.8, 1.2), uq(-0.3, 0.3);
  for (auto v : {SectionVariant::L, SectionVariant::p, SectionVariant::P, SectionVariant::S}) {
    const auto cond = make_section_condition(v, model);
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
      const double a = ua(rng);
      State u(2);
      u << ur(rng), uq(rng);
      const double h = 1e-5 * a;
      Params zp(1), zm(1), z(1);
      zp << a + h;
      zm << a - h;
      z << a;
      const double fd = (cond->evaluate(zp, z, u)(1) - cond->evaluate(zm, z, u)(1)) / (2 * h);
      const double exact = section_derivative_formula(v, *model, a, u);
      const double rel = std::abs(fd - exact) / std::max(1.0, std::abs(exact));
      worst = std::max(worst, rel);
      os << to_string(v) << "," << format_number(a) << "," << format_number(u(0)) << ","
         << format_number(u(1)) << "," << format_number(fd) << "," << format_number(exact) << ","
         << format_number(rel) << "\n";
    }
    log(1, "[" + to_string(v) + "] largest relative deviation " + format_number(worst));
  }
  return kOk;
}

int oracle(const std::string& config, const std::string& out, bool force) {
  const Scenario sc = load_scenario(config);
  prepare_dir(out, force);
  const double window = sc.window > 0.0 ? sc.window : 1.0 / sc.h;
  const Profile p = scenario_oracle(sc, window);
  write_snapshot_csv((fs::path(out) / "oracle.csv").string(), p, sc.model->component_names());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave-front tracking for balance laws with geometric coupling"};
  app.require_subcommand(1);

  std::string config, out;
  std::uint64_t seed_value = 0;
  double h_value = 0.0;
  bool force = false, with_oracle = false, monitor = false;
  int samples = 50;

  auto* sim = app.add_subcommand("simulate", "run one scenario and write its artifacts");
  sim->add_option("--config", config, "scenario file")->required();
  sim->add_option("--out", out, "output directory")->required();
  auto* sim_seed = sim->add_option("--seed", seed_value, "jitter seed");
  auto* sim_h = sim->add_option("--mesh", h_value, "geometry mesh size h (overrides the scenario)");
  sim->add_flag("--force", force, "replace an existing output directory");

  auto* rie = app.add_subcommand("riemann", "solve one (generalized) Riemann problem");
  rie->add_option("--config", config, "problem file")->required();
  rie->add_option("--out", out, "CSV file (stdout when absent)");

  auto* conv = app.add_subcommand("converge", "refinement study over the scenario's h list");
  conv->add_option("--config", config, "scenario file")->required();
  conv->add_option("--out", out, "output directory")->required();
  auto* conv_seed = conv->add_option("--seed", seed_value, "jitter seed");
  conv->add_flag("--oracle", with_oracle, "also compare with the finite-volume oracle");
  conv->add_flag("--monitor", monitor, "evaluate Upsilon at every interaction (slower)");
  conv->add_flag("--force", force, "replace an existing output directory");

  auto* table = app.add_subcommand("check-table-a", "section-condition derivatives as CSV");
  table->add_option("--out", out, "CSV file (stdout when absent)");
  table->add_option("--samples", samples, "states per variant")->check(CLI::PositiveNumber);

  auto* orc = app.add_subcommand("oracle", "finite-volume reference for a smooth scenario");
  orc->add_option("--config", config, "scenario file")->required();
  orc->add_option("--out", out, "output directory")->required();
  orc->add_flag("--force", force, "replace an existing output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*sim) {
      std::optional<std::uint64_t> s;
      if (*sim_seed) s = seed_value;
      std::optional<double> h;
      if (*sim_h) h = h_value;
      return simulate(config, out, s, h, force);
    }
    if (*rie) return riemann(config, out);
    if (*conv) {
      std::optional<std::uint64_t> s;
      if (*conv_seed) s = seed_value;
      return converge(config, out, s, with_oracle, monitor, force);
    }
    if (*table) return check_table(out, samples);
    if (*orc) return oracle(config, out, force);
  } catch (const Error& e) {
    std::cerr << "wft: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "wft: unexpected failure: " << e.what() << "\n";
    return kSolver;
  }
  return kOk;
}
