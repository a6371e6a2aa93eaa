#include "wft/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>

#include "wft/error.hpp"

namespace wft {

bool StudyResult::monotone() const {
  for (std::size_t k = 1; k + 1 < rows.size(); ++k)
    if (!(rows[k].distance < rows[k - 1].distance)) return false;
  return true;
}

Profile scenario_oracle(const Scenario& sc, double window) {
  FVOptions o;
  o.lo = -window;
  o.hi = window;
  o.cells = sc.oracle_cells;
  const PiecewiseConstantZeta zh = build_zeta_h(*sc.geometry, sc.h);
  const InitialDatum u0 = sc.datum(zh);
  return fv_oracle(*sc.model, sc.oracle_source(), [&](double x) { return u0.at(x); },
                   sc.horizon, o);
}

StudyResult convergence_study(const Scenario& scenario, const std::vector<double>& h_list,
                              bool with_oracle, bool monitor) {
  Scenario sc = scenario;
  if (!monitor) {
    sc.engine.monitor_functionals = false;
    sc.engine.record_trajectory = false;
    sc.engine.log_interactions = false;
  }
  if (h_list.empty()) fail(ErrorKind::Config, "convergence study needs at least one h");
  StudyResult out;
  out.window = sc.window > 0.0 ? sc.window : 1.0 / *std::max_element(h_list.begin(), h_list.end());

  struct Run {
    std::unique_ptr<Engine> engine;
    double seconds;
  };
  std::vector<std::future<Run>> jobs;
  for (double h : h_list) {
    jobs.push_back(std::async(std::launch::async, [&sc, h] {
      const auto t0 = std::chrono::steady_clock::now();
      auto e = run_scenario(sc, h);
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
      return Run{std::move(e), dt.count()};
    }));
  }
  std::optional<Profile> oracle;
  if (with_oracle) oracle = scenario_oracle(sc, out.window);

  for (std::size_t k = 0; k < jobs.size(); ++k) {
    Run r = jobs[k].get();
    const Engine& e = *r.engine;
    StudyRow row;
    row.h = h_list[k];
    row.epsilon = e.options().epsilon;
    row.tv_max = e.stats().tv_max;
    row.upsilon_final = e.functionals().Upsilon;
    row.junction_defect_max = e.stats().junction_defect_max;
    row.nonphysical_max = e.stats().np_strength_max;
    row.interactions = e.stats().interactions;
    row.upsilon_violations = monitor ? e.stats().upsilon_violations : -1;
    row.wall_seconds = r.seconds;
    out.profiles.push_back(e.trajectory().profile(sc.horizon));
    row.oracle_distance = oracle ? l1_distance(*oracle, out.profiles.back(), -out.window, out.window)
                                 : std::numeric_limits<double>::quiet_NaN();
    out.rows.push_back(row);
  }
  for (std::size_t k = 0; k < out.rows.size(); ++k) {
    out.rows[k].distance =
        k + 1 < out.rows.size()
            ? l1_distance(out.profiles[k], out.profiles[k + 1], -out.window, out.window)
            : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace wft
