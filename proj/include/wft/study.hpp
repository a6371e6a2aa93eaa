#pragma once

#include <vector>

#include "wft/engine.hpp"
#include "wft/scenario.hpp"

namespace wft {

struct StudyRow {
  double h = 0.0;
  double epsilon = 0.0;
  double distance = 0.0;         ///< L1 distance to the next finer run; NaN for the last
  double oracle_distance = 0.0;  ///< L1 distance to the finite-volume oracle; NaN when skipped
  double tv_max = 0.0;
  double upsilon_final = 0.0;
  double junction_defect_max = 0.0;
  double nonphysical_max = 0.0;
  long interactions = 0;
  long upsilon_violations = 0;
  double wall_seconds = 0.0;
};

struct StudyResult {
  double window = 0.0;  ///< distances are measured on [-window, window]
  std::vector<StudyRow> rows;
  std::vector<Profile> profiles;  ///< front-tracking profiles at the horizon
  /// Successive distances decrease (flagged, not enforced).
  bool monotone() const;
};

/// Runs the scenario for every h (concurrently), with epsilon from the
/// scenario rule, and compares the profiles at the horizon. Unless monitor
/// is set, only the final fronts are kept and Upsilon is evaluated at the
/// horizon alone (upsilon_violations is then -1).
StudyResult convergence_study(const Scenario& sc, const std::vector<double>& h_list,
                              bool with_oracle, bool monitor = false);

/// The finite-volume reference of a smooth-geometry scenario at its horizon.
Profile scenario_oracle(const Scenario& sc, double window);

}  // namespace wft
