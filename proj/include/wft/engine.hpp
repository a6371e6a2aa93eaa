#pragma once

#include <cstdint>
#include <limits>
#include <list>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "wft/coupling.hpp"
#include "wft/geometry.hpp"
#include "wft/model.hpp"
#include "wft/riemann.hpp"

namespace wft {

enum class FrontKind { ShockOrContact, Rarefaction, NonPhysical, ZeroWave };
std::string to_string(FrontKind kind);

inline bool is_physical(FrontKind k) {
  return k == FrontKind::ShockOrContact || k == FrontKind::Rarefaction;
}

/// A discontinuity moving on the straight line x = x0 + speed (t - t0).
struct Front {
  std::uint64_t id = 0;
  FrontKind kind = FrontKind::ShockOrContact;
  int family = -1;  ///< -1 for non-physical fronts and zero-waves
  double x0 = 0.0;
  double t0 = 0.0;
  double speed = 0.0;
  State left;
  State right;
  double size = 0.0;  ///< signed wave size; |u_r - u_l| for non-physical fronts
  Params z_minus;     ///< zero-waves only
  Params z_plus;

  double position(double t) const { return x0 + speed * (t - t0); }
};

/// Piecewise constant profile: far_left up to xs[0], then values[k] on (xs[k], xs[k+1]].
struct Profile {
  State far_left;
  std::vector<double> xs;
  std::vector<State> values;

  State at(double x) const;  ///< left-continuous
  double total_variation() const;
};

/// L1 distance of two profiles on [lo, hi], exact for piecewise constants.
double l1_distance(const Profile& a, const Profile& b, double lo, double hi);
/// Integral of one component over [lo, hi].
double integrate_component(const Profile& p, int component, double lo, double hi);

/// Complete space-time record of a front-tracking run.
struct Trajectory {
  State far_left;
  double t_final = 0.0;
  struct Segment {
    Front front;
    double t_end;
  };
  std::vector<Segment> segments;  ///< in creation order

  Profile profile(double t) const;
  /// Profiles at many times in one pass over the segments.
  std::vector<Profile> profiles(const std::vector<double>& ts) const;
  std::vector<State> sample(double t, const std::vector<double>& xs) const;
  /// Segments alive at time t, ordered by position.
  std::vector<const Segment*> alive(double t) const;
};

struct GlimmFunctionals {
  double V = 0.0;
  double Q = 0.0;
  double Upsilon = 0.0;
  double C = 1.0;
};

/// V, Q and Upsilon of a position-ordered front list. Non-physical fronts
/// count as family n; a front and a zero-wave approach when the front moves
/// towards the junction.
GlimmFunctionals glimm_functionals(const std::vector<const Front*>& fronts,
                                   const HyperbolicModel& model, double C);

struct InteractionRecord {
  double t = 0.0;
  double x = 0.0;
  FrontKind kind_left{}, kind_right{};
  double size_left = 0.0, size_right = 0.0;
  std::vector<FrontKind> out_kinds;
  std::vector<double> out_sizes;
  bool accurate = false;
  GlimmFunctionals before, after;
};

struct FunctionalSample {
  double t;
  double V;
  double Q;
  double Upsilon;
};

/// Piecewise constant initial datum.
struct InitialDatum {
  State far_left;
  std::vector<double> xs;      ///< jump positions, increasing
  std::vector<State> values;   ///< values[k] right of xs[k]

  State at(double x) const;    ///< left-continuous
};

struct EngineOptions {
  double epsilon = 1e-2;
  double delta_R = 0.0;        ///< rarefaction step; epsilon when zero
  double rho = 0.0;            ///< simplified-solver threshold; epsilon^2 when zero
  double rho_max = 0.0;        ///< upper bound on the threshold when positive
  double lambda_hat = 0.0;     ///< non-physical speed; 1.2 max|lambda| on the box when zero
  double glimm_C = 0.0;        ///< Upsilon weight; presampled when zero
  std::uint64_t seed = 0;
  long max_interactions = 1000000;
  double drop_tolerance = 1e-13;
  double small_bv_budget = 1.0;  ///< TV(u0) + TV(zeta^h) must stay below
  double box_radius = 0.3;
  RiemannOptions riemann;
  bool log_interactions = true;
  /// Evaluate Upsilon around every interaction (violations, series, log).
  bool monitor_functionals = true;
  /// Keep every finished front segment; without it only the fronts alive at
  /// the horizon are recorded, so profiles are valid at the horizon only.
  bool record_trajectory = true;
};

/// Statistics accumulated during a run.
struct RunStats {
  long interactions = 0;
  long accurate = 0;
  long simplified = 0;
  long upsilon_violations = 0;
  double max_upsilon_increase = -std::numeric_limits<double>::infinity();
  double tv_initial = 0.0;
  double tv_max = 0.0;
  double np_strength_max = 0.0;
  double junction_defect_max = 0.0;
  double shock_speed_defect_max = 0.0;
  bool left_box = false;
  double C_interaction = 0.0;
};

/// Event-driven epsilon-approximate front tracking with zero-waves at the
/// jumps of zeta^h.
class Engine {
 public:
  Engine(ModelPtr model, ConditionPtr cond, PiecewiseConstantZeta zeta_h, EngineOptions options);
  // The id index holds list iterators, which survive moves but not copies.
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;
  Engine(Engine&&) = default;
  Engine& operator=(Engine&&) = default;

  /// Solves the Riemann problems of the datum and of every junction at t = 0.
  void initialize(const InitialDatum& datum);
  /// Advances to the horizon; throws on cap overflow or solver failure.
  void run(double horizon);

  double time() const { return time_; }
  std::vector<const Front*> fronts() const;
  GlimmFunctionals functionals() const;
  const Trajectory& trajectory() const { return trajectory_; }
  const std::vector<InteractionRecord>& interactions() const { return log_; }
  const std::vector<FunctionalSample>& functional_series() const { return series_; }
  const RunStats& stats() const { return stats_; }
  const EngineOptions& options() const { return options_; }
  const PiecewiseConstantZeta& zeta_h() const { return zeta_h_; }
  const HyperbolicModel& model() const { return *model_; }
  const CouplingCondition& condition() const { return *cond_; }

  double total_variation() const;
  double nonphysical_strength() const;

  /// Next collision after the current time, without side effects.
  struct Event {
    double t;
    double x;
    std::uint64_t left;
    std::uint64_t right;
  };
  std::optional<Event> next_interaction() const;

 private:
  using FrontList = std::list<Front>;
  using Iter = FrontList::iterator;

  std::vector<Front> fan(const WaveDecomposition& sol, double x, double t, const State& u_right,
                         const Params* zm, const Params* zp);
  Front make_front(FrontKind kind, int family, double size, const State& l, const State& r,
                   double x, double t);
  Front make_zero_wave(const State& l, const State& r, const Params& zm, const Params& zp,
                       double x, double t);
  Front make_nonphysical(const State& l, const State& r, double x, double t);
  void append_wave(std::vector<Front>& out, int family, double size, const State& l,
                   const State& r, double x, double t);
  void close_chain(std::vector<Front>& out, const State& u_right);
  std::vector<Front> resolve(const Front& a, const Front& b, double t, double x, bool* accurate);
  void schedule(Iter left);
  void finish_front(const Front& f, double t_end);
  void update_diagnostics(bool exact);
  double front_tv(const Front& f) const { return (f.right - f.left).norm(); }
  void calibrate(const InitialDatum& datum);

  ModelPtr model_;
  ConditionPtr cond_;
  PiecewiseConstantZeta zeta_h_;
  EngineOptions options_;
  StateBox box_;

  FrontList fronts_;
  std::unordered_map<std::uint64_t, Iter> index_;
  struct Queued {
    Event e;
    bool operator>(const Queued& o) const {
      if (e.t != o.e.t) return e.t > o.e.t;
      return e.x > o.e.x;
    }
  };
  std::priority_queue<Queued, std::vector<Queued>, std::greater<>> queue_;

  double time_ = 0.0;
  std::uint64_t next_id_ = 1;
  State far_left_;
  Trajectory trajectory_;
  std::vector<InteractionRecord> log_;
  std::vector<FunctionalSample> series_;
  RunStats stats_;
  bool initialized_ = false;
  double tv_sum_ = 0.0;  ///< running sums, refreshed exactly now and then
  double np_sum_ = 0.0;
  std::size_t alive_tail_ = kNoTail;  ///< first segment recorded for fronts still alive
  static constexpr std::size_t kNoTail = static_cast<std::size_t>(-1);
};

/// Interaction constant from random interaction patterns near the
/// reference state: the largest ratio of the change of V to the product of
/// the incoming strengths.
double presample_interaction_constant(const HyperbolicModel& model, const CouplingCondition& cond,
                                      const State& reference, const PiecewiseConstantZeta& zeta_h,
                                      const EngineOptions& options, int samples = 200);

/// 1.2 max |lambda_i| over a grid on the box around the reference state.
double estimate_lambda_hat(const HyperbolicModel& model, const State& reference, double radius);

}  // namespace wft
