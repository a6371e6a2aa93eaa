#include "wft/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wft/error.hpp"

namespace wft {

std::string to_string(FrontKind kind) {
  switch (kind) {
    case FrontKind::ShockOrContact: return "shock";
    case FrontKind::Rarefaction: return "rarefaction";
    case FrontKind::NonPhysical: return "nonphysical";
    case FrontKind::ZeroWave: return "zero";
  }
  return "?";
}

State InitialDatum::at(double x) const {
  const auto it = std::lower_bound(xs.begin(), xs.end(), x);
  const auto idx = static_cast<std::size_t>(it - xs.begin());
  return idx == 0 ? far_left : values[idx - 1];
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic speed perturbation in [0, eps/10].
double jitter(std::uint64_t seed, std::uint64_t id, double eps) {
  const std::uint64_t h = splitmix64(seed ^ splitmix64(id));
  return static_cast<double>(h >> 11) * 0x1.0p-53 * eps / 10.0;
}

std::optional<Engine::Event> collide(const Front& A, const Front& B, double now) {
  if (A.kind == FrontKind::ZeroWave && B.kind == FrontKind::ZeroWave) return std::nullopt;
  if (!(A.speed > B.speed)) return std::nullopt;
  double t, x;
  if (B.kind == FrontKind::ZeroWave) {
    x = B.x0;
    t = A.t0 + (x - A.x0) / A.speed;
  } else if (A.kind == FrontKind::ZeroWave) {
    x = A.x0;
    t = B.t0 + (x - B.x0) / B.speed;
  } else {
    const double xa = A.position(now), xb = B.position(now);
    const double dt = std::max(0.0, xb - xa) / (A.speed - B.speed);
    t = now + dt;
    x = xa + A.speed * dt;
  }
  t = std::max(t, now);
  return Engine::Event{t, x, A.id, B.id};
}

}  // namespace

Engine::Engine(ModelPtr model, ConditionPtr cond, PiecewiseConstantZeta zeta_h,
               EngineOptions options)
    : model_(std::move(model)), cond_(std::move(cond)), zeta_h_(std::move(zeta_h)),
      options_(options) {
  if (!model_ || !cond_) fail(ErrorKind::Config, "engine needs a model and a coupling condition");
  if (!(options_.epsilon > 0.0)) fail(ErrorKind::Config, "epsilon must be positive");
  if (options_.delta_R <= 0.0) options_.delta_R = options_.epsilon;
  if (options_.rho <= 0.0) options_.rho = options_.epsilon * options_.epsilon;
  if (options_.rho_max > 0.0) options_.rho = std::min(options_.rho, options_.rho_max);
  if (options_.max_interactions < 1) fail(ErrorKind::Config, "interaction cap must be positive");
}

Front Engine::make_front(FrontKind kind, int family, double size, const State& l, const State& r,
                         double x, double t) {
  Front f;
  f.id = next_id_++;
  f.kind = kind;
  f.family = family;
  f.x0 = x;
  f.t0 = t;
  f.left = l;
  f.right = r;
  f.size = size;
  return f;
}

Front Engine::make_zero_wave(const State& l, const State& r, const Params& zm, const Params& zp,
                             double x, double t) {
  Front f = make_front(FrontKind::ZeroWave, -1, (zp - zm).norm(), l, r, x, t);
  f.z_minus = zm;
  f.z_plus = zp;
  const double defect =
      (model_->flux(r) - model_->flux(l) - cond_->evaluate(zp, zm, l)).norm();
  stats_.junction_defect_max = std::max(stats_.junction_defect_max, defect);
  return f;
}

Front Engine::make_nonphysical(const State& l, const State& r, double x, double t) {
  Front f = make_front(FrontKind::NonPhysical, -1, (r - l).norm(), l, r, x, t);
  f.speed = options_.lambda_hat;
  return f;
}

void Engine::append_wave(std::vector<Front>& out, int family, double size, const State& l,
                         const State& r, double x, double t) {
  if (std::abs(size) < options_.drop_tolerance) return;
  const HyperbolicModel& m = *model_;
  const State left = out.empty() ? l : out.back().right;
  if (m.field_kind(family) == FieldKind::GenuinelyNonlinear && size > 0.0) {
    const auto pieces = discretize_rarefaction(size, options_.delta_R);
    State w = left;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const State next = k + 1 == pieces.size() ? r : m.integral_curve(family, pieces[k], w);
      Front f = make_front(FrontKind::Rarefaction, family, pieces[k], w, next, x, t);
      f.speed = m.lambda(family, next) + jitter(options_.seed, f.id, options_.epsilon);
      out.push_back(std::move(f));
      w = next;
    }
    return;
  }
  Front f = make_front(FrontKind::ShockOrContact, family, size, left, r, x, t);
  const double base = m.field_kind(family) == FieldKind::LinearlyDegenerate
                          ? m.lambda(family, left)
                          : m.shock_speed(left, r, family, 1e-6);
  f.speed = base + jitter(options_.seed, f.id, options_.epsilon);
  out.push_back(std::move(f));
}

void Engine::close_chain(std::vector<Front>& out, const State& u_right) {
  if (out.empty()) return;
  Front& last = out.back();
  last.right = u_right;
  if (last.kind == FrontKind::NonPhysical) last.size = (last.right - last.left).norm();
}

std::vector<Front> Engine::fan(const WaveDecomposition& sol, double x, double t,
                               const State& u_right, const Params* zm, const Params* zp) {
  std::vector<Front> out;
  const int n = static_cast<int>(sol.sizes.size());
  for (int i = 0; i < n; ++i) {
    if (sol.junction && i == sol.split) {
      const State l = out.empty() ? sol.states.front() : out.back().right;
      out.push_back(make_zero_wave(l, sol.states[static_cast<std::size_t>(sol.split + 1)], *zm,
                                   *zp, x, t));
    }
    append_wave(out, i, sol.sizes[static_cast<std::size_t>(i)], sol.left_of(i), sol.right_of(i),
                x, t);
  }
  close_chain(out, u_right);
  return out;
}

std::vector<Front> Engine::resolve(const Front& a, const Front& b, double t, double x,
                                   bool* accurate) {
  const HyperbolicModel& m = *model_;
  const State& uL = a.left;
  const State& uR = b.right;
  const bool aP = is_physical(a.kind), bP = is_physical(b.kind);
  const JunctionOptions& jopt = options_.riemann.junction;
  std::vector<Front> out;
  *accurate = false;

  auto nonphysical_to = [&](const State& from) {
    if ((uR - from).norm() >= options_.drop_tolerance) {
      out.push_back(make_nonphysical(from, uR, x, t));
    }
    close_chain(out, uR);
  };
  auto accurate_classical = [&]() {
    *accurate = true;
    return fan(solve_riemann(m, uL, uR, options_.riemann), x, t, uR, nullptr, nullptr);
  };

  if (aP && bP) {
    if (std::abs(a.size * b.size) >= options_.rho || a.family < b.family) {
      return accurate_classical();
    }
    if (a.family > b.family) {
      const State um = m.lax_curve(b.family, b.size, uL);
      const State ur = m.lax_curve(a.family, a.size, um);
      append_wave(out, b.family, b.size, uL, um, x, t);
      append_wave(out, a.family, a.size, um, ur, x, t);
      nonphysical_to(out.empty() ? uL : out.back().right);
      return out;
    }
    const double s = a.size + b.size;
    const State ur = m.lax_curve(a.family, s, uL);
    append_wave(out, a.family, s, uL, ur, x, t);
    nonphysical_to(out.empty() ? uL : out.back().right);
    return out;
  }
  if (a.kind == FrontKind::NonPhysical && bP) {
    const State ur = m.lax_curve(b.family, b.size, uL);
    append_wave(out, b.family, b.size, uL, ur, x, t);
    nonphysical_to(out.empty() ? uL : out.back().right);
    return out;
  }
  if (aP && b.kind == FrontKind::ZeroWave) {
    if (std::abs(a.size) * b.size >= options_.rho) {
      *accurate = true;
      return fan(solve_generalized_riemann(m, *cond_, b.z_plus, b.z_minus, uL, uR,
                                           options_.riemann),
                 x, t, uR, &b.z_minus, &b.z_plus);
    }
    const State um = junction_map(m, *cond_, b.z_plus, b.z_minus, uL, jopt);
    const State ur = m.lax_curve(a.family, a.size, um);
    out.push_back(make_zero_wave(uL, um, b.z_minus, b.z_plus, x, t));
    append_wave(out, a.family, a.size, um, ur, x, t);
    nonphysical_to(out.back().right);
    return out;
  }
  if (a.kind == FrontKind::ZeroWave && bP) {
    if (std::abs(b.size) * a.size >= options_.rho) {
      *accurate = true;
      return fan(solve_generalized_riemann(m, *cond_, a.z_plus, a.z_minus, uL, uR,
                                           options_.riemann),
                 x, t, uR, &a.z_minus, &a.z_plus);
    }
    const State um = m.lax_curve(b.family, b.size, uL);
    append_wave(out, b.family, b.size, uL, um, x, t);
    const State left = out.empty() ? uL : out.back().right;
    const State ur = junction_map(m, *cond_, a.z_plus, a.z_minus, left, jopt);
    out.push_back(make_zero_wave(left, ur, a.z_minus, a.z_plus, x, t));
    nonphysical_to(ur);
    return out;
  }
  if (a.kind == FrontKind::NonPhysical && b.kind == FrontKind::ZeroWave) {
    const State ul = junction_map(m, *cond_, b.z_plus, b.z_minus, uL, jopt);
    out.push_back(make_zero_wave(uL, ul, b.z_minus, b.z_plus, x, t));
    nonphysical_to(ul);
    return out;
  }
  std::ostringstream msg;
  msg << "unexpected interaction " << to_string(a.kind) << " / " << to_string(b.kind) << " at t="
      << t << ", x=" << x;
  fail(ErrorKind::Internal, msg.str());
}

void Engine::calibrate(const InitialDatum& datum) {
  const HyperbolicModel& m = *model_;
  if (options_.lambda_hat <= 0.0) {
    double lam = estimate_lambda_hat(m, datum.far_left, options_.box_radius);
    for (const auto& v : datum.values) {
      for (double l : m.eigenvalues(v)) lam = std::max(lam, 1.2 * std::abs(l));
    }
    options_.lambda_hat = lam;
  }
  if (options_.glimm_C <= 0.0) {
    stats_.C_interaction =
        presample_interaction_constant(m, *cond_, datum.far_left, zeta_h_, options_);
    options_.glimm_C = std::max(1.0, 2.0 * stats_.C_interaction);
  }
}

void Engine::initialize(const InitialDatum& datum) {
  const HyperbolicModel& m = *model_;
  if (datum.xs.size() != datum.values.size()) {
    fail(ErrorKind::Config, "initial datum needs one value per jump");
  }
  m.require_domain(datum.far_left);
  double tv0 = 0.0;
  {
    const State* prev = &datum.far_left;
    for (std::size_t k = 0; k < datum.values.size(); ++k) {
      m.require_domain(datum.values[k]);
      if (k > 0 && !(datum.xs[k] > datum.xs[k - 1])) {
        fail(ErrorKind::Config, "initial datum jumps must increase");
      }
      tv0 += (datum.values[k] - *prev).norm();
      prev = &datum.values[k];
    }
  }
  const double tvz = zeta_h_.total_variation();
  if (tv0 + tvz > options_.small_bv_budget) {
    std::ostringstream msg;
    msg << "TV(u0) + TV(zeta^h) = " << tv0 + tvz << " exceeds the small-BV budget "
        << options_.small_bv_budget;
    fail(ErrorKind::SmallBV, msg.str());
  }
  box_.center = datum.far_left;
  box_.radius = options_.box_radius;
  calibrate(datum);

  fronts_.clear();
  index_.clear();
  queue_ = {};
  trajectory_ = Trajectory{};
  log_.clear();
  series_.clear();
  alive_tail_ = kNoTail;
  time_ = 0.0;
  far_left_ = datum.far_left;
  trajectory_.far_left = far_left_;

  // Every datum jump and every junction of zeta^h starts a Riemann problem.
  struct Point {
    double x;
    const PiecewiseConstantZeta::Junction* junction;
    const State* right;
  };
  const auto junctions = zeta_h_.junctions();
  std::vector<Point> points;
  for (std::size_t k = 0; k < datum.xs.size(); ++k) {
    points.push_back({datum.xs[k], nullptr, &datum.values[k]});
  }
  for (const auto& j : junctions) {
    auto it = std::find_if(points.begin(), points.end(),
                           [&](const Point& p) { return p.x == j.x; });
    if (it != points.end()) {
      it->junction = &j;
    } else {
      points.push_back({j.x, &j, nullptr});
    }
  }
  std::sort(points.begin(), points.end(),
            [](const Point& l, const Point& r) { return l.x < r.x; });

  State current = far_left_;
  for (const auto& p : points) {
    const State uR = p.right ? *p.right : current;
    std::vector<Front> out;
    if (p.junction) {
      const auto sol = solve_generalized_riemann(m, *cond_, p.junction->plus, p.junction->minus,
                                                 current, uR, options_.riemann);
      out = fan(sol, p.x, 0.0, uR, &p.junction->minus, &p.junction->plus);
    } else if ((uR - current).norm() > 0.0) {
      out = fan(solve_riemann(m, current, uR, options_.riemann), p.x, 0.0, uR, nullptr, nullptr);
    }
    for (auto& f : out) {
      fronts_.push_back(std::move(f));
      index_[fronts_.back().id] = std::prev(fronts_.end());
    }
    if (!out.empty()) current = uR;
  }
  for (auto it = fronts_.begin(); it != fronts_.end(); ++it) schedule(it);

  initialized_ = true;
  stats_.tv_initial = tv0;
  update_diagnostics(true);
  const auto g = functionals();
  series_.push_back({0.0, g.V, g.Q, g.Upsilon});
}

void Engine::schedule(Iter left) {
  if (left == fronts_.end()) return;
  const Iter right = std::next(left);
  if (right == fronts_.end()) return;
  if (auto e = collide(*left, *right, time_)) queue_.push({*e});
}

void Engine::finish_front(const Front& f, double t_end) {
  if (options_.record_trajectory) trajectory_.segments.push_back({f, t_end});
}

std::vector<const Front*> Engine::fronts() const {
  std::vector<const Front*> out;
  out.reserve(fronts_.size());
  for (const auto& f : fronts_) out.push_back(&f);
  return out;
}

GlimmFunctionals Engine::functionals() const {
  return glimm_functionals(fronts(), *model_, options_.glimm_C);
}

double Engine::total_variation() const {
  double tv = 0.0;
  for (const auto& f : fronts_) tv += (f.right - f.left).norm();
  return tv;
}

double Engine::nonphysical_strength() const {
  double s = 0.0;
  for (const auto& f : fronts_) {
    if (f.kind == FrontKind::NonPhysical) s += f.size;
  }
  return s;
}

void Engine::update_diagnostics(bool exact) {
  if (exact) {
    tv_sum_ = total_variation();
    np_sum_ = nonphysical_strength();
  }
  stats_.tv_max = std::max(stats_.tv_max, tv_sum_);
  stats_.np_strength_max = std::max(stats_.np_strength_max, np_sum_);
}

std::optional<Engine::Event> Engine::next_interaction() const {
  std::optional<Event> best;
  for (auto it = fronts_.begin(); it != fronts_.end(); ++it) {
    const auto nx = std::next(it);
    if (nx == fronts_.end()) break;
    const auto e = collide(*it, *nx, time_);
    if (e && (!best || e->t < best->t || (e->t == best->t && e->x < best->x))) best = e;
  }
  return best;
}

void Engine::run(double horizon) {
  if (!initialized_) fail(ErrorKind::Config, "engine not initialized");
  if (!(horizon > 0.0)) fail(ErrorKind::Config, "horizon must be positive");
  // Drop the records of fronts that were alive at the end of a previous run.
  if (alive_tail_ != kNoTail) trajectory_.segments.resize(alive_tail_);

  while (!queue_.empty()) {
    const Event e = queue_.top().e;
    const auto il = index_.find(e.left);
    const auto ir = index_.find(e.right);
    if (il == index_.end() || ir == index_.end() || std::next(il->second) != ir->second) {
      queue_.pop();
      continue;
    }
    if (e.t > horizon) break;
    queue_.pop();
    if (++stats_.interactions > options_.max_interactions) {
      fail(ErrorKind::InteractionCap, "interaction cap exceeded at t=" + std::to_string(e.t));
    }
    const Iter a_it = il->second, b_it = ir->second;
    const bool monitor = options_.monitor_functionals;
    const GlimmFunctionals before = monitor ? functionals() : GlimmFunctionals{};
    // Both nodes are erased below, so their contents can be taken.
    const Front a = std::move(*a_it), b = std::move(*b_it);
    time_ = e.t;

    bool accurate = false;
    std::vector<Front> out = resolve(a, b, e.t, e.x, &accurate);
    (accurate ? stats_.accurate : stats_.simplified) += 1;

    finish_front(a, e.t);
    finish_front(b, e.t);
    const Iter after_b = std::next(b_it);
    Iter before_a = a_it == fronts_.begin() ? fronts_.end() : std::prev(a_it);
    index_.erase(a.id);
    index_.erase(b.id);
    fronts_.erase(a_it);
    fronts_.erase(b_it);
    for (const auto& f : out) {
      if (!box_.contains(f.left) || !box_.contains(f.right)) stats_.left_box = true;
      if (is_physical(f.kind) && std::abs(f.speed) >= options_.lambda_hat) {
        fail(ErrorKind::Internal, "physical front faster than the non-physical speed");
      }
    }
    for (const Front* f : {&a, &b}) {
      tv_sum_ -= front_tv(*f);
      if (f->kind == FrontKind::NonPhysical) np_sum_ -= f->size;
    }
    for (const auto& f : out) {
      tv_sum_ += front_tv(f);
      if (f.kind == FrontKind::NonPhysical) np_sum_ += f.size;
    }
    InteractionRecord rec;
    const bool keep_record = options_.monitor_functionals && options_.log_interactions;
    if (keep_record) {
      for (const auto& f : out) {
        rec.out_kinds.push_back(f.kind);
        rec.out_sizes.push_back(f.size);
      }
    }
    Iter first_new = after_b;
    for (auto rit = out.rbegin(); rit != out.rend(); ++rit) {
      first_new = fronts_.insert(first_new, std::move(*rit));
      index_[first_new->id] = first_new;
    }
    const std::size_t n_out = out.size();
    if (before_a != fronts_.end()) {
      schedule(before_a);
    }
    Iter it = before_a == fronts_.end() ? fronts_.begin() : std::next(before_a);
    for (std::size_t k = 0; k < n_out && it != fronts_.end(); ++k, ++it) schedule(it);

    update_diagnostics(stats_.interactions % 4096 == 0);
    if (!monitor) continue;

    const GlimmFunctionals after = functionals();
    const double increase = after.Upsilon - before.Upsilon;
    stats_.max_upsilon_increase = std::max(stats_.max_upsilon_increase, increase);
    if (increase > 1e-12) ++stats_.upsilon_violations;
    series_.push_back({e.t, after.V, after.Q, after.Upsilon});
    if (keep_record) {
      rec.t = e.t;
      rec.x = e.x;
      rec.kind_left = a.kind;
      rec.kind_right = b.kind;
      rec.size_left = a.size;
      rec.size_right = b.size;
      rec.accurate = accurate;
      rec.before = before;
      rec.after = after;
      log_.push_back(std::move(rec));
    }
  }

  update_diagnostics(true);
  time_ = horizon;
  alive_tail_ = trajectory_.segments.size();
  for (const auto& f : fronts_) {
    trajectory_.segments.push_back({f, std::numeric_limits<double>::infinity()});
  }
  trajectory_.t_final = horizon;
}

}  // namespace wft
