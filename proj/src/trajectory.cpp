#include "wft/engine.hpp"

#include <algorithm>

#include "wft/error.hpp"

namespace wft {

State Profile::at(double x) const {
  const auto it = std::lower_bound(xs.begin(), xs.end(), x);
  const auto idx = static_cast<std::size_t>(it - xs.begin());
  return idx == 0 ? far_left : values[idx - 1];
}

double Profile::total_variation() const {
  double tv = 0.0;
  const State* prev = &far_left;
  for (const auto& v : values) {
    tv += (v - *prev).norm();
    prev = &v;
  }
  return tv;
}

namespace {

std::vector<double> merged_cuts(const Profile& a, const Profile* b, double lo, double hi) {
  std::vector<double> cuts{lo, hi};
  for (double x : a.xs) {
    if (x > lo && x < hi) cuts.push_back(x);
  }
  if (b) {
    for (double x : b->xs) {
      if (x > lo && x < hi) cuts.push_back(x);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

}  // namespace

double l1_distance(const Profile& a, const Profile& b, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  const auto cuts = merged_cuts(a, &b, lo, hi);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double len = cuts[k + 1] - cuts[k];
    if (len <= 0.0) continue;
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
    total += (a.at(mid) - b.at(mid)).norm() * len;
  }
  return total;
}

double integrate_component(const Profile& p, int component, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  const auto cuts = merged_cuts(p, nullptr, lo, hi);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double len = cuts[k + 1] - cuts[k];
    if (len <= 0.0) continue;
    total += p.at(0.5 * (cuts[k] + cuts[k + 1]))(component) * len;
  }
  return total;
}

std::vector<const Trajectory::Segment*> Trajectory::alive(double t) const {
  if (t < 0.0 || t > t_final) fail(ErrorKind::Range, "sample time outside the trajectory");
  std::vector<const Segment*> out;
  for (const auto& s : segments) {
    if (s.front.t0 <= t && t < s.t_end) out.push_back(&s);
  }
  std::stable_sort(out.begin(), out.end(), [t](const Segment* a, const Segment* b) {
    const double xa = a->front.position(t), xb = b->front.position(t);
    if (xa != xb) return xa < xb;
    return a->front.id < b->front.id;
  });
  return out;
}

Profile Trajectory::profile(double t) const {
  Profile p;
  p.far_left = far_left;
  for (const Segment* s : alive(t)) {
    p.xs.push_back(s->front.position(t));
    p.values.push_back(s->front.right);
  }
  return p;
}

std::vector<Profile> Trajectory::profiles(const std::vector<double>& ts) const {
  for (double t : ts)
    if (t < 0.0 || t > t_final) fail(ErrorKind::Range, "sample time outside the trajectory");
  std::vector<std::size_t> order(ts.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ts[a] < ts[b]; });
  std::vector<double> sorted(ts.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = ts[order[k]];

  std::vector<std::vector<const Segment*>> live(ts.size());
  for (const auto& s : segments) {
    auto lo = std::lower_bound(sorted.begin(), sorted.end(), s.front.t0);
    auto hi = std::lower_bound(lo, sorted.end(), s.t_end);
    for (auto it = lo; it != hi; ++it) live[order[it - sorted.begin()]].push_back(&s);
  }

  std::vector<Profile> out(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double t = ts[k];
    auto& segs = live[k];
    std::stable_sort(segs.begin(), segs.end(), [t](const Segment* a, const Segment* b) {
      const double xa = a->front.position(t), xb = b->front.position(t);
      if (xa != xb) return xa < xb;
      return a->front.id < b->front.id;
    });
    Profile& p = out[k];
    p.far_left = far_left;
    p.xs.reserve(segs.size());
    p.values.reserve(segs.size());
    for (const Segment* s : segs) {
      p.xs.push_back(s->front.position(t));
      p.values.push_back(s->front.right);
    }
    segs = {};
  }
  return out;
}

std::vector<State> Trajectory::sample(double t, const std::vector<double>& xs) const {
  const Profile p = profile(t);
  std::vector<State> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(p.at(x));
  return out;
}

}  // namespace wft
