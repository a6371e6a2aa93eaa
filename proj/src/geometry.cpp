#include "wft/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wft/error.hpp"

namespace wft {

ZetaGeometry::ZetaGeometry(Params z_minus_infinity, std::vector<ZetaJump> jumps,
                           std::vector<SmoothPiece> pieces)
    : z_inf_(std::move(z_minus_infinity)), jumps_(std::move(jumps)), pieces_(std::move(pieces)) {
  if (z_inf_.size() < 1 || !z_inf_.allFinite()) {
    fail(ErrorKind::Config, "geometry needs a finite value at -infinity");
  }
  std::sort(jumps_.begin(), jumps_.end(),
            [](const ZetaJump& l, const ZetaJump& r) { return l.x < r.x; });
  for (std::size_t k = 0; k < jumps_.size(); ++k) {
    if (!std::isfinite(jumps_[k].x) || jumps_[k].gap.size() != z_inf_.size() ||
        !jumps_[k].gap.allFinite()) {
      fail(ErrorKind::Config, "geometry jump is malformed");
    }
    if (k > 0 && jumps_[k].x == jumps_[k - 1].x) {
      fail(ErrorKind::Config, "two geometry jumps at the same position");
    }
  }
  std::sort(pieces_.begin(), pieces_.end(),
            [](const SmoothPiece& l, const SmoothPiece& r) { return l.a < r.a; });
  for (const auto& p : pieces_) {
    if (!(p.a < p.b) || !std::isfinite(p.a) || !std::isfinite(p.b) || !p.increment ||
        !p.derivative) {
      fail(ErrorKind::Config, "geometry piece is malformed");
    }
  }
}

Params ZetaGeometry::value(double x) const {
  Params z = z_inf_;
  for (const auto& j : jumps_) {
    if (j.x < x) z += j.gap;
  }
  for (const auto& p : pieces_) {
    if (x > p.a) z += p.increment(std::min(x, p.b));
  }
  return z;
}

Params ZetaGeometry::right_limit(double x) const {
  Params z = value(x);
  for (const auto& j : jumps_) {
    if (j.x == x) z += j.gap;
  }
  return z;
}

Params ZetaGeometry::at_plus_infinity() const {
  return value(std::numeric_limits<double>::infinity());
}

Params ZetaGeometry::density(double x) const {
  Params d = Params::Zero(z_inf_.size());
  for (const auto& p : pieces_) {
    if (x > p.a && x < p.b) d += p.derivative(x);
  }
  return d;
}

Params ZetaGeometry::direction(double x) const {
  const Params d = density(x);
  const double m = d.norm();
  if (m <= 1e-300) return Params::Zero(d.size());
  return d / m;
}

double ZetaGeometry::density_integral(double lo, double hi) const {
  std::vector<double> cuts{lo, hi};
  bool any = false;
  for (const auto& p : pieces_) {
    if (p.b <= lo || p.a >= hi) continue;
    any = true;
    if (p.a > lo) cuts.push_back(p.a);
    if (p.b < hi) cuts.push_back(p.b);
  }
  if (!any) return 0.0;
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  auto f = [this](double x) { return density_magnitude(x); };
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (!(b > a)) continue;
    const double mid = 0.5 * (a + b);
    bool covered = false;
    for (const auto& p : pieces_) covered = covered || (mid > p.a && mid < p.b);
    if (!covered) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 10, 1e-14);
  }
  return total;
}

double ZetaGeometry::variation(double lo, double hi, bool include_lo, bool include_hi) const {
  if (!(hi > lo)) return 0.0;
  double total = 0.0;
  auto first = std::lower_bound(jumps_.begin(), jumps_.end(), lo,
                                [](const ZetaJump& j, double x) { return j.x < x; });
  for (auto it = first; it != jumps_.end() && it->x <= hi; ++it) {
    if (it->x == lo && !include_lo) continue;
    if (it->x == hi && !include_hi) continue;
    total += it->gap.norm();
  }
  return total + density_integral(std::max(lo, -1e300), std::min(hi, 1e300));
}

double ZetaGeometry::atomic_variation() const {
  double total = 0.0;
  for (const auto& j : jumps_) total += j.gap.norm();
  return total;
}

double ZetaGeometry::continuous_variation() const {
  if (pieces_.empty()) return 0.0;
  const auto [lo, hi] = support();
  return density_integral(lo, hi);
}

double ZetaGeometry::total_variation() const { return atomic_variation() + continuous_variation(); }

std::pair<double, double> ZetaGeometry::support() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& j : jumps_) {
    lo = std::min(lo, j.x);
    hi = std::max(hi, j.x);
  }
  for (const auto& p : pieces_) {
    lo = std::min(lo, p.a);
    hi = std::max(hi, p.b);
  }
  if (lo > hi) return {0.0, 0.0};
  return {lo, hi};
}

ZetaGeometry constant_geometry(const Params& z) { return ZetaGeometry(z, {}, {}); }

ZetaGeometry step_geometry(const Params& z0, const std::vector<double>& positions,
                           const std::vector<Params>& values) {
  if (positions.size() != values.size()) {
    fail(ErrorKind::Config, "step geometry needs one value per position");
  }
  std::vector<ZetaJump> jumps;
  Params prev = z0;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if (k > 0 && !(positions[k] > positions[k - 1])) {
      fail(ErrorKind::Config, "step positions must increase");
    }
    jumps.push_back({positions[k], values[k] - prev});
    prev = values[k];
  }
  return ZetaGeometry(z0, std::move(jumps), {});
}

ZetaGeometry tangent_geometry(Params z_minus_infinity, std::vector<ZetaJump> jumps,
                              std::vector<SmoothPiece> pieces) {
  ZetaGeometry g(std::move(z_minus_infinity), std::move(jumps), std::move(pieces));
  if (g.dimension() != 2) fail(ErrorKind::Config, "pipe tangent must be planar");
  auto check = [&](const Params& z) {
    if (std::abs(z.norm() - 1.0) > 1e-8) {
      fail(ErrorKind::Domain, "pipe tangent is not a unit vector");
    }
  };
  check(g.at_minus_infinity());
  for (const auto& j : g.jumps()) {
    check(g.value(j.x));
    check(g.right_limit(j.x));
  }
  for (const auto& p : g.pieces()) {
    for (int k = 0; k <= 16; ++k) check(g.value(p.a + (p.b - p.a) * k / 16.0));
  }
  return g;
}

namespace {

Params unit(double theta) {
  Params z(2);
  z << std::cos(theta), std::sin(theta);
  return z;
}

}  // namespace

ZetaGeometry curved_pipe_geometry(const PlaneCurve& curve) {
  std::vector<ZetaJump> jumps;
  std::vector<SmoothPiece> pieces;
  double x = curve.x_start;
  double theta = curve.theta0;
  for (const auto& s : curve.segments) {
    switch (s.kind) {
      case CurveSegment::Kind::Straight:
        if (!(s.length > 0.0)) fail(ErrorKind::Config, "straight segment needs positive length");
        x += s.length;
        break;
      case CurveSegment::Kind::Arc: {
        if (!(s.length > 0.0)) fail(ErrorKind::Config, "arc segment needs positive length");
        const double a = x, th = theta, k = s.curvature;
        if (k != 0.0) {
          pieces.push_back({a, a + s.length,
                            [a, th, k](double y) -> Params { return unit(th + k * (y - a)) - unit(th); },
                            [a, th, k](double y) -> Params {
                              Params d(2);
                              d << -k * std::sin(th + k * (y - a)), k * std::cos(th + k * (y - a));
                              return d;
                            }});
        }
        x += s.length;
        theta += k * s.length;
        break;
      }
      case CurveSegment::Kind::Kink:
        if (s.angle != 0.0) {
          jumps.push_back({x, unit(theta + s.angle) - unit(theta)});
          theta += s.angle;
        }
        break;
    }
  }
  return tangent_geometry(unit(curve.theta0), std::move(jumps), std::move(pieces));
}

ZetaGeometry section_steps(double a0, const std::vector<double>& positions,
                           const std::vector<double>& sections) {
  if (!(a0 > 0.0)) fail(ErrorKind::Config, "sections must be positive");
  std::vector<Params> values;
  for (double a : sections) {
    if (!(a > 0.0)) fail(ErrorKind::Config, "sections must be positive");
    values.push_back(Params::Constant(1, a));
  }
  return step_geometry(Params::Constant(1, a0), positions, values);
}

ZetaGeometry section_ramp(double a0, double a1, double x0, double x1) {
  if (!(a0 > 0.0) || !(a1 > 0.0)) fail(ErrorKind::Config, "sections must be positive");
  if (!(x1 > x0)) fail(ErrorKind::Config, "ramp needs x1 > x0");
  if (a0 == a1) return constant_geometry(Params::Constant(1, a0));
  const double pi = std::numbers::pi;
  const double L = x1 - x0, da = a1 - a0;
  SmoothPiece piece{x0, x1,
                    [=](double y) -> Params {
                      return Params::Constant(1, 0.5 * da * (1.0 - std::cos(pi * (y - x0) / L)));
                    },
                    [=](double y) -> Params {
                      return Params::Constant(1, 0.5 * da * pi / L * std::sin(pi * (y - x0) / L));
                    }};
  return ZetaGeometry(Params::Constant(1, a0), {}, {piece});
}

Params PiecewiseConstantZeta::evaluate(double x) const {
  const auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), x);
  return values[static_cast<std::size_t>(it - breakpoints.begin())];
}

double PiecewiseConstantZeta::variation(double lo, double hi) const {
  double total = 0.0;
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    if (breakpoints[k] >= lo && breakpoints[k] < hi) total += (values[k + 1] - values[k]).norm();
  }
  return total;
}

double PiecewiseConstantZeta::total_variation() const {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < values.size(); ++k) total += (values[k + 1] - values[k]).norm();
  return total;
}

std::vector<PiecewiseConstantZeta::Junction> PiecewiseConstantZeta::junctions() const {
  std::vector<Junction> out;
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    if ((values[k + 1] - values[k]).norm() > 0.0) {
      out.push_back({breakpoints[k], values[k], values[k + 1], retained[k]});
    }
  }
  return out;
}

namespace {

// Largest distance of the sampled direction field from its first sample on
// the open interval; bounds half the pairwise oscillation.
double direction_spread(const ZetaGeometry& zeta, double lo, double hi) {
  bool touches = false;
  for (const auto& p : zeta.pieces()) touches = touches || (p.b > lo && p.a < hi);
  if (!touches) return 0.0;
  constexpr int samples = 9;
  Params first;
  double spread = 0.0;
  for (int k = 1; k <= samples; ++k) {
    const double x = lo + (hi - lo) * k / (samples + 1.0);
    if (zeta.density_magnitude(x) <= 1e-14) continue;
    const Params v = zeta.direction(x);
    if (first.size() == 0) {
      first = v;
    } else {
      spread = std::max(spread, (v - first).norm());
    }
  }
  return spread;
}

std::vector<double> retained_jumps(const ZetaGeometry& zeta, double h) {
  const auto& J = zeta.jumps();
  std::vector<bool> keep(J.size(), false);
  const double threshold = h / (2.0 * std::max<std::size_t>(1, J.size()));
  double omitted = 0.0;
  for (std::size_t k = 0; k < J.size(); ++k) {
    keep[k] = J[k].gap.norm() >= threshold;
    if (!keep[k]) omitted += J[k].gap.norm();
  }
  while (omitted >= h) {
    std::size_t best = J.size();
    for (std::size_t k = 0; k < J.size(); ++k) {
      if (!keep[k] && (best == J.size() || J[k].gap.norm() > J[best].gap.norm())) best = k;
    }
    keep[best] = true;
    omitted -= J[best].gap.norm();
  }
  std::vector<double> out;
  for (std::size_t k = 0; k < J.size(); ++k) {
    if (keep[k]) out.push_back(J[k].x);
  }
  return out;
}

}  // namespace

PiecewiseConstantZeta build_zeta_h(const ZetaGeometry& zeta, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) fail(ErrorKind::Config, "h must be positive");
  const double tv = zeta.total_variation();
  if (!std::isfinite(tv)) fail(ErrorKind::Config, "geometry has non-finite variation");

  const std::vector<double> kept = retained_jumps(zeta, h);
  const auto [s_lo, s_hi] = zeta.support();
  const double first = std::min(-1.0 / h, s_lo) - 0.5 * h;
  const double last = std::max(1.0 / h, s_hi) + 0.5 * h;

  // Anchors: the range ends, the retained jumps and the ends of the smooth
  // pieces, so that refinements sample the geometry consistently. Each gap
  // is filled uniformly with spacing below h.
  std::vector<double> anchors{first, last};
  for (double x : kept) anchors.push_back(x);
  for (const auto& piece : zeta.pieces()) {
    for (double x : {piece.a, piece.b})
      if (x > first && x < last) anchors.push_back(x);
  }
  std::sort(anchors.begin(), anchors.end());
  std::vector<double> pts;
  for (std::size_t k = 0; k + 1 < anchors.size(); ++k) {
    const double lo = anchors[k], hi = anchors[k + 1];
    const auto cells = std::max(1L, static_cast<long>(std::ceil((hi - lo) / (0.9 * h))));
    for (long j = 0; j < cells; ++j) pts.push_back(lo + (hi - lo) * j / cells);
  }
  pts.push_back(last);
  std::sort(pts.begin(), pts.end());
  {
    std::vector<double> unique;
    for (double x : pts) {
      const bool mandatory = std::binary_search(kept.begin(), kept.end(), x);
      if (!unique.empty() && x - unique.back() < 1e-9 * h) {
        if (mandatory) unique.back() = x;
        continue;
      }
      unique.push_back(x);
    }
    pts = std::move(unique);
  }

  const double pre_jump_bound = h / (1.0 + static_cast<double>(kept.size()));
  for (int pass = 0; pass < 200; ++pass) {
    std::vector<double> next{pts.front()};
    bool changed = false;
    for (std::size_t k = 1; k < pts.size(); ++k) {
      const double lo = pts[k - 1], hi = pts[k];
      const bool is_kept = std::binary_search(kept.begin(), kept.end(), hi);
      bool bisect = zeta.variation(lo, hi, false, false) >= h ||
                    2.0 * direction_spread(zeta, lo, hi) >= h;
      if (is_kept) bisect = bisect || zeta.variation(lo, hi, true, false) >= pre_jump_bound;
      if (bisect) {
        next.push_back(0.5 * (lo + hi));
        changed = true;
      }
      next.push_back(hi);
    }
    pts = std::move(next);
    if (!changed) break;
  }

  PiecewiseConstantZeta out;
  out.h = h;
  out.breakpoints = pts;
  out.values.push_back(zeta.at_minus_infinity());
  for (double x : pts) {
    out.values.push_back(zeta.right_limit(x));
    out.retained.push_back(std::binary_search(kept.begin(), kept.end(), x));
  }
  return out;
}

ZetaHReport check_zeta_h(const ZetaGeometry& zeta, const PiecewiseConstantZeta& zh) {
  ZetaHReport r;
  const auto& x = zh.breakpoints;
  const double h = zh.h;
  if (x.empty()) return r;
  r.bracket = x.front() < -1.0 / h && x.back() > 1.0 / h &&
              std::is_sorted(x.begin(), x.end()) &&
              std::adjacent_find(x.begin(), x.end()) == x.end();

  double omitted = 0.0;
  std::size_t kept = 0;
  for (std::size_t k = 0; k < x.size(); ++k) kept += zh.retained[k] ? 1 : 0;
  for (const auto& j : zeta.jumps()) {
    const auto it = std::lower_bound(x.begin(), x.end(), j.x);
    const bool retained = it != x.end() && *it == j.x && zh.retained[it - x.begin()];
    if (!retained) omitted += j.gap.norm();
  }
  r.omitted_tail = omitted < h;

  r.pre_jump_variation = true;
  r.open_variation = true;
  r.direction_oscillation = true;
  r.spacing = true;
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= x.size(); ++k) {
    const double lo = k == 0 ? -inf : x[k - 1];
    const double hi = k == x.size() ? inf : x[k];
    const double vlo = std::isfinite(lo) ? lo : std::min(hi, zeta.support().first) - 1.0;
    const double vhi = std::isfinite(hi) ? hi : std::max(lo, zeta.support().second) + 1.0;
    if (!(zeta.variation(vlo, vhi, !std::isfinite(lo) ? true : false,
                         !std::isfinite(hi) ? true : false) < h)) {
      r.open_variation = false;
    }
    if (!(2.0 * direction_spread(zeta, vlo, vhi) < h)) r.direction_oscillation = false;
    if (k >= 1 && k < x.size()) {
      if (!(hi - lo < h && hi > lo)) r.spacing = false;
      if (zh.retained[k] &&
          !(zeta.variation(lo, hi, true, false) < h / (1.0 + static_cast<double>(kept)))) {
        r.pre_jump_variation = false;
      }
    }
  }
  return r;
}

}  // namespace wft
