#include "wft/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "wft/error.hpp"

namespace wft {

namespace {

// Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kG4x{-0.8611363115940526, -0.3399810435848563,
                                     0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kG4w{0.3478548451374538, 0.6521451548625461,
                                     0.6521451548625461, 0.3478548451374538};
constexpr std::array<double, 5> kG5x{-0.9061798459386640, -0.5384693101056831, 0.0,
                                     0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kG5w{0.2369268850561891, 0.4786286704993665,
                                     0.5688888888888889, 0.4786286704993665,
                                     0.2369268850561891};

double bump(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double w = 1.0 - s * s;
  return w * w * w;
}

double bump_slope(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double w = 1.0 - s * s;
  return -6.0 * s * w * w;
}

// Antiderivative of bump, constant outside [-1, 1].
double bump_primitive(double s) {
  s = std::clamp(s, -1.0, 1.0);
  const double s2 = s * s;
  return s * (1.0 - s2 + 0.6 * s2 * s2 - s2 * s2 * s2 / 7.0);
}

// The pieces of a profile as (lo, hi, value) clipped to [a, b].
struct Piece {
  double lo, hi;
  const State* u;
};

std::vector<Piece> clip_pieces(const Profile& p, double a, double b) {
  std::vector<Piece> out;
  double lo = -std::numeric_limits<double>::infinity();
  const State* u = &p.far_left;
  for (std::size_t k = 0; k <= p.xs.size(); ++k) {
    const double hi = k < p.xs.size() ? p.xs[k] : std::numeric_limits<double>::infinity();
    const double c = std::max(lo, a), d = std::min(hi, b);
    if (d > c) out.push_back({c, d, u});
    if (k < p.xs.size()) {
      lo = hi;
      u = &p.values[k];
    }
  }
  return out;
}

}  // namespace

std::vector<BumpFunction> default_bump_battery(const ZetaGeometry& zeta, double horizon) {
  const double H = horizon;
  const std::array<double, 3> tcs{0.5 * H, 0.3 * H, 0.65 * H};
  const std::array<double, 3> trs{0.4 * H, 0.2 * H, 0.3 * H};
  auto [s0, s1] = zeta.support();
  if (!(s1 >= s0)) s0 = s1 = 0.0;

  std::vector<double> junction_x;
  for (const auto& j : zeta.jumps()) junction_x.push_back(j.x);
  if (junction_x.empty()) junction_x = {s0, s1};
  std::vector<std::pair<double, double>> smooth;
  for (const auto& p : zeta.pieces()) smooth.emplace_back(p.a, p.b);
  if (smooth.empty()) smooth.emplace_back(s0, s1);

  std::vector<BumpFunction> out;
  const std::array<double, 4> jr{0.2, 0.5, 0.3, 1.0};
  for (int k = 0; k < 4; ++k) {
    const double x = junction_x[static_cast<std::size_t>(k) % junction_x.size()];
    out.push_back({tcs[k % 3], trs[k % 3], x, jr[k]});
  }
  for (int k = 0; k < 4; ++k) {
    const auto [a, b] = smooth[static_cast<std::size_t>(k) % smooth.size()];
    const double len = b - a;
    const double frac = 0.25 + 0.5 * (k % 2);
    const double xr = std::clamp(0.5 * len + 0.1 * k, 0.2, 1.0);
    out.push_back({tcs[(k + 1) % 3], trs[(k + 1) % 3], a + frac * len, xr});
  }
  const std::array<double, 4> tx{s0 - 1.5, s1 + 1.5, s0 - 0.8, s1 + 0.8};
  const std::array<double, 4> tr{0.5, 1.0, 0.3, 0.6};
  for (int k = 0; k < 4; ++k) out.push_back({tcs[(k + 2) % 3], trs[(k + 2) % 3], tx[k], tr[k]});
  return out;
}

double weak_residual(const Trajectory& traj, const HyperbolicModel& model,
                     const CouplingCondition& cond, const ZetaGeometry& zeta,
                     const BumpFunction& phi, const WeakResidualOptions& options) {
  if (phi.tc - phi.tr <= 0.0 || phi.tc + phi.tr > traj.t_final + 1e-12)
    fail(ErrorKind::Config, "test function support escapes the computed time window");
  const int n = model.dimension();
  const double xa = phi.xc - phi.xr, xb = phi.xc + phi.xr;
  auto bx = [&](double x) { return bump((x - phi.xc) / phi.xr); };

  std::vector<const ZetaJump*> jumps;
  for (const auto& j : zeta.jumps())
    if (j.x > xa && j.x < xb) jumps.push_back(&j);
  std::vector<std::pair<double, double>> smooth;
  for (const auto& p : zeta.pieces()) {
    const double c = std::max(p.a, xa), d = std::min(p.b, xb);
    if (d > c) smooth.emplace_back(c, d);
  }

  State total = State::Zero(n);
  const double t0 = phi.tc - phi.tr;
  const double dt = 2.0 * phi.tr / options.time_panels;
  std::vector<double> times;
  for (int panel = 0; panel < options.time_panels; ++panel)
    for (std::size_t g = 0; g < kG4x.size(); ++g)
      times.push_back(t0 + panel * dt + 0.5 * dt * (kG4x[g] + 1.0));
  const std::vector<Profile> profiles = traj.profiles(times);
  for (int panel = 0; panel < options.time_panels; ++panel) {
    for (std::size_t g = 0; g < kG4x.size(); ++g) {
      const std::size_t ti = panel * kG4x.size() + g;
      const double t = times[ti];
      const double wt = 0.5 * dt * kG4w[g];
      const double st = (t - phi.tc) / phi.tr;
      const double bt = bump(st);
      const double bt_dot = bump_slope(st) / phi.tr;
      const Profile& prof = profiles[ti];
      State integrand = State::Zero(n);

      for (const Piece& pc : clip_pieces(prof, xa, xb)) {
        const double ix = phi.xr * (bump_primitive((pc.hi - phi.xc) / phi.xr) -
                                    bump_primitive((pc.lo - phi.xc) / phi.xr));
        integrand += bt_dot * ix * (*pc.u);
        integrand += bt * (bx(pc.hi) - bx(pc.lo)) * model.flux(*pc.u);
      }
      for (const ZetaJump* j : jumps) {
        const State u = prof.at(j->x);
        integrand += bt * bx(j->x) * cond.evaluate(zeta.right_limit(j->x), zeta.value(j->x), u);
      }
      for (const auto& [c, d] : smooth) {
        // Split the density integral at the fronts, then into short panels.
        std::vector<double> cuts{c};
        for (double x : prof.xs)
          if (x > c && x < d) cuts.push_back(x);
        cuts.push_back(d);
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
          const double len = cuts[k + 1] - cuts[k];
          const State u = prof.at(0.5 * (cuts[k] + cuts[k + 1]));
          const int m = std::max(1, static_cast<int>(std::ceil(len / options.x_panel)));
          const double hx = len / m;
          for (int q = 0; q < m; ++q) {
            const double xq = cuts[k] + q * hx;
            for (std::size_t gx = 0; gx < kG5x.size(); ++gx) {
              const double x = xq + 0.5 * hx * (kG5x[gx] + 1.0);
              const double wx = 0.5 * hx * kG5w[gx];
              integrand += bt * wx * bx(x) * cond.dini(zeta.value(x), zeta.density(x), u);
            }
          }
        }
      }
      total += wt * integrand;
    }
  }
  return total.norm();
}

double weak_residual(const Trajectory& traj, const HyperbolicModel& model,
                     const CouplingCondition& cond, const ZetaGeometry& zeta,
                     const std::vector<BumpFunction>& battery,
                     const WeakResidualOptions& options) {
  double worst = 0.0;
  for (const auto& phi : battery)
    worst = std::max(worst, weak_residual(traj, model, cond, zeta, phi, options));
  return worst;
}

SourceTerm section_source(const HyperbolicModel& model, const ZetaGeometry& section) {
  return [&model, section](double x, const State& u) -> State {
    const double a = section.value(x)(0);
    const double da = section.density(x)(0);
    State s = model.flux(u);
    s(model.momentum_index()) -= model.pressure(u);
    return (-da / a) * s;
  };
}

SourceTerm curvature_drag_source(double alpha, const ZetaGeometry& tangent) {
  return [alpha, tangent](double x, const State& u) -> State {
    State s = State::Zero(u.size());
    s(1) = -alpha * tangent.density_magnitude(x) * u(1);
    return s;
  };
}

SourceTerm product_source(std::function<State(const Params&)> G, const ZetaGeometry& zeta,
                          double fd_step) {
  return [G = std::move(G), zeta, fd_step](double x, const State&) -> State {
    const Params z = zeta.value(x);
    const Params dz = zeta.density(x);
    return (G(z + fd_step * dz) - G(z - fd_step * dz)) / (2.0 * fd_step);
  };
}

Profile fv_oracle(const HyperbolicModel& model, const SourceTerm& source,
                  const std::function<State(double)>& datum, double horizon,
                  const FVOptions& options) {
  if (!(options.cfl > 0.0 && options.cfl <= 0.45))
    fail(ErrorKind::Config, "finite-volume CFL number must lie in (0, 0.45]");
  if (options.cells < 2 || !(options.hi > options.lo))
    fail(ErrorKind::Config, "finite-volume grid is empty");
  const int N = options.cells;
  const double dx = (options.hi - options.lo) / N;
  std::vector<double> xc(static_cast<std::size_t>(N));
  std::vector<State> u(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    xc[i] = options.lo + (i + 0.5) * dx;
    u[i] = datum(xc[i]);
  }

  auto max_speed = [&](const State& w) {
    double s = 0.0;
    for (double l : model.eigenvalues(w)) s = std::max(s, std::abs(l));
    return s;
  };

  std::vector<State> F(static_cast<std::size_t>(N + 1));
  std::vector<double> speed(static_cast<std::size_t>(N));
  std::vector<State> flux(static_cast<std::size_t>(N));
  double t = 0.0;
  while (t < horizon) {
    double smax = 0.0;
    for (int i = 0; i < N; ++i) {
      if (model.density(u[i]) <= model.vacuum_floor())
        fail(ErrorKind::Domain, "finite-volume solution approaches vacuum");
      speed[i] = max_speed(u[i]);
      flux[i] = model.flux(u[i]);
      smax = std::max(smax, speed[i]);
    }
    double dt = options.cfl * dx / std::max(smax, 1e-300);
    if (t + dt > horizon) dt = horizon - t;
    for (int k = 0; k <= N; ++k) {
      const int l = std::max(k - 1, 0), r = std::min(k, N - 1);
      const double s = std::max(speed[l], speed[r]);
      F[k] = 0.5 * (flux[l] + flux[r]) - 0.5 * s * (u[r] - u[l]);
    }
    for (int i = 0; i < N; ++i) {
      const State src = source ? source(xc[i], u[i]) : State::Zero(u[i].size());
      u[i] += -dt / dx * (F[i + 1] - F[i]) + dt * src;
    }
    t += dt;
  }

  Profile p;
  p.far_left = u.front();
  for (int i = 0; i < N; ++i) {
    p.xs.push_back(options.lo + i * dx);
    p.values.push_back(u[i]);
  }
  return p;
}

namespace {

double weighted_mass(const Profile& p, const HyperbolicModel& model,
                     const PiecewiseConstantZeta* w, double lo, double hi) {
  std::vector<double> cuts{lo};
  for (double x : p.xs)
    if (x > lo && x < hi) cuts.push_back(x);
  if (w)
    for (double x : w->breakpoints)
      if (x > lo && x < hi) cuts.push_back(x);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  double m = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double len = cuts[k + 1] - cuts[k];
    if (len <= 0.0) continue;
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
    const double weight = w ? w->evaluate(mid)(0) : 1.0;
    m += weight * model.density(p.at(mid)) * len;
  }
  return m;
}

}  // namespace

MassBalance mass_balance(const Trajectory& traj, const HyperbolicModel& model,
                         const PiecewiseConstantZeta* weight, double lo, double hi,
                         double horizon) {
  MassBalance mb;
  const Profile p0 = traj.profile(0.0);
  const Profile pT = traj.profile(horizon);
  for (const auto& seg : traj.segments) {
    if (seg.front.t0 >= horizon) continue;
    const double te = std::min(seg.t_end, horizon);
    const double xa = seg.front.position(seg.front.t0), xb = seg.front.position(te);
    if (std::min(xa, xb) <= lo || std::max(xa, xb) >= hi)
      fail(ErrorKind::Config, "mass balance window does not contain every front");
    if (seg.front.kind == FrontKind::ZeroWave || te <= seg.front.t0) continue;
    const Front& f = seg.front;
    const double xm = f.position(0.5 * (f.t0 + te));
    const double w = weight ? weight->evaluate(xm)(0) : 1.0;
    const double jump_rho = model.density(f.right) - model.density(f.left);
    const double jump_flux = model.flux(f.right)(0) - model.flux(f.left)(0);
    mb.front_defect += (te - f.t0) * w * (f.speed * jump_rho - jump_flux);
  }
  const State& uL = traj.far_left;
  const State& uR = p0.values.empty() ? p0.far_left : p0.values.back();
  const double wL = weight ? weight->evaluate(lo)(0) : 1.0;
  const double wR = weight ? weight->evaluate(hi)(0) : 1.0;
  mb.far_field = horizon * (wR * model.flux(uR)(0) - wL * model.flux(uL)(0));
  mb.initial = weighted_mass(p0, model, weight, lo, hi);
  mb.final = weighted_mass(pT, model, weight, lo, hi);
  mb.residual = mb.final - mb.initial + mb.front_defect + mb.far_field;
  return mb;
}

State compose_lax(const HyperbolicModel& model, const std::vector<double>& alpha,
                  const State& u) {
  State w = u;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] != 0.0) w = model.lax_curve(static_cast<int>(i), alpha[i], w);
  return w;
}

}  // namespace wft
