#include <algorithm>
#include <cmath>
#include <random>

#include "wft/engine.hpp"
#include "wft/error.hpp"

namespace wft {

GlimmFunctionals glimm_functionals(const std::vector<const Front*>& fronts,
                                   const HyperbolicModel& model, double C) {
  const int n = model.dimension();
  const int split = model.split();
  // Accumulators over the fronts already passed (to the left); index n is
  // the non-physical pseudo-family.
  std::vector<double> abs_sum(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<double> neg_sum(static_cast<std::size_t>(n), 0.0);
  double zero_sum = 0.0;
  double right_moving = 0.0;

  GlimmFunctionals g;
  g.C = C;
  for (const Front* f : fronts) {
    const double s = std::abs(f->size);
    g.V += s;
    switch (f->kind) {
      case FrontKind::ShockOrContact:
      case FrontKind::Rarefaction: {
        const int j = f->family;
        double faster = 0.0;
        for (int k = j + 1; k <= n; ++k) faster += abs_sum[static_cast<std::size_t>(k)];
        double q = faster;
        if (model.field_kind(j) == FieldKind::GenuinelyNonlinear) {
          q += f->size < 0.0 ? abs_sum[static_cast<std::size_t>(j)]
                             : neg_sum[static_cast<std::size_t>(j)];
        }
        if (j < split) q += zero_sum;
        g.Q += s * q;
        abs_sum[static_cast<std::size_t>(j)] += s;
        if (f->size < 0.0) neg_sum[static_cast<std::size_t>(j)] += s;
        if (j >= split) right_moving += s;
        break;
      }
      case FrontKind::NonPhysical:
        abs_sum[static_cast<std::size_t>(n)] += s;
        right_moving += s;
        break;
      case FrontKind::ZeroWave:
        g.Q += s * right_moving;
        zero_sum += s;
        break;
    }
  }
  g.Upsilon = g.V + C * g.Q;
  return g;
}

double estimate_lambda_hat(const HyperbolicModel& model, const State& reference, double radius) {
  const int n = model.dimension();
  const double scale = radius * std::max(1.0, reference.lpNorm<Eigen::Infinity>());
  constexpr int per_axis = 5;
  long total = 1;
  for (int k = 0; k < n; ++k) total *= per_axis;
  double lam = 0.0;
  for (long idx = 0; idx < total; ++idx) {
    State u = reference;
    long rest = idx;
    for (int k = 0; k < n; ++k) {
      const int c = static_cast<int>(rest % per_axis);
      rest /= per_axis;
      u(k) += scale * (2.0 * c / (per_axis - 1) - 1.0);
    }
    if (!model.in_domain(u)) continue;
    for (double l : model.eigenvalues(u)) lam = std::max(lam, std::abs(l));
  }
  for (double l : model.eigenvalues(reference)) lam = std::max(lam, std::abs(l));
  return 1.2 * lam;
}

namespace {

double sum_abs(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

}  // namespace

double presample_interaction_constant(const HyperbolicModel& model, const CouplingCondition& cond,
                                      const State& reference, const PiecewiseConstantZeta& zeta_h,
                                      const EngineOptions& options, int samples) {
  const int n = model.dimension();
  const int split = model.split();
  std::mt19937_64 rng(0x5eedULL ^ options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double amp = 0.03;
  const auto junctions = zeta_h.junctions();
  const JunctionOptions& jopt = options.riemann.junction;

  auto random_state = [&]() {
    State u = reference;
    for (int k = 0; k < n; ++k) u(k) += 0.02 * std::max(1.0, std::abs(reference(k))) * unit(rng);
    return u;
  };

  double C = 0.0;
  for (int s = 0; s < samples; ++s) {
    try {
      const State u = random_state();
      if (!model.in_noncharacteristic_set(u)) continue;
      const int pattern = s % 4;
      if (pattern == 0) {
        // Two physical waves, family i on the left approaching family j <= i.
        const int i = static_cast<int>(rng() % static_cast<unsigned>(n));
        const int j = static_cast<int>(rng() % static_cast<unsigned>(i + 1));
        double a = amp * unit(rng), b = amp * unit(rng);
        if (i == j && a >= 0.0 && b >= 0.0) a = -a;
        const State um = model.lax_curve(i, a, u);
        const State ur = model.lax_curve(j, b, um);
        const double prod = std::abs(a * b);
        if (prod < 1e-12) continue;
        const auto sol = solve_riemann(model, u, ur, options.riemann);
        C = std::max(C, (sum_abs(sol.sizes) - std::abs(a) - std::abs(b)) / prod);
        double dv;
        if (i > j) {
          const State w = model.lax_curve(i, a, model.lax_curve(j, b, u));
          dv = (ur - w).norm();
        } else {
          const State w = model.lax_curve(i, a + b, u);
          dv = std::abs(a + b) + (ur - w).norm() - std::abs(a) - std::abs(b);
        }
        C = std::max(C, dv / prod);
      } else if (!junctions.empty()) {
        const auto& J = junctions[rng() % junctions.size()];
        const double strength = (J.plus - J.minus).norm();
        if (pattern == 1) {
          // Right-going wave reaching the junction from the left.
          const int i = split + static_cast<int>(rng() % static_cast<unsigned>(n - split));
          const double a = amp * unit(rng);
          const State um = model.lax_curve(i, a, u);
          const State ur = junction_map(model, cond, J.plus, J.minus, um, jopt);
          const double prod = std::abs(a) * strength;
          if (prod < 1e-12) continue;
          const auto sol =
              solve_generalized_riemann(model, cond, J.plus, J.minus, u, ur, options.riemann);
          C = std::max(C, (sum_abs(sol.sizes) - std::abs(a)) / prod);
          const State tm = junction_map(model, cond, J.plus, J.minus, u, jopt);
          C = std::max(C, (ur - model.lax_curve(i, a, tm)).norm() / prod);
        } else if (pattern == 2) {
          // Left-going wave reaching the junction from the right.
          const int j = static_cast<int>(rng() % static_cast<unsigned>(split));
          const double b = amp * unit(rng);
          const State um = junction_map(model, cond, J.plus, J.minus, u, jopt);
          const State ur = model.lax_curve(j, b, um);
          const double prod = std::abs(b) * strength;
          if (prod < 1e-12) continue;
          const auto sol =
              solve_generalized_riemann(model, cond, J.plus, J.minus, u, ur, options.riemann);
          C = std::max(C, (sum_abs(sol.sizes) - std::abs(b)) / prod);
          const State w = junction_map(model, cond, J.plus, J.minus, model.lax_curve(j, b, u), jopt);
          C = std::max(C, (ur - w).norm() / prod);
        } else {
          // Non-physical front crossing the junction.
          State um = u;
          for (int k = 0; k < n; ++k) um(k) += 1e-3 * unit(rng);
          const State ur = junction_map(model, cond, J.plus, J.minus, um, jopt);
          const State tl = junction_map(model, cond, J.plus, J.minus, u, jopt);
          const double before = (um - u).norm();
          const double prod = before * strength;
          if (prod < 1e-12) continue;
          C = std::max(C, ((ur - tl).norm() - before) / prod);
        }
      }
    } catch (const Error&) {
      // Patterns outside the solvable range carry no information.
    }
  }
  return C;
}

}  // namespace wft
