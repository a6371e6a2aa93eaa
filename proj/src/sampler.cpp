#include <algorithm>
#include <cmath>
#include <random>

#include "wft/error.hpp"
#include "wft/riemann.hpp"
#include "wft/verify.hpp"

namespace wft {

namespace {

double l1(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

// Sum of |a_i b_j| over approaching pairs: a on the left, b on the right.
double approaching(const HyperbolicModel& model, const std::vector<double>& a,
                   const std::vector<double>& b) {
  double s = 0.0;
  const int n = model.dimension();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (a[i] == 0.0 || b[j] == 0.0) continue;
      const bool meet = i > j || (i == j && model.field_kind(i) == FieldKind::GenuinelyNonlinear &&
                                  (a[i] < 0.0 || b[j] < 0.0));
      if (meet) s += std::abs(a[i] * b[j]);
    }
  return s;
}

}  // namespace

LemmaConstants interaction_estimate_sampler(const HyperbolicModel& model,
                                            const CouplingCondition& cond, const State& u_ref,
                                            const Params& z_ref, bool unit_parameters,
                                            const SamplerOptions& options) {
  const int n = model.dimension();
  const int split = model.split();
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> magnitude(0.2, 1.0);

  auto draw_state = [&]() {
    State u = u_ref;
    for (int k = 0; k < n; ++k)
      u(k) += options.state_radius * std::max(1.0, std::abs(u_ref(k))) * unit(rng);
    return u;
  };
  auto draw_param = [&]() {
    Params z = z_ref;
    for (int k = 0; k < z.size(); ++k)
      z(k) += options.z_radius * std::max(1.0, std::abs(z_ref(k))) * unit(rng);
    if (unit_parameters) z.normalize();
    return z;
  };
  // Wave vector with non-zero entries on families [lo, hi).
  auto draw_waves = [&](int lo, int hi) {
    std::vector<double> a(static_cast<std::size_t>(n), 0.0);
    for (int k = lo; k < hi; ++k)
      a[k] = options.wave_amplitude * magnitude(rng) * (unit(rng) < 0.0 ? -1.0 : 1.0);
    return a;
  };
  auto junction_composite = [&](const std::vector<double>& w, const Params& zp,
                                const Params& zm, const State& u) {
    std::vector<double> left(w.begin(), w.begin() + split), right(w.begin() + split, w.end());
    left.resize(static_cast<std::size_t>(n), 0.0);
    right.insert(right.begin(), static_cast<std::size_t>(split), 0.0);
    return compose_lax(model, right, junction_map(model, cond, zp, zm, compose_lax(model, left, u)));
  };
  auto sum_diff = [&](const std::vector<double>& s, const std::vector<double>& a,
                      const std::vector<double>& b) {
    double d = 0.0;
    for (int k = 0; k < n; ++k) d += std::abs(s[k] - a[k] - b[k]);
    return d;
  };

  LemmaConstants out;
  RiemannOptions ropt;
  for (int s = 0; s < options.samples; ++s) {
    try {
      const State u = draw_state();
      if (!model.in_noncharacteristic_set(u)) {
        ++out.failures;
        continue;
      }
      const Params zm = draw_param(), zp = draw_param();
      const double dz = (zp - zm).norm();
      if (dz < 1e-8) continue;
      ++out.samples;

      State du(n);
      for (int k = 0; k < n; ++k) du(k) = options.wave_amplitude * unit(rng);
      const State u2 = u + du;
      const double ndu = du.norm();
      out.xi_lipschitz = std::max(
          out.xi_lipschitz, (cond.evaluate(zp, zm, u2) - cond.evaluate(zp, zm, u)).norm() / (dz * ndu));

      const State Tu = junction_map(model, cond, zp, zm, u);
      const State Tu2 = junction_map(model, cond, zp, zm, u2);
      out.junction_shift = std::max(out.junction_shift, (Tu - u).norm() / dz);
      out.junction_linearity =
          std::max(out.junction_linearity, (Tu2 - Tu - du).norm() / (dz * ndu));

      // Size bounds of the generalized Riemann problem.
      const std::vector<double> sigma = draw_waves(0, n);
      const State ur = junction_composite(sigma, zp, zm, u);
      const auto sol = solve_generalized_riemann(model, cond, zp, zm, u, ur, ropt);
      const double jump = (ur - u).norm();
      out.size_bound_state = std::max(out.size_bound_state, jump / (l1(sigma) + dz));
      out.size_bound_waves = std::max(out.size_bound_waves, l1(sol.sizes) / (jump + dz));

      // Commutation of T with a wave vector.
      const std::vector<double> alpha = draw_waves(0, n);
      const State lhs = junction_map(model, cond, zp, zm, compose_lax(model, alpha, u));
      const State rhs = compose_lax(model, alpha, Tu);
      out.commutation = std::max(out.commutation, (lhs - rhs).norm() / (l1(alpha) * dz));

      // Waves from the left meeting a junction fan.
      {
        const std::vector<double> a = draw_waves(0, n);
        const std::vector<double> b = draw_waves(0, n);
        const State um = compose_lax(model, a, u);
        const State r = junction_composite(b, zp, zm, um);
        const auto res = solve_generalized_riemann(model, cond, zp, zm, u, r, ropt);
        double crossing = 0.0;
        for (int k = split; k < n; ++k) crossing += std::abs(a[k]);
        const double denom = approaching(model, a, b) + dz * crossing;
        out.interaction_left = std::max(out.interaction_left, sum_diff(res.sizes, a, b) / denom);
      }
      // A junction fan meeting waves from the right.
      {
        const std::vector<double> a = draw_waves(0, n);
        const std::vector<double> b = draw_waves(0, n);
        const State up = junction_composite(a, zp, zm, u);
        const State r = compose_lax(model, b, up);
        const auto res = solve_generalized_riemann(model, cond, zp, zm, u, r, ropt);
        double crossing = 0.0;
        for (int k = 0; k < split; ++k) crossing += std::abs(b[k]);
        const double denom = approaching(model, a, b) + dz * crossing;
        out.interaction_right = std::max(out.interaction_right, sum_diff(res.sizes, a, b) / denom);
      }
      // No junction, left-going waves followed by right-going ones: nothing approaches.
      {
        const std::vector<double> a = draw_waves(0, split);
        const std::vector<double> b = draw_waves(split, n);
        const State r = compose_lax(model, b, compose_lax(model, a, u));
        const auto res = solve_riemann(model, u, r, ropt);
        out.commuting_defect = std::max(out.commuting_defect, sum_diff(res.sizes, a, b));
      }
    } catch (const Error&) {
      ++out.failures;
    }
  }
  return out;
}

}  // namespace wft
