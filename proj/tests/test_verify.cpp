#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "wft/engine.hpp"
#include "wft/verify.hpp"

using namespace wft;
using namespace wft::testing;

namespace {

Engine run(const ZetaGeometry& g, ConditionPtr cond, const InitialDatum& u0, double h, double eps,
           double T) {
  EngineOptions o;
  o.epsilon = eps;
  Engine e(p_system(), std::move(cond), build_zeta_h(g, h), o);
  e.initialize(u0);
  e.run(T);
  return e;
}

}  // namespace

TEST_CASE("weak residual of exact solutions") {
  auto m = p_system();
  auto cond = make_section_condition(SectionVariant::P, m);
  const auto flat = constant_geometry(vec({1.0}));
  const auto battery = default_bump_battery(flat, 1.0);
  CHECK(battery.size() == 12);

  const auto c = run(flat, cond, {vec({1.0, 0.2}), {}, {}}, 0.2, 0.01, 1.0);
  CHECK(weak_residual(c.trajectory(), *m, *cond, flat, battery) <= 1e-14);

  const State ul = vec({1.0, 0.2});
  const State ur = m->lax_curve(0, -0.1, ul);
  const auto s = run(flat, cond, {ul, {0.0}, {ur}}, 0.2, 0.01, 1.0);
  CHECK(s.fronts().size() == 1);
  CHECK(weak_residual(s.trajectory(), *m, *cond, flat, battery) <= 1e-3);

  BumpFunction late{0.9, 0.5, 0.0, 0.5};
  CHECK_THROWS(weak_residual(s.trajectory(), *m, *cond, flat, late));
}

TEST_CASE("finite-volume oracle") {
  auto m = p_system();
  FVOptions o;
  o.cells = 200;
  const State u = vec({1.0, 0.2});
  const Profile p = fv_oracle(*m, {}, [&](double) { return u; }, 0.5, o);
  for (const State& v : p.values) CHECK((v - u).norm() <= 1e-14);

  // Homogeneous Riemann problem against front tracking.
  const State ur = vec({1.1, 0.1});
  o.cells = 2000;
  const Profile fv = fv_oracle(*m, {}, [&](double x) { return x <= 0.0 ? u : ur; }, 0.4, o);
  auto cond = make_section_condition(SectionVariant::P, m);
  const auto ft = run(constant_geometry(vec({1.0})), cond, {u, {0.0}, {ur}}, 0.2, 1e-3, 0.4);
  const double d = l1_distance(fv, ft.trajectory().profile(0.4), -1.0, 1.0);
  CHECK(d <= 5e-2 * (ur - u).norm());

  FVOptions bad;
  bad.cfl = 0.9;
  CHECK_THROWS(fv_oracle(*m, {}, [&](double) { return u; }, 0.1, bad));
}

TEST_CASE("stationary datum drift in the oracle decreases with refinement") {
  auto m = p_system();
  const auto ramp = section_ramp(1.0, 1.2, -0.5, 0.5);
  const auto src = section_source(*m, ramp);
  const State u0 = vec({1.0, 0.2});
  auto stationary = [&](double x) {
    return stationary_profile_refined(*m, 1.0, ramp.value(x)(0), u0).state;
  };
  double prev = 1e300;
  for (int cells : {100, 200, 400}) {
    FVOptions o;
    o.lo = -1.0;
    o.hi = 1.0;
    o.cells = cells;
    const Profile p = fv_oracle(*m, src, stationary, 0.2, o);
    double drift = 0.0;
    for (int i = 0; i < cells; ++i) {
      const double x = o.lo + (i + 0.5) * (o.hi - o.lo) / cells;
      if (std::abs(x) < 0.8) drift = std::max(drift, (p.values[i] - stationary(x)).norm());
    }
    CHECK(drift < prev);
    prev = drift;
  }
}

TEST_CASE("mass balance at junctions") {
  auto m = p_system();
  auto cond = make_section_condition(SectionVariant::L, m);
  const auto g = section_steps(1.0, {-0.2, 0.3}, {1.05, 1.12});
  const State u = vec({1.0, 0.2});
  const auto e = run(g, cond, {u, {-0.6, -0.4}, {vec({1.02, 0.22}), u}}, 0.2, 0.01, 0.8);
  const auto mb = mass_balance(e.trajectory(), *m, &e.zeta_h(), -4.0, 4.0, 0.8);
  CHECK(std::abs(mb.residual) <= 1e-10);
}

TEST_CASE("interaction sampler") {
  auto m = p_system();
  auto cond = make_section_condition(SectionVariant::L, m);
  SamplerOptions o;
  o.samples = 100;
  const auto c = interaction_estimate_sampler(*m, *cond, vec({1.0, 0.2}), vec({1.0}), false, o);
  CHECK(c.samples > 50);
  CHECK(c.commuting_defect <= 1e-10);
  for (double v : {c.xi_lipschitz, c.junction_shift, c.junction_linearity, c.size_bound_state,
                   c.size_bound_waves, c.commutation, c.interaction_left, c.interaction_right}) {
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
  }
}
