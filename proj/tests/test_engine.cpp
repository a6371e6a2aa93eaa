#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "wft/engine.hpp"
#include "wft/error.hpp"

using namespace wft;
using namespace wft::testing;

namespace {

struct Setup {
  std::shared_ptr<const PSystem> model = p_system();
  ConditionPtr cond;
  Setup(SectionVariant v = SectionVariant::S) : cond(make_section_condition(v, model)) {}

  Engine engine(const ZetaGeometry& g, double h, double eps) const {
    EngineOptions o;
    o.epsilon = eps;
    return Engine(model, cond, build_zeta_h(g, h), o);
  }
};

InitialDatum constant_datum(const State& u) { return {u, {}, {}}; }

}  // namespace

TEST_CASE("empty evolution") {
  Setup s;
  auto e = s.engine(constant_geometry(vec({1.0})), 0.2, 0.01);
  e.initialize(constant_datum(vec({1.0, 0.2})));
  CHECK(e.fronts().empty());
  CHECK_FALSE(e.next_interaction());
  e.run(1.0);
  CHECK(e.stats().interactions == 0);
  CHECK(e.trajectory().segments.empty());
  const auto xs = std::vector<double>{-3.0, 0.0, 2.0};
  for (const State& u : e.trajectory().sample(0.5, xs)) CHECK((u - vec({1.0, 0.2})).norm() == 0.0);
}

TEST_CASE("single junction emits the generalized fan") {
  Setup s(SectionVariant::L);
  const auto g = section_steps(1.0, {0.0}, {1.1});
  auto e = s.engine(g, 0.2, 0.01);
  const State u = vec({1.0, 0.2});
  e.initialize(constant_datum(u));
  const auto sol = solve_generalized_riemann(*s.model, *s.cond, vec({1.1}), vec({1.0}), u, u);
  int zero_waves = 0;
  double left_size = 0.0, right_size = 0.0;
  for (const Front* f : e.fronts()) {
    if (f->kind == FrontKind::ZeroWave) {
      ++zero_waves;
      CHECK(f->speed == 0.0);
      CHECK(f->x0 == 0.0);
      CHECK((s.model->flux(f->right) - s.model->flux(f->left) -
             s.cond->evaluate(f->z_plus, f->z_minus, f->left)).norm() <= 1e-11);
    } else if (f->family == 0) {
      left_size += f->size;
    } else if (f->family == 1) {
      right_size += f->size;
    }
  }
  CHECK(zero_waves == 1);
  CHECK(left_size == doctest::Approx(sol.sizes[0]).epsilon(1e-12));
  CHECK(right_size == doctest::Approx(sol.sizes[1]).epsilon(1e-12));
}

TEST_CASE("Riemann datum without junctions") {
  Setup s;
  auto e = s.engine(constant_geometry(vec({1.0})), 0.2, 0.01);
  const State ul = vec({1.0, 0.2}), ur = vec({1.05, 0.15});
  e.initialize({ul, {0.0}, {ur}});
  const auto sol = solve_riemann(*s.model, ul, ur);
  double sizes[2] = {0.0, 0.0};
  for (const Front* f : e.fronts()) sizes[f->family] += f->size;
  CHECK(sizes[0] == doctest::Approx(sol.sizes[0]).epsilon(1e-12));
  CHECK(sizes[1] == doctest::Approx(sol.sizes[1]).epsilon(1e-12));
  e.run(0.5);
  CHECK(e.stats().interactions == 0);
  // Sampling exactly at a front returns its left state.
  const auto alive = e.trajectory().alive(0.3);
  REQUIRE_FALSE(alive.empty());
  const Front& f = alive.front()->front;
  const State at = e.trajectory().sample(0.3, {f.position(0.3)})[0];
  CHECK((at - f.left).norm() == 0.0);
}

TEST_CASE("approaching shocks collide at the kinematic time") {
  Setup s;
  auto e = s.engine(constant_geometry(vec({1.0})), 0.2, 1e-4);
  const State u0 = vec({1.0, 0.0});
  const State u1 = s.model->lax_curve(1, -0.05, u0);
  const State u2 = s.model->lax_curve(1, -0.05, u1);
  e.initialize({u0, {-0.5, 0.5}, {u1, u2}});
  const auto fr = e.fronts();
  REQUIRE(fr.size() >= 2);
  const double s1 = fr.front()->speed, s2 = fr.back()->speed;
  REQUIRE(s1 > s2);
  const auto ev = e.next_interaction();
  REQUIRE(ev);
  CHECK(ev->t == doctest::Approx(1.0 / (s1 - s2)).epsilon(1e-12));
}

TEST_CASE("Glimm functionals") {
  auto m = p_system();
  Front a, b, z;
  a.kind = FrontKind::ShockOrContact;
  a.family = 0;
  a.size = -0.1;
  b.kind = FrontKind::Rarefaction;
  b.family = 1;
  b.size = 0.05;
  z.kind = FrontKind::ZeroWave;
  z.size = 0.2;
  // a (left-going) left of the junction, b (right-going) right of it: nothing approaches.
  auto g = glimm_functionals({&a, &z, &b}, *m, 1.0);
  CHECK(g.V == doctest::Approx(0.35));
  CHECK(g.Q == 0.0);
  CHECK(glimm_functionals({&a}, *m, 1.0).Q == 0.0);
  Front c = a;
  c.size = -0.07;
  const auto same = glimm_functionals({&a, &c}, *m, 2.0);
  CHECK(same.Q == doctest::Approx(0.007));
  CHECK(same.Upsilon == doctest::Approx(0.17 + 2 * 0.007));
  // b moving right towards the junction, a moving left towards it.
  const auto towards = glimm_functionals({&b, &z, &a}, *m, 1.0);
  CHECK(towards.Q == doctest::Approx(0.2 * 0.05 + 0.2 * 0.1 + 0.05 * 0.1));
}

TEST_CASE("interacting junction run keeps the invariants") {
  Setup s;
  const auto g = section_steps(1.0, {-0.3, 0.2}, {1.05, 1.1});
  auto e = s.engine(g, 0.2, 0.01);
  const State u = vec({1.0, 0.2});
  e.initialize({u, {-1.0, -0.8}, {vec({1.03, 0.23}), u}});
  e.run(1.5);
  CHECK(e.stats().interactions > 0);
  CHECK(e.stats().upsilon_violations == 0);
  CHECK(e.nonphysical_strength() <= 10 * 0.01);
  for (const Front* f : e.fronts()) {
    if (f->kind != FrontKind::ZeroWave) continue;
    CHECK((s.model->flux(f->right) - s.model->flux(f->left) -
           s.cond->evaluate(f->z_plus, f->z_minus, f->left)).norm() <= 1e-10);
  }
  // Neighbouring states agree.
  const auto fr = e.fronts();
  for (std::size_t k = 1; k < fr.size(); ++k) CHECK((fr[k]->left - fr[k - 1]->right).norm() == 0.0);
}

TEST_CASE("small-BV budget") {
  Setup s;
  const auto g = section_steps(1.0, {0.0}, {1.1});
  EngineOptions o;
  o.small_bv_budget = 0.05;
  Engine e(s.model, s.cond, build_zeta_h(g, 0.2), o);
  CHECK_THROWS_AS(e.initialize(constant_datum(vec({1.0, 0.2}))), Error);
}
