#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "wft/coupling.hpp"
#include "wft/error.hpp"

using namespace wft;
using namespace wft::testing;

namespace {
Params z1(double a) { return vec({a}); }
}  // namespace

TEST_CASE("kink condition") {
  auto k = make_kink_condition(0.5);
  const State u = vec({1.0, 0.5});
  const State xi = k->evaluate(vec({0.0, 1.0}), vec({1.0, 0.0}), u);
  CHECK(xi(0) == 0.0);
  CHECK(xi(1) == doctest::Approx(-0.5 * std::sqrt(2.0) * 0.5).epsilon(1e-14));
  CHECK(xi(1) == doctest::Approx(-0.35355).epsilon(1e-5));
  CHECK(k->evaluate(vec({1.0, 0.0}), vec({1.0, 0.0}), u).norm() == 0.0);
  const State d = k->dini(vec({1.0, 0.0}), vec({0.0, 1.0}), u);
  CHECK(d(1) == doctest::Approx(-0.25));
  CHECK(k->smoothness() == Smoothness::DiniOnly);
  CHECK_THROWS_AS(k->validate_parameter(vec({1.0, 0.1})), Error);
  CHECK_THROWS_AS(make_kink_condition([](double g, const State&) { return g + 0.1; },
                                      [](const State&) { return 1.0; }),
                  Error);
}

TEST_CASE("section conditions") {
  auto m = p_system();
  const State u = vec({1.0, 0.2});
  const State P = make_section_condition(SectionVariant::P, m)->evaluate(z1(2), z1(1), u);
  CHECK(P(0) == doctest::Approx(-0.1).epsilon(1e-14));
  CHECK(P(1) == 0.0);
  const State L = make_section_condition(SectionVariant::L, m)->evaluate(z1(2), z1(1), u);
  CHECK(L(1) == doctest::Approx(-0.52).epsilon(1e-14));
  for (auto v : {SectionVariant::L, SectionVariant::p, SectionVariant::P, SectionVariant::S}) {
    auto c = make_section_condition(v, m);
    CHECK(c->evaluate(z1(1.3), z1(1.3), u).norm() <= 1e-14);
    CHECK_THROWS_AS(c->validate_parameter(z1(0.0)), Error);
  }
  // [S] and [L] differ by the pressure quadrature term.
  const State S = make_section_condition(SectionVariant::S, m)->evaluate(z1(1.2), z1(1), u);
  const State L2 = make_section_condition(SectionVariant::L, m)->evaluate(z1(1.2), z1(1), u);
  CHECK(std::abs(S(1) - L2(1)) > 1e-3);
  CHECK(S(0) == doctest::Approx(L2(0)));
}

TEST_CASE("[S] compatibility derivative") {
  auto c = make_section_condition(SectionVariant::S, p_system());
  const State u = vec({1.0, 0.2});
  const double h = 1e-5;
  const double d = (c->evaluate(z1(1 + h), z1(1), u)(1) - c->evaluate(z1(1 - h), z1(1), u)(1)) / (2 * h);
  CHECK(d == doctest::Approx(-0.04).epsilon(1e-6));
}

TEST_CASE("table derivatives") {
  auto m = p_system();
  std::mt19937_64 rng(11);
  for (auto v : {SectionVariant::L, SectionVariant::p, SectionVariant::P, SectionVariant::S}) {
    auto c = make_section_condition(v, m);
    for (int k = 0; k < 10; ++k) {
      const State u = random_gas_state(rng);
      const double a = 1.0 + 0.3 * k / 10.0;
      const double h = 1e-5 * a;
      const double fd =
          (c->evaluate(z1(a + h), z1(a), u)(1) - c->evaluate(z1(a - h), z1(a), u)(1)) / (2 * h);
      const double exact = section_derivative_formula(v, *m, a, u);
      CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("product condition") {
  auto c = make_product_condition(
      [](const Params& z, const State&) { return State(vec({z(0), 0.0})); }, 1);
  const State u = vec({1.0, 0.2});
  const State xi = c->evaluate(z1(0.7), z1(0.2), u);
  CHECK(xi(0) == doctest::Approx(0.5));
  auto flat = make_product_condition([](const Params&, const State& w) { return w; }, 1);
  CHECK(flat->evaluate(z1(3), z1(1), u).norm() == 0.0);
  const State d = c->dini(z1(0.2), z1(1.0), u);
  CHECK(d(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Dini compatibility") {
  auto m = p_system();
  const State u = vec({1.0, 0.2});
  auto check = [&](const CouplingCondition& c, const Params& z, const Params& v,
                   const std::function<Params(double)>& move) {
    double prev = 1e300;
    for (double t : {1e-2, 1e-3, 1e-4}) {
      const State lhs = c.evaluate(move(t), z, u);
      const double sig = (lhs - t * c.dini(z, v, u)).norm() / t;
      CHECK(sig <= prev * (1 + 1e-9) + 1e-12);
      prev = sig;
    }
    CHECK(prev < 1e-3);
  };
  auto k = make_kink_condition(0.5);
  const Params z = vec({1.0, 0.0});
  const Params v = vec({0.0, 1.0});
  check(*k, z, v, [&](double t) { return Params((z + t * v).normalized()); });
  for (auto var : {SectionVariant::L, SectionVariant::p, SectionVariant::P, SectionVariant::S}) {
    auto c = make_section_condition(var, m);
    check(*c, z1(1.0), z1(1.0), [](double t) { return z1(1.0 + t); });
  }
}

TEST_CASE("junction map") {
  auto m = p_system();
  auto P = make_section_condition(SectionVariant::P, m);
  const State u = vec({1.0, 0.2});
  // The doubling section exceeds the default junction radius.
  JunctionOptions wide;
  wide.z_radius = 1.5;
  CHECK_THROWS_AS(junction_map(*m, *P, z1(2), z1(1), u), Error);
  const State up = junction_map(*m, *P, z1(2), z1(1), u, wide);
  CHECK(up(1) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(up(0) == doctest::Approx(1.0150).epsilon(1e-4));
  CHECK(up(0) * up(0) + 0.01 / up(0) == doctest::Approx(1.04).epsilon(1e-12));
  CHECK(m->in_noncharacteristic_set(up));
  CHECK((junction_map(*m, *P, z1(1.5), z1(1.5), u) - u).norm() <= 1e-15);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-0.2, 0.2);
  double C = 0.0;
  for (auto var : {SectionVariant::L, SectionVariant::p, SectionVariant::P, SectionVariant::S}) {
    auto c = make_section_condition(var, m);
    for (int k = 0; k < 25; ++k) {
      const State w = random_gas_state(rng);
      const double am = 1.0 + d(rng), ap = 1.0 + d(rng);
      const State t = junction_map(*m, *c, z1(ap), z1(am), w);
      CHECK(ap * t(1) == doctest::Approx(am * w(1)).epsilon(1e-12));
      CHECK((m->flux(t) - m->flux(w) - c->evaluate(z1(ap), z1(am), w)).norm() <= 1e-12);
      if (ap != am) C = std::max(C, (t - w).norm() / std::abs(ap - am));
    }
  }
  CHECK(std::isfinite(C));
  CHECK_THROWS_AS(junction_map(*m, *P, z1(1), z1(1), vec({1.0, 2.0})), Error);
}

TEST_CASE("stationary profiles") {
  auto m = p_system();
  const State u = vec({1.0, 0.2});
  const auto same = stationary_profile(*m, 1.0, 1.0, u, 64);
  CHECK((same.state - u).norm() == 0.0);
  const auto prof = stationary_profile(*m, 1.0, 2.0, u, 64);
  CHECK(prof.state(1) == doctest::Approx(0.1).epsilon(1e-14));

  auto e = euler();
  const State w = e->from_primitive(1.0, 0.3, 1.0);
  auto invariants = [&](double a, const State& s) {
    const double rho = s(0), v = s(1) / s(0), p = e->pressure(s);
    const double rhoe = s(2) - 0.5 * rho * v * v;
    return std::pair{a * rho * v, a * v * (0.5 * rho * v * v + rhoe + p)};
  };
  const auto [m0, e0] = invariants(1.0, w);
  for (double a : {1.25, 1.5, 2.0, 0.75, 0.6}) {
    const auto r = stationary_profile_refined(*e, 1.0, a, w);
    const auto [m1, e1] = invariants(a, r.state);
    CHECK(m1 == doctest::Approx(m0).epsilon(1e-8));
    CHECK(e1 == doctest::Approx(e0).epsilon(1e-8));
  }
  CHECK_THROWS_AS(stationary_profile(*m, 1.0, 0.2, vec({1.0, 1.2}), 64), Error);
}
