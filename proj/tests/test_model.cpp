#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "wft/error.hpp"

using namespace wft;
using namespace wft::testing;

TEST_CASE("p-system flux") {
  auto m = p_system();
  const State f0 = m->flux(vec({1.0, 0.0}));
  CHECK(f0(0) == doctest::Approx(0.0));
  CHECK(f0(1) == doctest::Approx(1.0));
  const State f = m->flux(vec({1.0, 0.2}));
  CHECK(f(0) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(f(1) == doctest::Approx(1.04).epsilon(1e-14));
  CHECK_THROWS_AS(m->flux(vec({0.0, 0.1})), Error);
}

TEST_CASE("p-system eigenvalues") {
  auto m = p_system();
  auto l0 = m->eigenvalues(vec({1.0, 0.0}));
  CHECK(l0[0] == doctest::Approx(-std::sqrt(2.0)));
  CHECK(l0[1] == doctest::Approx(std::sqrt(2.0)));
  auto l = m->eigenvalues(vec({1.0, 0.2}));
  CHECK(l[0] == doctest::Approx(-1.2142).epsilon(1e-4));
  CHECK(l[1] == doctest::Approx(1.6142).epsilon(1e-4));

  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const State u = random_gas_state(rng, 0.3);
    const auto closed = m->eigen(u);
    const auto generic = generic_eigen(*m, u);
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(closed[i].speed - generic[i].speed) < 1e-10);
      CHECK(std::abs(std::abs(closed[i].vector.dot(generic[i].vector)) - 1.0) < 1e-8);
    }
    CHECK(closed[1].speed - closed[0].speed >= 1e-8);
  }
}

TEST_CASE("non-characteristic set") {
  auto m = p_system();
  CHECK(m->in_noncharacteristic_set(vec({1.0, 0.2})));
  CHECK_FALSE(m->in_noncharacteristic_set(vec({1.0, 2.0})));
  // lambda_2 = 0 exactly: q / rho = -sqrt(2 rho) at rho = 2, q = -4.
  CHECK_FALSE(m->in_noncharacteristic_set(vec({2.0, -4.0})));
}

TEST_CASE("jacobian matches central differences") {
  std::mt19937_64 rng(5);
  auto check = [&](const HyperbolicModel& m, const State& u) {
    const Matrix J = m.jacobian(u);
    const double e = 1e-6;
    for (int j = 0; j < u.size(); ++j) {
      State up = u, um = u;
      up(j) += e;
      um(j) -= e;
      const State fd = (m.flux(up) - m.flux(um)) / (2 * e);
      CHECK((fd - J.col(j)).norm() <= 1e-5);
    }
  };
  auto p = p_system();
  auto eu = euler();
  for (int k = 0; k < 100; ++k) {
    check(*p, random_gas_state(rng, 0.3));
    std::uniform_real_distribution<double> d(-0.1, 0.1);
    check(*eu, eu->from_primitive(1.0 + d(rng), 0.2 + d(rng), 1.0 + d(rng)));
  }
}

TEST_CASE("Lax curves") {
  auto m = p_system();
  const State u = vec({1.0, 0.2});
  for (int i = 0; i < 2; ++i) {
    CHECK((m->lax_curve(i, 0.0, u) - u).norm() == 0.0);
    // Tangency: dH/dsigma = r / (grad lambda . r).
    const double h = 1e-6;
    const State d = (m->lax_curve(i, h, u) - m->lax_curve(i, -h, u)) / (2 * h);
    const State r = m->right_eigenvectors(u).col(i);
    const double lp = m->lambda(i, u + 1e-7 * r), lm = m->lambda(i, u - 1e-7 * r);
    const double dl = (lp - lm) / 2e-7;
    CHECK((d - r / dl).norm() <= 1e-6);
    // Rarefaction round trip.
    for (double s : {0.02, 0.05, 0.1}) {
      const State w = m->integral_curve(i, -s, m->integral_curve(i, s, u));
      CHECK((w - u).norm() <= 1e-8);
      CHECK(m->lambda(i, m->lax_curve(i, s, u)) - m->lambda(i, u) == doctest::Approx(s).epsilon(1e-10));
    }
    // Hugoniot branch satisfies Rankine-Hugoniot.
    for (double s : {-0.01, -0.05, -0.1}) {
      const State w = m->lax_curve(i, s, u);
      const double sp = m->shock_speed(u, w, i);
      CHECK((m->flux(w) - m->flux(u) - sp * (w - u)).norm() <= 1e-10);
    }
  }
  const State ul = vec({1.0, 0.0});
  const State w = m->lax_curve(0, -0.1, ul);
  CHECK(m->shock_speed(ul, w, 0) < m->lambda(0, ul));
  CHECK(m->shock_speed(ul, ul, 0) == doctest::Approx(m->lambda(0, ul)));
}

TEST_CASE("Euler basics") {
  auto m = euler();
  const State u = m->from_primitive(1.0, 0.0, 1.0);
  const State f = m->flux(u);
  CHECK(std::abs(f(0)) < 1e-15);
  CHECK(f(1) == doctest::Approx(m->pressure(u)));
  CHECK(std::abs(f(2)) < 1e-15);
  // Contact: speed equals v.
  const State ul = m->from_primitive(1.0, 0.1, 1.0);
  const State ur = m->lax_curve(1, 0.05, ul);
  CHECK(m->shock_speed(ul, ur, 1) == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(m->pressure(ur) == doctest::Approx(1.0).epsilon(1e-12));
  for (int i : {0, 2}) {
    const State w = m->lax_curve(i, -0.05, ul);
    const double s = m->shock_speed(ul, w, i);
    CHECK((m->flux(w) - m->flux(ul) - s * (w - ul)).norm() <= 1e-10);
    const State back = m->integral_curve(i, -0.05, m->integral_curve(i, 0.05, ul));
    CHECK((back - ul).norm() <= 1e-8);
  }
}

TEST_CASE("pressure law convexity") {
  GammaLaw p(1.0, 2.0);
  for (double rho = 0.1; rho < 5.0; rho += 0.1) {
    CHECK(p.derivative(rho) >= 0.0);
    CHECK(p.second_derivative(rho) >= 0.0);
  }
}
