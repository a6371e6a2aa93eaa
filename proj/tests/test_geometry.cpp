#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "wft/error.hpp"
#include "wft/geometry.hpp"

using namespace wft;
using namespace wft::testing;

TEST_CASE("measure decomposition") {
  const auto step = step_geometry(vec({0.0}), {0.0}, {vec({1.0})});
  CHECK(step.jumps().size() == 1);
  CHECK(step.density(0.5).norm() == 0.0);
  CHECK(step.value(0.0)(0) == 0.0);  // left-continuous
  CHECK(step.right_limit(0.0)(0) == 1.0);

  const ZetaGeometry ramp(vec({0.0}), {},
                          {{0.0, 1.0, [](double x) { return Params(vec({x})); },
                            [](double) { return Params(vec({1.0})); }}});
  CHECK(ramp.jumps().empty());
  CHECK(ramp.density_magnitude(0.5) == doctest::Approx(1.0));
  CHECK(ramp.value(0.25)(0) == doctest::Approx(0.25));
  CHECK(ramp.total_variation() == doctest::Approx(1.0).epsilon(1e-10));

  PlaneCurve arc{0.0, 0.0, {{CurveSegment::Kind::Arc, 1.0, 0.5, 0.0}}};
  const auto g = curved_pipe_geometry(arc);
  CHECK(g.density_magnitude(0.3) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(g.direction(0.3).dot(g.value(0.3))) <= 1e-12);  // normal direction
  CHECK(g.value(0.7).norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.total_variation() == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("pipe geometries") {
  PlaneCurve straight{0.0, 0.0, {{CurveSegment::Kind::Straight, 2.0, 0.0, 0.0}}};
  CHECK(curved_pipe_geometry(straight).total_variation() == 0.0);
  PlaneCurve kink{0.0, 0.0, {{CurveSegment::Kind::Kink, 0.0, 0.0, M_PI / 2}}};
  const auto k = curved_pipe_geometry(kink);
  REQUIRE(k.jumps().size() == 1);
  CHECK(k.jumps()[0].gap.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(tangent_geometry(vec({1.0, 0.1}), {}, {}), Error);
}

TEST_CASE("TV additivity") {
  PlaneCurve c{-1.0, 0.2,
               {{CurveSegment::Kind::Arc, 0.8, 0.4, 0.0},
                {CurveSegment::Kind::Kink, 0.0, 0.0, 0.3},
                {CurveSegment::Kind::Arc, 0.5, -0.6, 0.0}}};
  const auto g = curved_pipe_geometry(c);
  CHECK(g.total_variation() ==
        doctest::Approx(g.atomic_variation() + g.continuous_variation()).epsilon(1e-10));
  CHECK(g.continuous_variation() == doctest::Approx(0.8 * 0.4 + 0.5 * 0.6).epsilon(1e-10));
  CHECK(g.atomic_variation() == doctest::Approx(2 * std::sin(0.15)).epsilon(1e-12));
}

TEST_CASE("zeta^h construction") {
  const auto constant = constant_geometry(vec({1.0}));
  for (double h : {0.5, 0.1}) {
    const auto zh = build_zeta_h(constant, h);
    CHECK(zh.junctions().empty());
    CHECK(check_zeta_h(constant, zh).all());
  }

  const auto jump = step_geometry(vec({1.0}), {0.2}, {vec({1.3})});
  const auto zj = build_zeta_h(jump, 0.1);
  CHECK(check_zeta_h(jump, zj).all());
  const auto js = zj.junctions();
  REQUIRE(js.size() == 1);
  CHECK(js[0].retained);
  CHECK(js[0].x == 0.2);
  CHECK(js[0].minus(0) == 1.0);
  CHECK(js[0].plus(0) == 1.3);

  const ZetaGeometry linear(vec({0.0}), {},
                            {{0.0, 1.0, [](double x) { return Params(vec({x})); },
                              [](double) { return Params(vec({1.0})); }}});
  const auto zl = build_zeta_h(linear, 0.1);
  CHECK(check_zeta_h(linear, zl).all());
  CHECK(zl.total_variation() <= linear.total_variation() + 0.1);
  for (const auto& j : zl.junctions()) CHECK((j.plus - j.minus).norm() < 0.1);
  // Variation of zeta^h on any interval stays within h of the true variation.
  for (double y = -0.3; y < 1.0; y += 0.17)
    for (double x = y + 0.05; x < 1.3; x += 0.23)
      CHECK(zl.variation(y, x) <= 0.1 + linear.variation(y, x, false, false) + 1e-12);

  // Convergence in L1 on [-1/h, 1/h].
  auto l1 = [&](const ZetaGeometry& z, double h) {
    const auto a = build_zeta_h(z, h);
    double s = 0.0;
    const int N = 20000;
    const double lo = -1.0 / h, hi = 1.0 / h, dx = (hi - lo) / N;
    for (int k = 0; k < N; ++k) {
      const double x = lo + (k + 0.5) * dx;
      s += (a.evaluate(x) - z.value(x)).norm() * dx;
    }
    return s;
  };
  PlaneCurve arc{-0.5, 0.0, {{CurveSegment::Kind::Arc, 1.0, 0.4, 0.0}}};
  const auto g = curved_pipe_geometry(arc);
  double prev = l1(g, 0.2);
  for (double h : {0.1, 0.05}) {
    const double d = l1(g, h);
    CHECK(d <= prev);
    prev = d;
  }
  CHECK_THROWS_AS(build_zeta_h(g, 0.0), Error);
}
