#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <algorithm>
#include <utility>

#include <boost/math/tools/toms748_solve.hpp>

#include "wft/error.hpp"

namespace wft::detail {

/// Root of a continuous function on [lo, hi] with a sign change, to full
/// double precision.
template <class F>
double bracketed_root(F&& g, double lo, double hi) {
  double glo = g(lo);
  double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0)) {
    fail(ErrorKind::Range, "root not bracketed");
  }
  std::uintmax_t iters = 200;
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 3);
  auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, tol, iters);
  return 0.5 * (a + b);
}

/// Root of g on ]x0, +inf[ when g changes sign exactly once there; the upper
/// end of the bracket is found by geometric expansion.
template <class F>
double root_above(F&& g, double x0) {
  const double g0 = g(x0);
  if (g0 == 0.0) return x0;
  double lo = x0;
  double step = std::max(1e-3, 0.1 * std::abs(x0));
  for (int k = 0; k < 200; ++k) {
    const double hi = lo + step;
    if ((g(hi) > 0.0) != (g0 > 0.0)) return bracketed_root(g, lo, hi);
    lo = hi;
    step *= 2.0;
  }
  fail(ErrorKind::Range, "curve parameter unreachable");
}

}  // namespace wft::detail
