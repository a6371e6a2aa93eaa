#include "wft/euler.hpp"

#include <cmath>

#include "wft/detail/roots.hpp"
#include "wft/error.hpp"

namespace wft {

Euler::Euler(double gamma, double cv, double vacuum_floor, int split)
    : HyperbolicModel(split, vacuum_floor), gamma_(gamma), cv_(cv) {
  if (!(gamma > 1.0)) fail(ErrorKind::Config, "euler: gamma must exceed 1");
  if (!(cv > 0.0)) fail(ErrorKind::Config, "euler: c_v must be positive");
  if (split < 1 || split > 2) fail(ErrorKind::Config, "euler: split must be 1 or 2");
}

FieldKind Euler::field_kind(int family) const {
  return family == 1 ? FieldKind::LinearlyDegenerate : FieldKind::GenuinelyNonlinear;
}

bool Euler::admissible(const State& u) const {
  const double kinetic = 0.5 * u(1) * u(1) / u(0);
  return u(2) - kinetic > 0.0;
}

double Euler::pressure(const State& u) const {
  require_domain(u);
  return (gamma_ - 1.0) * (u(2) - 0.5 * u(1) * u(1) / u(0));
}

double Euler::internal_energy(const State& u) const {
  return pressure(u) / ((gamma_ - 1.0) * u(0));
}

double Euler::entropy(const State& u) const {
  return cv_ * std::log(pressure(u) / std::pow(u(0), gamma_));
}

double Euler::sound_speed(const State& u) const {
  return std::sqrt(gamma_ * pressure(u) / u(0));
}

double Euler::convective_momentum_flux(const State& u) const {
  require_domain(u);
  return u(1) * u(1) / u(0);
}

State Euler::from_primitive(double rho, double v, double p) const {
  State u(3);
  u << rho, rho * v, 0.5 * rho * v * v + p / (gamma_ - 1.0);
  return u;
}

State Euler::from_entropy(double rho, double v, double s) const {
  return from_primitive(rho, v, std::pow(rho, gamma_) * std::exp(s / cv_));
}

State Euler::flux(const State& u) const {
  const double p = pressure(u);
  const double v = u(1) / u(0);
  State f(3);
  f << u(1), u(1) * v + p, (u(2) + p) * v;
  return f;
}

Matrix Euler::jacobian(const State& u) const {
  require_domain(u);
  const double g = gamma_;
  const double v = u(1) / u(0);
  const double H = (u(2) + pressure(u)) / u(0);
  Matrix j(3, 3);
  j << 0.0, 1.0, 0.0,
       0.5 * (g - 3.0) * v * v, (3.0 - g) * v, g - 1.0,
       v * (0.5 * (g - 1.0) * v * v - H), H - (g - 1.0) * v * v, g * v;
  return j;
}

std::vector<double> Euler::eigenvalues(const State& u) const {
  const double v = u(1) / u(0);
  const double c = sound_speed(u);
  return {v - c, v, v + c};
}

Matrix Euler::right_eigenvectors(const State& u) const {
  const double v = u(1) / u(0);
  const double c = sound_speed(u);
  const double H = (u(2) + pressure(u)) / u(0);
  Matrix r(3, 3);
  r << 1.0, 1.0, 1.0,
       v - c, v, v + c,
       H - v * c, 0.5 * v * v, H + v * c;
  for (int k = 0; k < 3; ++k) r.col(k).normalize();
  return r;
}

// Simple waves of families 0 and 2 keep K = p / rho^gamma and the Riemann
// invariant W = v +- 2c/(gamma-1), so lambda determines the state in closed form.
State Euler::integral_curve(int family, double sigma, const State& u) const {
  require_domain(u);
  if (family < 0 || family > 2) fail(ErrorKind::Config, "euler has families 0, 1 and 2");
  if (sigma == 0.0) return u;
  const double rho = u(0);
  const double v = u(1) / rho;
  const double p = pressure(u);
  if (family == 1) {
    const double rho_star = rho + sigma;
    if (!(rho_star > vacuum_floor())) fail(ErrorKind::Range, "contact curve reaches vacuum");
    return from_primitive(rho_star, v, p);
  }
  const double g = gamma_;
  const double c = sound_speed(u);
  const double K = p / std::pow(rho, g);
  const double target = lambda(family, u) + sigma;
  double c_star, v_star;
  if (family == 0) {
    const double W = v + 2.0 * c / (g - 1.0);
    c_star = (W - target) * (g - 1.0) / (g + 1.0);
    v_star = W - 2.0 * c_star / (g - 1.0);
  } else {
    const double W = v - 2.0 * c / (g - 1.0);
    c_star = (target - W) * (g - 1.0) / (g + 1.0);
    v_star = W + 2.0 * c_star / (g - 1.0);
  }
  if (!(c_star > 0.0)) fail(ErrorKind::Range, "rarefaction curve reaches vacuum");
  const double rho_star = std::pow(c_star * c_star / (g * K), 1.0 / (g - 1.0));
  if (!(rho_star > vacuum_floor())) fail(ErrorKind::Range, "rarefaction curve reaches vacuum");
  return from_primitive(rho_star, v_star, K * std::pow(rho_star, g));
}

// Hugoniot locus parametrized by the pressure behind the shock. Family 0
// compresses (p* > p), family 2 expands towards the right state (p* < p).
State Euler::hugoniot(int family, double sigma, const State& u) const {
  const double g = gamma_;
  const double rho = u(0);
  const double v = u(1) / rho;
  const double p = pressure(u);

  auto state_at = [&](double ps) {
    const double rs = rho * ((g + 1.0) * ps + (g - 1.0) * p) / ((g - 1.0) * ps + (g + 1.0) * p);
    const double jump = std::sqrt(std::max((ps - p) * (1.0 / rho - 1.0 / rs), 0.0));
    return from_primitive(rs, v - jump, ps);
  };
  auto speed_at = [&](double ps) {
    const State w = state_at(ps);
    const double vs = w(1) / w(0);
    const double cs = std::sqrt(g * ps / w(0));
    return family == 0 ? vs - cs : vs + cs;
  };
  const double lambda0 = speed_at(p);
  auto g_of = [&](double ps) { return (speed_at(ps) - lambda0) - sigma; };

  double ps;
  if (family == 0) {
    ps = detail::root_above(g_of, p);
  } else {
    const double floor = p * 1e-12;
    if ((g_of(floor) > 0.0) == (g_of(p) > 0.0)) {
      fail(ErrorKind::Range, "shock curve leaves the domain");
    }
    ps = detail::bracketed_root(g_of, floor, p);
  }
  const State w = state_at(ps);
  if (!in_domain(w)) fail(ErrorKind::Range, "shock curve leaves the domain");
  return w;
}

State Euler::lax_curve(int family, double sigma, const State& u) const {
  require_domain(u);
  if (family < 0 || family > 2) fail(ErrorKind::Config, "euler has families 0, 1 and 2");
  if (sigma == 0.0) return u;
  if (family == 1 || sigma > 0.0) return integral_curve(family, sigma, u);
  return hugoniot(family, sigma, u);
}

}  // namespace wft
