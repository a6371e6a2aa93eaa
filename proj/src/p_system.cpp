#include "wft/p_system.hpp"

#include <cmath>

#include "wft/detail/roots.hpp"
#include "wft/error.hpp"

namespace wft {

PSystem::PSystem(std::shared_ptr<const PressureLaw> pressure, double vacuum_floor)
    : HyperbolicModel(1, vacuum_floor), pressure_(std::move(pressure)) {
  if (!pressure_) fail(ErrorKind::Config, "p-system needs a pressure law");
}

State PSystem::flux(const State& u) const {
  require_domain(u);
  const double rho = u(0), q = u(1);
  State f(2);
  f << q, q * q / rho + pressure_->value(rho);
  return f;
}

Matrix PSystem::jacobian(const State& u) const {
  require_domain(u);
  const double rho = u(0), v = u(1) / u(0);
  Matrix j(2, 2);
  j << 0.0, 1.0,
       pressure_->derivative(rho) - v * v, 2.0 * v;
  return j;
}

std::vector<double> PSystem::eigenvalues(const State& u) const {
  require_domain(u);
  const double v = u(1) / u(0);
  const double c = pressure_->sound_speed(u(0));
  return {v - c, v + c};
}

Matrix PSystem::right_eigenvectors(const State& u) const {
  const auto l = eigenvalues(u);
  Matrix r(2, 2);
  r << 1.0, 1.0,
       l[0], l[1];
  r.col(0).normalize();
  r.col(1).normalize();
  return r;
}

double PSystem::pressure(const State& u) const {
  require_domain(u);
  return pressure_->value(u(0));
}

double PSystem::convective_momentum_flux(const State& u) const {
  require_domain(u);
  return u(1) * u(1) / u(0);
}

// Along the integral curve of family 0, v + L(rho) is constant and lambda_0
// decreases in rho; along family 1, v - L(rho) is constant and lambda_1
// increases in rho.
State PSystem::integral_curve(int family, double sigma, const State& u) const {
  require_domain(u);
  if (sigma == 0.0) return u;
  const PressureLaw& p = *pressure_;
  const double rho0 = u(0);
  const double v0 = u(1) / rho0;
  const double sign = family == 0 ? 1.0 : -1.0;
  const double invariant = v0 + sign * p.riemann_integral(rho0);

  auto speed_at = [&](double rho) {
    const double v = invariant - sign * p.riemann_integral(rho);
    return family == 0 ? v - p.sound_speed(rho) : v + p.sound_speed(rho);
  };
  // Measured from the same evaluation at rho0 so that g(rho0) = -sigma
  // exactly, even when sigma is below the rounding of lambda.
  const double lambda0 = speed_at(rho0);
  auto g = [&](double rho) { return (speed_at(rho) - lambda0) - sigma; };

  // Density decreases when (family 0, sigma > 0) or (family 1, sigma < 0).
  const bool decreasing = (family == 0) == (sigma > 0.0);
  double rho;
  if (decreasing) {
    const double floor = vacuum_floor() * (1.0 + 1e-12);
    if ((g(floor) > 0.0) == (g(rho0) > 0.0)) {
      fail(ErrorKind::Range, "rarefaction curve reaches vacuum");
    }
    rho = detail::bracketed_root(g, floor, rho0);
  } else {
    rho = detail::root_above(g, rho0);
  }
  State w(2);
  w << rho, rho * (invariant - sign * p.riemann_integral(rho));
  return w;
}

// Hugoniot locus: v = v0 - sqrt((p - p0)(rho - rho0) / (rho rho0)), with
// rho > rho0 for family 0 and rho < rho0 for family 1 (Lax shocks).
State PSystem::hugoniot(int family, double sigma, const State& u) const {
  const PressureLaw& p = *pressure_;
  const double rho0 = u(0);
  const double v0 = u(1) / rho0;
  const double p0 = p.value(rho0);

  auto velocity = [&](double rho) {
    const double prod = (p.value(rho) - p0) * (rho - rho0) / (rho * rho0);
    return v0 - std::sqrt(std::max(prod, 0.0));
  };
  auto speed_at = [&](double rho) {
    const double v = velocity(rho);
    return family == 0 ? v - p.sound_speed(rho) : v + p.sound_speed(rho);
  };
  const double lambda0 = speed_at(rho0);
  auto g = [&](double rho) { return (speed_at(rho) - lambda0) - sigma; };

  double rho;
  if (family == 0) {
    rho = detail::root_above(g, rho0);
  } else {
    const double floor = vacuum_floor() * (1.0 + 1e-12);
    if ((g(floor) > 0.0) == (g(rho0) > 0.0)) {
      fail(ErrorKind::Range, "shock curve reaches vacuum");
    }
    rho = detail::bracketed_root(g, floor, rho0);
  }
  State w(2);
  w << rho, rho * velocity(rho);
  return w;
}

State PSystem::invert_flux(const State& target, const State& guess, double* residual) const {
  require_domain(guess);
  const PressureLaw& p = *pressure_;
  const double q = target(0);
  auto phi = [&](double rho) { return q * q / rho + p.value(rho) - target(1); };
  double rho = guess(0);
  double r = phi(rho);
  const double tol = 1e-15 * std::max(1.0, target.norm());
  for (int iter = 0; iter < 50 && std::abs(r) > tol; ++iter) {
    const double slope = p.derivative(rho) - q * q / (rho * rho);
    // Off the subsonic branch the general solver decides.
    if (!(slope > 0.0)) return HyperbolicModel::invert_flux(target, guess, residual);
    double step = -r / slope, t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 30; ++halving, t *= 0.5) {
      const double trial = rho + t * step;
      if (!(trial > vacuum_floor())) continue;
      const double rt = phi(trial);
      if (std::abs(rt) < std::abs(r)) {
        rho = trial;
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  State w(2);
  w << rho, q;
  if (residual) *residual = (flux(w) - target).norm();
  return w;
}

State PSystem::lax_curve(int family, double sigma, const State& u) const {
  require_domain(u);
  if (family < 0 || family > 1) fail(ErrorKind::Config, "p-system has families 0 and 1");
  if (sigma == 0.0) return u;
  if (sigma > 0.0) return integral_curve(family, sigma, u);
  return hugoniot(family, sigma, u);
}

}  // namespace wft
