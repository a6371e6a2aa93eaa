#include "wft/pressure_law.hpp"

#include <cmath>

#include "wft/error.hpp"

namespace wft {

double PressureLaw::sound_speed(double rho) const {
  return std::sqrt(derivative(rho));
}

namespace {

// std::pow dominates the solver profiles; small integer and half-integer
// exponents (gamma = 2, 3 and the like) are much cheaper by hand.
double power(double x, double e) {
  if (e == 0.0) return 1.0;
  if (e == 1.0) return x;
  if (e == 2.0) return x * x;
  if (e == 3.0) return x * x * x;
  if (e == 0.5) return std::sqrt(x);
  if (e == -1.0) return 1.0 / x;
  return std::pow(x, e);
}

}  // namespace

GammaLaw::GammaLaw(double kappa, double gamma) : kappa_(kappa), gamma_(gamma) {
  if (!(kappa > 0.0) || !(gamma >= 1.0)) {
    fail(ErrorKind::Config, "gamma law needs kappa > 0 and gamma >= 1");
  }
}

double GammaLaw::value(double rho) const {
  return kappa_ * power(rho, gamma_);
}

double GammaLaw::derivative(double rho) const {
  return kappa_ * gamma_ * power(rho, gamma_ - 1.0);
}

double GammaLaw::second_derivative(double rho) const {
  return kappa_ * gamma_ * (gamma_ - 1.0) * power(rho, gamma_ - 2.0);
}

double GammaLaw::riemann_integral(double rho) const {
  const double c = sound_speed(rho);
  if (gamma_ == 1.0) {
    return c * std::log(rho);
  }
  return 2.0 * c / (gamma_ - 1.0);
}

}  // namespace wft
