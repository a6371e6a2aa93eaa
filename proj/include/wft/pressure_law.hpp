#pragma once

#include <memory>

namespace wft {

/// Barotropic pressure law p(rho) with p' >= 0 and p'' >= 0.
class PressureLaw {
 public:
  virtual ~PressureLaw() = default;

  virtual double value(double rho) const = 0;
  virtual double derivative(double rho) const = 0;
  virtual double second_derivative(double rho) const = 0;

  /// c(rho) = sqrt(p'(rho)).
  double sound_speed(double rho) const;

  /// Antiderivative of c(rho)/rho, used by the Riemann invariants v +- L(rho).
  virtual double riemann_integral(double rho) const = 0;
};

/// p(rho) = kappa * rho^gamma, gamma >= 1.
class GammaLaw final : public PressureLaw {
 public:
  GammaLaw(double kappa = 1.0, double gamma = 2.0);

  double value(double rho) const override;
  double derivative(double rho) const override;
  double second_derivative(double rho) const override;
  double riemann_integral(double rho) const override;

  double kappa() const { return kappa_; }
  double gamma() const { return gamma_; }

 private:
  double kappa_;
  double gamma_;
};

}  // namespace wft
