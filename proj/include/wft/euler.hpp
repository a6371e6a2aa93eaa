#pragma once

#include "wft/model.hpp"

namespace wft {

/// Full Euler system, u = (rho, rho v, E), E = rho v^2 / 2 + rho e, with the
/// ideal-gas closure e(rho, s) = rho^(gamma-1) exp(s / c_v) / (gamma - 1),
/// hence p = rho^2 e_rho = (gamma - 1) rho e.
///
/// Families 0 and 2 are genuinely nonlinear, family 1 is the contact. Along
/// the contact, sigma is the density jump: H_1(sigma)(u) keeps v and p and
/// moves rho to rho + sigma.
class Euler final : public HyperbolicModel {
 public:
  explicit Euler(double gamma = 1.4, double cv = 1.0, double vacuum_floor = 1e-6,
                 int split = 1);

  std::string name() const override { return "euler"; }
  int dimension() const override { return 3; }
  std::vector<std::string> component_names() const override { return {"rho", "m", "E"}; }
  FieldKind field_kind(int family) const override;
  bool admissible(const State& u) const override;

  State flux(const State& u) const override;
  Matrix jacobian(const State& u) const override;
  std::vector<double> eigenvalues(const State& u) const override;
  Matrix right_eigenvectors(const State& u) const override;
  State lax_curve(int family, double sigma, const State& u) const override;
  State integral_curve(int family, double sigma, const State& u) const override;
  double pressure(const State& u) const override;
  double convective_momentum_flux(const State& u) const override;

  double gamma() const { return gamma_; }
  double cv() const { return cv_; }

  /// Specific internal energy e(rho, p) and entropy s(rho, p).
  double internal_energy(const State& u) const;
  double entropy(const State& u) const;
  double sound_speed(const State& u) const;

  /// Conserved state from (rho, v, p).
  State from_primitive(double rho, double v, double p) const;
  /// Conserved state from (rho, v, s).
  State from_entropy(double rho, double v, double s) const;

 private:
  State hugoniot(int family, double sigma, const State& u) const;

  double gamma_;
  double cv_;
};

}  // namespace wft
