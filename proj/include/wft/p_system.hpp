#pragma once

#include <memory>

#include "wft/model.hpp"
#include "wft/pressure_law.hpp"

namespace wft {

/// Isentropic gas in a pipe, u = (rho, q):
///   rho_t + q_x = 0,  q_t + (q^2/rho + p(rho))_x = 0.
/// Both families are genuinely nonlinear; split = 1 (subsonic flow).
class PSystem final : public HyperbolicModel {
 public:
  explicit PSystem(std::shared_ptr<const PressureLaw> pressure,
                   double vacuum_floor = 1e-6);

  std::string name() const override { return "p-system"; }
  int dimension() const override { return 2; }
  std::vector<std::string> component_names() const override { return {"rho", "q"}; }
  FieldKind field_kind(int) const override { return FieldKind::GenuinelyNonlinear; }

  State flux(const State& u) const override;
  Matrix jacobian(const State& u) const override;
  std::vector<double> eigenvalues(const State& u) const override;
  Matrix right_eigenvectors(const State& u) const override;
  State lax_curve(int family, double sigma, const State& u) const override;
  State integral_curve(int family, double sigma, const State& u) const override;
  double pressure(const State& u) const override;
  double convective_momentum_flux(const State& u) const override;
  /// q is the first flux component, so only a scalar equation for rho remains.
  State invert_flux(const State& target, const State& guess,
                    double* residual = nullptr) const override;

  const PressureLaw& pressure_law() const { return *pressure_; }

 private:
  State hugoniot(int family, double sigma, const State& u) const;

  std::shared_ptr<const PressureLaw> pressure_;
};

}  // namespace wft
