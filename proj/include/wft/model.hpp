#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wft/types.hpp"

namespace wft {

enum class FieldKind { GenuinelyNonlinear, LinearlyDegenerate };

struct EigenPair {
  double speed;
  State vector;  ///< unit right eigenvector
};

/// A strictly hyperbolic system u_t + f(u)_x = 0 on a domain Omega.
///
/// Families are indexed from 0. The split index is the number of families
/// that propagate to the left in the non-characteristic set, i.e. the set
/// where lambda_{split-1}(u) < 0 < lambda_{split}(u).
///
/// Lax curves H_i(sigma)(u) are parametrized by the change of the
/// characteristic speed, sigma = lambda_i(H_i(sigma)(u)) - lambda_i(u), on
/// genuinely nonlinear families: sigma > 0 is the rarefaction branch and
/// sigma < 0 the Hugoniot branch. Both branches share this parametrization,
/// which glues them with second-order contact at sigma = 0.
///
/// Models are immutable after construction and may be shared across threads.
class HyperbolicModel {
 public:
  virtual ~HyperbolicModel() = default;

  virtual std::string name() const = 0;
  virtual int dimension() const = 0;
  virtual std::vector<std::string> component_names() const = 0;
  virtual FieldKind field_kind(int family) const = 0;
  int split() const { return split_; }

  /// Density component of u; used by the vacuum guard.
  virtual double density(const State& u) const { return u(0); }
  double vacuum_floor() const { return vacuum_floor_; }
  /// Model-specific admissibility beyond the vacuum guard.
  virtual bool admissible(const State&) const { return true; }

  bool in_domain(const State& u) const;
  /// Throws ErrorKind::Domain when u is outside Omega.
  void require_domain(const State& u) const;

  virtual State flux(const State& u) const = 0;
  virtual Matrix jacobian(const State& u) const = 0;

  /// Closed-form characteristic speeds, increasing.
  virtual std::vector<double> eigenvalues(const State& u) const = 0;
  /// Unit right eigenvectors as columns, in family order.
  virtual Matrix right_eigenvectors(const State& u) const = 0;

  /// Speeds and eigenvectors; throws ErrorKind::Degeneracy when two speeds
  /// are closer than 1e-8.
  std::vector<EigenPair> eigen(const State& u) const;
  double lambda(int family, const State& u) const;

  /// lambda_{split-1}(u) < 0 < lambda_{split}(u), strictly.
  bool in_noncharacteristic_set(const State& u) const;

  /// H_i(sigma)(u). Throws ErrorKind::Range when the curve leaves Omega.
  virtual State lax_curve(int family, double sigma, const State& u) const = 0;

  /// The integral curve of r_i through u with the same parametrization,
  /// defined for both signs of sigma. Equal to lax_curve for sigma >= 0 on
  /// genuinely nonlinear families and for all sigma on degenerate ones.
  virtual State integral_curve(int family, double sigma, const State& u) const = 0;

  /// Scalar pressure p(u).
  virtual double pressure(const State& u) const = 0;
  /// Index of the momentum component (where the pressure enters the flux).
  int momentum_index() const { return 1; }
  /// Convective part of the momentum flux, rho v^2.
  virtual double convective_momentum_flux(const State& u) const = 0;

  /// Solves f(w) = target for w by damped Newton started at guess.
  /// Returns the root and writes the final residual norm.
  virtual State invert_flux(const State& target, const State& guess,
                            double* residual = nullptr) const;

  /// Rankine-Hugoniot speed of the jump (left, right) in the least-squares
  /// sense; lambda_family(left) for a vanishing jump. Throws
  /// ErrorKind::Inconsistency when the residual exceeds tol.
  double shock_speed(const State& left, const State& right, int family,
                     double tol = 1e-8) const;

 protected:
  HyperbolicModel(int split, double vacuum_floor)
      : split_(split), vacuum_floor_(vacuum_floor) {}

 private:
  int split_;
  double vacuum_floor_;
};

using ModelPtr = std::shared_ptr<const HyperbolicModel>;

/// Eigen-decomposition of the numerical Jacobian by a general eigensolver;
/// an independent check of the closed forms.
std::vector<EigenPair> generic_eigen(const HyperbolicModel& model, const State& u);

/// Box in state space around a reference state. Trajectories report when
/// they leave it.
struct StateBox {
  State center;
  double radius = 0.3;

  bool contains(const State& u) const;
};

}  // namespace wft
