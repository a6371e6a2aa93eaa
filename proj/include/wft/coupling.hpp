#pragma once

#include <functional>
#include <memory>
#include <string>

#include "wft/model.hpp"

namespace wft {

enum class Smoothness { Differentiable, DiniOnly };

/// A coupling condition Xi(z+, z-, u-) prescribing the flux defect across a
/// junction: f(u+) - f(u-) = Xi(z+, z-, u-). Xi(z, z, u) = 0 always.
class CouplingCondition {
 public:
  virtual ~CouplingCondition() = default;

  virtual std::string name() const = 0;
  virtual int parameter_dimension() const = 0;
  virtual Smoothness smoothness() const = 0;

  virtual State evaluate(const Params& z_plus, const Params& z_minus, const State& u) const = 0;
  /// One-sided directional derivative D+_v Xi(z, z, u).
  virtual State dini(const Params& z, const Params& v, const State& u) const = 0;

  /// Throws ErrorKind::Domain for inadmissible parameters.
  virtual void validate_parameter(const Params& z) const;
};

using ConditionPtr = std::shared_ptr<const CouplingCondition>;

/// K(gap, u) for the kink model, with its derivative in the gap at 0.
using KinkDefect = std::function<double(double, const State&)>;
using KinkSlope = std::function<double(const State&)>;

/// Xi = (0, -alpha |z+ - z-| q). Parameters are unit tangents in R^2.
ConditionPtr make_kink_condition(double alpha);
/// Xi = (0, K(|z+ - z-|, u)) for a general K with K(0, .) = 0.
ConditionPtr make_kink_condition(KinkDefect K, KinkSlope dK0, std::string label = "kink");

enum class SectionVariant { L, p, P, S };
SectionVariant parse_section_variant(const std::string& text);
std::string to_string(SectionVariant variant);

struct SectionOptions {
  double floor = 1e-3;          ///< smallest admissible section
  int base_steps = 64;          ///< initial profile steps for [S]
  double refine_tol = 1e-10;    ///< [S] stops doubling below this change
};

/// Section-change conditions for the p-system and the Euler system. Mass
/// (and for Euler energy) flux scales with a-/a+; the momentum defect is
/// the variant's Xi_2.
ConditionPtr make_section_condition(SectionVariant variant, ModelPtr model,
                                    SectionOptions options = {});
/// Convenience for [S].
ConditionPtr make_S_condition_with_profile(ModelPtr model, SectionOptions options = {});

/// Xi = G(z+, u) - G(z-, u). When dG is empty the Dini derivative is
/// computed by central differences of G in z.
using ProductMap = std::function<State(const Params&, const State&)>;
using ProductDerivative = std::function<State(const Params&, const Params&, const State&)>;
ConditionPtr make_product_condition(ProductMap G, int parameter_dimension,
                                    ProductDerivative dG = {}, std::string label = "product");

struct JunctionOptions {
  double z_radius = 0.5;
  double tolerance = 1e-12;
};

/// u+ = T(z+, z-, u-), the solution of f(u+) = f(u-) + Xi(z+, z-, u-) near
/// u-. Throws ErrorKind::JunctionSolvability when Newton fails or the root
/// leaves the non-characteristic set.
State junction_map(const HyperbolicModel& model, const CouplingCondition& cond,
                   const Params& z_plus, const Params& z_minus, const State& u_minus,
                   const JunctionOptions& options = {});

/// Result of integrating the stationary section ODE from a_start to a_end.
struct StationaryProfile {
  State state;               ///< u at a_end
  double pressure_integral;  ///< int p(u(alpha)) d alpha, RK4 weights
  int steps;
};

/// Integrates d(a f(u))/da = p(u) e_momentum by RK4 in a, recovering u from
/// a f(u) at every stage. Mass (and energy) fluxes times a are therefore
/// constant to round-off. Throws ErrorKind::SonicTransition when a stage
/// leaves the subsonic set.
StationaryProfile stationary_profile(const HyperbolicModel& model, double a_start,
                                     double a_end, const State& u_start, int steps);
/// Doubles steps from base_steps until the integral changes less than tol.
StationaryProfile stationary_profile_refined(const HyperbolicModel& model, double a_start,
                                             double a_end, const State& u_start,
                                             int base_steps = 64, double tol = 1e-10);

/// Closed-form derivative of Xi_2(a+, a-, u) in a+ at a+ = a- = a, per
/// variant; the reference for tests and check-table-a.
double section_derivative_formula(SectionVariant variant, const HyperbolicModel& model,
                                  double a, const State& u);

}  // namespace wft
