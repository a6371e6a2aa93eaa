#include "wft/coupling.hpp"

#include <cmath>
#include <sstream>

#include "wft/error.hpp"

namespace wft {

void CouplingCondition::validate_parameter(const Params& z) const {
  if (z.size() != parameter_dimension() || !z.allFinite()) {
    fail(ErrorKind::Domain, name() + ": parameter has wrong dimension or is not finite");
  }
}

namespace {

class KinkCondition final : public CouplingCondition {
 public:
  KinkCondition(KinkDefect K, KinkSlope dK0, std::string label)
      : K_(std::move(K)), dK0_(std::move(dK0)), label_(std::move(label)) {
    if (!K_ || !dK0_) fail(ErrorKind::Config, "kink condition needs K and its slope");
    // K(0, u) must vanish; probe a grid of gas states.
    for (double rho : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      for (double q : {-1.0, -0.3, 0.0, 0.3, 1.0}) {
        State u(2);
        u << rho, q;
        if (std::abs(K_(0.0, u)) > 1e-14) {
          fail(ErrorKind::Config, label_ + ": K(0, u) does not vanish");
        }
      }
    }
  }

  std::string name() const override { return label_; }
  int parameter_dimension() const override { return 2; }
  Smoothness smoothness() const override { return Smoothness::DiniOnly; }

  void validate_parameter(const Params& z) const override {
    CouplingCondition::validate_parameter(z);
    if (std::abs(z.norm() - 1.0) > 1e-10) {
      fail(ErrorKind::Domain, label_ + ": tangent parameter is not a unit vector");
    }
  }

  State evaluate(const Params& zp, const Params& zm, const State& u) const override {
    State xi = State::Zero(u.size());
    xi(1) = K_((zp - zm).norm(), u);
    return xi;
  }

  State dini(const Params&, const Params& v, const State& u) const override {
    State d = State::Zero(u.size());
    d(1) = dK0_(u) * v.norm();
    return d;
  }

 private:
  KinkDefect K_;
  KinkSlope dK0_;
  std::string label_;
};

class SectionCondition final : public CouplingCondition {
 public:
  SectionCondition(SectionVariant variant, ModelPtr model, SectionOptions options)
      : variant_(variant), model_(std::move(model)), options_(options) {
    if (!model_) fail(ErrorKind::Config, "section condition needs a model");
    if (!(options_.floor > 0.0)) fail(ErrorKind::Config, "section floor must be positive");
  }

  std::string name() const override { return "section[" + to_string(variant_) + "]"; }
  int parameter_dimension() const override { return 1; }
  Smoothness smoothness() const override { return Smoothness::Differentiable; }

  void validate_parameter(const Params& z) const override {
    CouplingCondition::validate_parameter(z);
    if (!(z(0) >= options_.floor)) {
      fail(ErrorKind::Domain, name() + ": section below the admissible floor");
    }
  }

  State evaluate(const Params& zp, const Params& zm, const State& u) const override {
    validate_parameter(zp);
    validate_parameter(zm);
    const HyperbolicModel& m = *model_;
    const int k = m.momentum_index();
    const double ap = zp(0), am = zm(0);
    const double r = am / ap;
    State xi = (r - 1.0) * m.flux(u);
    switch (variant_) {
      case SectionVariant::L:
        break;
      case SectionVariant::p:
        xi(k) = (r * r - 1.0) * m.convective_momentum_flux(u);
        break;
      case SectionVariant::P:
        xi(k) = 0.0;
        break;
      case SectionVariant::S: {
        if (ap != am) {
          const auto prof = stationary_profile_refined(m, am, ap, u, options_.base_steps,
                                                       options_.refine_tol);
          xi(k) += prof.pressure_integral / ap;
        }
        break;
      }
    }
    return xi;
  }

  State dini(const Params& z, const Params& v, const State& u) const override {
    const HyperbolicModel& m = *model_;
    const double a = z(0);
    State d = (-v(0) / a) * m.flux(u);
    d(m.momentum_index()) = v(0) * section_derivative_formula(variant_, m, a, u);
    return d;
  }

 private:
  SectionVariant variant_;
  ModelPtr model_;
  SectionOptions options_;
};

class ProductCondition final : public CouplingCondition {
 public:
  ProductCondition(ProductMap G, int dim, ProductDerivative dG, std::string label)
      : G_(std::move(G)), dG_(std::move(dG)), dim_(dim), label_(std::move(label)) {
    if (!G_) fail(ErrorKind::Config, "product condition needs G");
    if (dim_ < 1) fail(ErrorKind::Config, "product condition needs a positive parameter dimension");
  }

  std::string name() const override { return label_; }
  int parameter_dimension() const override { return dim_; }
  Smoothness smoothness() const override { return Smoothness::Differentiable; }

  State evaluate(const Params& zp, const Params& zm, const State& u) const override {
    return G_(zp, u) - G_(zm, u);
  }

  State dini(const Params& z, const Params& v, const State& u) const override {
    if (dG_) return dG_(z, v, u);
    const double h = 1e-6 * std::max(1.0, z.norm());
    return (G_(z + h * v, u) - G_(z - h * v, u)) / (2.0 * h);
  }

 private:
  ProductMap G_;
  ProductDerivative dG_;
  int dim_;
  std::string label_;
};

}  // namespace

ConditionPtr make_kink_condition(double alpha) {
  if (!(alpha >= 0.0)) fail(ErrorKind::Config, "kink drag coefficient must be non-negative");
  return make_kink_condition(
      [alpha](double gap, const State& u) { return -alpha * gap * u(1); },
      [alpha](const State& u) { return -alpha * u(1); }, "kink");
}

ConditionPtr make_kink_condition(KinkDefect K, KinkSlope dK0, std::string label) {
  return std::make_shared<KinkCondition>(std::move(K), std::move(dK0), std::move(label));
}

SectionVariant parse_section_variant(const std::string& text) {
  if (text == "L") return SectionVariant::L;
  if (text == "p") return SectionVariant::p;
  if (text == "P") return SectionVariant::P;
  if (text == "S") return SectionVariant::S;
  fail(ErrorKind::Config, "unknown section variant '" + text + "' (expected L, p, P or S)");
}

std::string to_string(SectionVariant variant) {
  switch (variant) {
    case SectionVariant::L: return "L";
    case SectionVariant::p: return "p";
    case SectionVariant::P: return "P";
    case SectionVariant::S: return "S";
  }
  return "?";
}

ConditionPtr make_section_condition(SectionVariant variant, ModelPtr model,
                                    SectionOptions options) {
  return std::make_shared<SectionCondition>(variant, std::move(model), options);
}

ConditionPtr make_S_condition_with_profile(ModelPtr model, SectionOptions options) {
  return make_section_condition(SectionVariant::S, std::move(model), options);
}

ConditionPtr make_product_condition(ProductMap G, int parameter_dimension,
                                    ProductDerivative dG, std::string label) {
  return std::make_shared<ProductCondition>(std::move(G), parameter_dimension, std::move(dG),
                                            std::move(label));
}

double section_derivative_formula(SectionVariant variant, const HyperbolicModel& model,
                                  double a, const State& u) {
  const double conv = model.convective_momentum_flux(u);
  switch (variant) {
    case SectionVariant::L: return -(conv + model.pressure(u)) / a;
    case SectionVariant::p: return -2.0 * conv / a;
    case SectionVariant::P: return 0.0;
    case SectionVariant::S: return -conv / a;
  }
  return 0.0;
}

State junction_map(const HyperbolicModel& model, const CouplingCondition& cond,
                   const Params& z_plus, const Params& z_minus, const State& u_minus,
                   const JunctionOptions& options) {
  cond.validate_parameter(z_plus);
  cond.validate_parameter(z_minus);
  model.require_domain(u_minus);
  if (!model.in_noncharacteristic_set(u_minus)) {
    fail(ErrorKind::JunctionSolvability, "junction state is not in the non-characteristic set");
  }
  if ((z_plus - z_minus).norm() > options.z_radius) {
    fail(ErrorKind::JunctionSolvability, "parameter jump exceeds the junction radius");
  }
  const State target = model.flux(u_minus) + cond.evaluate(z_plus, z_minus, u_minus);
  double residual = 0.0;
  const State u_plus = model.invert_flux(target, u_minus, &residual);
  if (!(residual <= options.tolerance * std::max(1.0, target.norm()))) {
    std::ostringstream msg;
    msg << "junction Newton stalled with residual " << residual;
    fail(ErrorKind::JunctionSolvability, msg.str());
  }
  if (!model.in_noncharacteristic_set(u_plus)) {
    fail(ErrorKind::JunctionSolvability, "junction root is not in the non-characteristic set");
  }
  return u_plus;
}

StationaryProfile stationary_profile(const HyperbolicModel& model, double a_start,
                                     double a_end, const State& u_start, int steps) {
  if (steps < 1) fail(ErrorKind::Config, "stationary profile needs at least one step");
  if (!(a_start > 0.0) || !(a_end > 0.0)) {
    fail(ErrorKind::Domain, "stationary profile needs positive sections");
  }
  model.require_domain(u_start);
  if (!model.in_noncharacteristic_set(u_start)) {
    fail(ErrorKind::SonicTransition, "stationary profile starts outside the subsonic set");
  }
  if (a_end == a_start) return {u_start, 0.0, 0};

  const int k = model.momentum_index();
  State guess = u_start;
  auto recover = [&](const State& Y, double a) -> State {
    const State target = Y / a;
    double residual = 0.0;
    State w = model.invert_flux(target, guess, &residual);
    if (!(residual <= 1e-10 * std::max(1.0, target.norm())) ||
        !model.in_noncharacteristic_set(w)) {
      fail(ErrorKind::SonicTransition, "stationary profile reaches the sonic line");
    }
    guess = w;
    return w;
  };

  State Y = a_start * model.flux(u_start);
  const double h = (a_end - a_start) / steps;
  double integral = 0.0;
  State u = u_start;
  for (int s = 0; s < steps; ++s) {
    const double a = a_start + s * h;
    const double p1 = model.pressure(u);
    State Ys = Y;
    Ys(k) = Y(k) + 0.5 * h * p1;
    const double p2 = model.pressure(recover(Ys, a + 0.5 * h));
    Ys(k) = Y(k) + 0.5 * h * p2;
    const double p3 = model.pressure(recover(Ys, a + 0.5 * h));
    Ys(k) = Y(k) + h * p3;
    const double a_next = s + 1 == steps ? a_end : a + h;
    const double p4 = model.pressure(recover(Ys, a_next));
    const double increment = h / 6.0 * (p1 + 2.0 * p2 + 2.0 * p3 + p4);
    Y(k) += increment;
    integral += increment;
    u = recover(Y, a_next);
  }
  return {u, integral, steps};
}

StationaryProfile stationary_profile_refined(const HyperbolicModel& model, double a_start,
                                             double a_end, const State& u_start,
                                             int base_steps, double tol) {
  StationaryProfile coarse = stationary_profile(model, a_start, a_end, u_start, base_steps);
  if (a_end == a_start) return coarse;
  for (int doubling = 0; doubling < 12; ++doubling) {
    StationaryProfile fine =
        stationary_profile(model, a_start, a_end, u_start, 2 * coarse.steps);
    if (std::abs(fine.pressure_integral - coarse.pressure_integral) < tol) return fine;
    coarse = std::move(fine);
  }
  fail(ErrorKind::SonicTransition, "stationary profile refinement did not settle");
}

}  // namespace wft
