#include "wft/riemann.hpp"

#include <cmath>
#include <sstream>

#include "wft/error.hpp"

namespace wft {

State WaveDecomposition::left_of(int family) const {
  const int shift = junction && family >= split ? 1 : 0;
  return states[static_cast<std::size_t>(family + shift)];
}

State WaveDecomposition::right_of(int family) const {
  const int shift = junction && family >= split ? 1 : 0;
  return states[static_cast<std::size_t>(family + shift + 1)];
}

std::vector<Wave> WaveDecomposition::waves() const {
  std::vector<Wave> out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const int f = static_cast<int>(i);
    out.push_back({f, sizes[i], speeds[i], left_of(f), right_of(f)});
  }
  return out;
}

double wave_speed(const HyperbolicModel& model, int family, double size, const State& left,
                  const State& right) {
  if (size == 0.0) return model.lambda(family, left);
  if (model.field_kind(family) == FieldKind::LinearlyDegenerate) {
    return model.lambda(family, left);
  }
  if (size > 0.0) return model.lambda(family, right);
  return model.shock_speed(left, right, family);
}

namespace {

// Evaluates the wave composition for given sizes and fills the chain of
// states. Junction inserted after family split-1 when cond is non-null.
State compose(const HyperbolicModel& model, const CouplingCondition* cond, const Params* zp,
              const Params* zm, const State& u_left, const Eigen::VectorXd& sigma,
              const JunctionOptions& jopt, std::vector<State>* chain) {
  const int n = model.dimension();
  State w = u_left;
  if (chain) {
    chain->clear();
    chain->push_back(w);
  }
  for (int i = 0; i < n; ++i) {
    if (cond && i == model.split()) {
      w = junction_map(model, *cond, *zp, *zm, w, jopt);
      if (chain) chain->push_back(w);
    }
    w = model.lax_curve(i, sigma(i), w);
    if (chain) chain->push_back(w);
  }
  return w;
}

bool recoverable(const Error& e) {
  return e.kind() == ErrorKind::Range || e.kind() == ErrorKind::Domain ||
         e.kind() == ErrorKind::JunctionSolvability || e.kind() == ErrorKind::Degeneracy;
}

WaveDecomposition solve(const HyperbolicModel& model, const CouplingCondition* cond,
                        const Params* zp, const Params* zm, const State& u_left,
                        const State& u_right, const RiemannOptions& opt) {
  model.require_domain(u_left);
  model.require_domain(u_right);
  const int n = model.dimension();
  const double scale = std::max(1.0, u_left.lpNorm<Eigen::Infinity>());
  if ((u_right - u_left).lpNorm<Eigen::Infinity>() > opt.state_radius * scale) {
    fail(ErrorKind::LargeData, "Riemann data farther apart than the admissible radius");
  }

  auto residual_at = [&](const Eigen::VectorXd& s, State* out) -> bool {
    try {
      *out = compose(model, cond, zp, zm, u_left, s, opt.junction, nullptr) - u_right;
      return out->allFinite();
    } catch (const Error& e) {
      if (cond && e.kind() == ErrorKind::JunctionSolvability && s.isZero()) throw;
      if (!recoverable(e)) throw;
      return false;
    }
  };

  Eigen::VectorXd sigma = Eigen::VectorXd::Zero(n);
  State F;
  if (!residual_at(sigma, &F)) {
    fail(ErrorKind::LargeData, "wave composition undefined at zero sizes");
  }
  double norm = F.norm();
  const double target = opt.tolerance * std::max(1.0, u_right.norm());
  int iter = 0;
  for (; iter < opt.max_iterations && norm > target; ++iter) {
    Matrix J(n, n);
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd s = sigma;
      // Step away from the origin so each column stays on one branch.
      const double h = sigma(j) < 0.0 ? -opt.fd_step : opt.fd_step;
      s(j) += h;
      State Fj;
      if (!residual_at(s, &Fj)) {
        s(j) = sigma(j) - h;
        if (!residual_at(s, &Fj)) fail(ErrorKind::LargeData, "wave composition undefined");
        J.col(j) = (F - Fj) / h;
      } else {
        J.col(j) = (Fj - F) / h;
      }
    }
    const Eigen::VectorXd step = J.partialPivLu().solve(-F);
    if (!step.allFinite()) break;
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 30; ++halving, t *= 0.5) {
      const Eigen::VectorXd trial = sigma + t * step;
      State Ft;
      if (!residual_at(trial, &Ft)) continue;
      const double nt = Ft.norm();
      if (nt < norm) {
        sigma = trial;
        F = Ft;
        norm = nt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (!(norm <= opt.accept)) {
    std::ostringstream msg;
    const Eigen::IOFormat row(17, Eigen::DontAlignCols, ", ", ", ", "", "", "(", ")");
    msg << "Riemann Newton failed, residual " << norm << " after " << iter << " iterations"
        << " for u_left " << u_left.format(row) << ", u_right " << u_right.format(row);
    if (cond) msg << ", z+ " << zp->format(row) << ", z- " << zm->format(row);
    fail(ErrorKind::LargeData, msg.str());
  }

  WaveDecomposition out;
  out.junction = cond != nullptr;
  out.split = model.split();
  out.iterations = iter;
  out.residual = norm;
  compose(model, cond, zp, zm, u_left, sigma, opt.junction, &out.states);
  out.sizes.assign(sigma.data(), sigma.data() + n);
  for (int i = 0; i < n; ++i) {
    out.speeds.push_back(wave_speed(model, i, sigma(i), out.left_of(i), out.right_of(i)));
  }
  if (cond) {
    const State& wm = out.states[static_cast<std::size_t>(model.split())];
    const State& wp = out.states[static_cast<std::size_t>(model.split() + 1)];
    out.zero_wave_strength = (*zp - *zm).norm();
    out.junction_defect =
        (model.flux(wp) - model.flux(wm) - cond->evaluate(*zp, *zm, wm)).norm();
  }
  return out;
}

}  // namespace

WaveDecomposition solve_riemann(const HyperbolicModel& model, const State& u_left,
                                const State& u_right, const RiemannOptions& options) {
  return solve(model, nullptr, nullptr, nullptr, u_left, u_right, options);
}

WaveDecomposition solve_generalized_riemann(const HyperbolicModel& model,
                                            const CouplingCondition& cond,
                                            const Params& z_plus, const Params& z_minus,
                                            const State& u_left, const State& u_right,
                                            const RiemannOptions& options) {
  return solve(model, &cond, &z_plus, &z_minus, u_left, u_right, options);
}

std::vector<double> discretize_rarefaction(double sigma, double delta_R) {
  if (!(sigma > 0.0) || !(delta_R > 0.0)) {
    fail(ErrorKind::Config, "rarefaction splitting needs positive size and step");
  }
  const auto m = static_cast<std::size_t>(std::floor(sigma / delta_R)) + 1;
  std::vector<double> out(m, sigma / static_cast<double>(m));
  // Absorb the rounding of the equal split in the last wavelet.
  double partial = 0.0;
  for (std::size_t k = 0; k + 1 < m; ++k) partial += out[k];
  out.back() = sigma - partial;
  return out;
}

State sample_riemann(const HyperbolicModel& model, const WaveDecomposition& sol, double xi) {
  const int n = static_cast<int>(sol.sizes.size());
  State u = sol.states.front();
  for (int i = 0; i < n; ++i) {
    const State& l = sol.left_of(i);
    const State& r = sol.right_of(i);
    if (sol.junction && i == sol.split) {
      // Zero-wave at xi = 0, left-continuous.
      if (xi <= 0.0) return u;
      u = l;
    }
    const bool fan = sol.sizes[static_cast<std::size_t>(i)] > 0.0 &&
                     model.field_kind(i) == FieldKind::GenuinelyNonlinear;
    if (fan) {
      const double lo = model.lambda(i, l);
      const double hi = model.lambda(i, r);
      if (xi <= lo) return l;
      if (xi < hi) return model.integral_curve(i, xi - lo, l);
      u = r;
    } else {
      if (xi <= sol.speeds[static_cast<std::size_t>(i)]) return l;
      u = r;
    }
  }
  return u;
}

}  // namespace wft
