#include "wft/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wft/error.hpp"

namespace wft {

namespace {

std::string describe(const State& u) {
  std::ostringstream out;
  out << "(";
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    out << (k ? ", " : "") << u(k);
  }
  out << ")";
  return out.str();
}

}  // namespace

bool HyperbolicModel::in_domain(const State& u) const {
  if (u.size() != dimension()) return false;
  if (!u.allFinite()) return false;
  return density(u) > vacuum_floor_ && admissible(u);
}

void HyperbolicModel::require_domain(const State& u) const {
  if (u.size() != dimension()) {
    fail(ErrorKind::Domain, "state has wrong dimension for " + name());
  }
  if (!in_domain(u)) {
    fail(ErrorKind::Domain, "state " + describe(u) + " outside the domain of " + name());
  }
}

std::vector<EigenPair> HyperbolicModel::eigen(const State& u) const {
  require_domain(u);
  const auto speeds = eigenvalues(u);
  const Matrix r = right_eigenvectors(u);
  std::vector<EigenPair> out;
  out.reserve(speeds.size());
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    if (i > 0 && !(speeds[i] - speeds[i - 1] >= 1e-8)) {
      fail(ErrorKind::Degeneracy, "coincident characteristic speeds at " + describe(u));
    }
    out.push_back({speeds[i], r.col(static_cast<Eigen::Index>(i))});
  }
  return out;
}

double HyperbolicModel::lambda(int family, const State& u) const {
  return eigenvalues(u)[static_cast<std::size_t>(family)];
}

bool HyperbolicModel::in_noncharacteristic_set(const State& u) const {
  require_domain(u);
  const auto speeds = eigenvalues(u);
  return speeds[static_cast<std::size_t>(split_ - 1)] < 0.0 &&
         speeds[static_cast<std::size_t>(split_)] > 0.0;
}

State HyperbolicModel::invert_flux(const State& target, const State& guess,
                                   double* residual) const {
  State w = guess;
  require_domain(w);
  State r = flux(w) - target;
  double norm = r.norm();
  const double scale = std::max(1.0, target.norm());
  for (int iter = 0; iter < 50 && norm > 1e-15 * scale; ++iter) {
    const State step = jacobian(w).partialPivLu().solve(-r);
    if (!step.allFinite()) break;
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 30; ++halving, t *= 0.5) {
      const State trial = w + t * step;
      if (!in_domain(trial)) continue;
      const State rt = flux(trial) - target;
      const double nt = rt.norm();
      if (nt < norm) {
        w = trial;
        r = rt;
        norm = nt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (residual) *residual = norm;
  return w;
}

double HyperbolicModel::shock_speed(const State& left, const State& right, int family,
                                    double tol) const {
  const State du = right - left;
  const double du2 = du.squaredNorm();
  if (du2 < 1e-28) {
    return lambda(family, left);
  }
  const State df = flux(right) - flux(left);
  const double s = df.dot(du) / du2;
  const double res = (df - s * du).norm();
  if (res > tol * std::max(1.0, df.norm())) {
    std::ostringstream msg;
    msg << "states " << describe(left) << " and " << describe(right)
        << " violate Rankine-Hugoniot (residual " << res << ")";
    fail(ErrorKind::Inconsistency, msg.str());
  }
  return s;
}

std::vector<EigenPair> generic_eigen(const HyperbolicModel& model, const State& u) {
  Eigen::EigenSolver<Matrix> solver(model.jacobian(u));
  const auto values = solver.eigenvalues();
  const auto vectors = solver.eigenvectors();
  std::vector<EigenPair> out;
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    State v = vectors.col(k).real();
    v.normalize();
    // Sign convention shared with the closed forms: first nonzero component positive.
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      if (std::abs(v(j)) > 1e-12) {
        if (v(j) < 0) v = -v;
        break;
      }
    }
    out.push_back({values(k).real(), v});
  }
  std::sort(out.begin(), out.end(),
            [](const EigenPair& a, const EigenPair& b) { return a.speed < b.speed; });
  return out;
}

bool StateBox::contains(const State& u) const {
  if (center.size() != u.size()) return false;
  return (u - center).lpNorm<Eigen::Infinity>() <= radius * std::max(1.0, center.lpNorm<Eigen::Infinity>());
}

}  // namespace wft
