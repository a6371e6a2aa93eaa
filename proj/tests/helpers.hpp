#pragma once

#include <memory>
#include <random>

#include "wft/euler.hpp"
#include "wft/p_system.hpp"

namespace wft::testing {

inline std::shared_ptr<const PSystem> p_system() {
  return std::make_shared<PSystem>(std::make_shared<GammaLaw>(1.0, 2.0));
}

inline std::shared_ptr<const Euler> euler() { return std::make_shared<Euler>(); }

inline State vec(std::initializer_list<double> v) {
  State s(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) s(k++) = x;
  return s;
}

/// Random subsonic p-system state near (1, 0.2).
inline State random_gas_state(std::mt19937_64& rng, double radius = 0.1) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return vec({1.0 + radius * u(rng), 0.2 + radius * u(rng)});
}

}  // namespace wft::testing
