#pragma once

#include <optional>
#include <vector>

#include "wft/coupling.hpp"
#include "wft/model.hpp"

namespace wft {

/// One elementary wave of a Riemann fan.
struct Wave {
  int family;
  double size;
  double speed;  ///< RH speed for shocks and contacts, lambda(right) for rarefactions
  State left;
  State right;
};

/// Solution of a (generalized) Riemann problem.
///
/// Classical case: states = w_0 ... w_n with family i joining w_i and w_{i+1}.
/// Junction case: n + 2 states; the zero-wave joins w_split and w_{split+1}
/// and family i >= split joins w_{i+1} and w_{i+2}.
struct WaveDecomposition {
  std::vector<double> sizes;
  std::vector<State> states;
  std::vector<double> speeds;
  bool junction = false;
  int split = 0;
  double zero_wave_strength = 0.0;
  double residual = 0.0;         ///< |composition(sizes) - u_right|
  double junction_defect = 0.0;  ///< |f(w+) - f(w-) - Xi| at the zero-wave
  int iterations = 0;

  State left_of(int family) const;
  State right_of(int family) const;
  /// Waves in left-to-right order (the zero-wave is not included).
  std::vector<Wave> waves() const;
};

struct RiemannOptions {
  double tolerance = 1e-13;     ///< target residual
  double accept = 1e-11;        ///< residual accepted at exit
  double fd_step = 1e-7;        ///< forward-difference step for the Jacobian
  int max_iterations = 40;
  double state_radius = 0.3;    ///< relative |u_r - u_l| beyond which data is large
  JunctionOptions junction;
};

/// Lax solver: u_right = H_n(s_n) o ... o H_1(s_1)(u_left).
WaveDecomposition solve_riemann(const HyperbolicModel& model, const State& u_left,
                                const State& u_right, const RiemannOptions& options = {});

/// Junction solver: families below split act left of the junction, then the
/// map T, then the remaining families.
WaveDecomposition solve_generalized_riemann(const HyperbolicModel& model,
                                            const CouplingCondition& cond,
                                            const Params& z_plus, const Params& z_minus,
                                            const State& u_left, const State& u_right,
                                            const RiemannOptions& options = {});

/// Speed of the single wave of the given family joining left to right.
double wave_speed(const HyperbolicModel& model, int family, double size, const State& left,
                  const State& right);

/// m = floor(sigma / delta_R) + 1 equal wavelets summing to sigma.
std::vector<double> discretize_rarefaction(double sigma, double delta_R);

/// Evaluates the self-similar solution at x/t = xi (left-continuous at
/// fronts; rarefactions are evaluated as continuous fans).
State sample_riemann(const HyperbolicModel& model, const WaveDecomposition& sol, double xi);

}  // namespace wft
