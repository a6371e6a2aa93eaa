#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wft/coupling.hpp"
#include "wft/engine.hpp"
#include "wft/geometry.hpp"
#include "wft/model.hpp"

namespace wft {

/// Tensor bump phi(t, x) = B((t - tc) / tr) B((x - xc) / xr) with
/// B(s) = (1 - s^2)^3 on |s| < 1.
struct BumpFunction {
  double tc, tr, xc, xr;
};

/// Twelve bumps spread over the junctions of zeta, over its smooth pieces
/// and over transport regions away from the geometry, all inside ]0, horizon[.
std::vector<BumpFunction> default_bump_battery(const ZetaGeometry& zeta, double horizon);

struct WeakResidualOptions {
  int time_panels = 48;      ///< Gauss panels per bump in t
  double x_panel = 0.05;     ///< longest Gauss panel for the density term
};

/// |int int (u phi_t + f(u) phi_x) + sum_jumps int Xi phi + int int D+Xi phi d|mu||
/// for one bump. The x-integrals of the flux terms are exact.
double weak_residual(const Trajectory& traj, const HyperbolicModel& model,
                     const CouplingCondition& cond, const ZetaGeometry& zeta,
                     const BumpFunction& phi, const WeakResidualOptions& options = {});
/// Largest residual over a battery.
double weak_residual(const Trajectory& traj, const HyperbolicModel& model,
                     const CouplingCondition& cond, const ZetaGeometry& zeta,
                     const std::vector<BumpFunction>& battery,
                     const WeakResidualOptions& options = {});

/// Source term S(x, u) of u_t + f(u)_x = S for the finite-volume oracle.
using SourceTerm = std::function<State(double, const State&)>;

/// -(a'/a) (f(u) - p e_momentum) for a smooth section a = zeta(x)(0).
SourceTerm section_source(const HyperbolicModel& model, const ZetaGeometry& section);
/// (0, -alpha |Gamma''| q) along a smooth pipe with tangent zeta.
SourceTerm curvature_drag_source(double alpha, const ZetaGeometry& tangent);
/// d/dx G(zeta(x)) for a map G depending on z only.
SourceTerm product_source(std::function<State(const Params&)> G, const ZetaGeometry& zeta,
                          double fd_step = 1e-6);

struct FVOptions {
  double lo = -1.0;
  double hi = 1.0;
  int cells = 2000;
  double cfl = 0.45;
};

/// First-order finite volumes with the local Lax-Friedrichs flux and a
/// pointwise source at cell centres; transmissive boundaries.
Profile fv_oracle(const HyperbolicModel& model, const SourceTerm& source,
                  const std::function<State(double)>& datum, double horizon,
                  const FVOptions& options = {});

/// Mass balance over a window containing every front: the change of the
/// weighted mass against the defect carried by the physical and
/// non-physical fronts and the far-field flux.
struct MassBalance {
  double initial = 0.0;
  double final = 0.0;
  double front_defect = 0.0;  ///< int sum_fronts w (s [rho] - [F]) dt
  double far_field = 0.0;     ///< T (w_R F_R - w_L F_L)
  double residual = 0.0;      ///< final - initial + front_defect + far_field
};
/// weight == nullptr means unit weight; otherwise the first parameter
/// component of zeta^h (the section) is the weight.
MassBalance mass_balance(const Trajectory& traj, const HyperbolicModel& model,
                         const PiecewiseConstantZeta* weight, double lo, double hi,
                         double horizon);

/// Empirical ratios of the interaction lemmas over random patterns.
struct LemmaConstants {
  double xi_lipschitz = 0.0;        ///< |Xi(u2) - Xi(u1)| / (|dz| |du|)
  double junction_shift = 0.0;      ///< |T(u) - u| / |dz|
  double junction_linearity = 0.0;  ///< |T(u2) - T(u1) - (u2 - u1)| / (|dz| |du|)
  double size_bound_state = 0.0;    ///< |u_r - u_l| / (|sigma| + |dz|)
  double size_bound_waves = 0.0;    ///< |sigma| / (|u_r - u_l| + |dz|)
  double commutation = 0.0;         ///< |T(H(a)u) - H(a)T(u)| / (|a| |dz|)
  double interaction_left = 0.0;    ///< waves reaching the junction from the left
  double interaction_right = 0.0;   ///< waves reaching it from the right
  double commuting_defect = 0.0;    ///< max |sigma - alpha - beta| for non-approaching pairs
  int samples = 0;
  int failures = 0;
};

struct SamplerOptions {
  int samples = 500;
  std::uint64_t seed = 1;
  double state_radius = 0.02;   ///< relative perturbation of the reference state
  double wave_amplitude = 0.02;
  double z_radius = 0.1;
};

/// Draws random states, parameter pairs around z_ref and wave vectors. For
/// unit-tangent conditions pass unit_parameters so that samples are
/// normalized.
LemmaConstants interaction_estimate_sampler(const HyperbolicModel& model,
                                            const CouplingCondition& cond, const State& u_ref,
                                            const Params& z_ref, bool unit_parameters,
                                            const SamplerOptions& options = {});

/// H(alpha)(u) = H_n(alpha_n) o ... o H_1(alpha_1)(u).
State compose_lax(const HyperbolicModel& model, const std::vector<double>& alpha, const State& u);

}  // namespace wft
