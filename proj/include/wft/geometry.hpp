#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "wft/types.hpp"

namespace wft {

/// Atom of D zeta: zeta jumps by gap at x.
struct ZetaJump {
  double x;
  Params gap;
};

/// Absolutely continuous contribution on [a, b]: zeta gains increment(x)
/// between a and x, with increment(a) = 0 and derivative(x) its density.
struct SmoothPiece {
  double a;
  double b;
  std::function<Params(double)> increment;
  std::function<Params(double)> derivative;
};

/// A BV map zeta: R -> Z given by its value at -infinity, finitely many
/// jumps and finitely many smooth pieces. Evaluation is left-continuous.
class ZetaGeometry {
 public:
  ZetaGeometry(Params z_minus_infinity, std::vector<ZetaJump> jumps,
               std::vector<SmoothPiece> pieces);

  int dimension() const { return static_cast<int>(z_inf_.size()); }
  const std::vector<ZetaJump>& jumps() const { return jumps_; }
  const std::vector<SmoothPiece>& pieces() const { return pieces_; }

  /// zeta(x) = zeta(x-), left-continuous.
  Params value(double x) const;
  Params right_limit(double x) const;
  Params at_minus_infinity() const { return z_inf_; }
  Params at_plus_infinity() const;

  /// Density of the non-atomic part of D zeta (zero outside the pieces).
  Params density(double x) const;
  /// |density|, the density of |mu| with respect to Lebesgue measure.
  double density_magnitude(double x) const { return density(x).norm(); }
  /// Unit direction v of the non-atomic part; zero where the density vanishes.
  Params direction(double x) const;

  /// Variation on the interval with endpoints lo < hi; the flags say
  /// whether atoms sitting exactly at the endpoints count.
  double variation(double lo, double hi, bool include_lo = true, bool include_hi = true) const;
  double total_variation() const;
  double atomic_variation() const;
  double continuous_variation() const;

  /// Smallest interval containing every jump and piece.
  std::pair<double, double> support() const;

 private:
  double density_integral(double lo, double hi) const;

  Params z_inf_;
  std::vector<ZetaJump> jumps_;
  std::vector<SmoothPiece> pieces_;
};

ZetaGeometry constant_geometry(const Params& z);

/// Piecewise constant zeta: starts at z0 and takes values[k] right of positions[k].
ZetaGeometry step_geometry(const Params& z0, const std::vector<double>& positions,
                           const std::vector<Params>& values);

/// Tangent geometry zeta = Gamma' with validation that |zeta| = 1.
ZetaGeometry tangent_geometry(Params z_minus_infinity, std::vector<ZetaJump> jumps,
                              std::vector<SmoothPiece> pieces);

/// Plane pipe built from consecutive segments, starting at x_start with
/// tangent angle theta0.
struct CurveSegment {
  enum class Kind { Straight, Arc, Kink } kind;
  double length = 0.0;     ///< arc length (Straight, Arc)
  double curvature = 0.0;  ///< signed curvature (Arc)
  double angle = 0.0;      ///< turning angle (Kink)
};

struct PlaneCurve {
  double x_start = 0.0;
  double theta0 = 0.0;
  std::vector<CurveSegment> segments;
};

ZetaGeometry curved_pipe_geometry(const PlaneCurve& curve);

/// Section a(x) as a step list.
ZetaGeometry section_steps(double a0, const std::vector<double>& positions,
                           const std::vector<double>& sections);
/// Smooth cosine ramp from a0 (x <= x0) to a1 (x >= x1).
ZetaGeometry section_ramp(double a0, double a1, double x0, double x1);

/// Piecewise constant, left-continuous approximation zeta^h.
struct PiecewiseConstantZeta {
  double h = 0.0;
  std::vector<double> breakpoints;  ///< x_1 < ... < x_{N-1}
  std::vector<Params> values;       ///< values[i] on (x_i, x_{i+1}], values[0] on (-inf, x_1]
  std::vector<bool> retained;       ///< breakpoint carries a retained jump of zeta

  Params evaluate(double x) const;
  /// Variation over [lo, hi).
  double variation(double lo, double hi) const;
  double total_variation() const;

  struct Junction {
    double x;
    Params minus;
    Params plus;
    bool retained;
  };
  /// Breakpoints where the value actually changes.
  std::vector<Junction> junctions() const;
};

/// Builds zeta^h: retained jumps and the +-1/h bracket are mandatory points,
/// intervals are bisected until every construction condition holds.
PiecewiseConstantZeta build_zeta_h(const ZetaGeometry& zeta, double h);

/// Programmatic check of the construction conditions.
struct ZetaHReport {
  bool bracket = false;           ///< (i)
  bool omitted_tail = false;      ///< (ii)
  bool pre_jump_variation = false;///< (iii)
  bool open_variation = false;    ///< (iv)
  bool direction_oscillation = false;  ///< (vi)
  bool spacing = false;           ///< (vii)
  bool all() const {
    return bracket && omitted_tail && pre_jump_variation && open_variation &&
           direction_oscillation && spacing;
  }
};
ZetaHReport check_zeta_h(const ZetaGeometry& zeta, const PiecewiseConstantZeta& zh);

}  // namespace wft
