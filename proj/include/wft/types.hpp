#pragma once

#include <Eigen/Dense>

namespace wft {

/// Conserved state u in Omega, a column vector of length n.
using State = Eigen::VectorXd;
/// Geometry parameter z in the parameter space (pipe tangent, section, ...).
using Params = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace wft
