#pragma once

#include <vector>

#include "fracrom/common.hpp"

namespace fracrom {

// Sinc quadrature rule for the fractional-power integral representation
//   lambda^{-alpha} = (sin(alpha pi)/pi) * Int e^{(1-alpha)z} / (lambda + e^z) dz,
// discretized on the equispaced nodes z_j = zeta*j, -Z_- <= j <= Z_+ with
//   zeta = 1/log(1/h),
//   Z_+  = ceil(pi^2 / (4 alpha  zeta^2)),
//   Z_-  = ceil(pi^2 / (4(1-alpha) zeta^2)),
//   w_j  = (zeta sin(alpha pi)/pi) e^{(1-alpha) z_j}.
// The step is tied to the FEM mesh spacing h so the quadrature error
// (~ h^{pi^2/4}) tracks the spatial discretization error.
struct SincRule {
  double alpha = 0.5;
  double h = 0.0;
  double zeta = 0.0;
  Index z_minus = 0;  // Z_-
  Index z_plus = 0;   // Z_+
  std::vector<double> nodes;    // z_j, ascending (j = -Z_- .. Z_+)
  std::vector<double> weights;  // w_j, same order

  Index size() const { return static_cast<Index>(nodes.size()); }
};

// alpha in (0,1), h in (0,1); throws ConfigError otherwise.
SincRule build_rule(double alpha, double h);

// The alpha = 0.5 rule fixing the training shift set (both limits become
// ceil(pi^2 / (2 zeta^2))).
SincRule training_rule(double h);

// Sum_j w_j / (lambda + e^{z_j}) ~= lambda^{-alpha}; lambda must be > 0.
// Terms whose e^{z_j} would overflow are evaluated in log space.
double scalar_fractional(const SincRule& rule, double lambda);

}  // namespace fracrom
