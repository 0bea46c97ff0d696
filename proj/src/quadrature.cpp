#include "fracrom/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace fracrom {

SincRule build_rule(double alpha, double h) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw ConfigError("build_rule: alpha must be in (0,1), got " +
                      format_double(alpha));
  if (!(h > 0.0) || !(h < 1.0))
    throw ConfigError("build_rule: h must be in (0,1), got " + format_double(h));

  constexpr double pi = std::numbers::pi;
  SincRule rule;
  rule.alpha = alpha;
  rule.h = h;
  rule.zeta = 1.0 / std::log(1.0 / h);
  const double zeta2 = rule.zeta * rule.zeta;
  rule.z_plus = static_cast<Index>(std::ceil(pi * pi / (4.0 * alpha * zeta2)));
  rule.z_minus =
      static_cast<Index>(std::ceil(pi * pi / (4.0 * (1.0 - alpha) * zeta2)));

  const Index n = rule.z_minus + rule.z_plus + 1;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double wfac = rule.zeta * std::sin(alpha * pi) / pi;
  for (Index i = 0; i < n; ++i) {
    const double z = rule.zeta * static_cast<double>(i - rule.z_minus);
    rule.nodes[i] = z;
    rule.weights[i] = wfac * std::exp((1.0 - alpha) * z);
  }
  return rule;
}

SincRule training_rule(double h) { return build_rule(0.5, h); }

double scalar_fractional(const SincRule& rule, double lambda) {
  if (!(lambda > 0.0))
    throw NumericError("scalar_fractional: lambda must be > 0, got " +
                       format_double(lambda));
  constexpr double pi = std::numbers::pi;
  const double log_wfac = std::log(rule.zeta * std::sin(rule.alpha * pi) / pi);
  double sum = 0.0;
  for (Index i = 0; i < rule.size(); ++i) {
    const double z = rule.nodes[i];
    const double ez = std::exp(z);
    if (std::isfinite(ez)) {
      sum += rule.weights[i] / (lambda + ez);
    } else {
      // e^z overflowed: w_j/(lambda + e^z) ~= w_j e^{-z}, evaluated as one exp
      // so the term itself stays accurate: exp(log w_j - z).
      sum += std::exp(log_wfac + (1.0 - rule.alpha) * z - z);
    }
  }
  return sum;
}

}  // namespace fracrom
