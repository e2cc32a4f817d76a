#pragma once

// Finite-size scaling: ordinary least squares of E_p against 1/L,
//
//   E_p(L) = a / L + b,   b = E_p(L -> infinity),
//
// with standard errors from the residual variance and a "constant" flag when
// the slope is statistically indistinguishable from zero.

#include <optional>
#include <vector>

namespace ehmep {

struct ScalingSample {
  int L = 0;
  double ep = 0.0;
  double sigma = 0.0;  // optional per-sample scale (e.g. truncation error)
  bool converged = true;
};

struct ScalingSeries {
  double U = 0.0, V = 0.0;
  std::vector<ScalingSample> samples;
  int min_L = 8;  // series-membership policy; override for small-L oracles
};

struct ScalingFit {
  double a = 0.0;  // slope vs 1/L
  double b = 0.0;  // extrapolated ep
  double stderr_a = 0.0;
  double stderr_b = 0.0;
  double residual_max = 0.0;
  bool constant = false;  // |a| < 2 stderr_a
  int n = 0;
};

// Plain OLS; `weighted` switches to 1/sigma^2 weights where sigma > 0.
ScalingFit fit_scaling(const ScalingSeries& series, bool weighted = false);

}  // namespace ehmep
