#include "ehmep/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ehmep {

ScalingFit fit_scaling(const ScalingSeries& series, bool weighted) {
  std::vector<ScalingSample> pts;
  for (const ScalingSample& s : series.samples) {
    if (!s.converged) continue;
    if (s.L < series.min_L)
      throw std::invalid_argument("sample below the series minimum lattice size");
    pts.push_back(s);
  }
  if (pts.size() < 3)
    throw std::invalid_argument("scaling fit needs at least 3 converged samples");
  // Sort by L so the accumulation order is independent of input order.
  std::sort(pts.begin(), pts.end(),
            [](const ScalingSample& a, const ScalingSample& b) { return a.L < b.L; });
  {
    std::set<int> ls;
    for (const auto& s : pts) ls.insert(s.L);
    if (ls.size() != pts.size())
      throw std::invalid_argument("repeated lattice size: degenerate design");
  }

  const auto n = static_cast<double>(pts.size());
  std::vector<double> w(pts.size(), 1.0);
  if (weighted) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (pts[i].sigma > 0.0) w[i] = 1.0 / (pts[i].sigma * pts[i].sigma);
  }

  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = 1.0 / static_cast<double>(pts[i].L);
    sw += w[i];
    sx += w[i] * x;
    sy += w[i] * pts[i].ep;
  }
  const double xbar = sx / sw, ybar = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = 1.0 / static_cast<double>(pts[i].L);
    sxx += w[i] * (x - xbar) * (x - xbar);
    sxy += w[i] * (x - xbar) * (pts[i].ep - ybar);
  }
  if (sxx <= 0.0) throw std::invalid_argument("degenerate design matrix");

  ScalingFit fit;
  fit.n = static_cast<int>(pts.size());
  fit.a = sxy / sxx;
  fit.b = ybar - fit.a * xbar;

  double ssr = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = 1.0 / static_cast<double>(pts[i].L);
    const double r = pts[i].ep - (fit.a * x + fit.b);
    fit.residual_max = std::max(fit.residual_max, std::abs(r));
    ssr += w[i] * r * r;
  }
  const double dof = n - 2.0;
  const double variance = dof > 0 ? ssr / dof : 0.0;
  fit.stderr_a = std::sqrt(variance / sxx);
  fit.stderr_b = std::sqrt(variance * (1.0 / sw + xbar * xbar / sxx));
  // Guard the criterion against exactly-constant data, where stderr_a = 0
  // and the slope is pure rounding noise.
  double scale = std::abs(fit.b);
  for (const auto& s : pts) scale = std::max(scale, std::abs(s.ep));
  fit.constant = std::abs(fit.a) < 2.0 * fit.stderr_a + 1e-10 * std::max(1.0, scale);
  return fit;
}

}  // namespace ehmep
