#include <doctest.h>

#include <algorithm>
#include <random>

#include "ehmep/scaling.hpp"

using namespace ehmep;

namespace {

ScalingSeries synthetic(double a, double b, const std::vector<int>& sizes,
                        double noise = 0.0, std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  ScalingSeries s;
  for (int L : sizes) {
    double eps = 0.0;
    if (noise > 0.0) {
      // Box-Muller from raw bits, deterministic across platforms.
      const double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
      const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      eps = noise * std::sqrt(-2.0 * std::log(u1)) *
            std::cos(2.0 * 3.141592653589793 * u2);
    }
    s.samples.push_back({L, a / L + b + eps, 0.0, true});
  }
  return s;
}

}  // namespace

TEST_CASE("noiseless synthetic data is recovered to machine precision") {
  ScalingFit f = fit_scaling(synthetic(1.52, 0.332, {32, 64, 96, 128}));
  CHECK(std::abs(f.a - 1.52) < 1e-12);
  CHECK(std::abs(f.b - 0.332) < 1e-12);
  CHECK(f.residual_max < 1e-12);
  CHECK_FALSE(f.constant);
}

TEST_CASE("constant series flags a null slope") {
  ScalingFit f = fit_scaling(synthetic(0.0, 0.995, {32, 64, 96, 128}));
  CHECK(f.constant);
  CHECK(f.b == doctest::Approx(0.995).epsilon(1e-12));
}

TEST_CASE("noisy recovery within 3 standard errors") {
  // Monte Carlo over independent noise draws; the estimator must cover the
  // true slope in essentially all of them.
  const double a_true = 2.41, b_true = 0.273;
  int covered = 0;
  const int trials = 100;
  for (int i = 0; i < trials; ++i) {
    ScalingFit f = fit_scaling(
        synthetic(a_true, b_true, {24, 32, 40, 48, 64, 80, 96, 128}, 1e-3,
                  1000 + static_cast<unsigned>(i)));
    if (std::abs(f.a - a_true) <= 3.0 * f.stderr_a) ++covered;
  }
  // 3-sigma coverage with 6 degrees of freedom sits near 97-98 per cent.
  CHECK(covered >= 93);
}

TEST_CASE("fewer than 3 samples or repeated sizes are rejected") {
  ScalingSeries two = synthetic(1.0, 0.0, {32, 64});
  CHECK_THROWS(fit_scaling(two));
  ScalingSeries rep = synthetic(1.0, 0.0, {32, 64, 64});
  CHECK_THROWS(fit_scaling(rep));
  ScalingSeries small = synthetic(1.0, 0.0, {4, 8, 16});
  CHECK_THROWS(fit_scaling(small));  // below the min-L policy
  small.min_L = 4;
  CHECK_NOTHROW(fit_scaling(small));
}

TEST_CASE("scale equivariance") {
  ScalingSeries base = synthetic(2.0, 0.5, {16, 32, 64, 128});
  ScalingFit f0 = fit_scaling(base);
  ScalingSeries doubled = base;
  for (auto& s : doubled.samples) s.ep *= 2.0;  // power of two: exact
  ScalingFit f2 = fit_scaling(doubled);
  CHECK(f2.a == 2.0 * f0.a);
  CHECK(f2.b == 2.0 * f0.b);

  ScalingSeries scaled = base;
  for (auto& s : scaled.samples) s.ep *= 1.7;
  ScalingFit f17 = fit_scaling(scaled);
  CHECK(f17.a == doctest::Approx(1.7 * f0.a).epsilon(1e-12));
  CHECK(f17.b == doctest::Approx(1.7 * f0.b).epsilon(1e-12));
}

TEST_CASE("sample order does not change the fit bitwise") {
  ScalingSeries s = synthetic(3.08, 0.174, {24, 32, 48, 64, 96}, 1e-3, 7);
  ScalingFit f0 = fit_scaling(s);
  std::reverse(s.samples.begin(), s.samples.end());
  ScalingFit f1 = fit_scaling(s);
  std::swap(s.samples[0], s.samples[2]);
  ScalingFit f2 = fit_scaling(s);
  CHECK(f0.a == f1.a);
  CHECK(f0.b == f1.b);
  CHECK(f0.a == f2.a);
  CHECK(f0.stderr_a == f1.stderr_a);
}

TEST_CASE("unconverged samples are excluded") {
  ScalingSeries s = synthetic(1.0, 0.25, {32, 64, 96, 128});
  s.samples[1].converged = false;
  ScalingFit f = fit_scaling(s);
  CHECK(f.n == 3);
  CHECK(std::abs(f.a - 1.0) < 1e-12);
}

TEST_CASE("weighted variant honors per-sample scales") {
  ScalingSeries s = synthetic(1.0, 0.25, {32, 64, 96, 128});
  // A wildly off sample with a huge sigma should barely matter when weighted.
  s.samples.push_back({256, 5.0, 1000.0, true});
  ScalingFit unweighted = fit_scaling(s, false);
  ScalingFit weighted = fit_scaling(s, true);
  CHECK(std::abs(weighted.a - 1.0) < 1e-2);
  CHECK(std::abs(weighted.b - 0.25) < 1e-3);
  CHECK(std::abs(unweighted.b - 0.25) > std::abs(weighted.b - 0.25));
}
