#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "ginovl/errors.hpp"
#include "ginovl/quadrature.hpp"

using namespace ginovl::quad;

TEST(Quadrature, GaussianSegment) {
  const auto r = integrate_finite([](double u) { return std::exp(-0.5 * u * u); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 0.85562439189214880, 1e-14);
  EXPECT_LE(r.err_est, 1e-10);
}

TEST(Quadrature, InverseSqrtEndpointOnHalfLine) {
  const auto r = integrate_semi_infinite(
      [](double t) { return 1.0 / (std::sqrt(t) * std::pow(1.0 + t, 1.5)); }, {},
      {1.0, EndpointHint::inverse_sqrt});
  EXPECT_NEAR(r.value, 2.0, 1e-10);
}

TEST(Quadrature, InverseSqrtOnFiniteInterval) {
  const auto r = integrate_finite([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 4.0, {},
                                  EndpointHint::inverse_sqrt);
  EXPECT_NEAR(r.value, 4.0, 1e-12);
}

TEST(Quadrature, ShiftedHalfLine) {
  const auto r = integrate_from([](double t) { return std::exp(-t); }, 2.0);
  EXPECT_NEAR(r.value, std::exp(-2.0), 1e-14);
}

TEST(Quadrature, ScaleOptionHandlesWideIntegrands) {
  const auto r = integrate_semi_infinite([](double t) { return std::exp(-t / 1e4) / 1e4; }, {}, {1e4});
  EXPECT_NEAR(r.value, 1.0, 1e-10);
}

TEST(Quadrature, GaussLegendreExactForPolynomials) {
  for (int n : {1, 2, 5, 12}) {
    const auto g = gauss_legendre(n);
    ASSERT_EQ(g.nodes.size(), static_cast<std::size_t>(n));
    EXPECT_NEAR(std::accumulate(g.weights.begin(), g.weights.end(), 0.0), 2.0, 1e-14);
    // degree 2n - 1 exact
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], 2 * n - 2);
    EXPECT_NEAR(s, 2.0 / (2 * n - 1), 1e-14);
  }
}

TEST(Quadrature, CompositeRule) {
  const auto g = composite_gauss_legendre(0.0, 3.0, 7, 6);
  ASSERT_EQ(g.nodes.size(), 42u);
  double s = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::sin(g.nodes[i]);
  EXPECT_NEAR(s, 1.0 - std::cos(3.0), 1e-14);
}

TEST(Quadrature, ExhaustedSubdivisionsThrowWithEstimate) {
  QuadSpec tight{1e-300, 1e-300, 3};
  try {
    integrate_finite([](double x) { return std::sin(50.0 * x) / (1e-3 + x); }, 0.0, 10.0, tight);
    FAIL() << "expected ConvergenceError";
  } catch (const ginovl::ConvergenceError& e) {
    EXPECT_TRUE(std::isfinite(e.best_estimate));
    EXPECT_GT(e.error_estimate, 0.0);
  }
}
