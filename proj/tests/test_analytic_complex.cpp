#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ginovl/analytic_complex.hpp"
#include "ginovl/errors.hpp"
#include "ginovl/quadrature.hpp"

using namespace ginovl::cplx;
namespace quad = ginovl::quad;
using std::numbers::pi;

namespace {

double unscaled(double field, const CoeffBundle& b) { return field * std::exp(b.log_scale); }

double integrate_t(int n, double a) {
  const ComplexJpdAtModulus f(n, a);
  return quad::integrate_semi_infinite([&](double t) { return f(t); }, {},
                                       {static_cast<double>(n), quad::EndpointHint::inverse_sqrt})
      .value;
}

}  // namespace

TEST(Coeffs, ZeroArgument) {
  const auto b2 = coeffs(2, 0.0);
  EXPECT_NEAR(unscaled(b2.d1, b2), 1.0, 1e-14);
  EXPECT_NEAR(unscaled(b2.d2, b2), 4.0, 1e-14);
  EXPECT_NEAR(unscaled(b2.D1, b2), 2.0, 1e-14);
  const auto b3 = coeffs(3, 0.0);
  EXPECT_NEAR(unscaled(b3.d1, b3), 2.0, 1e-14);
  EXPECT_NEAR(unscaled(b3.D1, b3), 12.0, 1e-13);
}

TEST(Coeffs, MatchDifferenceOfGammaProducts) {
  // d1 = G(N-1)G(N+1) - G(N)^2, d2 = G(N-1)G(N+2) - G(N)G(N+1), G(n) = Gamma(n, a)
  auto G = [](int n, double a) {
    long double term = std::exp(-static_cast<long double>(a));
    long double s = 0;
    for (int k = 0; k < n; ++k) {
      s += term;
      term *= a / (k + 1);
    }
    return static_cast<long double>(std::tgamma(double(n))) * s;
  };
  for (int n : {2, 4, 7}) {
    for (double a : {0.3, 2.0, 6.5}) {
      const auto b = coeffs(n, a);
      const long double d1 = G(n - 1, a) * G(n + 1, a) - G(n, a) * G(n, a);
      const long double d2 = G(n - 1, a) * G(n + 2, a) - G(n, a) * G(n + 1, a);
      EXPECT_NEAR(unscaled(b.d1, b) / double(d1), 1.0, 1e-9) << n << " " << a;
      EXPECT_NEAR(unscaled(b.d2, b) / double(d2), 1.0, 1e-9) << n << " " << a;
    }
  }
}

TEST(Coeffs, NonNegativeAcrossGrid) {
  for (int n = 2; n <= 90; n += 11) {
    for (double r : {0.0, 0.5, 0.95, 1.0, 1.05, 1.5}) {
      const auto b = coeffs(n, r * r * n);
      EXPECT_GE(b.d1, 0.0);
      EXPECT_GE(b.d2, 0.0);
      EXPECT_TRUE(std::isfinite(b.log_scale));
    }
  }
}

TEST(ComplexJpd, ReferenceValues) {
  EXPECT_NEAR(jpd_complex({2, 1.0, 0.0}), 1.0 / (4 * pi), 1e-15);
  EXPECT_NEAR(jpd_complex_zero(2, 1.0), 1.0 / (4 * pi), 1e-15);
  EXPECT_NEAR(jpd_complex_zero(2, 1e-12), 2.0 / pi, 1e-10);
  const struct {
    int n;
    double r;
    double value;
  } cases[] = {{2, 0.3, 0.07192844442}, {2, 0.7, 0.03842438123}, {2, 0.95, 0.01705091096},
               {5, 0.7, 0.1341916376},  {12, 0.95, 0.09593456093}};
  for (const auto& c : cases) {
    const double a = c.r * c.r * c.n;
    EXPECT_NEAR(jpd_complex({c.n, 1.0, a}) / c.value, 1.0, 1e-9) << c.n << " " << c.r;
  }
}

TEST(ComplexJpd, NormalizesToDensity) {
  EXPECT_NEAR(integrate_t(3, 1.0), 0.29274915762159580, 1e-10);
  for (int n : {2, 6, 12}) {
    for (double r : {0.0, 0.5, 0.95}) {
      const double a = r * r * n;
      EXPECT_NEAR(integrate_t(n, a) / density_complex(n, a), 1.0, 1e-6) << n << " " << r;
    }
  }
}

TEST(ComplexJpd, ZeroCollapse) {
  for (int n : {2, 3, 10, 40}) {
    for (double t : {1e-3, 0.5, 7.0, 400.0}) {
      EXPECT_NEAR(jpd_complex({n, t, 0.0}) / jpd_complex_zero(n, t), 1.0, 1e-12) << n << " " << t;
    }
  }
}

TEST(ComplexJpd, InverseCubeTail) {
  const ComplexJpdAtModulus f(5, 1.7);
  EXPECT_NEAR(f(2e6) / f(1e6), 0.125, 0.00125);
}

TEST(ComplexJpd, DomainErrors) {
  EXPECT_THROW(jpd_complex({1, 1.0, 0.0}), ginovl::DomainError);
  EXPECT_THROW(jpd_complex({3, 0.0, 0.0}), ginovl::DomainError);
  EXPECT_THROW(jpd_complex({3, 1.0, -1.0}), ginovl::DomainError);
  EXPECT_THROW(coeffs(1, 0.0), ginovl::DomainError);
  EXPECT_THROW(density_complex(0, 0.0), ginovl::DomainError);
}

TEST(ComplexDensity, Values) {
  EXPECT_NEAR(density_complex(7, 0.0), 1.0 / pi, 1e-15);
  EXPECT_NEAR(density_complex(1, 1.0), std::exp(-1.0) / pi, 1e-16);
  EXPECT_NEAR(density_complex(10, 25.0) / 7.049820351333888e-05, 1.0, 1e-12);
}

TEST(ComplexBulk, ValuesAndFirstMoment) {
  EXPECT_NEAR(jpd_complex_bulk(ComplexScalingPoint::bulk(1.0, 0.0)), std::exp(-1.0) / pi, 1e-15);
  EXPECT_EQ(jpd_complex_bulk(ComplexScalingPoint::bulk(1.0, 1.1)), 0.0);
  for (double w : {0.0, 0.5, 0.8}) {
    const auto m = quad::integrate_semi_infinite(
        [&](double s) { return s * jpd_complex_bulk(ComplexScalingPoint::bulk(s, w)); });
    EXPECT_NEAR(m.value, (1 - w * w) / pi, 1e-9);
  }
}

TEST(ComplexBulk, FiniteNConvergesMonotonically) {
  for (double w : {0.0, 0.5}) {
    double prev = INFINITY;
    for (int n : {10, 20, 40}) {
      double err = 0.0;
      for (double s : {0.2, 0.5, 1.0, 3.0}) {
        const double fin = n * jpd_complex({n, n * s, n * w * w});
        err = std::max(err, std::abs(fin - jpd_complex_bulk(ComplexScalingPoint::bulk(s, w))));
      }
      EXPECT_LT(err, prev) << n << " " << w;
      prev = err;
    }
  }
}

TEST(ComplexEdge, Values) {
  EXPECT_NEAR(jpd_complex_edge(ComplexScalingPoint::edge(1.0, 0.0)), 0.069238039069474949, 1e-14);
  EXPECT_NEAR(density_complex_edge(0.0), 1.0 / (2 * pi), 1e-16);
  EXPECT_NEAR(density_complex_edge(-30.0), 1.0 / pi, 1e-15);
  EXPECT_NEAR(density_complex_edge(1.0), 0.0072415919110911434, 1e-16);
  EXPECT_EQ(jpd_complex_edge(ComplexScalingPoint::edge(1.0, 40.0)), 0.0);
  EXPECT_DOUBLE_EQ(ComplexScalingPoint::edge(0.5, 0.2).big_delta(), 0.8);
}

TEST(ComplexEdge, IntegratesToEdgeDensity) {
  const struct {
    double delta, value;
  } cases[] = {{-1.0, 0.31106829427269953}, {0.0, 1.0 / (2 * pi)}, {0.5, 0.050501535821382502}, {1.0, 0.0072415919110911434}};
  for (const auto& c : cases) {
    const auto r = quad::integrate_semi_infinite(
        [&](double s) { return jpd_complex_edge(ComplexScalingPoint::edge(s, c.delta)); });
    EXPECT_NEAR(r.value, c.value, 1e-10) << c.delta;
  }
}

TEST(ComplexEdge, FiniteNConvergesMonotonically) {
  double prev = INFINITY;
  for (int n : {20, 80, 320}) {
    const double rn = std::sqrt(double(n));
    double err = 0.0;
    for (double d : {-0.5, 0.0, 0.5}) {
      for (double sg : {0.3, 1.0, 3.0}) {
        const double fin = rn * jpd_complex({n, rn * sg, (rn + d) * (rn + d)});
        err = std::max(err, std::abs(fin - jpd_complex_edge(ComplexScalingPoint::edge(sg, d))));
      }
    }
    EXPECT_LT(err, prev) << n;
    prev = err;
  }
}

TEST(Sensitivity, ZeroPointAtN2) {
  EXPECT_NEAR(sensitivity_density(2, 0.0, 0.0), 4.0 / (3.0 * pi * pi), 1e-10);
}

TEST(Sensitivity, IntegratesToEigenvalueDensity) {
  const int n = 4;
  const double a = 0.8;
  const auto r = quad::integrate_semi_infinite(
      [&](double w) { return 2 * pi * w * sensitivity_density(n, w * w, a, {1e-13, 1e-11, 2000}); },
      {1e-11, 1e-9, 2000});
  EXPECT_NEAR(r.value / density_complex(n, a), 1.0, 1e-7);
}
