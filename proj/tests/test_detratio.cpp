#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ginovl/detratio.hpp"
#include "ginovl/errors.hpp"
#include "ginovl/quadrature.hpp"

using namespace ginovl;
using namespace ginovl::detratio;
using ensemble::Beta;

TEST(MeanDetSq, Values) {
  EXPECT_NEAR(mean_det_sq_real(2, 0.0), 2.0, 1e-13);
  EXPECT_NEAR(mean_det_sq_real(3, 0.0), 6.0, 1e-13);
  EXPECT_NEAR(mean_det_sq_real(2, 1.0), 5.0, 1e-13);
  EXPECT_THROW(mean_det_sq_real(0, 1.0), DomainError);
}

TEST(MeanDetSq, MonteCarlo) {
  const ensemble::EnsembleSpec s{2, Beta::real, 5};
  const int draws = 200000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < draws; ++i) {
    auto g = ensemble::sample_real_ginibre(s, i);
    g.diagonal().array() -= 1.0;
    const double d = g.determinant() * g.determinant();
    sum += d;
    sum2 += d * d;
  }
  const double m = sum / draws;
  const double se = std::sqrt((sum2 / draws - m * m) / draws);
  EXPECT_NEAR(m, 5.0, 3.0 * se);
}

TEST(Closed, QueryValidation) {
  EXPECT_THROW(detratio_closed({3, Beta::real, 1, {0.5, 0.0}, 1.0}), DomainError);
  EXPECT_THROW(detratio_closed({3, Beta::real, 2, {0.5, 0.1}, 1.0}), DomainError);
  EXPECT_THROW(detratio_closed({3, Beta::complex, 3, {0.5, 0.0}, 1.0}), DomainError);
  EXPECT_THROW(detratio_closed({3, Beta::complex, 0, {0.5, 0.0}, 0.0}), DomainError);
  EXPECT_THROW(detratio_closed({3, Beta::real, 2, {0.5, 0.0}, -1.0}), DomainError);
}

TEST(Closed, L1AtZeroRegulatorIsOne) {
  for (int n = 1; n <= 10; ++n) {
    for (double r : {0.0, 0.5, 1.0}) {
      const std::complex<double> z = std::polar(r * std::sqrt(double(n)), 0.4);
      EXPECT_NEAR(detratio_closed({n, Beta::complex, 1, z, 0.0}), 1.0, 1e-8) << n << " " << r;
    }
  }
}

TEST(Closed, EksAtZeroRegulator) {
  for (int n : {1, 3, 5, 8}) {
    for (double l : {0.0, 0.7, 2.0}) {
      const double closed = detratio_closed({n, Beta::real, 2, {l, 0.0}, 0.0});
      EXPECT_NEAR(closed / eks_value(n, l), 1.0, 1e-9) << n << " " << l;
    }
  }
}

TEST(Closed, LargeRegulatorScaling) {
  const int n = 3;
  const double p = 1e6;
  const double v = std::pow(2 * p, 0.5 * n) * detratio_closed({n, Beta::real, 2, {0.0, 0.0}, p});
  EXPECT_NEAR(v, 6.0, 1e-3);
  const double v2 = std::pow(2 * p, 0.5 * 4) * detratio_closed({4, Beta::real, 2, {0.8, 0.0}, p});
  EXPECT_NEAR(v2 / mean_det_sq_real(4, 0.8), 1.0, 1e-4);
}

// Values near 1e-15 must still be resolved to relative accuracy; the gap to
// the limit shrinks like 1/p.
TEST(Closed, TinyValuesKeepRelativeAccuracy) {
  for (double p : {1e5, 1e6, 1e7}) {
    const double v = std::pow(2 * p, 2.0) * detratio_closed({4, Beta::real, 2, {0.0, 0.0}, p});
    EXPECT_NEAR((v / 24.0 - 1.0) * p, -6.0, 0.01) << p;
  }
}

TEST(Closed, ComplexZeroRouteAgrees) {
  for (int n : {1, 2, 5, 9}) {
    for (double p : {0.1, 1.0, 10.0}) {
      EXPECT_NEAR(detratio_closed({n, Beta::complex, 2, {0.0, 0.0}, p}) / detratio_closed_zero(n, p), 1.0, 1e-8);
    }
  }
}

TEST(Closed, ScalarRealCaseMatchesDirectQuadrature) {
  // N = 1: E[g^2 / sqrt(2p + g^2)], g ~ N(0, 1), around lambda = 0
  const double p = 0.8;
  const auto direct = quad::integrate_semi_infinite([&](double g) {
    return 2.0 * std::exp(-0.5 * g * g) / std::sqrt(2 * std::numbers::pi) * g * g / std::sqrt(2 * p + g * g);
  });
  EXPECT_NEAR(detratio_closed({1, Beta::real, 2, {0.0, 0.0}, p}), direct.value, 1e-10);
}

TEST(Mc, ValidatesInputs) {
  EXPECT_THROW(detratio_mc({2, Beta::complex, 2, {0.0, 0.0}, 0.0}, 2000), DomainError);
  EXPECT_THROW(detratio_mc({2, Beta::complex, 2, {0.0, 0.0}, 1.0}, 10), DomainError);
}

TEST(Mc, AgreesWithClosedForms) {
  const struct {
    Beta beta;
    int L;
    std::complex<double> z;
  } cases[] = {{Beta::real, 0, {0.7, 0.0}}, {Beta::real, 2, {0.7, 0.0}}, {Beta::complex, 0, {0.5, 0.3}},
               {Beta::complex, 1, {0.5, 0.3}}, {Beta::complex, 2, {0.5, 0.3}}};
  for (const auto& c : cases) {
    const DetRatioQuery q{3, c.beta, c.L, c.z, 1.0};
    const auto est = detratio_mc(q, 100000, {17, 0, 4096});
    const double closed = detratio_closed(q);
    EXPECT_NEAR(est.mean, closed, 4.0 * est.stderr_mean) << int(c.beta) << " " << c.L;
  }
}

TEST(Mc, LargeRegulatorL0) {
  const int n = 3;
  const double p = 1e4;
  const auto est = detratio_mc({n, Beta::complex, 0, {0.2, 0.1}, p}, 4000);
  EXPECT_NEAR(est.mean * std::pow(p, n), 1.0, 1e-3);
}

TEST(Mc, BatchMatchesSingle) {
  const auto batch = detratio_mc_batch(2, Beta::real, {0.3, 0.0}, {{0, 1.0}, {2, 0.5}}, 3000, {4, 1, 500});
  const auto one = detratio_mc({2, Beta::real, 2, {0.3, 0.0}, 0.5}, 3000, {4, 3, 500});
  EXPECT_EQ(batch[1].mean, one.mean);
  EXPECT_EQ(batch[1].stderr_mean, one.stderr_mean);
}
