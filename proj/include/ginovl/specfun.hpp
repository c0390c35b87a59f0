#pragma once

// Special functions used by the closed-form overlap densities.
//
// Incomplete gamma functions appear only with positive integer order, so
// Q(n, a) = Gamma(n, a) / Gamma(n) = exp(-a) * sum_{k<n} a^k / k! is
// evaluated from that finite sum (tail regime a > n) or from the
// complementary lower series (a <= n). Consumers that need Gamma(n, a)
// itself take the pair (log Gamma(n), Q(n, a)) and combine in log space.

namespace ginovl::specfun {

/// ln Gamma(x) for x > 0. Throws DomainError otherwise.
double log_gamma(double x);

/// Regularized upper incomplete gamma Q(n, a) for integer n >= 1, a >= 0.
double reg_gamma_q(int n, double a);

/// ln Q(n, a); stays finite where Q itself underflows (a >> n).
double log_reg_gamma_q(int n, double a);

/// Poisson weight exp(-a) a^k / k!, computed in log space.
double poisson_pmf(int k, double a);

/// (log Gamma(n), Q(n, a)) pair handed to every Gamma(n, a) consumer.
struct GammaPair {
  double log_gamma_n;
  double q;
  double log_q;
};
GammaPair upper_gamma(int n, double a);

double erf(double x);
double erfc(double x);

}  // namespace ginovl::specfun
