#include "ginovl/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ginovl/errors.hpp"

namespace ginovl::specfun {

namespace {

void check_order(int n) {
  if (n < 1) throw DomainError("incomplete gamma: order must be >= 1, got " + std::to_string(n));
}

void check_argument(double a) {
  if (!(a >= 0.0)) throw DomainError("incomplete gamma: argument must be >= 0");
}

// ln of sum_{k=0}^{n-1} a^k / k!, a > 0. Terms are summed relative to the
// largest one (k = min(n-1, floor(a))) with Neumaier compensation.
double log_truncated_exp_series(int n, double a) {
  const double log_a = std::log(a);
  const int kmax = std::min(n - 1, static_cast<int>(std::floor(a)));
  const double log_peak = kmax * log_a - std::lgamma(kmax + 1.0);
  double sum = 0.0;
  double comp = 0.0;
  // Walk outward from the peak; the ratio a/k keeps every term <= 1.
  auto add = [&](double term) {
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  };
  double term = 1.0;
  add(term);
  for (int k = kmax; k > 0; --k) {
    term *= k / a;
    if (term < 1e-18 * sum) break;
    add(term);
  }
  term = 1.0;
  for (int k = kmax + 1; k < n; ++k) {
    term *= a / k;
    if (term < 1e-18 * sum) break;
    add(term);
  }
  return log_peak + std::log(sum + comp);
}

// P(n, a) = exp(-a) sum_{k>=n} a^k / k! for a <= n; the series terms
// decrease monotonically from k = n on.
double lower_regularized(int n, double a) {
  const double log_first = -a + n * std::log(a) - std::lgamma(n + 1.0);
  double term = 1.0;
  double sum = 1.0;
  for (int k = n + 1; k < n + 100000; ++k) {
    term *= a / k;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::exp(log_first + std::log(sum));
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
  return std::lgamma(x);
}

double log_reg_gamma_q(int n, double a) {
  check_order(n);
  check_argument(a);
  if (a == 0.0) return 0.0;
  if (a > n) return -a + log_truncated_exp_series(n, a);
  return std::log1p(-lower_regularized(n, a));
}

double reg_gamma_q(int n, double a) {
  check_order(n);
  check_argument(a);
  if (a == 0.0) return 1.0;
  if (a > n) return std::exp(-a + log_truncated_exp_series(n, a));
  return 1.0 - lower_regularized(n, a);
}

double poisson_pmf(int k, double a) {
  if (k < 0) return 0.0;
  if (a == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-a + k * std::log(a) - std::lgamma(k + 1.0));
}

GammaPair upper_gamma(int n, double a) {
  const double lq = log_reg_gamma_q(n, a);
  return {std::lgamma(static_cast<double>(n)), std::exp(lq), lq};
}

double erf(double x) { return std::erf(x); }
double erfc(double x) { return std::erfc(x); }

}  // namespace ginovl::specfun
