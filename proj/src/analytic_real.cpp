#include "ginovl/analytic_real.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ginovl/errors.hpp"
#include "ginovl/specfun.hpp"

namespace ginovl::real {

namespace {

using std::numbers::pi;
const double kLogPrefactor = -std::log(2.0 * std::sqrt(2.0 * pi));  // ln 1/(2 sqrt(2 pi))

void validate(int n, double t) {
  if (n < 2) throw DomainError("real jpd: N must be >= 2");
  if (!(t > 0.0)) throw DomainError("real jpd: t must be > 0");
}

double sum_form(const RealJpdQuery& q) {
  const int n = q.n;
  const double t = q.t;
  const double l2 = q.lambda * q.lambda;
  // exp(-l2/2 (1 + t/(1+t))) sum_k l2^k/k! [..] = exp(l2/(2(1+t))) sum_k pi_k(l2) [..]
  std::vector<double> log_w(n);
  double log_max = -INFINITY;
  for (int k = 0; k < n; ++k) {
    log_w[k] = (l2 == 0.0) ? (k == 0 ? 0.0 : -INFINITY)
                           : -l2 + k * std::log(l2) - std::lgamma(k + 1.0);
    log_max = std::max(log_max, log_w[k]);
  }
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    if (log_w[k] == -INFINITY) continue;
    sum += std::exp(log_w[k] - log_max) * ((n - 1 - k) + k / (1.0 + t));
  }
  if (sum <= 0.0) return 0.0;
  const double log_p = kLogPrefactor + l2 / (2.0 * (1.0 + t)) + 0.5 * (n - 3) * std::log(t) -
                       0.5 * (n + 1) * std::log1p(t) + log_max + std::log(sum);
  return std::exp(log_p);
}

// ln of sum_{k>=0} y^k / (s (s+1) ... (s+k)), the series behind the lower
// incomplete gamma function of half-integer order.
double log_lower_gamma_series(double s, double y) {
  // gamma(s, y) = Gamma(s) to double precision once y > 2 s + 50
  if (y > 2.0 * s + 50.0) return std::lgamma(s) + y - s * std::log(y);
  double term = 1.0 / s;
  double sum = term;
  for (int k = 1; k < 1000000; ++k) {
    term *= y / (s + k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::log(sum);
}

}  // namespace

RealJpdAtLambda::RealJpdAtLambda(int n, double lambda)
    : n_(n), lambda_(lambda), lambda_sq_(lambda * lambda) {
  if (n < 2) throw DomainError("real jpd: N must be >= 2");
  log_q_nm1_ = specfun::log_reg_gamma_q(n - 1, lambda_sq_);
  ratio_q_ = std::exp(specfun::log_reg_gamma_q(n, lambda_sq_) - log_q_nm1_);
}

double RealJpdAtLambda::operator()(double t) const {
  validate(n_, t);
  const double tau = t / (1.0 + t);
  // [Gamma(N, l2) - l2 tau Gamma(N-1, l2)] / (N-2)! = Q(N-1, l2) [(N-1) Q_N/Q_{N-1} - l2 tau]
  const double bracket = (n_ - 1) * ratio_q_ - lambda_sq_ * tau;
  if (bracket <= 0.0) return 0.0;
  const double log_p = kLogPrefactor + lambda_sq_ / (2.0 * (1.0 + t)) - std::log(t) -
                       std::log1p(t) + 0.5 * (n_ - 1) * std::log(tau) + log_q_nm1_ +
                       std::log(bracket);
  return std::exp(log_p);
}

double jpd_real(const RealJpdQuery& q, JpdForm form) {
  validate(q.n, q.t);
  if (form == JpdForm::sum_form) return sum_form(q);
  return RealJpdAtLambda(q.n, q.lambda)(q.t);
}

double density_real(int n, double lambda) {
  if (n < 2) throw DomainError("density_real: N must be >= 2");
  const double x = std::abs(lambda);
  const double l2 = x * x;
  const double first = specfun::reg_gamma_q(n - 1, l2);
  double second = 0.0;
  if (x > 0.0) {
    // |l|^{N-1} e^{-l2/2} int_0^{|l|} e^{-u^2/2} u^{N-2} du / (N-2)!
    //   = |l|^{2(N-1)} e^{-l2} S / (2 (N-2)!),  S = sum y^k / prod (s+j), s = (N-1)/2, y = l2/2
    const double s = 0.5 * (n - 1);
    const double log_second = 2.0 * (n - 1) * std::log(x) - l2 +
                              log_lower_gamma_series(s, 0.5 * l2) - std::log(2.0) -
                              std::lgamma(n - 1.0);
    second = std::exp(log_second);
  }
  return (first + second) / std::sqrt(2.0 * pi);
}

double jpd_real_bulk(const RealScalingPoint& p) {
  if (!(p.s > 0.0)) throw DomainError("jpd_real_bulk: s must be > 0");
  if (std::abs(p.x) >= 1.0) return 0.0;
  const double g = 1.0 - p.x * p.x;
  return g * std::exp(-g / (2.0 * p.s)) / (2.0 * std::sqrt(2.0 * pi) * p.s * p.s);
}

double jpd_real_edge(const RealScalingPoint& p) {
  const double sg = p.sigma;
  const double d = p.delta;
  if (!(sg > 0.0)) throw DomainError("jpd_real_edge: sigma must be > 0");
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * pi);
  // (1/sqrt(2 pi)) int_{2 delta}^inf e^{-v^2/2} dv = erfc(sqrt(2) delta) / 2
  const double tail = 0.5 * specfun::erfc(std::numbers::sqrt2 * d);
  const double bracket = inv_sqrt_2pi * std::exp(-2.0 * d * d) + (1.0 / sg - 2.0 * d) * tail;
  if (bracket <= 0.0) return 0.0;
  return 0.5 * inv_sqrt_2pi / (sg * sg) * std::exp(-1.0 / (4.0 * sg * sg) + d / sg) * bracket;
}

double density_real_edge(double delta) {
  const double inv = 1.0 / (2.0 * std::sqrt(2.0 * pi));
  return inv * (specfun::erfc(std::numbers::sqrt2 * delta) +
                std::exp(-delta * delta) * specfun::erfc(-delta) / std::numbers::sqrt2);
}

}  // namespace ginovl::real
