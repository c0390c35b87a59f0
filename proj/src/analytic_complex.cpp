#include "ginovl/analytic_complex.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ginovl/errors.hpp"
#include "ginovl/specfun.hpp"

namespace ginovl::cplx {

namespace {

using std::numbers::pi;

void validate(int n, double t, double a) {
  if (n < 2) throw DomainError("complex jpd: N must be >= 2");
  if (!(t > 0.0)) throw DomainError("complex jpd: t must be > 0");
  if (!(a >= 0.0)) throw DomainError("complex jpd: |z|^2 must be >= 0");
}

// ln A_i, A_i = (M-2)!/(M-2-i)! a^{M-2-i}, i = 0..M-2.
std::vector<double> log_weights(int m, double a) {
  std::vector<double> out(m - 1);
  const double lg = std::lgamma(m - 1.0);
  const double log_a = a > 0.0 ? std::log(a) : 0.0;
  for (int i = 0; i <= m - 2; ++i) {
    const int power = m - 2 - i;
    if (a == 0.0 && power > 0) {
      out[i] = -INFINITY;
    } else {
      out[i] = lg - std::lgamma(m - 1.0 - i) + power * log_a;
    }
  }
  return out;
}

// d1 and d2 (times exp(2a - 2 shift)) from the positive double sums
//   d1 = e^{-2a} sum_ij A_i A_j ((i-j)^2 + i + j + 2) / 2
//   d2 = e^{-2a} sum_ij A_i A_j [a ((i-j)^2 + i + j + 2) + (i+1) ((i-j+1)^2 + i + j + 3)]
// which follow from shifting u = a + x in the double-integral representations.
void positive_sums(const std::vector<double>& log_a, double shift, double a, double& d1,
                   double& d2) {
  const int len = static_cast<int>(log_a.size());
  std::vector<double> w(len);
  for (int i = 0; i < len; ++i) w[i] = std::exp(log_a[i] - shift);
  double s1 = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < len; ++i) {
    if (w[i] == 0.0) continue;
    double r1 = 0.0;
    double r2 = 0.0;
    for (int j = 0; j < len; ++j) {
      if (w[j] == 0.0) continue;
      const double dij = i - j;
      const double base = dij * dij + i + j + 2.0;
      r1 += w[j] * base;
      r2 += w[j] * (a * base + (i + 1.0) * ((dij + 1.0) * (dij + 1.0) + i + j + 3.0));
    }
    s1 += w[i] * r1;
    s2 += w[i] * r2;
  }
  d1 = 0.5 * s1;
  d2 = s2;
}

}  // namespace

CoeffBundle coeffs(int n, double z_abs_sq) {
  if (n < 2) throw DomainError("coeffs: N must be >= 2");
  if (!(z_abs_sq >= 0.0)) throw DomainError("coeffs: |z|^2 must be >= 0");
  const double a = z_abs_sq;
  const auto la = log_weights(n, a);
  double shift = *std::max_element(la.begin(), la.end());
  std::vector<double> la_prev;
  if (n > 2) {
    la_prev = log_weights(n - 1, a);
    shift = std::max(shift, *std::max_element(la_prev.begin(), la_prev.end()));
  }
  CoeffBundle b;
  b.log_scale = 2.0 * shift - 2.0 * a;
  positive_sums(la, shift, a, b.d1, b.d2);
  if (n > 2) positive_sums(la_prev, shift, a, b.d1_prev, b.d2_prev);
  const double nn = n;
  b.D1 = a * a * (nn - 1) * (nn - 2) * b.d1_prev + ((nn - 1) * nn - 2 * a * (nn + a)) * b.d1 -
         a * (nn - 2) * (nn - a) * b.d2_prev + a * b.d2;
  b.D2 = 2 * nn * b.d1 - a * (nn - 2) * b.d2_prev;
  return b;
}

ComplexJpdAtModulus::ComplexJpdAtModulus(int n, double z_abs_sq)
    : n_(n), a_(z_abs_sq), bundle_(coeffs(n, z_abs_sq)) {
  log_prefactor_ = -std::log(pi) - std::lgamma(static_cast<double>(n)) - std::lgamma(n - 1.0) +
                   bundle_.log_scale;
}

double ComplexJpdAtModulus::operator()(double t) const {
  validate(n_, t, a_);
  const double inv = 1.0 / (1.0 + t);
  const double bracket = bundle_.D1 + a_ * bundle_.D2 * inv + a_ * a_ * bundle_.d1 * inv * inv;
  if (bracket <= 0.0) return 0.0;
  const double log_tau = std::log(t) - std::log1p(t);
  const double log_p = log_prefactor_ + a_ * inv - 3.0 * std::log1p(t) + (n_ - 2) * log_tau +
                       std::log(bracket);
  return std::exp(log_p);
}

double jpd_complex(const ComplexJpdQuery& q) {
  validate(q.n, q.t, q.z_abs_sq);
  return ComplexJpdAtModulus(q.n, q.z_abs_sq)(q.t);
}

double jpd_complex_zero(int n, double t) {
  validate(n, t, 0.0);
  const double log_p = std::log(n * (n - 1.0) / pi) + (n - 2) * std::log(t) -
                       (n + 1) * std::log1p(t);
  return std::exp(log_p);
}

double density_complex(int n, double z_abs_sq) {
  if (n < 1) throw DomainError("density_complex: N must be >= 1");
  return specfun::reg_gamma_q(n, z_abs_sq) / pi;
}

double jpd_complex_bulk(const ComplexScalingPoint& p) {
  if (!(p.s > 0.0)) throw DomainError("jpd_complex_bulk: s must be > 0");
  if (p.w_abs >= 1.0) return 0.0;
  const double g = 1.0 - p.w_abs * p.w_abs;
  return g * g * std::exp(-g / p.s) / (pi * p.s * p.s * p.s);
}

double jpd_complex_edge(const ComplexScalingPoint& p) {
  const double sg = p.sigma;
  const double d = p.delta;
  if (!(sg > 0.0)) throw DomainError("jpd_complex_edge: sigma must be > 0");
  if (d > 10.0) return 0.0;  // below 1e-80 for every sigma
  const double big = p.big_delta();
  const double c = 4.0 * d * sg * sg - big * (2.0 * d + sg);
  const double ec = specfun::erfc(std::numbers::sqrt2 * d);
  // exp(-Delta^2/(2 sigma^2)) = exp(-1/(2 sigma^2) + 2 delta/sigma - 2 delta^2)
  const double log_common = -std::log(2.0 * pi) - 5.0 * std::log(sg) - 0.5 / (sg * sg) + 2.0 * d / sg;
  double braces;
  double log_extra;
  if (d >= 0.0) {
    // factor e^{-4 delta^2} out; es = erfc(sqrt2 delta) e^{2 delta^2}
    const double es = std::exp(2.0 * d * d + std::log(ec));
    braces = (2.0 * sg * sg - big) / pi - c * es / std::sqrt(2.0 * pi) +
             0.5 * (big * big - sg * sg) * es * es;
    log_extra = -4.0 * d * d;
  } else {
    const double g = std::exp(-2.0 * d * d);
    braces = g * g * (2.0 * sg * sg - big) / pi - g * c * ec / std::sqrt(2.0 * pi) +
             0.5 * (big * big - sg * sg) * ec * ec;
    log_extra = 0.0;
  }
  if (braces <= 0.0) return 0.0;
  return std::exp(log_common + log_extra + std::log(braces));
}

double density_complex_edge(double delta) {
  return specfun::erfc(std::numbers::sqrt2 * delta) / (2.0 * pi);
}

double sensitivity_kernel(int n, double w_abs_sq, double t) {
  const double var = (1.0 + t) / n;
  return std::exp(-w_abs_sq / var) / (pi * var);
}

double sensitivity_density(int n, double w_abs_sq, double z_abs_sq, const quad::QuadSpec& spec) {
  if (n < 2) throw DomainError("sensitivity_density: N must be >= 2");
  const ComplexJpdAtModulus jpd(n, z_abs_sq);
  auto f = [&](double t) { return sensitivity_kernel(n, w_abs_sq, t) * jpd(t); };
  return quad::integrate_semi_infinite(f, spec, {std::max(1.0, static_cast<double>(n) / 2), quad::EndpointHint::none}).value;
}

}  // namespace ginovl::cplx
