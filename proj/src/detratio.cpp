#include "ginovl/detratio.hpp"

#include <algorithm>
#include <cmath>

#include "ginovl/analytic_complex.hpp"
#include "ginovl/errors.hpp"
#include "ginovl/parallel.hpp"
#include "ginovl/specfun.hpp"

namespace ginovl::detratio {

using ensemble::Beta;

namespace {

bool supported(Beta beta, int L) {
  if (beta == Beta::real) return L == 0 || L == 2;
  return L == 0 || L == 1 || L == 2;
}

// ln 1/(2^{N/2} Gamma(N/2))
double log_c_real(int n) { return -0.5 * n * std::log(2.0) - std::lgamma(0.5 * n); }

double log_tau(double t) { return std::log(t) - std::log1p(t); }

double integrate(const quad::Integrand& f, double p, const quad::QuadSpec& spec) {
  // t = s / p puts the exponential cutoff at unit scale for large p
  const quad::SemiInfiniteOptions opts{p >= 1.0 ? 1.0 / p : 1.0, quad::EndpointHint::inverse_sqrt};
  // divide out the size near the cutoff so abs_tol does not swamp tiny values
  double m = std::abs(f(opts.scale)) * opts.scale;
  if (!(m > 0.0) || !std::isfinite(m)) m = 1.0;
  auto g = [&](double t) { return f(t) / m; };
  return m * quad::integrate_semi_infinite(g, spec, opts).value;
}

double real_l0(int n, double lambda, double p, const quad::QuadSpec& spec) {
  const double l2 = lambda * lambda;
  const double lc = log_c_real(n);
  auto f = [=](double t) {
    const double lt = log_tau(t);
    return std::exp(lc - p * t - std::log(t) - 0.5 * l2 * std::exp(lt) + 0.5 * n * lt);
  };
  return integrate(f, p, spec);
}

double real_l2(int n, double lambda, double p, const quad::QuadSpec& spec) {
  const double l2 = lambda * lambda;
  // e^{l2} Gamma(N+1, l2) = N! e^{l2} Q(N+1, l2), e^{l2} Gamma(N, l2) = (N-1)! e^{l2} Q(N, l2)
  const double log_g1 = std::lgamma(n + 1.0) + l2 + specfun::log_reg_gamma_q(n + 1, l2);
  const double log_g0 = std::lgamma(static_cast<double>(n)) + l2 + specfun::log_reg_gamma_q(n, l2);
  const double ratio = std::exp(log_g0 - log_g1);
  const double lc = log_c_real(n);
  auto f = [=](double t) {
    const double lt = log_tau(t);
    const double tau = std::exp(lt);
    const double bracket = 1.0 - l2 * tau * ratio;
    if (bracket <= 0.0) return 0.0;
    return std::exp(lc + log_g1 - p * t - 2.0 * std::log(t) - 0.5 * l2 * tau +
                    0.5 * (n + 2) * lt + std::log(bracket));
  };
  return integrate(f, p, spec);
}

double complex_l0(int n, double a, double p, const quad::QuadSpec& spec) {
  const double lf = -std::lgamma(static_cast<double>(n));
  auto f = [=](double t) {
    const double lt = log_tau(t);
    return std::exp(lf - p * t - std::log(t) - a * std::exp(lt) + n * lt);
  };
  return integrate(f, p, spec);
}

double complex_l1(int n, double a, double p, const quad::QuadSpec& spec) {
  const double log_g1 = std::lgamma(n + 1.0) + a + specfun::log_reg_gamma_q(n + 1, a);
  const double log_g0 = std::lgamma(static_cast<double>(n)) + a + specfun::log_reg_gamma_q(n, a);
  const double ratio = std::exp(log_g0 - log_g1);
  const double lf = -std::lgamma(static_cast<double>(n)) + log_g1;
  auto f = [=](double t) {
    const double lt = log_tau(t);
    const double tau = std::exp(lt);
    const double bracket = 1.0 - a * tau * ratio;
    if (bracket <= 0.0) return 0.0;
    return std::exp(lf - p * t - std::log(t) - std::log1p(t) - a * tau + n * lt +
                    std::log(bracket));
  };
  return integrate(f, p, spec);
}

double complex_l2(int n, double a, double p, const quad::QuadSpec& spec) {
  const cplx::CoeffBundle b = cplx::coeffs(n + 1, a);
  // e^{2a} times the bundle scale exp(log_scale)
  const double lf = -std::lgamma(static_cast<double>(n)) + 2.0 * a + b.log_scale;
  auto f = [=](double t) {
    const double inv = 1.0 / (1.0 + t);
    const double bracket = b.D1 + a * b.D2 * inv + a * a * b.d1 * inv * inv;
    if (bracket <= 0.0) return 0.0;
    const double lt = log_tau(t);
    return std::exp(lf - p * t - std::log(t) - a * std::exp(lt) - 2.0 * std::log1p(t) + n * lt +
                    std::log(bracket));
  };
  return integrate(f, p, spec);
}

struct Welford {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  void merge(const Welford& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double nt = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / nt;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / nt;
    n += o.n;
  }
};

}  // namespace

void DetRatioQuery::validate() const {
  if (n < 1) throw DomainError("detratio: N must be >= 1");
  if (beta != Beta::real && beta != Beta::complex) throw DomainError("detratio: beta must be 1 or 2");
  if (!supported(beta, L)) throw DomainError("detratio: unsupported (beta, L)");
  if (beta == Beta::real && z.imag() != 0.0) throw DomainError("detratio: beta = 1 needs real z");
  if (!(p >= 0.0)) throw DomainError("detratio: p must be >= 0");
}

double detratio_closed(const DetRatioQuery& q, const quad::QuadSpec& spec) {
  q.validate();
  if (q.L == 0 && q.p == 0.0) throw DomainError("detratio: L = 0 diverges at p = 0");
  const double a = std::norm(q.z);
  if (q.beta == Beta::real) {
    const double lambda = q.z.real();
    return q.L == 0 ? real_l0(q.n, lambda, q.p, spec) : real_l2(q.n, lambda, q.p, spec);
  }
  switch (q.L) {
    case 0:
      return complex_l0(q.n, a, q.p, spec);
    case 1:
      return complex_l1(q.n, a, q.p, spec);
    default:
      return complex_l2(q.n, a, q.p, spec);
  }
}

double detratio_closed_zero(int n, double p, const quad::QuadSpec& spec) {
  if (n < 1) throw DomainError("detratio: N must be >= 1");
  if (!(p >= 0.0)) throw DomainError("detratio: p must be >= 0");
  // N (N+1)! int e^{-pt} t^{-1} tau^N (1+t)^{-2} dt
  const double lf = std::log(static_cast<double>(n)) + std::lgamma(n + 2.0);
  auto f = [=](double t) {
    return std::exp(lf - p * t - std::log(t) + n * log_tau(t) - 2.0 * std::log1p(t));
  };
  return integrate(f, p, spec);
}

double eks_value(int n, double lambda, const quad::QuadSpec& spec) {
  if (n < 1) throw DomainError("eks_value: N must be >= 1");
  const double x = std::abs(lambda);
  const double l2 = x * x;
  const double lc = log_c_real(n);
  const double first = std::exp(lc + 0.5 * l2 + std::lgamma(static_cast<double>(n)) +
                                specfun::log_reg_gamma_q(n, l2));
  double second = 0.0;
  if (x > 0.0) {
    const auto moment = quad::integrate_finite(
        [=](double u) { return u > 0.0 ? std::exp(-0.5 * u * u + (n - 1) * std::log(u)) : (n == 1 ? 1.0 : 0.0); },
        0.0, x, spec);
    second = std::exp(lc + n * std::log(x)) * moment.value;
  }
  return 2.0 * (first + second);
}

double mean_det_sq_real(int n, double lambda) {
  if (n < 1) throw DomainError("mean_det_sq_real: N must be >= 1");
  const double l2 = lambda * lambda;
  // N! e^{l2} Q(N, l2) = N Gamma(N, l2) e^{l2}
  const double log_b = std::lgamma(n + 1.0) + l2 + specfun::log_reg_gamma_q(n, l2);
  if (l2 == 0.0) return std::exp(log_b);
  const double log_a = n * std::log(l2);
  const double m = std::max(log_a, log_b);
  return std::exp(m) * (std::exp(log_a - m) + std::exp(log_b - m));
}

std::vector<McEstimate> detratio_mc_batch(int n, Beta beta, std::complex<double> z,
                                          const std::vector<std::pair<int, double>>& l_p,
                                          std::uint64_t n_samples, const McOptions& opts) {
  if (n_samples < 1000) throw DomainError("detratio_mc: need at least 1000 samples");
  if (opts.chunk < 1) throw DomainError("detratio_mc: chunk must be >= 1");
  for (const auto& [L, p] : l_p) {
    DetRatioQuery{n, beta, L, z, p}.validate();
    if (!(p > 0.0)) throw DomainError("detratio_mc: p must be > 0");
  }
  const ensemble::EnsembleSpec spec{n, beta, opts.seed};
  const double bf = static_cast<double>(beta);
  const std::size_t k = l_p.size();
  const std::uint64_t n_chunks = (n_samples + opts.chunk - 1) / opts.chunk;
  std::vector<std::vector<Welford>> parts(n_chunks, std::vector<Welford>(k));

  parallel::for_each_chunk(n_chunks, opts.threads, [&](std::size_t c) {
    std::vector<Welford>& acc = parts[c];
    const std::uint64_t begin = c * opts.chunk;
    const std::uint64_t end = std::min(begin + opts.chunk, n_samples);
    Eigen::VectorXd sv2;
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      if (beta == Beta::real) {
        ensemble::RealMatrix w = -ensemble::sample_real_ginibre(spec, idx);
        w.diagonal().array() += z.real();
        sv2 = Eigen::JacobiSVD<ensemble::RealMatrix>(w).singularValues().array().square();
      } else {
        ensemble::ComplexMatrix w = -ensemble::sample_complex_ginibre(spec, idx);
        w.diagonal().array() += z;
        sv2 = Eigen::JacobiSVD<ensemble::ComplexMatrix>(w).singularValues().array().square();
      }
      double log_det = 0.0;
      for (Eigen::Index j = 0; j < sv2.size(); ++j) log_det += std::log(sv2(j));
      for (std::size_t i = 0; i < k; ++i) {
        const auto [L, p] = l_p[i];
        const double shift = 2.0 * p / bf;
        double log_den = 0.0;
        for (Eigen::Index j = 0; j < sv2.size(); ++j) log_den += std::log(shift + sv2(j));
        const double log_num = L == 0 ? 0.0 : 0.5 * bf * L * log_det;
        acc[i].add(std::exp(log_num - 0.5 * bf * log_den));
      }
    }
  });

  std::vector<McEstimate> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    Welford total;
    for (const auto& part : parts) total.merge(part[i]);
    const double var = total.n > 1 ? total.m2 / static_cast<double>(total.n - 1) : 0.0;
    out[i] = {total.mean, std::sqrt(var / static_cast<double>(total.n)), total.n};
  }
  return out;
}

McEstimate detratio_mc(const DetRatioQuery& q, std::uint64_t n_samples, const McOptions& opts) {
  q.validate();
  return detratio_mc_batch(q.n, q.beta, q.z, {{q.L, q.p}}, n_samples, opts).front();
}

}  // namespace ginovl::detratio
