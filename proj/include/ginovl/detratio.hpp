#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "ginovl/ensemble.hpp"
#include "ginovl/quadrature.hpp"

// Averaged characteristic-polynomial ratios over the Ginibre ensembles:
//
//   D^{(L)}_{N,beta}(z, p) = < det^{beta L/2} A / det^{beta/2} [(2p/beta) I + A] >,
//   A = (z - G)(z - G)^*.
//
// Supported (beta, L): (1,0), (1,2), (2,0), (2,1), (2,2). Closed forms are
// one-dimensional t-integrals; the Monte Carlo estimator uses the singular
// values of z - G in log space.

namespace ginovl::detratio {

struct DetRatioQuery {
  int n = 1;
  ensemble::Beta beta = ensemble::Beta::real;
  int L = 2;
  std::complex<double> z{0.0, 0.0};  ///< real for beta = 1
  double p = 1.0;

  void validate() const;
};

struct McEstimate {
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::uint64_t n_samples = 0;
};

struct McOptions {
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::uint64_t chunk = 4096;
};

/// Needs p > 0 and n_samples >= 1000.
McEstimate detratio_mc(const DetRatioQuery& q, std::uint64_t n_samples, const McOptions& opts = {});

/// Several (L, p) pairs at one (N, beta, z), all from the same matrices.
std::vector<McEstimate> detratio_mc_batch(int n, ensemble::Beta beta, std::complex<double> z,
                                          const std::vector<std::pair<int, double>>& l_p,
                                          std::uint64_t n_samples, const McOptions& opts = {});

/// Closed form. p >= 0, except (beta, L) with L = 0 where p = 0 diverges.
double detratio_closed(const DetRatioQuery& q, const quad::QuadSpec& spec = {});

/// beta = 2, L = 2 at z = 0 through its dedicated one-line integral.
double detratio_closed_zero(int n, double p, const quad::QuadSpec& spec = {});

/// beta = 1, L = 2 at p = 0 in terms of Gamma(N, lambda^2) and a finite
/// Gaussian moment.
double eks_value(int n, double lambda, const quad::QuadSpec& spec = {});

/// < det^2(lambda - G) > for the real Ginibre ensemble:
/// lambda^{2N} + e^{lambda^2} N Gamma(N, lambda^2).
double mean_det_sq_real(int n, double lambda);

}  // namespace ginovl::detratio
