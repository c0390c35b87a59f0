#pragma once

#include <functional>
#include <vector>

namespace ginovl::quad {

struct QuadSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
};

struct QuadResult {
  double value;
  double err_est;
};

/// Integrable endpoint behaviour at the lower limit.
///   none         - integrand bounded there
///   inverse_sqrt - up to ~ (x - a)^{-1/2}; handled by x = a + v^2
enum class EndpointHint { none, inverse_sqrt };

struct SemiInfiniteOptions {
  /// Length scale of the integrand; the map is t = scale * u / (1 - u).
  double scale = 1.0;
  EndpointHint hint = EndpointHint::none;
};

using Integrand = std::function<double(double)>;

/// Adaptive 21-point Gauss-Kronrod on [a, b]. Throws ConvergenceError
/// (carrying the best estimate) when max_subdivisions is exhausted.
QuadResult integrate_finite(const Integrand& f, double a, double b, const QuadSpec& spec = {},
                            EndpointHint hint = EndpointHint::none);

/// Integral over (0, inf) through t = scale * u / (1 - u).
QuadResult integrate_semi_infinite(const Integrand& f, const QuadSpec& spec = {},
                                   const SemiInfiniteOptions& opts = {});

/// Integral over (a, inf), a >= 0 shift of the semi-infinite map.
QuadResult integrate_from(const Integrand& f, double a, const QuadSpec& spec = {},
                          const SemiInfiniteOptions& opts = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

/// Composite Gauss-Legendre rule on [a, b]: `panels` equal panels, `order` points each.
/// Used where one outer integral feeds many inner integrals at fixed nodes.
GaussRule composite_gauss_legendre(double a, double b, int panels, int order);

}  // namespace ginovl::quad
