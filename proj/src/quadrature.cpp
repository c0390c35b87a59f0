#include "ginovl/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>

#include "ginovl/errors.hpp"

namespace ginovl::quad {

namespace {

// QUADPACK qk21 abscissae and weights.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208625036890, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a, b, value, err;
  bool operator<(const Segment& o) const { return err < o.err; }
};

Segment gk21(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = kWgk[10] * fc;
  double gauss = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kronrod *= h;
  gauss *= h;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

QuadResult adaptive(const Integrand& f, double a, double b, const QuadSpec& spec) {
  if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_subdivisions < 1)
    throw DomainError("QuadSpec: tolerances must be positive and max_subdivisions >= 1");
  std::priority_queue<Segment> heap;
  Segment first = gk21(f, a, b);
  double total = first.value;
  double err = first.err;
  heap.push(first);
  int subdivisions = 1;
  while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (subdivisions >= spec.max_subdivisions) {
      throw ConvergenceError("adaptive quadrature did not converge", total, err);
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw ConvergenceError("adaptive quadrature: interval below machine resolution", total, err);
    }
    Segment left = gk21(f, worst.a, mid);
    Segment right = gk21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
    // Rebuild the running sums occasionally so the incremental updates do not drift.
    if (subdivisions % 64 == 0) {
      auto copy = heap;
      total = 0.0;
      err = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        err += copy.top().err;
        copy.pop();
      }
    }
  }
  return {total, err};
}

}  // namespace

QuadResult integrate_finite(const Integrand& f, double a, double b, const QuadSpec& spec,
                            EndpointHint hint) {
  if (!(a < b)) throw DomainError("integrate_finite: need a < b");
  if (hint == EndpointHint::inverse_sqrt) {
    auto g = [&](double v) { return 2.0 * v * f(a + v * v); };
    return adaptive(g, 0.0, std::sqrt(b - a), spec);
  }
  return adaptive(f, a, b, spec);
}

QuadResult integrate_from(const Integrand& f, double a, const QuadSpec& spec,
                          const SemiInfiniteOptions& opts) {
  if (!(opts.scale > 0.0)) throw DomainError("integrate_semi_infinite: scale must be positive");
  const double s = opts.scale;
  if (opts.hint == EndpointHint::inverse_sqrt) {
    // t = a + v^2, v = sqrt(s) * u / (1 - u)
    const double rs = std::sqrt(s);
    auto g = [&](double u) {
      const double om = 1.0 - u;
      const double v = rs * u / om;
      const double dv = rs / (om * om);
      const double val = f(a + v * v);
      return val == 0.0 ? 0.0 : 2.0 * v * val * dv;
    };
    return adaptive(g, 0.0, 1.0, spec);
  }
  auto g = [&](double u) {
    const double om = 1.0 - u;
    const double val = f(a + s * u / om);
    return val == 0.0 ? 0.0 : val * s / (om * om);
  };
  return adaptive(g, 0.0, 1.0, spec);
}

QuadResult integrate_semi_infinite(const Integrand& f, const QuadSpec& spec,
                                   const SemiInfiniteOptions& opts) {
  return integrate_from(f, 0.0, spec, opts);
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
  GaussRule rule;
  if (n == 1) return {{0.0}, {2.0}};
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

GaussRule composite_gauss_legendre(double a, double b, int panels, int order) {
  if (!(a < b) || panels < 1) throw DomainError("composite_gauss_legendre: bad interval");
  const GaussRule base = gauss_legendre(order);
  GaussRule out;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (int i = 0; i < order; ++i) {
      out.nodes.push_back(lo + 0.5 * h * (base.nodes[i] + 1.0));
      out.weights.push_back(0.5 * h * base.weights[i]);
    }
  }
  return out;
}

}  // namespace ginovl::quad
