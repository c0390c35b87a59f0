#include "ginovl/mc_harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ginovl/analytic_complex.hpp"
#include "ginovl/analytic_real.hpp"
#include "ginovl/errors.hpp"
#include "ginovl/parallel.hpp"
#include "ginovl/rng.hpp"

namespace ginovl::mc {

using ensemble::Beta;
using ensemble::EigenKind;
using ensemble::EnsembleSpec;

namespace {

constexpr int kBins = 120;
constexpr double kEdgeLo = 1e-3;
constexpr double kEdgeHi = 1e5;

// Outer eigenvalue rule: 24 panels of 12 Gauss points.
constexpr int kOuterPanels = 24;
constexpr int kOuterOrder = 12;

void check_compatible(const EnsembleSpec& spec, const Window& w) {
  spec.validate();
  w.validate();
  if (spec.n < 2) throw DomainError("window statistics need N >= 2");
  if (w.kind == Window::Kind::real_interval && spec.beta != Beta::real) {
    throw DomainError("real-interval windows apply to beta = 1");
  }
  if (w.kind == Window::Kind::annulus && spec.beta != Beta::complex) {
    throw DomainError("annulus windows apply to beta = 2");
  }
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Nodes and weights of the outer integral over the window, measure included
// (d lambda, or 2 pi r dr for the annulus).
quad::GaussRule outer_rule(const Window& w) {
  quad::GaussRule rule = quad::composite_gauss_legendre(w.lo, w.hi, kOuterPanels, kOuterOrder);
  if (w.kind == Window::Kind::annulus) {
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      rule.weights[i] *= 2.0 * std::numbers::pi * rule.nodes[i];
    }
  }
  return rule;
}

double density_at(const EnsembleSpec& spec, double x) {
  if (spec.beta == Beta::real) return real::density_real(spec.n, x);
  return cplx::density_complex(spec.n, x * x);
}

quad::Integrand jpd_at(const EnsembleSpec& spec, double x) {
  if (spec.beta == Beta::real) {
    return [f = real::RealJpdAtLambda(spec.n, x)](double t) { return f(t); };
  }
  return [f = cplx::ComplexJpdAtModulus(spec.n, x * x)](double t) { return f(t); };
}

}  // namespace

void Window::validate() const {
  if (kind == Kind::real_interval) {
    if (!(lo < hi)) throw DomainError("window: need a < b");
  } else {
    if (!(lo >= 0.0 && lo < hi)) throw DomainError("window: need 0 <= r1 < r2");
  }
}

bool Window::contains(const ensemble::OverlapSample& s) const {
  if (kind == Kind::real_interval) {
    const double x = s.eigenvalue.real();
    return s.kind == EigenKind::real_line && x >= lo && x <= hi;
  }
  const double r = std::abs(s.eigenvalue);
  return s.kind == EigenKind::complex && r >= lo && r <= hi;
}

std::string Window::describe() const {
  return (kind == Kind::real_interval ? "interval:" : "annulus:") + format_double(lo) + ":" +
         format_double(hi);
}

std::vector<double> default_edges(int n) {
  if (n < 1) throw DomainError("default_edges: n must be >= 1");
  std::vector<double> edges(kBins + 1);
  const double l0 = std::log(kEdgeLo * n);
  const double l1 = std::log(kEdgeHi * n);
  for (int i = 0; i <= kBins; ++i) edges[i] = std::exp(l0 + (l1 - l0) * i / kBins);
  return edges;
}

ConditionedHistogram::ConditionedHistogram(const EnsembleSpec& s, const Window& w,
                                           std::vector<double> edges)
    : spec(s), window(w), bin_edges(std::move(edges)), counts(bin_edges.size() + 1, 0) {
  if (bin_edges.empty()) throw DomainError("histogram: no edges");
  for (std::size_t i = 1; i < bin_edges.size(); ++i) {
    if (!(bin_edges[i] > bin_edges[i - 1])) throw DomainError("histogram: edges must increase");
  }
}

void ConditionedHistogram::add(double t) {
  const auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), t);
  ++counts[static_cast<std::size_t>(it - bin_edges.begin())];
  ++n_samples;
  sum_t += t;
  sum_t_sq += t * t;
}

void ConditionedHistogram::merge(const ConditionedHistogram& o) {
  if (o.bin_edges != bin_edges || o.spec.n != spec.n || o.spec.beta != spec.beta ||
      o.spec.seed != spec.seed || o.window.kind != window.kind || o.window.lo != window.lo ||
      o.window.hi != window.hi) {
    throw DomainError("histogram merge: incompatible histograms");
  }
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
  n_matrices += o.n_matrices;
  n_samples += o.n_samples;
  n_rejected_matrices += o.n_rejected_matrices;
  n_near_axis_flagged += o.n_near_axis_flagged;
  sum_t += o.sum_t;
  sum_t_sq += o.sum_t_sq;
}

std::vector<double> ConditionedHistogram::empirical_cdf() const {
  std::vector<double> cdf(bin_edges.size());
  std::uint64_t below = 0;
  for (std::size_t k = 0; k < bin_edges.size(); ++k) {
    below += counts[k];
    cdf[k] = n_samples ? static_cast<double>(below) / static_cast<double>(n_samples) : 0.0;
  }
  return cdf;
}

void InvariantStats::merge(const InvariantStats& o) {
  if (o.n_checked == 0) return;
  min_t = n_checked ? std::min(min_t, o.min_t) : o.min_t;
  n_checked += o.n_checked;
  max_row_sum_error = std::max(max_row_sum_error, o.max_row_sum_error);
  max_route_rel_error = std::max(max_route_rel_error, o.max_route_rel_error);
}

namespace {

void check_matrix_invariants(const ensemble::ComplexMatrix& gc, const ensemble::RealMatrix* gr,
                             const std::vector<ensemble::OverlapSample>& samples,
                             InvariantStats& inv) {
  const ensemble::ComplexMatrix o = ensemble::overlap_matrix(gc);
  const double row_err = (o.rowwise().sum().array() - std::complex<double>(1.0, 0.0)).abs().maxCoeff();
  double route_err = 0.0;
  double min_t = samples.empty() ? 0.0 : samples.front().t;
  for (const auto& s : samples) {
    min_t = std::min(min_t, s.t);
    double t_schur = 0.0;
    if (gr != nullptr) {
      if (s.kind != EigenKind::real_line) continue;
      t_schur = ensemble::overlap_schur_real(*gr, s.eigenvalue.real());
    } else {
      t_schur = ensemble::overlap_schur_complex(gc, s.eigenvalue);
    }
    // relative in O = 1 + t
    route_err = std::max(route_err, std::abs(t_schur - s.t) / (1.0 + s.t));
  }
  InvariantStats one{1, row_err, route_err, min_t};
  inv.merge(one);
}

}  // namespace

CampaignResult run_campaign(const EnsembleSpec& spec, std::uint64_t n_matrices,
                            const Window& window, const CampaignOptions& opts) {
  check_compatible(spec, window);
  if (n_matrices < 1) throw DomainError("run_campaign: n_matrices must be >= 1");
  if (opts.chunk < 1) throw DomainError("run_campaign: chunk must be >= 1");
  const std::vector<double> edges = default_edges(spec.n);
  const double tol_real = ensemble::default_tol_real(spec.n, opts.overlap);

  const std::uint64_t n_chunks = (n_matrices + opts.chunk - 1) / opts.chunk;
  std::vector<CampaignResult> parts(n_chunks);
  parallel::for_each_chunk(n_chunks, opts.threads, [&](std::size_t c) {
    CampaignResult part{ConditionedHistogram(spec, window, edges), {}};
    const std::uint64_t begin = opts.first_index + c * opts.chunk;
    const std::uint64_t end = std::min(begin + opts.chunk, opts.first_index + n_matrices);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      ++part.histogram.n_matrices;
      try {
        std::vector<ensemble::OverlapSample> samples;
        if (spec.beta == Beta::real) {
          const ensemble::RealMatrix g = ensemble::sample_real_ginibre(spec, idx);
          samples = ensemble::overlaps_biorthogonal(g, idx, opts.overlap);
          if (opts.check_invariants) {
            check_matrix_invariants(g.cast<std::complex<double>>(), &g, samples, part.invariants);
          }
        } else {
          const ensemble::ComplexMatrix g = ensemble::sample_complex_ginibre(spec, idx);
          samples = ensemble::overlaps_biorthogonal(g, idx, opts.overlap);
          if (opts.check_invariants) check_matrix_invariants(g, nullptr, samples, part.invariants);
        }
        const auto cls = ensemble::classify_eigenvalues(samples, spec.beta, tol_real);
        part.histogram.n_near_axis_flagged += cls.n_near_axis_flagged;
        for (const auto* group : {&cls.real_line, &cls.complex}) {
          for (const auto& s : *group) {
            if (window.contains(s)) part.histogram.add(s.t);
          }
        }
      } catch (const DegenerateSampleError&) {
        ++part.histogram.n_rejected_matrices;
      }
    }
    parts[c] = std::move(part);
  });

  CampaignResult out{ConditionedHistogram(spec, window, edges), {}};
  for (const auto& p : parts) {
    out.histogram.merge(p.histogram);
    out.invariants.merge(p.invariants);
  }
  if (out.histogram.n_samples == 0) {
    throw EmptyWindowError("run_campaign: no accepted sample in " + window.describe());
  }
  return out;
}

std::vector<double> analytic_conditional_cdf(const EnsembleSpec& spec, const Window& window,
                                             const std::vector<double>& t_grid,
                                             const quad::QuadSpec& qs) {
  check_compatible(spec, window);
  if (t_grid.empty()) return {};
  if (!(t_grid.front() > 0.0)) throw DomainError("analytic_conditional_cdf: grid must be positive");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("analytic_conditional_cdf: grid must increase");
  }
  const quad::GaussRule outer = outer_rule(window);
  std::vector<double> acc(t_grid.size(), 0.0);
  double mass = 0.0;
  for (std::size_t i = 0; i < outer.nodes.size(); ++i) {
    const double x = outer.nodes[i];
    const double w = outer.weights[i];
    const quad::Integrand f = jpd_at(spec, x);
    double cum = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
      const auto hint = k == 0 ? quad::EndpointHint::inverse_sqrt : quad::EndpointHint::none;
      cum += quad::integrate_finite(f, prev, t_grid[k], qs, hint).value;
      prev = t_grid[k];
      acc[k] += w * cum;
    }
    mass += w * density_at(spec, x);
  }
  if (!(mass > 0.0)) throw DomainError("analytic_conditional_cdf: window carries no density");
  for (double& v : acc) v /= mass;
  return acc;
}

double analytic_conditional_mean(const EnsembleSpec& spec, const Window& window,
                                 const quad::QuadSpec& qs) {
  check_compatible(spec, window);
  const quad::GaussRule outer = outer_rule(window);
  double num = 0.0;
  double mass = 0.0;
  const quad::SemiInfiniteOptions so{static_cast<double>(spec.n), quad::EndpointHint::inverse_sqrt};
  for (std::size_t i = 0; i < outer.nodes.size(); ++i) {
    const double x = outer.nodes[i];
    const quad::Integrand f = jpd_at(spec, x);
    num += outer.weights[i] *
           quad::integrate_semi_infinite([&](double t) { return t * f(t); }, qs, so).value;
    mass += outer.weights[i] * density_at(spec, x);
  }
  return num / mass;
}

double expected_count_per_matrix(const EnsembleSpec& spec, const Window& window) {
  check_compatible(spec, window);
  const quad::GaussRule outer = outer_rule(window);
  double mass = 0.0;
  for (std::size_t i = 0; i < outer.nodes.size(); ++i) {
    mass += outer.weights[i] * density_at(spec, outer.nodes[i]);
  }
  return mass;
}

std::vector<double> sample_from_cdf(const std::vector<double>& t_grid,
                                    const std::vector<double>& cdf, std::uint64_t n_draws,
                                    std::uint64_t seed) {
  if (t_grid.size() != cdf.size() || t_grid.size() < 2) {
    throw DomainError("sample_from_cdf: need matching grids of size >= 2");
  }
  std::vector<double> out;
  out.reserve(n_draws);
  const double c_last = cdf.back();
  for (std::uint64_t i = 0; i < n_draws; ++i) {
    const auto w = rng::philox4x32_10({static_cast<std::uint32_t>(i),
                                       static_cast<std::uint32_t>(i >> 32), 0x5eed, 0},
                                      {static_cast<std::uint32_t>(seed),
                                       static_cast<std::uint32_t>(seed >> 32)});
    const double u = rng::uniform_open_closed(w[0], w[1]);
    double t;
    if (u <= cdf.front()) {
      t = t_grid.front() * (cdf.front() > 0 ? u / cdf.front() : 1.0);
    } else if (u > c_last) {
      // survival (1 - c_last) (t_last / t) beyond the grid
      t = t_grid.back() * (1.0 - c_last) / (1.0 - u);
    } else {
      const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
      const std::size_t k = static_cast<std::size_t>(it - cdf.begin());
      const double c0 = cdf[k - 1];
      const double c1 = cdf[k];
      const double frac = c1 > c0 ? (u - c0) / (c1 - c0) : 1.0;
      t = std::exp(std::log(t_grid[k - 1]) + frac * (std::log(t_grid[k]) - std::log(t_grid[k - 1])));
    }
    out.push_back(t);
  }
  return out;
}

ConditionedHistogram histogram_from_samples(const EnsembleSpec& spec, const Window& window,
                                            const std::vector<double>& t) {
  ConditionedHistogram h(spec, window, default_edges(spec.n));
  for (double x : t) h.add(x);
  return h;
}

std::map<std::string, std::string> metadata_of(const ConditionedHistogram& h) {
  return {
      {"seed", std::to_string(h.spec.seed)},
      {"n", std::to_string(h.spec.n)},
      {"beta", std::to_string(static_cast<int>(h.spec.beta))},
      {"window", h.window.describe()},
      {"n_matrices", std::to_string(h.n_matrices)},
      {"n_samples", std::to_string(h.n_samples)},
      {"n_rejected_matrices", std::to_string(h.n_rejected_matrices)},
      {"n_near_axis_flagged", std::to_string(h.n_near_axis_flagged)},
  };
}

ComparisonReport ks_compare(const ConditionedHistogram& hist,
                            const std::vector<double>& cdf_at_edges, const KsOptions& opts) {
  if (hist.n_samples < 100) throw InsufficientDataError("ks_compare: need at least 100 samples");
  if (cdf_at_edges.size() != hist.bin_edges.size()) {
    throw DomainError("ks_compare: analytic CDF must be given at every bin edge");
  }
  const std::vector<double> emp = hist.empirical_cdf();
  double d = 0.0;
  for (std::size_t k = 0; k < emp.size(); ++k) d = std::max(d, std::abs(emp[k] - cdf_at_edges[k]));
  ComparisonReport r;
  r.statistic_name = "ks_sup_at_bin_edges";
  r.statistic_value = d;
  r.sample_size = hist.n_samples;
  r.threshold = opts.fixed_threshold > 0.0
                    ? opts.fixed_threshold
                    : opts.c_alpha / std::sqrt(static_cast<double>(hist.n_samples));
  r.pass = r.statistic_value <= r.threshold;
  r.metadata = metadata_of(hist);
  r.metadata["c_alpha"] = format_double(opts.c_alpha);
  return r;
}

TailFit tail_exponent(const ConditionedHistogram& hist, double t_min, std::uint64_t min_tail_count) {
  if (hist.n_samples == 0) throw InsufficientDataError("tail_exponent: empty histogram");
  const double n = static_cast<double>(hist.n_samples);
  // beyond[k]: samples with t >= edges[k]
  std::vector<std::uint64_t> beyond(hist.bin_edges.size());
  std::uint64_t acc = hist.counts.back();
  for (std::size_t k = hist.bin_edges.size(); k-- > 0;) {
    beyond[k] = acc;
    acc += hist.counts[k];
  }
  std::vector<double> xs, ys, ws;
  int nonzero_bins = 0;
  for (std::size_t k = 0; k < hist.bin_edges.size(); ++k) {
    if (hist.bin_edges[k] < t_min || beyond[k] < min_tail_count) continue;
    xs.push_back(std::log(hist.bin_edges[k]));
    ys.push_back(std::log(static_cast<double>(beyond[k]) / n));
    ws.push_back(static_cast<double>(beyond[k]));  // 1 / Var ln S
    if (hist.counts[k + 1] > 0) ++nonzero_bins;
  }
  if (nonzero_bins < 5) throw InsufficientDataError("tail_exponent: fewer than 5 tail bins");
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sw += ws[i];
    sx += ws[i] * xs[i];
    sy += ws[i] * ys[i];
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += ws[i] * (xs[i] - mx) * (xs[i] - mx);
    sxy += ws[i] * (xs[i] - mx) * (ys[i] - my);
  }
  TailFit fit;
  fit.slope = sxy / sxx;
  fit.stderr_slope = std::sqrt(1.0 / sxx);
  fit.points = static_cast<int>(xs.size());
  return fit;
}

}  // namespace ginovl::mc
