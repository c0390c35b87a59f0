#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ginovl/ensemble.hpp"
#include "ginovl/quadrature.hpp"

namespace ginovl::mc {

/// Eigenvalue window in matrix units. A real interval selects real
/// eigenvalues of real matrices; an annulus selects complex eigenvalues of
/// complex matrices.
struct Window {
  enum class Kind { real_interval, annulus };
  Kind kind = Kind::real_interval;
  double lo = 0.0;
  double hi = 0.0;

  static Window real_interval(double a, double b) { return {Kind::real_interval, a, b}; }
  static Window annulus(double r1, double r2) { return {Kind::annulus, r1, r2}; }

  void validate() const;
  bool contains(const ensemble::OverlapSample& s) const;
  std::string describe() const;
};

/// Log-spaced edges over [1e-3 N, 1e5 N], 120 bins.
std::vector<double> default_edges(int n);

/// counts[0] is the underflow bin [0, edges.front()), counts.back() the
/// overflow bin [edges.back(), inf); so counts.size() = edges.size() + 1
/// and the counts sum to n_samples.
struct ConditionedHistogram {
  ensemble::EnsembleSpec spec;
  Window window;
  std::vector<double> bin_edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t n_matrices = 0;
  std::uint64_t n_samples = 0;
  std::uint64_t n_rejected_matrices = 0;
  std::uint64_t n_near_axis_flagged = 0;
  double sum_t = 0.0;
  double sum_t_sq = 0.0;

  ConditionedHistogram() = default;
  ConditionedHistogram(const ensemble::EnsembleSpec& spec, const Window& window,
                       std::vector<double> edges);

  void add(double t);
  /// Exact for counts; requires identical spec, window and edges.
  void merge(const ConditionedHistogram& other);
  /// Empirical CDF at each bin edge.
  std::vector<double> empirical_cdf() const;
};

/// Debug-mode invariant bookkeeping over every sampled matrix.
struct InvariantStats {
  std::uint64_t n_checked = 0;
  double max_row_sum_error = 0.0;
  double max_route_rel_error = 0.0;  ///< Schur route vs bi-orthogonal route
  double min_t = 0.0;                ///< smallest stored t

  void merge(const InvariantStats& other);
};

struct CampaignOptions {
  unsigned threads = 0;          ///< 0: hardware concurrency. Never changes results.
  std::uint64_t first_index = 0; ///< first matrix index of this shard
  std::uint64_t chunk = 256;     ///< matrices per work unit
  bool check_invariants = false;
  ensemble::OverlapOptions overlap;
};

struct CampaignResult {
  ConditionedHistogram histogram;
  InvariantStats invariants;
};

/// Matrices [first_index, first_index + n_matrices). Throws EmptyWindowError
/// if no accepted sample lands in the window.
CampaignResult run_campaign(const ensemble::EnsembleSpec& spec, std::uint64_t n_matrices,
                            const Window& window, const CampaignOptions& opts = {});

/// Conditional CDF of t given the eigenvalue lies in the window, at each grid
/// point (grid strictly increasing, positive).
std::vector<double> analytic_conditional_cdf(const ensemble::EnsembleSpec& spec,
                                             const Window& window,
                                             const std::vector<double>& t_grid,
                                             const quad::QuadSpec& qs = {});

/// Conditional mean of t given the window.
double analytic_conditional_mean(const ensemble::EnsembleSpec& spec, const Window& window,
                                 const quad::QuadSpec& qs = {});

/// Integral of the eigenvalue density over the window (expected samples per matrix).
double expected_count_per_matrix(const ensemble::EnsembleSpec& spec, const Window& window);

/// i.i.d. draws from a tabulated CDF (grid, cdf), inverted by linear
/// interpolation in log t; exact at the grid points. Mass below the first
/// grid point is placed uniformly on (0, grid[0]); mass above the last point
/// is spread as a t^{-1} survival tail.
std::vector<double> sample_from_cdf(const std::vector<double>& t_grid,
                                    const std::vector<double>& cdf, std::uint64_t n_draws,
                                    std::uint64_t seed);

ConditionedHistogram histogram_from_samples(const ensemble::EnsembleSpec& spec,
                                            const Window& window,
                                            const std::vector<double>& t);

struct ComparisonReport {
  std::string statistic_name;
  double statistic_value = 0.0;
  double threshold = 0.0;
  std::uint64_t sample_size = 0;
  bool pass = false;
  std::map<std::string, std::string> metadata;
};

struct KsOptions {
  double c_alpha = 1.95;        ///< alpha = 0.001
  double fixed_threshold = 0.0; ///< > 0 overrides c_alpha / sqrt(n)
};

/// Sup distance between the empirical CDF and `cdf_at_edges` over the bin
/// edges. Needs n_samples >= 100.
ComparisonReport ks_compare(const ConditionedHistogram& hist,
                            const std::vector<double>& cdf_at_edges,
                            const KsOptions& opts = {});

struct TailFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  int points = 0;
};

/// Weighted least-squares slope of ln S(t) against ln t over the edges
/// t >= t_min with at least `min_tail_count` samples beyond them. Needs five
/// such edges with a nonzero bin count.
TailFit tail_exponent(const ConditionedHistogram& hist, double t_min,
                      std::uint64_t min_tail_count = 20);

std::map<std::string, std::string> metadata_of(const ConditionedHistogram& hist);

}  // namespace ginovl::mc
