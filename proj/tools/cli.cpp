#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "ginovl/analytic_complex.hpp"
#include "ginovl/analytic_real.hpp"
#include "ginovl/detratio.hpp"
#include "ginovl/ensemble.hpp"
#include "ginovl/errors.hpp"
#include "ginovl/mc_harness.hpp"
#include "ginovl/parallel.hpp"
#include "ginovl/provenance.hpp"

namespace ginovl::cli {

namespace {

using json = nlohmann::json;
using ensemble::Beta;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Rows of numbers plus scalar annotations; rendered as CSV or JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> notes;
  json extra = json::object();
};

struct Result {
  Table table;
  int code = kOk;
};

struct Common {
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string format = "csv";
  std::string out;
  std::string plot_script;
};

// Canonical configuration: the resolved command line minus options that
// never change results (--threads, --out, --plot-script).
struct Canon {
  std::vector<std::string> tokens;
  void add(const std::string& k, const std::string& v) {
    if (v.empty()) return;
    tokens.push_back(k);
    tokens.push_back(v);
  }
  void flag(const std::string& k) { tokens.push_back(k); }
  std::string str() const {
    std::string s;
    for (const auto& t : tokens) {
      if (!s.empty()) s += ' ';
      s += t;
    }
    return s;
  }
};

std::string render(const Table& t, const Common& c, const Canon& canon) {
  const std::string config = canon.str();
  const std::string hash = provenance::config_hash(config);
  std::ostringstream os;
  if (c.format == "json") {
    json j;
    j["schema"] = provenance::kReportSchema;
    j["provenance"] = {{"tool", "ginovl"},
                       {"version", provenance::kVersion},
                       {"seed", c.seed},
                       {"config", config},
                       {"config_hash", hash}};
    for (const auto& [k, v] : t.notes) j["notes"][k] = v;
    for (const auto& [k, v] : t.extra.items()) j[k] = v;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    os << j.dump(2) << '\n';
    return os.str();
  }
  os << "# tool: ginovl " << provenance::kVersion << '\n';
  os << "# schema: " << provenance::kReportSchema << '\n';
  os << "# seed: " << c.seed << '\n';
  os << "# config: " << config << '\n';
  os << "# config_hash: " << hash << '\n';
  for (const auto& [k, v] : t.notes) os << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << num(row[i]);
    os << '\n';
  }
  return os.str();
}

std::string plot_script(const std::string& command, const Table& t, const std::string& data) {
  std::ostringstream os;
  os << "# gnuplot script\n";
  os << "set datafile separator ','\n";
  os << "set datafile commentschars '#'\n";
  os << "set key autotitle columnhead\n";
  if (command == "compare") {
    os << "set logscale x\nset xlabel 't'\nset ylabel 'CDF'\n";
    os << "plot '" << data << "' using 1:2 with steps, '' using 1:3 with lines\n";
  } else if (command == "analytic") {
    const std::size_t x = t.columns.size() - 1;
    os << "set logscale xy\nset xlabel '" << t.columns[x - 1] << "'\nset ylabel 'density'\n";
    os << "plot '" << data << "' using " << x << ":" << x + 1 << " with lines\n";
  } else {
    const std::size_t x = t.columns.size() - 1;
    os << "set xlabel '" << t.columns[x - 1] << "'\nset ylabel '" << t.columns[x] << "'\n";
    os << "plot '" << data << "' using " << x << ":" << x + 1 << " with lines\n";
  }
  return os.str();
}

Beta parse_beta(int b) {
  if (b == 1) return Beta::real;
  if (b == 2) return Beta::complex;
  throw DomainError("beta must be 1 or 2");
}

Beta parse_ensemble(const std::string& e) {
  if (e == "real") return Beta::real;
  if (e == "complex") return Beta::complex;
  throw DomainError("ensemble must be 'real' or 'complex'");
}

mc::Window parse_window(const std::string& spec, int n) {
  const auto c1 = spec.find(':');
  const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw DomainError("window must be interval:a:b or annulus:r1:r2");
  }
  const std::string kind = spec.substr(0, c1);
  const double lo = std::stod(spec.substr(c1 + 1, c2 - c1 - 1)) * std::sqrt(double(n));
  const double hi = std::stod(spec.substr(c2 + 1)) * std::sqrt(double(n));
  mc::Window w;
  if (kind == "interval") {
    w = mc::Window::real_interval(lo, hi);
  } else if (kind == "annulus") {
    w = mc::Window::annulus(lo, hi);
  } else {
    throw DomainError("window kind must be interval or annulus");
  }
  w.validate();
  return w;
}

// ---- analytic ------------------------------------------------------------

struct AnalyticArgs {
  std::string ensemble;
  bool jpd = false, bulk = false, edge = false;
  int n = 0;
  std::string at;  // lambda or |z| grid
  std::string t_grid;
  std::string x_grid, s_grid, delta_grid, sigma_grid;
  std::string form = "gamma";
};

Result run_analytic(const AnalyticArgs& a) {
  const Beta beta = parse_ensemble(a.ensemble);
  const double b = static_cast<int>(beta);
  Result r;
  if (int(a.jpd) + int(a.bulk) + int(a.edge) > 1) throw DomainError("choose one of --jpd, --bulk, --edge");
  if (a.bulk) {
    r.table.columns = {"beta", "x_or_abs_w", "s", "density"};
    for (double x : parse_grid(a.x_grid))
      for (double s : parse_grid(a.s_grid)) {
        const double d = beta == Beta::real ? real::jpd_real_bulk(real::RealScalingPoint::bulk(s, x))
                                            : cplx::jpd_complex_bulk(cplx::ComplexScalingPoint::bulk(s, x));
        r.table.rows.push_back({b, x, s, d});
      }
    return r;
  }
  if (a.edge) {
    r.table.columns = {"beta", "delta", "sigma", "density"};
    for (double dl : parse_grid(a.delta_grid))
      for (double sg : parse_grid(a.sigma_grid)) {
        const double d = beta == Beta::real ? real::jpd_real_edge(real::RealScalingPoint::edge(sg, dl))
                                            : cplx::jpd_complex_edge(cplx::ComplexScalingPoint::edge(sg, dl));
        r.table.rows.push_back({b, dl, sg, d});
      }
    return r;
  }
  if (a.n < 2) throw DomainError("--n must be >= 2");
  const auto ts = parse_grid(a.t_grid);
  if (ts.empty()) throw DomainError("--t-grid is empty");
  if (a.form != "gamma" && a.form != "sum") throw DomainError("--form must be gamma or sum");
  const auto form = a.form == "sum" ? real::JpdForm::sum_form : real::JpdForm::gamma_form;
  r.table.columns = {"n", "beta", "lambda_or_abs_z", "t", "density"};
  for (double x : parse_grid(a.at)) {
    for (double t : ts) {
      const double d = beta == Beta::real ? real::jpd_real({a.n, t, x}, form)
                                          : cplx::jpd_complex({a.n, t, x * x});
      r.table.rows.push_back({double(a.n), b, x, t, d});
    }
  }
  return r;
}

// ---- density -------------------------------------------------------------

struct DensityArgs {
  std::string ensemble;
  int n = 0;
  std::string at;
  bool edge = false;
  bool sensitivity = false;
  std::string delta_grid;
  double abs_z = 0.0;
};

Result run_density(const DensityArgs& a) {
  const Beta beta = parse_ensemble(a.ensemble);
  const double b = static_cast<int>(beta);
  Result r;
  if (a.edge) {
    r.table.columns = {"beta", "delta", "density"};
    for (double d : parse_grid(a.delta_grid)) {
      r.table.rows.push_back({b, d, beta == Beta::real ? real::density_real_edge(d) : cplx::density_complex_edge(d)});
    }
    return r;
  }
  if (a.n < 2) throw DomainError("--n must be >= 2");
  if (a.sensitivity) {
    if (beta != Beta::complex) throw DomainError("--sensitivity applies to the complex ensemble");
    r.table.columns = {"n", "abs_z", "abs_w", "density"};
    for (double w : parse_grid(a.at)) {
      r.table.rows.push_back({double(a.n), a.abs_z, w, cplx::sensitivity_density(a.n, w * w, a.abs_z * a.abs_z)});
    }
    return r;
  }
  r.table.columns = {"n", "beta", "lambda_or_abs_z", "density"};
  for (double x : parse_grid(a.at)) {
    const double d = beta == Beta::real ? real::density_real(a.n, x) : cplx::density_complex(a.n, x * x);
    r.table.rows.push_back({double(a.n), b, x, d});
  }
  return r;
}

// ---- sample --------------------------------------------------------------

struct SampleArgs {
  int beta = 1;
  int n = 0;
  std::uint64_t matrices = 1;
  std::uint64_t first_index = 0;
};

Result run_sample(const SampleArgs& a, const Common& c) {
  const ensemble::EnsembleSpec spec{a.n, parse_beta(a.beta), c.seed};
  spec.validate();
  if (a.matrices < 1) throw DomainError("--matrices must be >= 1");
  constexpr std::uint64_t chunk = 256;
  const std::uint64_t n_chunks = (a.matrices + chunk - 1) / chunk;
  std::vector<std::vector<std::vector<double>>> rows(n_chunks);
  std::vector<std::uint64_t> rejected(n_chunks, 0);
  parallel::for_each_chunk(n_chunks, c.threads, [&](std::size_t k) {
    const std::uint64_t begin = a.first_index + k * chunk;
    const std::uint64_t end = std::min(begin + chunk, a.first_index + a.matrices);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      try {
        const auto samples = spec.beta == Beta::real
                                 ? ensemble::overlaps_biorthogonal(ensemble::sample_real_ginibre(spec, idx), idx)
                                 : ensemble::overlaps_biorthogonal(ensemble::sample_complex_ginibre(spec, idx), idx);
        for (const auto& s : samples) {
          rows[k].push_back({double(idx), s.eigenvalue.real(), s.eigenvalue.imag(),
                             s.kind == ensemble::EigenKind::real_line ? 0.0 : 1.0, s.t, s.residual});
        }
      } catch (const DegenerateSampleError&) {
        ++rejected[k];
      }
    }
  });
  Result r;
  r.table.columns = {"matrix_index", "re", "im", "complex", "t", "residual"};
  std::uint64_t n_rej = 0;
  for (std::size_t k = 0; k < n_chunks; ++k) {
    for (auto& row : rows[k]) r.table.rows.push_back(std::move(row));
    n_rej += rejected[k];
  }
  r.table.notes.push_back({"rejected_matrices", std::to_string(n_rej)});
  return r;
}

// ---- compare -------------------------------------------------------------

struct CompareArgs {
  int beta = 1;
  int n = 0;
  std::uint64_t matrices = 0;
  std::uint64_t first_index = 0;
  std::string window;
  double ks_threshold = 0.0;
  double c_alpha = 1.95;
  bool mean = false;
};

Result run_compare(const CompareArgs& a, const Common& c) {
  const ensemble::EnsembleSpec spec{a.n, parse_beta(a.beta), c.seed};
  spec.validate();
  const mc::Window w = parse_window(a.window, a.n);
  mc::CampaignOptions opts;
  opts.threads = c.threads;
  opts.first_index = a.first_index;
  const auto campaign = mc::run_campaign(spec, a.matrices, w, opts);
  const auto& h = campaign.histogram;
  const auto cdf = mc::analytic_conditional_cdf(spec, w, h.bin_edges);
  const auto report = mc::ks_compare(h, cdf, {a.c_alpha, a.ks_threshold});

  Result r;
  r.table.columns = {"t_edge", "empirical_cdf", "analytic_cdf"};
  const auto emp = h.empirical_cdf();
  for (std::size_t k = 0; k < emp.size(); ++k) r.table.rows.push_back({h.bin_edges[k], emp[k], cdf[k]});
  json rep = {{"statistic_name", report.statistic_name},
              {"statistic_value", report.statistic_value},
              {"threshold", report.threshold},
              {"sample_size", report.sample_size},
              {"pass", report.pass},
              {"metadata", report.metadata}};
  r.table.notes.push_back({"statistic_name", report.statistic_name});
  r.table.notes.push_back({"statistic_value", num(report.statistic_value)});
  r.table.notes.push_back({"threshold", num(report.threshold)});
  r.table.notes.push_back({"sample_size", std::to_string(report.sample_size)});
  r.table.notes.push_back({"pass", report.pass ? "true" : "false"});
  for (const auto& [k, v] : report.metadata) r.table.notes.push_back({"metadata." + k, v});
  if (a.mean) {
    const double n = static_cast<double>(h.n_samples);
    const double m = h.sum_t / n;
    const double var = (h.sum_t_sq - n * m * m) / (n - 1.0);
    const double analytic = mc::analytic_conditional_mean(spec, w);
    rep["conditional_mean_t"] = {{"empirical", m}, {"stderr", std::sqrt(var / n)}, {"analytic", analytic}};
    r.table.notes.push_back({"conditional_mean_t.empirical", num(m)});
    r.table.notes.push_back({"conditional_mean_t.stderr", num(std::sqrt(var / n))});
    r.table.notes.push_back({"conditional_mean_t.analytic", num(analytic)});
  }
  r.table.extra["report"] = rep;
  r.code = report.pass ? kOk : kStatisticalFailure;
  return r;
}

// ---- detratio ------------------------------------------------------------

struct DetRatioArgs {
  int beta = 1;
  int L = 2;
  int n = 0;
  double lambda = 0.0;
  double im = 0.0;
  double p = 1.0;
  std::uint64_t mc = 0;
};

Result run_detratio(const DetRatioArgs& a, const Common& c) {
  const detratio::DetRatioQuery q{a.n, parse_beta(a.beta), a.L, {a.lambda, a.im}, a.p};
  q.validate();
  Result r;
  r.table.columns = {"n", "beta", "L", "re_z", "im_z", "p", "closed", "mc_mean", "mc_stderr", "z_score"};
  const double closed = detratio::detratio_closed(q);
  double mean = NAN, se = NAN, zs = NAN;
  if (a.mc > 0) {
    const auto est = detratio::detratio_mc(q, a.mc, {c.seed, c.threads});
    mean = est.mean;
    se = est.stderr_mean;
    zs = (mean - closed) / se;
  }
  r.table.rows.push_back({double(a.n), double(a.beta), double(a.L), a.lambda, a.im, a.p, closed, mean, se, zs});
  return r;
}

// ---- selftest ------------------------------------------------------------

Result run_selftest() {
  Result r;
  r.table.columns = {"check", "value", "tolerance", "pass"};
  int id = 0;
  auto add = [&](const std::string& name, double value, double tol) {
    const bool ok = std::abs(value) <= tol;
    r.table.notes.push_back({"check" + std::to_string(id), name});
    r.table.rows.push_back({double(id++), value, tol, ok ? 1.0 : 0.0});
    if (!ok) r.code = kValidationFailure;
  };
  // normalization of the real and complex joint densities at one point each
  {
    const real::RealJpdAtLambda f(5, 0.7);
    const double i = quad::integrate_semi_infinite([&](double t) { return f(t); }, {}, {5.0, quad::EndpointHint::inverse_sqrt}).value;
    add("real_normalization_rel_err", i / real::density_real(5, 0.7) - 1.0, 1e-8);
  }
  {
    const cplx::ComplexJpdAtModulus f(6, 2.0);
    const double i = quad::integrate_semi_infinite([&](double t) { return f(t); }, {}, {6.0, quad::EndpointHint::inverse_sqrt}).value;
    add("complex_normalization_rel_err", i / cplx::density_complex(6, 2.0) - 1.0, 1e-6);
  }
  // sum rule and route agreement on one matrix
  {
    const ensemble::EnsembleSpec spec{8, Beta::real, 7};
    const auto g = ensemble::sample_real_ginibre(spec, 0);
    const auto o = ensemble::overlap_matrix(g.cast<std::complex<double>>());
    add("row_sum_max_err", (o.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-8);
    double route = 0.0;
    for (const auto& s : ensemble::overlaps_biorthogonal(g)) {
      if (s.kind != ensemble::EigenKind::real_line) continue;
      route = std::max(route, std::abs(ensemble::overlap_schur_real(g, s.eigenvalue.real()) - s.t) / (1.0 + s.t));
    }
    add("schur_route_rel_err", route, 1e-8);
  }
  // synthetic KS self-test
  {
    const ensemble::EnsembleSpec spec{4, Beta::complex, 1};
    const auto w = mc::Window::annulus(0.0, 1.0);
    const auto edges = mc::default_edges(4);
    const auto cdf = mc::analytic_conditional_cdf(spec, w, edges);
    const auto h = mc::histogram_from_samples(spec, w, mc::sample_from_cdf(edges, cdf, 20000, 3));
    const auto rep = mc::ks_compare(h, cdf);
    add("synthetic_ks_minus_threshold", std::max(0.0, rep.statistic_value - rep.threshold), 0.0);
  }
  add("detratio_L1_p0_minus_one",
      detratio::detratio_closed({5, Beta::complex, 1, {1.0, 0.5}, 0.0}) - 1.0, 1e-8);
  return r;
}

// ---- verification --------------------------------------------------------

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

int verify_metadata(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "cannot read " << path << '\n';
    return kValidationFailure;
  }
  const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::string config, hash;
  if (!content.empty() && content.front() == '{') {
    const json j = json::parse(content, nullptr, false);
    if (j.is_discarded() || !j.contains("provenance")) {
      err << "no provenance block in " << path << '\n';
      return kValidationFailure;
    }
    config = j["provenance"].value("config", "");
    hash = j["provenance"].value("config_hash", "");
  } else {
    std::istringstream is(content);
    for (std::string line; std::getline(is, line);) {
      if (line.rfind("# config: ", 0) == 0) config = line.substr(10);
      if (line.rfind("# config_hash: ", 0) == 0) hash = line.substr(15);
    }
  }
  if (config.empty() || hash.empty()) {
    err << "no provenance block in " << path << '\n';
    return kValidationFailure;
  }
  if (provenance::config_hash(config) != hash) {
    err << "config hash mismatch: recorded " << hash << ", recomputed " << provenance::config_hash(config) << '\n';
    return kValidationFailure;
  }
  std::ostringstream replay, replay_err;
  dispatch(split_ws(config), replay, replay_err);
  if (replay.str() != content) {
    err << "replay differs from " << path << '\n';
    return kValidationFailure;
  }
  out << "verified " << path << " config_hash " << hash << '\n';
  return kOk;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "64-bit seed");
  sub->add_option("--threads", c.threads, "worker threads (0: all cores); never affects results");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--plot-script", c.plot_script, "also write a gnuplot script plotting --out");
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  if (spec.rfind("log:", 0) == 0 || spec.rfind("lin:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 4) throw DomainError("grid must be kind:lo:hi:count");
    const double lo = std::stod(parts[1]);
    const double hi = std::stod(parts[2]);
    const int count = std::stoi(parts[3]);
    if (count < 1) throw DomainError("grid count must be >= 1");
    const bool log = parts[0] == "log";
    if (log && !(lo > 0.0 && hi > 0.0)) throw DomainError("log grid needs positive bounds");
    for (int i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : double(i) / (count - 1);
      out.push_back(log ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))) : lo + f * (hi - lo));
    }
    return out;
  }
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ',');) {
    if (!p.empty()) out.push_back(std::stod(p));
  }
  return out;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eigenvector self-overlap statistics for Ginibre matrices"};
  app.require_subcommand(0, 1);
  std::string verify;
  app.add_option("--verify-metadata", verify, "recompute the config hash of an output file and replay it");

  Common common;
  AnalyticArgs an;
  auto* s_an = app.add_subcommand("analytic", "joint density of (eigenvalue, overlap) and its limits");
  add_common(s_an, common);
  s_an->add_option("--ensemble", an.ensemble, "real or complex")->required();
  s_an->add_flag("--jpd", an.jpd, "finite-N joint density (default)");
  s_an->add_flag("--bulk", an.bulk, "bulk scaling limit over --x and --s-grid");
  s_an->add_flag("--edge", an.edge, "edge scaling limit over --delta and --sigma-grid");
  s_an->add_option("--n", an.n, "matrix size");
  s_an->add_option("--lambda,--abs-z", an.at, "eigenvalue (real) or |z| (complex); grid allowed");
  s_an->add_option("--t-grid", an.t_grid, "overlap grid");
  s_an->add_option("--form", an.form, "gamma or sum (real only)");
  s_an->add_option("--x", an.x_grid, "bulk position lambda/sqrt(N) or |w|");
  s_an->add_option("--s-grid", an.s_grid, "bulk overlap grid s = t/N");
  s_an->add_option("--delta", an.delta_grid, "edge offset grid");
  s_an->add_option("--sigma-grid", an.sigma_grid, "edge overlap grid sigma = t/sqrt(N)");

  DensityArgs de;
  auto* s_de = app.add_subcommand("density", "mean eigenvalue density");
  add_common(s_de, common);
  s_de->add_option("--ensemble", de.ensemble, "real or complex")->required();
  s_de->add_option("--n", de.n, "matrix size");
  s_de->add_option("--lambda,--abs-z,--abs-w", de.at, "evaluation grid");
  s_de->add_flag("--edge", de.edge, "edge limit over --delta");
  s_de->add_option("--delta", de.delta_grid, "edge offset grid");
  s_de->add_flag("--sensitivity", de.sensitivity, "eigenvalue-sensitivity density at |w| given --z-modulus");
  s_de->add_option("--z-modulus", de.abs_z, "|z| for --sensitivity");

  SampleArgs sa;
  auto* s_sa = app.add_subcommand("sample", "eigenvalues and self-overlaps of sampled matrices");
  add_common(s_sa, common);
  s_sa->add_option("--beta", sa.beta, "1 real, 2 complex")->required();
  s_sa->add_option("--n", sa.n, "matrix size")->required();
  s_sa->add_option("--matrices", sa.matrices, "number of matrices");
  s_sa->add_option("--first-index", sa.first_index, "first matrix index");

  CompareArgs co;
  auto* s_co = app.add_subcommand("compare", "Monte Carlo overlap law vs the analytic conditional law");
  add_common(s_co, common);
  s_co->add_option("--beta", co.beta, "1 real, 2 complex")->required();
  s_co->add_option("--n", co.n, "matrix size")->required();
  s_co->add_option("--matrices", co.matrices, "number of matrices")->required();
  s_co->add_option("--first-index", co.first_index, "first matrix index");
  s_co->add_option("--window", co.window, "interval:a:b or annulus:r1:r2 in units of sqrt(N)")->required();
  s_co->add_option("--ks-threshold", co.ks_threshold, "fixed KS threshold (default c_alpha/sqrt(n))");
  s_co->add_option("--c-alpha", co.c_alpha, "KS critical constant");
  s_co->add_flag("--mean", co.mean, "also report the conditional mean of t");

  DetRatioArgs dr;
  auto* s_dr = app.add_subcommand("detratio", "averaged determinant ratios: closed form and Monte Carlo");
  add_common(s_dr, common);
  s_dr->add_option("--beta", dr.beta, "1 real, 2 complex")->required();
  s_dr->add_option("--L", dr.L, "numerator power")->required();
  s_dr->add_option("--n", dr.n, "matrix size")->required();
  s_dr->add_option("--lambda", dr.lambda, "real part of z");
  s_dr->add_option("--im", dr.im, "imaginary part of z (beta = 2)");
  s_dr->add_option("--p", dr.p, "regulator p >= 0");
  s_dr->add_option("--mc", dr.mc, "Monte Carlo samples (0: closed form only)");

  auto* s_st = app.add_subcommand("selftest", "quick internal consistency checks");
  add_common(s_st, common);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kValidationFailure;
  }

  if (!verify.empty()) return verify_metadata(verify, out, err);
  if (app.get_subcommands().empty()) {
    err << app.help();
    return kValidationFailure;
  }

  CLI::App* used = app.get_subcommands().front();
  const std::string command = used->get_name();
  Canon canon;
  canon.flag(command);
  Result result;
  try {
    if (command == "analytic") {
      canon.add("--ensemble", an.ensemble);
      if (an.bulk) {
        canon.flag("--bulk");
        canon.add("--x", an.x_grid);
        canon.add("--s-grid", an.s_grid);
      } else if (an.edge) {
        canon.flag("--edge");
        canon.add("--delta", an.delta_grid);
        canon.add("--sigma-grid", an.sigma_grid);
      } else {
        canon.flag("--jpd");
        canon.add("--n", std::to_string(an.n));
        canon.add("--lambda", an.at);
        canon.add("--t-grid", an.t_grid);
        canon.add("--form", an.form);
      }
      result = run_analytic(an);
    } else if (command == "density") {
      canon.add("--ensemble", de.ensemble);
      if (de.edge) {
        canon.flag("--edge");
        canon.add("--delta", de.delta_grid);
      } else {
        canon.add("--n", std::to_string(de.n));
        canon.add("--lambda", de.at);
        if (de.sensitivity) {
          canon.flag("--sensitivity");
          canon.add("--z-modulus", num(de.abs_z));
        }
      }
      result = run_density(de);
    } else if (command == "sample") {
      canon.add("--beta", std::to_string(sa.beta));
      canon.add("--n", std::to_string(sa.n));
      canon.add("--matrices", std::to_string(sa.matrices));
      canon.add("--first-index", std::to_string(sa.first_index));
      canon.add("--seed", std::to_string(common.seed));
      result = run_sample(sa, common);
    } else if (command == "compare") {
      canon.add("--beta", std::to_string(co.beta));
      canon.add("--n", std::to_string(co.n));
      canon.add("--matrices", std::to_string(co.matrices));
      canon.add("--first-index", std::to_string(co.first_index));
      canon.add("--window", co.window);
      canon.add("--ks-threshold", num(co.ks_threshold));
      canon.add("--c-alpha", num(co.c_alpha));
      if (co.mean) canon.flag("--mean");
      canon.add("--seed", std::to_string(common.seed));
      result = run_compare(co, common);
    } else if (command == "detratio") {
      canon.add("--beta", std::to_string(dr.beta));
      canon.add("--L", std::to_string(dr.L));
      canon.add("--n", std::to_string(dr.n));
      canon.add("--lambda", num(dr.lambda));
      canon.add("--im", num(dr.im));
      canon.add("--p", num(dr.p));
      canon.add("--mc", std::to_string(dr.mc));
      canon.add("--seed", std::to_string(common.seed));
      result = run_detratio(dr, common);
    } else {
      result = run_selftest();
    }
    canon.add("--format", common.format);
  } catch (const EmptyWindowError& e) {
    err << "error: " << e.what() << '\n';
    return kStatisticalFailure;
  } catch (const InsufficientDataError& e) {
    err << "error: " << e.what() << '\n';
    return kStatisticalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  }

  const std::string body = render(result.table, common, canon);
  if (common.out.empty()) {
    out << body;
  } else {
    std::ofstream f(common.out, std::ios::binary);
    if (!f || !(f << body)) {
      err << "error: cannot write " << common.out << '\n';
      return kValidationFailure;
    }
  }
  if (!common.plot_script.empty()) {
    if (common.out.empty()) {
      err << "error: --plot-script needs --out\n";
      return kValidationFailure;
    }
    std::ofstream f(common.plot_script);
    f << plot_script(command, result.table, common.out);
  }
  return result.code;
}

}  // namespace ginovl::cli
