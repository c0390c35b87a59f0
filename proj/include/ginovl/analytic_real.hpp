#pragma once

// Joint density of a real eigenvalue lambda and its self-overlap t = O - 1
// for the real Ginibre ensemble (entries N(0,1)), its marginal (the mean
// density of real eigenvalues) and the bulk and edge scaling limits.

namespace ginovl::real {

struct RealJpdQuery {
  int n;          ///< matrix size, >= 2
  double t;       ///< self-overlap minus one, > 0
  double lambda;  ///< real eigenvalue, unscaled
};

/// Bulk point uses (s, x); edge point uses (sigma, delta).
struct RealScalingPoint {
  double s = 0.0;      ///< t / N
  double x = 0.0;      ///< lambda / sqrt(N)
  double sigma = 0.0;  ///< t / sqrt(N)
  double delta = 0.0;  ///< lambda - sqrt(N)

  static RealScalingPoint bulk(double s, double x) { return {s, x, 0.0, 0.0}; }
  static RealScalingPoint edge(double sigma, double delta) { return {0.0, 0.0, sigma, delta}; }
};

/// Two algebraically equivalent closed forms. The Poisson-weighted k-sum is
/// `sum_form`; the incomplete-gamma form is `gamma_form`.
enum class JpdForm { sum_form, gamma_form };

/// P(t, lambda). Throws DomainError for n < 2 or t <= 0.
double jpd_real(const RealJpdQuery& q, JpdForm form = JpdForm::gamma_form);

/// P(t, lambda) with the lambda-dependent incomplete gamma factors cached;
/// used by the nested integrals in the Monte Carlo comparison.
class RealJpdAtLambda {
public:
  RealJpdAtLambda(int n, double lambda);
  double operator()(double t) const;
  int n() const { return n_; }
  double lambda() const { return lambda_; }

private:
  int n_;
  double lambda_;
  double lambda_sq_;
  double log_q_nm1_;     // ln Q(N-1, lambda^2)
  double ratio_q_;       // Q(N, lambda^2) / Q(N-1, lambda^2)
};

/// Mean density of real eigenvalues rho_N(lambda); even in lambda.
double density_real(int n, double lambda);

double jpd_real_bulk(const RealScalingPoint& p);
double jpd_real_edge(const RealScalingPoint& p);
double density_real_edge(double delta);

}  // namespace ginovl::real
