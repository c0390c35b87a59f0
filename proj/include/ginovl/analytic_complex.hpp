#pragma once

#include "ginovl/quadrature.hpp"

// Joint density of a complex eigenvalue z and its self-overlap t = O - 1
// for the complex Ginibre ensemble (E|G_jk|^2 = 1), with the bulk and edge
// scaling limits and the eigenvalue-sensitivity transform.

namespace ginovl::cplx {

struct ComplexJpdQuery {
  int n;            ///< matrix size, >= 2
  double t;         ///< > 0
  double z_abs_sq;  ///< |z|^2 >= 0; the law is rotation invariant
};

/// d1, d2, D1, D2 for one (N, |z|^2). True value = field * exp(log_scale).
/// d1_prev and d2_prev are the size N-1 coefficients that enter D1 and D2
/// (zero for N = 2, where their prefactor N-2 vanishes).
struct CoeffBundle {
  double log_scale = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double D1 = 0.0;
  double D2 = 0.0;
  double d1_prev = 0.0;
  double d2_prev = 0.0;
};

CoeffBundle coeffs(int n, double z_abs_sq);

struct ComplexScalingPoint {
  double s = 0.0;      ///< t / N
  double w_abs = 0.0;  ///< |z| / sqrt(N)
  double sigma = 0.0;  ///< t / sqrt(N)
  double delta = 0.0;  ///< |z| - sqrt(N)

  double big_delta() const { return 1.0 - 2.0 * sigma * delta; }

  static ComplexScalingPoint bulk(double s, double w_abs) { return {s, w_abs, 0.0, 0.0}; }
  static ComplexScalingPoint edge(double sigma, double delta) { return {0.0, 0.0, sigma, delta}; }
};

double jpd_complex(const ComplexJpdQuery& q);

/// P(t, z) at fixed |z|^2 with the coefficient bundle computed once.
class ComplexJpdAtModulus {
public:
  ComplexJpdAtModulus(int n, double z_abs_sq);
  double operator()(double t) const;
  const CoeffBundle& bundle() const { return bundle_; }

private:
  int n_;
  double a_;
  double log_prefactor_;
  CoeffBundle bundle_;
};

double jpd_complex_zero(int n, double t);
double density_complex(int n, double z_abs_sq);
double jpd_complex_bulk(const ComplexScalingPoint& p);
double jpd_complex_edge(const ComplexScalingPoint& p);
double density_complex_edge(double delta);

/// Density of a complex Gaussian with variance (1+t)/N, the kernel that maps
/// the overlap law onto the eigenvalue-sensitivity law.
double sensitivity_kernel(int n, double w_abs_sq, double t);

/// pi(w, z) = int_0^inf kernel(t) P(t, z) dt.
double sensitivity_density(int n, double w_abs_sq, double z_abs_sq,
                           const quad::QuadSpec& spec = {});

}  // namespace ginovl::cplx
