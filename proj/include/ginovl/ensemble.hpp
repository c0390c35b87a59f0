#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

// Ginibre sampling and per-eigenvalue self-overlaps.
//
// Two independent routes to t = O_aa - 1:
//   * bi-orthogonal: right eigenvectors from a dense nonsymmetric
//     eigendecomposition, left eigenvectors as rows of the inverse of the
//     right-eigenvector matrix, O_aa = |x_L|^2 |x_R|^2;
//   * partial Schur: reflect the right eigenvector onto e_1 and solve the
//     shifted (N-1)-block for b, O = 1 + |b|^2.

namespace ginovl::ensemble {

enum class Beta : int { real = 1, complex = 2 };

struct EnsembleSpec {
  int n = 2;
  Beta beta = Beta::real;
  std::uint64_t seed = 0;

  void validate() const;
};

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// index-th matrix of the stream. Entry (j, k) is Gaussian number j*N + k of
/// stream `index` for beta = 1; for beta = 2 Gaussians 2(j*N+k) and
/// 2(j*N+k)+1 give the real and imaginary parts, each scaled by sqrt(1/2).
RealMatrix sample_real_ginibre(const EnsembleSpec& spec, std::uint64_t index);
ComplexMatrix sample_complex_ginibre(const EnsembleSpec& spec, std::uint64_t index);
ComplexMatrix sample_ginibre(const EnsembleSpec& spec, std::uint64_t index);

enum class EigenKind { real_line, complex };

struct OverlapSample {
  std::complex<double> eigenvalue;
  double t = 0.0;
  EigenKind kind = EigenKind::complex;
  std::uint64_t matrix_index = 0;
  double residual = 0.0;  ///< |G x_R - lambda x_R| / (|G|_F |x_R|)
};

struct OverlapOptions {
  double tol_num = 1e-10;        ///< t >= -tol_num accepted (clamped to 0)
  double residual_tol = 1e-8;    ///< eigen-residual acceptance, relative to |G|_F
  double min_rcond = 1e-12;      ///< reciprocal condition of the eigenvector matrix
  double tol_real_factor = 1e-9; ///< tol_real = factor * sqrt(N)
};

double default_tol_real(int n, const OverlapOptions& opts = {});

/// One sample per eigenvalue. Throws DegenerateSampleError when the
/// eigenvector matrix is numerically singular or a residual check fails.
std::vector<OverlapSample> overlaps_biorthogonal(const RealMatrix& g, std::uint64_t index = 0,
                                                 const OverlapOptions& opts = {});
std::vector<OverlapSample> overlaps_biorthogonal(const ComplexMatrix& g, std::uint64_t index = 0,
                                                 const OverlapOptions& opts = {});

/// Full overlap matrix O_ab = (x_La^* x_Lb)(x_Rb^* x_Ra), eigenvalues in
/// the solver's order. Rows sum to one.
ComplexMatrix overlap_matrix(const ComplexMatrix& g);

/// t for a simple real eigenvalue of a real matrix via the partial Schur
/// reduction. Throws DomainError when lambda fails the residual check and
/// DegenerateSampleError when the shifted block is singular.
double overlap_schur_real(const RealMatrix& g, double lambda, double residual_tol = 1e-8);

/// Complex analogue for any simple eigenvalue z of a complex matrix.
double overlap_schur_complex(const ComplexMatrix& g, std::complex<double> z,
                             double residual_tol = 1e-8);

struct Classification {
  std::vector<OverlapSample> real_line;
  std::vector<OverlapSample> complex;
  std::size_t n_near_axis_flagged = 0;  ///< beta = 2 samples with |Im| <= tol_real
};

/// beta = 1: real_line iff |Im| <= tol_real. beta = 2: everything complex,
/// near-axis samples only counted.
Classification classify_eigenvalues(const std::vector<OverlapSample>& samples, Beta beta,
                                    double tol_real);

}  // namespace ginovl::ensemble
