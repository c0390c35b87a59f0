#include "ginovl/ensemble.hpp"

#include <cmath>
#include <numbers>

#include "ginovl/errors.hpp"
#include "ginovl/rng.hpp"

namespace ginovl::ensemble {

namespace {

struct BiorthogonalBasis {
  Eigen::VectorXcd values;
  ComplexMatrix right;      // columns, unit norm
  ComplexMatrix left_rows;  // rows of right^{-1}
};

template <typename Matrix>
void check_square(const Matrix& g) {
  if (g.rows() != g.cols() || g.rows() < 1) throw DomainError("expected a non-empty square matrix");
}

BiorthogonalBasis invert_basis(Eigen::VectorXcd values, ComplexMatrix right,
                               const OverlapOptions& opts) {
  for (Eigen::Index j = 0; j < right.cols(); ++j) right.col(j).normalize();
  Eigen::PartialPivLU<ComplexMatrix> lu(right);
  if (!(lu.rcond() >= opts.min_rcond)) {
    throw DegenerateSampleError("eigenvector matrix numerically singular");
  }
  return {std::move(values), right, lu.inverse()};
}

BiorthogonalBasis basis(const RealMatrix& g, const OverlapOptions& opts) {
  Eigen::EigenSolver<RealMatrix> es(g, true);
  if (es.info() != Eigen::Success) throw DegenerateSampleError("real eigensolver failed");
  return invert_basis(es.eigenvalues(), es.eigenvectors(), opts);
}

BiorthogonalBasis basis(const ComplexMatrix& g, const OverlapOptions& opts) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(g, true);
  if (es.info() != Eigen::Success) throw DegenerateSampleError("complex eigensolver failed");
  return invert_basis(es.eigenvalues(), es.eigenvectors(), opts);
}

template <typename Matrix>
std::vector<OverlapSample> overlaps_impl(const Matrix& g, std::uint64_t index,
                                         const OverlapOptions& opts, bool real_matrix) {
  check_square(g);
  const int n = static_cast<int>(g.rows());
  const ComplexMatrix gc = g.template cast<std::complex<double>>();
  const double gnorm = gc.norm();
  const BiorthogonalBasis b = basis(g, opts);
  const double tol_real = default_tol_real(n, opts);
  std::vector<OverlapSample> out;
  out.reserve(n);
  for (int a = 0; a < n; ++a) {
    const auto lam = b.values(a);
    const Eigen::VectorXcd xr = b.right.col(a);
    const double residual = (gc * xr - lam * xr).norm() / (gnorm > 0 ? gnorm : 1.0);
    if (!(residual <= opts.residual_tol)) {
      throw DegenerateSampleError("eigen-residual check failed");
    }
    double t = b.left_rows.row(a).squaredNorm() * xr.squaredNorm() - 1.0;
    if (t < 0.0) {
      if (t < -opts.tol_num) throw DegenerateSampleError("overlap below the Cauchy-Schwarz bound");
      t = 0.0;
    }
    OverlapSample s;
    s.eigenvalue = lam;
    s.t = t;
    s.kind = (real_matrix && std::abs(lam.imag()) <= tol_real) ? EigenKind::real_line
                                                               : EigenKind::complex;
    s.matrix_index = index;
    s.residual = residual;
    out.push_back(s);
  }
  return out;
}

// Hermitian unitary reflector P with P x = c e_1 (|c| = |x|), so that
// P G P has (lambda, 0, ..., 0)^T as its first column.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> reflector_to_e1(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = x.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v = x;
  const double x0 = std::abs(x(0));
  const Scalar phase = x0 > 0 ? x(0) / x0 : Scalar(1);
  v(0) += phase * x.norm();
  const double vv = v.squaredNorm();
  return Mat::Identity(n, n) - (2.0 / vv) * v * v.adjoint();
}

template <typename Scalar>
double schur_overlap(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& g, Scalar lambda,
                     double residual_tol) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  check_square(g);
  const Eigen::Index n = g.rows();
  const Mat shifted = g - lambda * Mat::Identity(n, n);
  const double gnorm = g.norm();
  const double scale = gnorm > 0 ? gnorm : 1.0;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  // null vector by two steps of inverse iteration; SVD if that stalls
  Vec x = Vec::Ones(n) / std::sqrt(static_cast<double>(n));
  {
    Eigen::PartialPivLU<Mat> lu(shifted);
    for (int it = 0; it < 2; ++it) {
      x = lu.solve(x);
      const double nx = x.norm();
      if (!std::isfinite(nx) || nx == 0.0) break;
      x /= nx;
    }
  }
  if (!x.allFinite() || !((shifted * x).norm() <= residual_tol * scale)) {
    Eigen::JacobiSVD<Mat> svd(shifted, Eigen::ComputeFullV);
    if (!(svd.singularValues()(n - 1) <= residual_tol * scale)) {
      throw DomainError("overlap_schur: lambda is not an eigenvalue of G");
    }
    x = svd.matrixV().col(n - 1);
  }
  if (n == 1) return 0.0;
  const Mat p = reflector_to_e1<Scalar>(x);
  const Mat reduced = p * g * p;
  // reduced = [[lambda, w^*], [0, G']]; b^* = w^* (lambda - G')^{-1}
  const Mat block = lambda * Mat::Identity(n - 1, n - 1) - reduced.bottomRightCorner(n - 1, n - 1);
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w = reduced.topRightCorner(1, n - 1).adjoint();
  Eigen::PartialPivLU<Mat> lu(block.adjoint());
  if (!(lu.rcond() > 1e-14)) throw DegenerateSampleError("overlap_schur: singular shifted block");
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b = lu.solve(w);
  return b.squaredNorm();
}

}  // namespace

void EnsembleSpec::validate() const {
  if (n < 1) throw DomainError("EnsembleSpec: n must be >= 1");
  if (beta != Beta::real && beta != Beta::complex) throw DomainError("EnsembleSpec: beta must be 1 or 2");
}

RealMatrix sample_real_ginibre(const EnsembleSpec& spec, std::uint64_t index) {
  spec.validate();
  if (spec.beta != Beta::real) throw DomainError("sample_real_ginibre: beta must be 1");
  const rng::GaussianStream stream(spec.seed, index);
  const int n = spec.n;
  RealMatrix g(n, n);
  const std::uint64_t count = static_cast<std::uint64_t>(n) * n;
  for (std::uint64_t block = 0; 2 * block < count; ++block) {
    const auto [a, b] = stream.pair(block);
    const std::uint64_t e = 2 * block;
    g(e / n, e % n) = a;
    if (e + 1 < count) g((e + 1) / n, (e + 1) % n) = b;
  }
  return g;
}

ComplexMatrix sample_complex_ginibre(const EnsembleSpec& spec, std::uint64_t index) {
  spec.validate();
  if (spec.beta != Beta::complex) throw DomainError("sample_complex_ginibre: beta must be 2");
  const rng::GaussianStream stream(spec.seed, index);
  const int n = spec.n;
  ComplexMatrix g(n, n);
  const double scale = std::sqrt(0.5);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const auto [re, im] = stream.pair(static_cast<std::uint64_t>(j) * n + k);
      g(j, k) = {scale * re, scale * im};
    }
  }
  return g;
}

ComplexMatrix sample_ginibre(const EnsembleSpec& spec, std::uint64_t index) {
  if (spec.beta == Beta::real) return sample_real_ginibre(spec, index).cast<std::complex<double>>();
  return sample_complex_ginibre(spec, index);
}

double default_tol_real(int n, const OverlapOptions& opts) {
  return opts.tol_real_factor * std::sqrt(static_cast<double>(n));
}

std::vector<OverlapSample> overlaps_biorthogonal(const RealMatrix& g, std::uint64_t index,
                                                 const OverlapOptions& opts) {
  return overlaps_impl(g, index, opts, true);
}

std::vector<OverlapSample> overlaps_biorthogonal(const ComplexMatrix& g, std::uint64_t index,
                                                 const OverlapOptions& opts) {
  return overlaps_impl(g, index, opts, false);
}

ComplexMatrix overlap_matrix(const ComplexMatrix& g) {
  check_square(g);
  const BiorthogonalBasis b = basis(g, OverlapOptions{});
  const Eigen::Index n = g.rows();
  const ComplexMatrix ll = b.left_rows * b.left_rows.adjoint();  // (a,b): x_La^* x_Lb
  const ComplexMatrix rr = b.right.adjoint() * b.right;                        // (b,a): x_Rb^* x_Ra
  ComplexMatrix o(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index c = 0; c < n; ++c) o(a, c) = ll(a, c) * rr(c, a);
  return o;
}

double overlap_schur_real(const RealMatrix& g, double lambda, double residual_tol) {
  return schur_overlap<double>(g, lambda, residual_tol);
}

double overlap_schur_complex(const ComplexMatrix& g, std::complex<double> z, double residual_tol) {
  return schur_overlap<std::complex<double>>(g, z, residual_tol);
}

Classification classify_eigenvalues(const std::vector<OverlapSample>& samples, Beta beta,
                                    double tol_real) {
  if (!(tol_real > 0.0)) throw DomainError("classify_eigenvalues: tol_real must be > 0");
  Classification out;
  for (OverlapSample s : samples) {
    const bool near_axis = std::abs(s.eigenvalue.imag()) <= tol_real;
    if (beta == Beta::real && near_axis) {
      s.kind = EigenKind::real_line;
      out.real_line.push_back(s);
    } else {
      if (near_axis) ++out.n_near_axis_flagged;
      s.kind = EigenKind::complex;
      out.complex.push_back(s);
    }
  }
  return out;
}

}  // namespace ginovl::ensemble
