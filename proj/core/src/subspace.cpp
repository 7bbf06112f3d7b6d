#include "nctwist/subspace.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <stdexcept>

namespace nctwist {

RVector flatten(const CMatrix& m) {
  RVector v(2 * m.rows() * m.cols());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      v(k++) = m(i, j).real();
      v(k++) = m(i, j).imag();
    }
  }
  return v;
}

CMatrix unflatten(const RVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != 2 * rows * cols)
    throw std::invalid_argument("unflatten: length does not match shape");
  CMatrix m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = Complex{v(k), v(k + 1)};
      k += 2;
    }
  }
  return m;
}

RealSubspace RealSubspace::full(Eigen::Index ambient) {
  return RealSubspace{RMatrix::Identity(ambient, ambient)};
}

RealSubspace RealSubspace::empty(Eigen::Index ambient) {
  return RealSubspace{RMatrix(ambient, 0)};
}

double rank_cutoff(Eigen::Index rows, Eigen::Index cols, double sigma_max) {
  return static_cast<double>(std::max(rows, cols)) * sigma_max * 1e-12;
}

// All rank decisions below use JacobiSVD. The divide-and-conquer variant
// (BDCSVD) mis-deflates on the highly degenerate spectra these stacked
// basis matrices produce -- repeated singular values with exact-zero tails
// -- and can return a factorization that is not even orthogonal. Jacobi
// iteration is unconditionally accurate, and for the small column counts
// used here it costs the same (BDCSVD itself falls back to Jacobi below
// 16 columns).

RealSubspace real_nullspace(const RMatrix& constraints, double zero_floor) {
  const Eigen::Index cols = constraints.cols();
  if (constraints.rows() == 0 || constraints.norm() == 0.0)
    return RealSubspace::full(cols);

  Eigen::JacobiSVD<RMatrix> svd(constraints, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = std::max(rank_cutoff(constraints.rows(), cols, sv(0)), zero_floor);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return RealSubspace{svd.matrixV().rightCols(cols - rank)};
}

RealSubspace orthonormalize(const RMatrix& span) {
  if (span.cols() == 0 || span.norm() == 0.0)
    return RealSubspace::empty(span.rows());
  Eigen::JacobiSVD<RMatrix> svd(span, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = rank_cutoff(span.rows(), span.cols(), sv(0));
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return RealSubspace{svd.matrixU().leftCols(rank)};
}

RealSubspace span_of_matrices(const std::vector<CMatrix>& mats) {
  if (mats.empty()) throw std::invalid_argument("span_of_matrices: no matrices");
  RMatrix span(2 * mats[0].rows() * mats[0].cols(), static_cast<Eigen::Index>(mats.size()));
  for (std::size_t i = 0; i < mats.size(); ++i) span.col(static_cast<Eigen::Index>(i)) = flatten(mats[i]);
  return orthonormalize(span);
}

RealSubspace intersect(const RealSubspace& a, const RealSubspace& b) {
  if (a.ambient() != b.ambient())
    throw std::invalid_argument("intersect: ambient dimensions differ");
  if (a.dim() == 0 || b.dim() == 0) return RealSubspace::empty(a.ambient());
  // x = A alpha = B beta; kernel of [A, -B] gives the coefficient pairs.
  RMatrix stacked(a.ambient(), a.dim() + b.dim());
  stacked.leftCols(a.dim()) = a.basis;
  stacked.rightCols(b.dim()) = -b.basis;
  RealSubspace pairs = real_nullspace(stacked);
  if (pairs.dim() == 0) return RealSubspace::empty(a.ambient());
  RMatrix vecs = a.basis * pairs.basis.topRows(a.dim());
  return orthonormalize(vecs);
}

bool subspace_equal(const RealSubspace& a, const RealSubspace& b, double tol) {
  if (a.ambient() != b.ambient() || a.dim() != b.dim()) return false;
  for (Eigen::Index j = 0; j < a.dim(); ++j)
    if (b.distance(a.basis.col(j)) > tol) return false;
  for (Eigen::Index j = 0; j < b.dim(); ++j)
    if (a.distance(b.basis.col(j)) > tol) return false;
  return true;
}

bool complex_closed(const RealSubspace& s, double tol) {
  const Eigen::Index n2 = s.ambient() / 2;
  const Eigen::Index n = static_cast<Eigen::Index>(std::lround(std::sqrt(double(n2))));
  if (2 * n * n != s.ambient()) throw std::invalid_argument("complex_closed: not a square matrix space");
  for (Eigen::Index j = 0; j < s.dim(); ++j) {
    CMatrix x = unflatten(s.basis.col(j), n, n);
    if (s.distance(flatten(Complex{0.0, 1.0} * x)) > tol) return false;
  }
  return true;
}

RealSubspace commutant(const std::vector<CMatrix>& gens) {
  if (gens.empty()) throw std::invalid_argument("commutant: no generators");
  const Eigen::Index n = gens[0].rows();
  const Eigen::Index nn = n * n;

  // The constraint X g - g X = 0 is complex-linear in X, so the kernel is
  // found over C. Accumulate the Gram matrix of the stacked constraint maps
  // M_g = g^T (x) 1 - 1 (x) g directly from Kronecker blocks; this avoids
  // both giant stacked SVDs and n^6 matrix products.
  CMatrix gram = CMatrix::Zero(nn, nn);
  auto q = [n](Eigen::Index row, Eigen::Index col) { return col * n + row; };
  for (const CMatrix& g : gens) {
    if (g.rows() != n || g.cols() != n)
      throw std::invalid_argument("commutant: generators must be square and same size");
    CMatrix gbar_gt = g.conjugate() * g.transpose();
    CMatrix gd_g = g.adjoint() * g;
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index c2 = 0; c2 < n; ++c2)
          gram(q(r, c), q(r, c2)) += gbar_gt(c, c2);
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index r2 = 0; r2 < n; ++r2)
          gram(q(r, c), q(r2, c)) += gd_g(r, r2);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r2 = 0; r2 < n; ++r2)
          for (Eigen::Index c2 = 0; c2 < n; ++c2) {
            Complex k = std::conj(g(c, c2)) * g(r, r2);
            gram(q(r, c), q(r2, c2)) -= k;
            gram(q(r2, c2), q(r, c)) -= std::conj(k);
          }
  }

  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
  const auto& ev = es.eigenvalues();
  const double evmax = ev(ev.size() - 1);
  if (evmax <= 0.0) return RealSubspace::full(2 * nn);
  // Gram eigenvalues are squared singular values; the relative cutoff below
  // corresponds to sigma/sigma_max <= 1e-6, ample for the exact-kernel vs
  // order-one gaps these constraint systems exhibit.
  const double cutoff = static_cast<double>(nn) * evmax * 1e-12;

  std::vector<CMatrix> kernel;
  for (Eigen::Index j = 0; j < ev.size() && ev(j) <= cutoff; ++j) {
    CVector v = es.eigenvectors().col(j);
    CMatrix x(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r) x(r, c) = v(q(r, c));
    kernel.push_back(x);
    kernel.push_back(Complex{0.0, 1.0} * x);
  }
  if (kernel.empty()) return RealSubspace::empty(2 * nn);
  return span_of_matrices(kernel);
}

std::vector<CMatrix> subspace_matrices(const RealSubspace& s, Eigen::Index n) {
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(s.dim()));
  for (Eigen::Index j = 0; j < s.dim(); ++j) out.push_back(unflatten(s.basis.col(j), n, n));
  return out;
}

}  // namespace nctwist
