#pragma once

#include <vector>

#include "nctwist/op.hpp"

namespace nctwist {

/// Flatten an m x n complex matrix to a real vector of length 2 m n,
/// row-major, with (re, im) interleaved per entry.
RVector flatten(const CMatrix& m);

/// Inverse of flatten for the given shape.
CMatrix unflatten(const RVector& v, Eigen::Index rows, Eigen::Index cols);

/// An orthonormal basis (columns) of a real-linear subspace of R^ambient.
/// Both flattened matrix spaces (ambient = 2 n^2) and algebra coefficient
/// spaces (ambient = real dimension of the algebra) use this type.
struct RealSubspace {
  RMatrix basis;  // ambient x dim, orthonormal columns

  Eigen::Index dim() const { return basis.cols(); }
  Eigen::Index ambient() const { return basis.rows(); }

  RVector project(const RVector& v) const { return basis * (basis.transpose() * v); }
  double distance(const RVector& v) const { return (v - project(v)).norm(); }
  bool contains(const RVector& v, double tol) const { return distance(v) <= tol; }

  static RealSubspace full(Eigen::Index ambient);
  static RealSubspace empty(Eigen::Index ambient);
};

/// Numerical rank cutoff used everywhere a rank decision is made:
/// singular values sigma <= max(rows, cols) * sigma_max * 1e-12 are zero.
double rank_cutoff(Eigen::Index rows, Eigen::Index cols, double sigma_max);

/// Orthonormal basis of the kernel of a stacked real constraint matrix.
/// zero_floor is an absolute singular-value threshold below which a
/// constraint direction counts as numerically zero. It matters when the
/// matrix may consist entirely of rounding noise: a purely relative cutoff
/// would then treat noise as full rank and report an empty kernel. Callers
/// that know the natural magnitude of their constraint entries should pass
/// noise_level * that magnitude; the default keeps the relative rule only.
RealSubspace real_nullspace(const RMatrix& constraints, double zero_floor = 0.0);

/// Orthonormalize a spanning set (columns of span may be dependent).
RealSubspace orthonormalize(const RMatrix& span);

RealSubspace span_of_matrices(const std::vector<CMatrix>& mats);

/// Intersection of two subspaces of the same ambient space.
RealSubspace intersect(const RealSubspace& a, const RealSubspace& b);

bool subspace_equal(const RealSubspace& a, const RealSubspace& b, double tol = 1e-9);

/// Flattened-matrix subspaces only: closed under multiplication by i.
bool complex_closed(const RealSubspace& s, double tol = 1e-9);

/// Orthonormal basis of {X : X g = g X for all g in gens}, as a subspace
/// of the flattened n x n matrix space. The commutation constraints are
/// complex-linear, so the result is always complex_closed.
RealSubspace commutant(const std::vector<CMatrix>& gens);

/// Matrices of a flattened-matrix subspace basis.
std::vector<CMatrix> subspace_matrices(const RealSubspace& s, Eigen::Index n);

}  // namespace nctwist
