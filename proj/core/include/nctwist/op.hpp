#pragma once

#include <complex>
#include <Eigen/Dense>

namespace nctwist {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Frobenius norm shorthand used by all residual computations.
inline double fnorm(const CMatrix& m) { return m.norm(); }

/// Tolerance policy: X and Y count as equal when
/// ||X - Y||_F <= atol + rtol * max(||X||_F, ||Y||_F).
struct Tolerance {
  double atol = 1e-12;
  double rtol = 1e-9;

  double threshold(double norm_a, double norm_b) const {
    return atol + rtol * std::max(norm_a, norm_b);
  }
  bool close(const CMatrix& x, const CMatrix& y) const {
    return (x - y).norm() <= threshold(x.norm(), y.norm());
  }
};

/// A finite-dimensional operator that is either complex-linear or
/// antilinear. An antilinear op with matrix M acts as v -> M * conj(v),
/// so composition and adjoints must track the parity explicitly.
struct Op {
  CMatrix mat;
  bool antilinear = false;

  static Op linear(CMatrix m) { return Op{std::move(m), false}; }
  static Op antilin(CMatrix m) { return Op{std::move(m), true}; }

  Eigen::Index dim() const { return mat.rows(); }
};

CVector apply(const Op& t, const CVector& v);

/// Composition a after b, i.e. (a o b)(v) = a(b(v)).
Op compose(const Op& a, const Op& b);

/// Adjoint with respect to the standard inner product <x,y> = x^dag y.
/// For antilinear T the defining relation is <T x, y> = <T* y, x>.
Op adjoint(const Op& t);

Op inverse(const Op& t);

Op scale(Complex c, const Op& t);

/// Sum of two ops of equal parity.
Op add(const Op& a, const Op& b);

bool approx_equal(const Op& a, const Op& b, const Tolerance& tol = {});

/// Whether t^dag t is the identity (unitary or antiunitary depending on
/// parity). Returns the defect ||t^dag t - 1||_F through *defect if given.
bool is_isometry(const Op& t, const Tolerance& tol = {}, double* defect = nullptr);

/// J X J^{-1} collapsed to a plain linear matrix; requires J antilinear
/// or linear, X linear.
CMatrix conjugate_by(const Op& j, const CMatrix& x);

/// Ordinary commutator [t, a] = t a - a t.
CMatrix commutator(const CMatrix& t, const CMatrix& a);

/// Twisted commutator [t, a]_sigma = t * a - a_sigma * t, where a_sigma
/// is the image of a under whatever twist the caller applies.
CMatrix twisted_commutator(const CMatrix& t, const CMatrix& a, const CMatrix& a_sigma);

}  // namespace nctwist
