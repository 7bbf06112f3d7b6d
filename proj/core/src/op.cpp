#include "nctwist/op.hpp"

#include <stdexcept>

namespace nctwist {

CVector apply(const Op& t, const CVector& v) {
  if (t.antilinear) return t.mat * v.conjugate();
  return t.mat * v;
}

Op compose(const Op& a, const Op& b) {
  // (a o b)(v): push b's matrix through a's conjugation if a is antilinear.
  CMatrix rhs = a.antilinear ? b.mat.conjugate() : b.mat;
  return Op{a.mat * rhs, a.antilinear != b.antilinear};
}

Op adjoint(const Op& t) {
  // Linear: the usual dagger. Antilinear: <M conj(x), y> = <M^T conj(y), x>,
  // so the adjoint of v -> M conj(v) is v -> M^T conj(v).
  if (t.antilinear) return Op{t.mat.transpose(), true};
  return Op{t.mat.adjoint(), false};
}

Op inverse(const Op& t) {
  CMatrix inv = t.mat.inverse();
  if (t.antilinear) return Op{inv.conjugate(), true};
  return Op{std::move(inv), false};
}

Op scale(Complex c, const Op& t) { return Op{c * t.mat, t.antilinear}; }

Op add(const Op& a, const Op& b) {
  if (a.antilinear != b.antilinear)
    throw std::invalid_argument("Op::add: mixed parity sum is not an operator of definite parity");
  return Op{a.mat + b.mat, a.antilinear};
}

bool approx_equal(const Op& a, const Op& b, const Tolerance& tol) {
  if (a.antilinear != b.antilinear) return false;
  return tol.close(a.mat, b.mat);
}

bool is_isometry(const Op& t, const Tolerance& tol, double* defect) {
  Op prod = compose(adjoint(t), t);
  CMatrix id = CMatrix::Identity(t.dim(), t.dim());
  double d = (prod.mat - id).norm();
  if (defect) *defect = d;
  return !prod.antilinear && d <= tol.threshold(prod.mat.norm(), 1.0);
}

CMatrix conjugate_by(const Op& j, const CMatrix& x) {
  Op res = compose(compose(j, Op::linear(x)), inverse(j));
  return res.mat;
}

CMatrix commutator(const CMatrix& t, const CMatrix& a) { return t * a - a * t; }

CMatrix twisted_commutator(const CMatrix& t, const CMatrix& a, const CMatrix& a_sigma) {
  return t * a - a_sigma * t;
}

}  // namespace nctwist
