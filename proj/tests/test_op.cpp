#include <doctest.h>

#include "helpers.hpp"
#include "nctwist/op.hpp"
#include "nctwist/rng.hpp"

using namespace nctwist;

namespace {

Op random_op(Rng& rng, Eigen::Index n, bool antilinear) {
  CMatrix m = rng.gaussian_matrix(n, n);
  return antilinear ? Op::antilin(m) : Op::linear(m);
}

}  // namespace

TEST_CASE("composition matches action on vectors for every parity combination") {
  Rng rng(101);
  const Eigen::Index n = 5;
  for (bool pa : {false, true}) {
    for (bool pb : {false, true}) {
      Op a = random_op(rng, n, pa);
      Op b = random_op(rng, n, pb);
      Op ab = compose(a, b);
      CHECK(ab.antilinear == (pa != pb));
      for (int k = 0; k < 4; ++k) {
        CVector v = rng.cgaussian_vector(n);
        CVector lhs = nctwist::apply(ab, v);
        CVector rhs = nctwist::apply(a, nctwist::apply(b, v));
        CHECK((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
      }
    }
  }
}

TEST_CASE("adjoint satisfies the defining inner-product identity") {
  Rng rng(102);
  const Eigen::Index n = 6;

  SUBCASE("linear: <Tx,y> = <x,T*y>") {
    Op t = random_op(rng, n, false);
    Op ts = adjoint(t);
    for (int k = 0; k < 8; ++k) {
      CVector x = rng.cgaussian_vector(n);
      CVector y = rng.cgaussian_vector(n);
      Complex lhs = nctwist::apply(t, x).dot(y);
      Complex rhs = x.dot(nctwist::apply(ts, y));
      CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
    }
  }

  SUBCASE("antilinear: <Tx,y> = <T*y,x>") {
    Op t = random_op(rng, n, true);
    Op ts = adjoint(t);
    CHECK(ts.antilinear);
    for (int k = 0; k < 8; ++k) {
      CVector x = rng.cgaussian_vector(n);
      CVector y = rng.cgaussian_vector(n);
      Complex lhs = nctwist::apply(t, x).dot(y);
      Complex rhs = nctwist::apply(ts, y).dot(x);
      CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
    }
  }

  SUBCASE("involutive") {
    for (bool parity : {false, true}) {
      Op t = random_op(rng, n, parity);
      Op tss = adjoint(adjoint(t));
      CHECK(tss.antilinear == parity);
      CHECK((tss.mat - t.mat).norm() == 0.0);
    }
  }
}

TEST_CASE("inverse composes to the identity on vectors") {
  Rng rng(103);
  const Eigen::Index n = 4;
  for (bool parity : {false, true}) {
    Op t = random_op(rng, n, parity);
    Op ti = inverse(t);
    CHECK(ti.antilinear == parity);
    Op id = compose(t, ti);
    CHECK_FALSE(id.antilinear);
    CHECK((id.mat - CMatrix::Identity(n, n)).norm() < 1e-10);
    for (int k = 0; k < 4; ++k) {
      CVector v = rng.cgaussian_vector(n);
      CHECK((nctwist::apply(ti, nctwist::apply(t, v)) - v).norm() < 1e-10 * (1.0 + v.norm()));
    }
  }
}

TEST_CASE("scale and add act pointwise and respect parity") {
  Rng rng(104);
  const Eigen::Index n = 4;
  Complex c(0.3, -1.2);
  for (bool parity : {false, true}) {
    Op t = random_op(rng, n, parity);
    Op ct = scale(c, t);
    CVector v = rng.cgaussian_vector(n);
    CHECK((nctwist::apply(ct, v) - c * nctwist::apply(t, v)).norm() < 1e-12);

    Op s = random_op(rng, n, parity);
    Op sum = add(t, s);
    CHECK((nctwist::apply(sum, v) - nctwist::apply(t, v) - nctwist::apply(s, v)).norm() < 1e-12);
  }
  Op lin = random_op(rng, n, false);
  Op anti = random_op(rng, n, true);
  CHECK_THROWS(add(lin, anti));
}

TEST_CASE("isometry detection for unitary and antiunitary operators") {
  const Eigen::Index n = 4;
  CMatrix f = CMatrix::Zero(n, n);
  f(0, 2) = 1;
  f(1, 3) = 1;
  f(2, 0) = 1;
  f(3, 1) = 1;

  double defect = 0.0;
  CHECK(is_isometry(Op::antilin(f), {}, &defect));
  CHECK(defect < 1e-14);
  CHECK(is_isometry(Op::linear(CMatrix::Identity(n, n))));

  CHECK_FALSE(is_isometry(Op::linear(2.0 * CMatrix::Identity(n, n)), {}, &defect));
  CHECK(defect > 1.0);
}

TEST_CASE("conjugation by an antilinear operator matches its vector action") {
  Rng rng(105);
  const Eigen::Index n = 5;
  CMatrix jm = rng.gaussian_matrix(n, n);
  Op j = Op::antilin(jm);
  Op jinv = inverse(j);
  CMatrix x = rng.gaussian_matrix(n, n);
  CMatrix conj_x = conjugate_by(j, x);
  for (int k = 0; k < 6; ++k) {
    CVector v = rng.cgaussian_vector(n);
    CVector lhs = conj_x * v;
    CVector rhs = nctwist::apply(j, x * nctwist::apply(jinv, v));
    CHECK((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
  }

  CMatrix y = rng.gaussian_matrix(n, n);
  Op u = Op::linear(y);
  CMatrix conj_lin = conjugate_by(u, x);
  CHECK((conj_lin - y * x * y.inverse()).norm() < 1e-9);
}

TEST_CASE("commutators") {
  Rng rng(106);
  CMatrix a = rng.gaussian_matrix(4, 4);
  CMatrix b = rng.gaussian_matrix(4, 4);
  CHECK((commutator(a, b) + commutator(b, a)).norm() < 1e-13);
  CHECK(commutator(a, a).norm() < 1e-13);
  // The twisted commutator with the untouched element reduces to the
  // ordinary one.
  CHECK((twisted_commutator(a, b, b) - commutator(a, b)).norm() == 0.0);
  CMatrix bs = rng.gaussian_matrix(4, 4);
  CHECK((twisted_commutator(a, b, bs) - (a * b - bs * a)).norm() == 0.0);
}

TEST_CASE("tolerance policy is relative at scale and absolute near zero") {
  Tolerance tol;
  CMatrix x = CMatrix::Identity(3, 3) * 1e6;
  CMatrix y = x + CMatrix::Identity(3, 3) * 1e-4;
  CHECK(tol.close(x, y));
  CMatrix z = CMatrix::Zero(3, 3);
  CMatrix w = CMatrix::Identity(3, 3) * 1e-13;
  CHECK(tol.close(z, w));
  CHECK_FALSE(tol.close(z, CMatrix::Identity(3, 3) * 1e-6));
}
