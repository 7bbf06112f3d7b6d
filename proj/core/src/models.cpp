#include "nctwist/models.hpp"

#include <stdexcept>
#include <utility>

namespace nctwist {

namespace {

constexpr Complex kI{0.0, 1.0};

// Places block at (row, col) of m.
void put_block(CMatrix& m, Eigen::Index row, Eigen::Index col, const CMatrix& block) {
  m.block(row, col, block.rows(), block.cols()) = block;
}

CMatrix half_swap(Eigen::Index n) {
  CMatrix f = CMatrix::Zero(n, n);
  f.block(0, n / 2, n / 2, n / 2).setIdentity();
  f.block(n / 2, 0, n / 2, n / 2).setIdentity();
  return f;
}

}  // namespace

YukawaData YukawaData::scalars(Complex kv, Complex ke, Complex ku, Complex kd, Complex kvr) {
  YukawaData y;
  y.kv = CMatrix::Constant(1, 1, kv);
  y.ke = CMatrix::Constant(1, 1, ke);
  y.ku = CMatrix::Constant(1, 1, ku);
  y.kd = CMatrix::Constant(1, 1, kd);
  y.kvr = CMatrix::Constant(1, 1, kvr);
  return y;
}

int YukawaData::generations() const {
  const CMatrix* blocks[] = {&kv, &ke, &ku, &kd, &kvr};
  Eigen::Index g = kv.rows();
  for (const CMatrix* b : blocks)
    if (b->rows() != g || b->cols() != g)
      throw std::invalid_argument("YukawaData: blocks must be square matrices of one size");
  if (g < 1) throw std::invalid_argument("YukawaData: empty blocks");
  return static_cast<int>(g);
}

TwistedTriple build_toy(Complex kx, Complex ky) {
  const Eigen::Index n = 8;
  TwistedTriple t;
  t.name = "toy";
  t.algebra.summands = {Summand{'C', 1}, Summand{'C', 1}, Summand{'C', 2}};

  // pi(lL, lR, M) = diag(lL, lL, lR, lR) on the particle half and
  // diag(M, M) on the antiparticle half.
  auto rep = [&](Complex lL, Complex lR, const CMatrix& m) {
    CMatrix p = CMatrix::Zero(n, n);
    p(0, 0) = lL;
    p(1, 1) = lL;
    p(2, 2) = lR;
    p(3, 3) = lR;
    put_block(p, 4, 4, m);
    put_block(p, 6, 6, m);
    return p;
  };
  const CMatrix z2 = CMatrix::Zero(2, 2);
  for (Complex s : {Complex(1.0), kI}) t.algebra.rep_basis.push_back(rep(s, 0.0, z2));
  for (Complex s : {Complex(1.0), kI}) t.algebra.rep_basis.push_back(rep(0.0, s, z2));
  for (Eigen::Index r = 0; r < 2; ++r)
    for (Eigen::Index c = 0; c < 2; ++c)
      for (Complex s : {Complex(1.0), kI}) {
        CMatrix m = z2;
        m(r, c) = s;
        t.algebra.rep_basis.push_back(rep(0.0, 0.0, m));
      }

  t.J = Op::antilin(half_swap(n));

  // D = [[S, T^dag], [T, conj S]] with S the Hermitian hop between the two
  // scalar sectors and T a single Majorana-type entry.
  CMatrix s4 = CMatrix::Zero(4, 4);
  s4(0, 2) = kx;
  s4(1, 3) = kx;
  s4(2, 0) = std::conj(kx);
  s4(3, 1) = std::conj(kx);
  CMatrix t4 = CMatrix::Zero(4, 4);
  t4(0, 0) = ky;
  CMatrix d = CMatrix::Zero(n, n);
  put_block(d, 0, 0, s4);
  put_block(d, 0, 4, t4.adjoint());
  put_block(d, 4, 0, t4);
  put_block(d, 4, 4, s4.conjugate());

  t.components = {TwistComponent{d, CMatrix::Identity(n, n)}};
  return t;
}

namespace {

// Particle-half index of color c (0 = lepton, 1..3 = quark colors) and
// internal state a (0 = R1, 1 = R2, 2 = L1, 3 = L2), before generations.
inline Eigen::Index pidx(Eigen::Index c, Eigen::Index a) { return 4 * c + a; }

// Representation of one left-right algebra element on the 32-dimensional
// one-generation space: I_4 (x) diag(qR, qL) on particles, m (x) I_4 on
// antiparticles.
CMatrix lr_rep(const CMatrix& qL, const CMatrix& qR, const CMatrix& m) {
  CMatrix p = CMatrix::Zero(32, 32);
  for (Eigen::Index c = 0; c < 4; ++c) {
    put_block(p, pidx(c, 0), pidx(c, 0), qR);
    put_block(p, pidx(c, 2), pidx(c, 2), qL);
  }
  for (Eigen::Index c = 0; c < 4; ++c)
    for (Eigen::Index cc = 0; cc < 4; ++cc)
      for (Eigen::Index a = 0; a < 4; ++a) p(16 + pidx(c, a), 16 + pidx(cc, a)) = m(c, cc);
  return p;
}

CMatrix kron_identity(const CMatrix& m, Eigen::Index g) {
  if (g == 1) return m;
  CMatrix out = CMatrix::Zero(m.rows() * g, m.cols() * g);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (m(r, c) != Complex(0.0))
        out.block(r * g, c * g, g, g) = m(r, c) * CMatrix::Identity(g, g);
  return out;
}

}  // namespace

TwistedTriple build_sm_finite(const YukawaData& y, SmAlgebra which) {
  const Eigen::Index g = y.generations();
  const Eigen::Index n = 32 * g;

  TwistedTriple t;
  t.name = (which == SmAlgebra::LeftRight) ? "sm-lr" : "sm";

  const CMatrix z2 = CMatrix::Zero(2, 2);
  const CMatrix i2 = CMatrix::Identity(2, 2);
  auto rep = [&](const CMatrix& qL, const CMatrix& qR, const CMatrix& m) {
    return kron_identity(lr_rep(qL, qR, m), g);
  };

  if (which == SmAlgebra::LeftRight) {
    t.algebra.summands = {Summand{'H', 1}, Summand{'H', 1}, Summand{'C', 4}};
    const CMatrix z4 = CMatrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
      CMatrix q = quaternion_matrix(i == 0, i == 1, i == 2, i == 3);
      t.algebra.rep_basis.push_back(rep(q, z2, z4));
    }
    for (int i = 0; i < 4; ++i) {
      CMatrix q = quaternion_matrix(i == 0, i == 1, i == 2, i == 3);
      t.algebra.rep_basis.push_back(rep(z2, q, z4));
    }
    for (Eigen::Index r = 0; r < 4; ++r)
      for (Eigen::Index c = 0; c < 4; ++c)
        for (Complex s : {Complex(1.0), kI}) {
          CMatrix m = z4;
          m(r, c) = s;
          t.algebra.rep_basis.push_back(rep(z2, z2, m));
        }
  } else {
    // (lambda, q, m3) embedded as qL = q, qR = diag(lambda, conj lambda),
    // m4 = diag(lambda, m3).
    t.algebra.summands = {Summand{'C', 1}, Summand{'H', 1}, Summand{'C', 3}};
    auto sm_rep = [&](Complex lambda, const CMatrix& q, const CMatrix& m3) {
      CMatrix qR = z2;
      qR(0, 0) = lambda;
      qR(1, 1) = std::conj(lambda);
      CMatrix m4 = CMatrix::Zero(4, 4);
      m4(0, 0) = lambda;
      put_block(m4, 1, 1, m3);
      return rep(q, qR, m4);
    };
    const CMatrix z3 = CMatrix::Zero(3, 3);
    for (Complex s : {Complex(1.0), kI}) t.algebra.rep_basis.push_back(sm_rep(s, z2, z3));
    for (int i = 0; i < 4; ++i) {
      CMatrix q = quaternion_matrix(i == 0, i == 1, i == 2, i == 3);
      t.algebra.rep_basis.push_back(sm_rep(0.0, q, z3));
    }
    for (Eigen::Index r = 0; r < 3; ++r)
      for (Eigen::Index c = 0; c < 3; ++c)
        for (Complex s : {Complex(1.0), kI}) {
          CMatrix m = z3;
          m(r, c) = s;
          t.algebra.rep_basis.push_back(sm_rep(0.0, z2, m));
        }
  }

  t.J = Op::antilin(kron_identity(half_swap(32), g));

  // Grading: -1 on right-handed, +1 on left-handed particle states, with
  // the opposite signs on the antiparticle half.
  CMatrix gamma1 = CMatrix::Zero(32, 32);
  for (Eigen::Index c = 0; c < 4; ++c)
    for (Eigen::Index a = 0; a < 4; ++a) {
      double sgn = (a < 2) ? -1.0 : 1.0;
      gamma1(pidx(c, a), pidx(c, a)) = sgn;
      gamma1(16 + pidx(c, a), 16 + pidx(c, a)) = -sgn;
    }
  t.grading = kron_identity(gamma1, g);

  // S couples R and L states within each color: per color the 4 x 4 block
  // pattern [[0, Y^dag], [Y, 0]] over the (R, L) split, with Y =
  // diag(Y_up, Y_down) in the (1, 2) internal slots.
  CMatrix s = CMatrix::Zero(16 * g, 16 * g);
  for (Eigen::Index c = 0; c < 4; ++c) {
    const CMatrix& y1 = (c == 0) ? y.kv : y.ku;
    const CMatrix& y2 = (c == 0) ? y.ke : y.kd;
    s.block(pidx(c, 0) * g, pidx(c, 2) * g, g, g) = y1.adjoint();
    s.block(pidx(c, 1) * g, pidx(c, 3) * g, g, g) = y2.adjoint();
    s.block(pidx(c, 2) * g, pidx(c, 0) * g, g, g) = y1;
    s.block(pidx(c, 3) * g, pidx(c, 1) * g, g, g) = y2;
  }
  // Majorana block: couples the R1 lepton states to their conjugates.
  CMatrix tm = CMatrix::Zero(16 * g, 16 * g);
  tm.block(0, 0, g, g) = y.kvr;

  CMatrix d = CMatrix::Zero(n, n);
  put_block(d, 0, 0, s);
  put_block(d, 0, 16 * g, tm.adjoint());
  put_block(d, 16 * g, 0, tm);
  put_block(d, 16 * g, 16 * g, s.conjugate());

  t.components = {TwistComponent{d, CMatrix::Identity(n, n)}};
  return t;
}

TwistedTriple decompose_dirac(const TwistedTriple& t, const std::string& decomposition) {
  const Eigen::Index n = t.dim();
  const CMatrix d = t.dirac();
  const CMatrix id = CMatrix::Identity(n, n);

  TwistedTriple out = t;
  out.components.clear();
  if (decomposition == "none") {
    out.components.push_back(TwistComponent{d, id});
    return out;
  }
  if (n % 2 != 0)
    throw std::invalid_argument("decompose_dirac: half splits need even dimension");
  const Eigen::Index h = n / 2;
  CMatrix d_diag = CMatrix::Zero(n, n);
  d_diag.block(0, 0, h, h) = d.block(0, 0, h, h);
  d_diag.block(h, h, h, h) = d.block(h, h, h, h);
  CMatrix d_ur = CMatrix::Zero(n, n);
  d_ur.block(0, h, h, h) = d.block(0, h, h, h);
  CMatrix d_ll = CMatrix::Zero(n, n);
  d_ll.block(h, 0, h, h) = d.block(h, 0, h, h);

  if (decomposition == "two") {
    out.components.push_back(TwistComponent{d_diag, id});
    out.components.push_back(TwistComponent{d_ur + d_ll, id});
  } else if (decomposition == "three") {
    out.components.push_back(TwistComponent{d_diag, id});
    out.components.push_back(TwistComponent{d_ur, id});
    out.components.push_back(TwistComponent{d_ll, id});
  } else {
    throw std::invalid_argument("decompose_dirac: unknown decomposition '" + decomposition +
                                "' (expected none, two or three)");
  }
  return out;
}

}  // namespace nctwist
