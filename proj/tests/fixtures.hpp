#pragma once

// Shared model fixtures for the test and acceptance binaries. Everything in
// this header is framework-free so it can be included from plain main()
// programs as well as from doctest translation units.

#include <string>
#include <utility>
#include <vector>

#include "nctwist/fluct.hpp"
#include "nctwist/models.hpp"
#include "nctwist/rng.hpp"
#include "nctwist/triple.hpp"

namespace nctest {

using namespace nctwist;

#ifdef NCTWIST_FIXTURE_DIR
inline std::string fixture_path(const std::string& name) {
  return std::string(NCTWIST_FIXTURE_DIR) + "/" + name;
}
#endif

/// Alternating-sign diagonal on C^8; commutes with the toy Dirac operator,
/// so it is an involutive self-adjoint twist with a definite sign in the
/// intertwining relation.
inline CMatrix sigma_twist() {
  CMatrix nu = CMatrix::Zero(8, 8);
  for (int i = 0; i < 8; ++i) nu(i, i) = (i % 2 == 0) ? 1.0 : -1.0;
  return nu;
}

/// Half-flip diagonal: anticommutes with the hopping block of the toy Dirac
/// operator, giving the minus sign in the intertwining relation when the
/// cross entry vanishes.
inline CMatrix halfflip_twist() {
  CMatrix nu = CMatrix::Zero(8, 8);
  double s[4] = {1.0, 1.0, -1.0, -1.0};
  for (int i = 0; i < 8; ++i) nu(i, i) = s[i % 4];
  return nu;
}

/// Positive diagonal with nu != +-nu^{-1}; still satisfies nu J nu = J for
/// the half-swap real structure. The scaling is uneven inside the matrix
/// block of the representation, so the twist does not commute with the
/// algebra: gauge conjugation genuinely moves the spectrum.
inline CMatrix stretch_twist() {
  CMatrix nu = CMatrix::Zero(8, 8);
  double s[8] = {2.0, 1.0, 1.0, 1.0, 0.5, 1.0, 1.0, 1.0};
  for (int i = 0; i < 8; ++i) nu(i, i) = s[i];
  return nu;
}

inline TwistedTriple with_twist(TwistedTriple t, const CMatrix& nu) {
  for (auto& comp : t.components) comp.twist = nu;
  return t;
}

/// Grading compatible with the two-point model: -1 on the hopping-partner
/// states so it anticommutes with the full Dirac operator (cross entry
/// included) and commutes with the represented algebra.
inline CMatrix toy_grading() {
  CMatrix g = CMatrix::Zero(8, 8);
  double s[8] = {1.0, 1.0, -1.0, -1.0, -1.0, -1.0, 1.0, 1.0};
  for (int i = 0; i < 8; ++i) g(i, i) = s[i];
  return g;
}

inline TwistedTriple even_toy(Complex kx, Complex ky) {
  TwistedTriple t = build_toy(kx, ky);
  t.grading = toy_grading();
  t.name += "-even";
  return t;
}

inline OneForm random_form(const TwistedTriple& t, int pairs, std::uint64_t seed,
                           bool symmetrize = false) {
  return build_one_form(t.algebra, random_generator_pairs(t.algebra, pairs, seed), symmetrize);
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

/// Full matrix algebra M_m acting on itself by left multiplication, with
/// the adjoint map as real structure, D = left + right multiplication by a
/// Hermitian element, and the twist x -> g x g for a real symmetric
/// involution g. Every axiom holds exactly, with the intertwining sign
/// controlled by whether d commutes or anticommutes with g. Constructed
/// from first principles, independent of the library's model builders, so
/// it can serve as an oracle instance.
inline TwistedTriple left_regular_triple(Eigen::Index m, std::uint64_t seed, int eps_sign) {
  TwistedTriple t;
  t.name = "left-regular-" + std::to_string(m);
  t.algebra.summands = {Summand{'C', static_cast<int>(m)}};

  const CMatrix im = CMatrix::Identity(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c)
      for (Complex s : {Complex(1.0), Complex(0.0, 1.0)}) {
        CMatrix e = CMatrix::Zero(m, m);
        e(r, c) = s;
        t.algebra.rep_basis.push_back(kron(e, im));
      }

  // vec(x^dag) = P conj(vec x) with P the transpose permutation.
  CMatrix p = CMatrix::Zero(m * m, m * m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) p(i * m + j, j * m + i) = 1.0;
  t.J = Op::antilin(p);

  Rng rng(seed);
  RMatrix real_seed(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) real_seed(i, j) = rng.gaussian();
  Eigen::HouseholderQR<RMatrix> qr(real_seed);
  RMatrix q = qr.householderQ();
  RVector signs(m);
  for (Eigen::Index i = 0; i < m; ++i) signs(i) = (i % 2 == 0) ? 1.0 : -1.0;
  CMatrix g = (q * signs.asDiagonal() * q.transpose()).cast<Complex>();

  CMatrix h = rng.hermitian_matrix(m);
  CMatrix proj_p = 0.5 * (CMatrix::Identity(m, m) + g);
  CMatrix proj_m = 0.5 * (CMatrix::Identity(m, m) - g);
  CMatrix d = (eps_sign >= 0) ? CMatrix(proj_p * h * proj_p + proj_m * h * proj_m)
                              : CMatrix(proj_p * h * proj_m + proj_m * h * proj_p);

  CMatrix dirac = kron(d, im) + kron(im, d.conjugate());
  CMatrix nu = kron(g, g.conjugate());
  t.components = {TwistComponent{dirac, nu}};
  return t;
}

}  // namespace nctest
