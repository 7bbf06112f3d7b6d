#include <doctest.h>

#include <vector>

#include "helpers.hpp"
#include "nctwist/models.hpp"
#include "nctwist/rng.hpp"
#include "nctwist/subspace.hpp"

using namespace nctwist;

namespace {

// Independent commutant oracle: build the real-linear constraint matrix of
// X -> Xg - gX column by column from canonical basis matrices and take its
// nullspace. Exercises none of the machinery inside commutant().
RealSubspace commutant_oracle(const std::vector<CMatrix>& gens, Eigen::Index n) {
  const Eigen::Index ambient = 2 * n * n;
  RMatrix constraints(static_cast<Eigen::Index>(gens.size()) * ambient, ambient);
  for (Eigen::Index j = 0; j < ambient; ++j) {
    RVector e = RVector::Zero(ambient);
    e(j) = 1.0;
    CMatrix basis_j = unflatten(e, n, n);
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      CMatrix comm = basis_j * gens[gi] - gens[gi] * basis_j;
      constraints.block(static_cast<Eigen::Index>(gi) * ambient, j, ambient, 1) = flatten(comm);
    }
  }
  return real_nullspace(constraints);
}

CMatrix basis_matrix(Eigen::Index n, Eigen::Index r, Eigen::Index c, Complex s) {
  CMatrix m = CMatrix::Zero(n, n);
  m(r, c) = s;
  return m;
}

}  // namespace

TEST_CASE("flatten and unflatten are mutually inverse and real-linear") {
  Rng rng(201);
  CMatrix m = rng.gaussian_matrix(3, 5);
  RVector v = flatten(m);
  CHECK(v.size() == 2 * 3 * 5);
  CHECK((unflatten(v, 3, 5) - m).norm() == 0.0);

  CMatrix a = rng.gaussian_matrix(4, 4);
  CMatrix b = rng.gaussian_matrix(4, 4);
  CHECK((flatten(2.5 * a - 0.75 * b) - (2.5 * flatten(a) - 0.75 * flatten(b))).norm() < 1e-14);

  // Row-major interleaved layout: entry (0,1) of a 2x2 lands at slots 2, 3.
  CMatrix e01 = basis_matrix(2, 0, 1, Complex(3.0, -4.0));
  RVector f = flatten(e01);
  CHECK(f(2) == 3.0);
  CHECK(f(3) == -4.0);
  CHECK(f.cwiseAbs().sum() == 7.0);
}

TEST_CASE("real_nullspace finds kernels with orthonormal bases") {
  RMatrix one_row(1, 2);
  one_row << 1.0, 1.0;
  RealSubspace k = real_nullspace(one_row);
  CHECK(k.dim() == 1);
  RVector diag(2);
  diag << 1.0, -1.0;
  CHECK(k.contains(diag, 1e-12));

  RMatrix inv = RMatrix::Identity(3, 3);
  CHECK(real_nullspace(inv).dim() == 0);

  RMatrix zero = RMatrix::Zero(2, 4);
  RealSubspace full = real_nullspace(zero);
  CHECK(full.dim() == 4);
  CHECK((full.basis.transpose() * full.basis - RMatrix::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("orthonormalize collapses dependent spans") {
  RMatrix span(3, 3);
  span.col(0) << 1, 0, 0;
  span.col(1) << 2, 0, 0;
  span.col(2) << 1, 1, 0;
  RealSubspace s = orthonormalize(span);
  CHECK(s.dim() == 2);
  CHECK((s.basis.transpose() * s.basis - RMatrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("span, intersection and equality of matrix subspaces") {
  const Eigen::Index n = 2;
  CMatrix e00 = basis_matrix(n, 0, 0, 1.0);
  CMatrix e01 = basis_matrix(n, 0, 1, 1.0);
  CMatrix e11 = basis_matrix(n, 1, 1, 1.0);

  RealSubspace s1 = span_of_matrices({e00, e01});
  RealSubspace s2 = span_of_matrices({e01, e00});
  CHECK(subspace_equal(s1, s2));
  CHECK_FALSE(subspace_equal(s1, span_of_matrices({e00, e11})));

  RealSubspace meet = intersect(span_of_matrices({e00, e01}), span_of_matrices({e01, e11}));
  CHECK(meet.dim() == 1);
  CHECK(meet.contains(flatten(e01), 1e-10));

  RealSubspace scaled = span_of_matrices({2.0 * e00, e01 + e00});
  CHECK(subspace_equal(s1, scaled));
}

TEST_CASE("complex closure distinguishes real and complex spans") {
  const Eigen::Index n = 2;
  CMatrix e00 = basis_matrix(n, 0, 0, 1.0);
  CMatrix ie00 = basis_matrix(n, 0, 0, Complex(0.0, 1.0));
  CHECK(complex_closed(span_of_matrices({e00, ie00})));
  CHECK_FALSE(complex_closed(span_of_matrices({e00})));
}

TEST_CASE("commutant agrees with the constraint-matrix oracle") {
  Rng rng(202);
  for (Eigen::Index n : {2, 3, 4}) {
    std::vector<CMatrix> gens{rng.gaussian_matrix(n, n), rng.gaussian_matrix(n, n)};
    RealSubspace fast = commutant(gens);
    RealSubspace slow = commutant_oracle(gens, n);
    CHECK(fast.dim() == slow.dim());
    CHECK(subspace_equal(fast, slow));
    CHECK(complex_closed(fast));
  }
}

TEST_CASE("commutant of known generating sets") {
  const Eigen::Index n = 3;

  SUBCASE("identity only: everything commutes") {
    CHECK(commutant({CMatrix::Identity(n, n)}).dim() == 2 * n * n);
  }

  SUBCASE("distinct diagonal: the diagonal algebra") {
    CMatrix d = CMatrix::Zero(n, n);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    d(2, 2) = 3.0;
    RealSubspace c = commutant({d});
    CHECK(c.dim() == 2 * n);
    CHECK(c.contains(flatten(basis_matrix(n, 1, 1, Complex(0.0, 1.0))), 1e-10));
    CHECK_FALSE(c.contains(flatten(basis_matrix(n, 0, 1, 1.0)), 1e-6));
  }

  SUBCASE("irreducible pair: scalars only") {
    CMatrix d = CMatrix::Zero(n, n);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    d(2, 2) = 3.0;
    CMatrix shift = CMatrix::Zero(n, n);
    shift(0, 1) = 1.0;
    shift(1, 2) = 1.0;
    shift(2, 0) = 1.0;
    RealSubspace c = commutant({d, shift});
    CHECK(c.dim() == 2);
    CHECK(c.contains(flatten(CMatrix::Identity(n, n)), 1e-10));
  }
}

TEST_CASE("two-point model commutant is m + n + (matrix tensor identity)") {
  TwistedTriple t = build_toy(Complex(1.0, 0.0), Complex(1.0, 0.0));
  RealSubspace c = commutant(t.algebra.rep_basis);

  // Particle half: anything block-diagonal over the two scalar sectors.
  // Antiparticle half: x (x) 1_2 for arbitrary x. Complex dimension
  // 4 + 4 + 4 = 12, i.e. real dimension 24.
  CHECK(c.dim() == 24);
  CHECK(complex_closed(c));

  auto embed_particle = [&](Eigen::Index r, Eigen::Index ccol, Complex s) {
    CMatrix m = CMatrix::Zero(8, 8);
    m(r, ccol) = s;
    return m;
  };
  // 2x2 blocks on the scalar sectors commute with everything.
  CHECK(c.contains(flatten(embed_particle(0, 1, 1.0)), 1e-10));
  CHECK(c.contains(flatten(embed_particle(2, 3, Complex(0, 1))), 1e-10));

  // x (x) 1_2 with x = E_{01} mixes the two antiparticle copies; it
  // commutes with diag(M, M) yet lies outside any family that keeps the
  // antiparticle part diagonal, so the commutant is strictly larger than
  // m + n + {diag(mu1, mu1, mu2, mu2)}.
  CMatrix witness = CMatrix::Zero(8, 8);
  witness(4, 6) = 1.0;
  witness(5, 7) = 1.0;
  CHECK(c.contains(flatten(witness), 1e-10));

  // The diagonal antiparticle family is contained as well.
  CMatrix diag_family = CMatrix::Zero(8, 8);
  diag_family(4, 4) = 1.0;
  diag_family(5, 5) = 1.0;
  diag_family(6, 6) = Complex(0.0, 2.0);
  diag_family(7, 7) = Complex(0.0, 2.0);
  CHECK(c.contains(flatten(diag_family), 1e-10));

  // Off-block entries do not commute.
  CHECK_FALSE(c.contains(flatten(embed_particle(0, 2, 1.0)), 1e-6));
  CHECK_FALSE(c.contains(flatten(embed_particle(0, 4, 1.0)), 1e-6));
}

TEST_CASE("subspace_matrices inverts span_of_matrices up to span equality") {
  Rng rng(203);
  std::vector<CMatrix> mats{rng.gaussian_matrix(3, 3), rng.gaussian_matrix(3, 3)};
  RealSubspace s = span_of_matrices(mats);
  std::vector<CMatrix> back = subspace_matrices(s, 3);
  CHECK(back.size() == static_cast<std::size_t>(s.dim()));
  CHECK(subspace_equal(s, span_of_matrices(back)));
}

TEST_CASE("rank cutoff scales with the largest singular value") {
  CHECK(rank_cutoff(10, 10, 1.0) == doctest::Approx(1e-11));
  CHECK(rank_cutoff(10, 10, 0.0) == 0.0);
  CHECK(rank_cutoff(100, 10, 2.0) > rank_cutoff(10, 10, 2.0));
}
