#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nctwist/subspace.hpp"

namespace nctwist {

/// One simple summand of a real *-algebra: k x k matrices over the named
/// field. field is 'R', 'C' or 'H'; plain R, C, H are k = 1.
struct Summand {
  char field = 'C';
  int k = 1;

  int real_dim() const {
    switch (field) {
      case 'R': return k * k;
      case 'C': return 2 * k * k;
      case 'H': return 4 * k * k;
    }
    return 0;
  }
  std::string label() const;
  bool operator==(const Summand&) const = default;
};

/// A real *-algebra given by a faithful representation on C^n. rep_basis
/// is a real-linear basis of pi(A); elements are real coefficient vectors
/// against it. The declared summands describe the abstract algebra and are
/// checked against the representation where they matter.
struct FiniteAlgebra {
  std::vector<Summand> summands;
  std::vector<CMatrix> rep_basis;

  Eigen::Index hilbert_dim() const { return rep_basis.empty() ? 0 : rep_basis[0].rows(); }
  Eigen::Index real_dim() const { return static_cast<Eigen::Index>(rep_basis.size()); }

  CMatrix embed(const RVector& coeffs) const;

  /// Least-squares coefficients of m against rep_basis. The off-span
  /// residual norm is written to *residual when given.
  RVector coeffs_of(const CMatrix& m, double* residual = nullptr) const;

  /// Coefficient vector of the adjoint of the element with the given
  /// coefficients (the star map in coordinates).
  RVector star_coeffs(const RVector& coeffs) const;

  RealSubspace rep_span() const { return span_of_matrices(rep_basis); }
};

/// Multiplicative unit of the represented algebra, solved from the span.
/// This is the unit of pi(A), which need not be the identity on H.
CMatrix algebra_unit(const std::vector<CMatrix>& basis, double* residual = nullptr);

/// Whether the real span of basis is closed under products and adjoints.
bool is_subalgebra(const std::vector<CMatrix>& basis, double tol = 1e-9,
                   double* max_residual = nullptr);

struct BlockSignature {
  char field = 0;  // 'R', 'C', 'H', or 0 when unrecognized
  int k = 0;
  Eigen::Index real_dim = 0;

  bool operator==(const BlockSignature&) const = default;
};

/// Wedderburn-style signature of a *-closed matrix span: the list of simple
/// blocks, each classified as M_k(R), M_k(C) or M_k(H).
struct StructureSignature {
  std::vector<BlockSignature> blocks;  // sorted by (k, field)
  Eigen::Index real_dim = 0;
  bool commutative = false;
  bool recognized = false;  // every block classified and dims add up

  std::string to_string() const;
};

/// Classify a *-closed span by splitting along a generic self-adjoint
/// central element. Retries with fresh randomness on degenerate draws.
StructureSignature structure_signature(const std::vector<CMatrix>& basis,
                                       std::uint64_t seed = 7);

/// Minimal central projections of a unital *-closed matrix span: one
/// projection per simple block, summing to the span's unit. Found by
/// spectrally splitting a generic self-adjoint central element (with
/// retries on degenerate draws). Empty when the span has no unit or no
/// clean splitting is found.
std::vector<CMatrix> central_block_projectors(const std::vector<CMatrix>& basis,
                                              std::uint64_t seed = 7);

CMatrix random_element(const FiniteAlgebra& alg, std::uint64_t seed);
CMatrix random_self_adjoint_element(const FiniteAlgebra& alg, std::uint64_t seed);

/// exp(skew) for a random skew-adjoint element of the algebra; lands in the
/// unitary group of A.
CMatrix random_unitary(const FiniteAlgebra& alg, std::uint64_t seed);

/// Standard embedding of a quaternion q = a + b i + c j + d k as the 2x2
/// complex matrix a 1 + b (i sigma3) + c (i sigma2) + d (i sigma1).
CMatrix quaternion_matrix(double a, double b, double c, double d);

}  // namespace nctwist
