#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nctwist/triple.hpp"

namespace nctwist {

/// Residual of the twisted first-order condition for one component and one
/// pair of algebra elements:
///   || [D_l, pi(a)] B_l^+(b) - B_l^-(b) [D_l, pi(a)] ||_F
/// with B_l^{+-}(b) = J nu_l^{+-1} pi(b) nu_l^{-+1} J^{-1}.
double first_order_residual(const TwistedTriple& t, const CMatrix& a, const CMatrix& b,
                            std::size_t l);

enum class Side {
  B,  // solve for b, quantifying a over the given set
  A,  // solve for a, quantifying b over the given set
};

/// Solution set of the twisted first-order condition for component l, in
/// the flattened-matrix space: all algebra elements x (on the chosen side)
/// with first_order_residual = 0 against every basis element of `given` on
/// the other side. The condition is real-linear in either argument, so the
/// set is a real subspace of the represented algebra.
RealSubspace compatible_subspace(const TwistedTriple& t, std::size_t l,
                                 const RealSubspace& given, Side side = Side::B);

struct BreakReport {
  RealSubspace surviving;            // flattened-matrix subspace
  std::vector<CMatrix> basis;        // the same subspace as matrices
  StructureSignature signature;      // only meaningful when is_subalgebra
  int iterations = 0;
  bool is_subalgebra = false;        // closure + *-closure certified
  double closure_residual = 0.0;
  double max_residual = 0.0;         // worst first-order residual on the result
};

/// Self-compatible subspace S of the represented algebra:
/// first_order_residual(a, b, l) = 0 for all a, b in S and all components.
/// Computed by iterating the order-reversing map S -> a-solve(S) meet
/// b-solve(S) (across every component) from the full algebra; the iterates
/// settle into a cycle of period one or two, and the reported subspace is
/// the intersection of the two limbs, which is pairwise compatible by
/// construction. The result is certified as a subalgebra before a
/// signature is claimed; when certification fails the report carries
/// is_subalgebra = false and the raw subspace. iterations counts sweeps
/// until the cycle is recognized.
BreakReport breaking_fixed_point(const TwistedTriple& t);

struct Dd16Decomposition {
  CMatrix d0;        // part commuting with nu_l J pi(A) J^-1 nu_l
  CMatrix d1;        // part commuting with pi(A)
  double residual = 0.0;  // || D_l - d0 - d1 ||_F
};

/// Least-squares split of component l of the Dirac operator into a piece in
/// the commutant of nu_l J pi(A) J^-1 nu_l plus a piece in the commutant of
/// pi(A). The residual vanishes exactly when the component satisfies the
/// twisted first-order condition for the full algebra.
Dd16Decomposition decompose_dd16(const TwistedTriple& t, std::size_t l);

struct TwistAnsatz {
  enum class Family {
    Identity,                // the single candidate nu = 1
    SignedDiagonal,          // diagonal +-1 matrices
    SignedBlockPermutation,  // signed permutations of equal-size blocks
    UserSupplied,
  };

  Family family = Family::SignedDiagonal;
  Eigen::Index block = 2;  // block size for SignedBlockPermutation
  std::vector<CMatrix> candidates;  // UserSupplied only

  // Admissibility filters applied per candidate. Regularity (nu J nu = J)
  // is structural and always on; the others are optional.
  bool require_involutive = true;        // nu^2 = 1
  bool require_self_adjoint = false;     // nu = +-nu^*
  bool require_epsilon_prime = false;    // nu J D_l = epsilon' D_l J nu, one
                                         // consistent sign across components
  double admissibility_tol = 1e-10;

  static TwistAnsatz named(const std::string& name);
};

struct SearchResult {
  std::vector<CMatrix> twists;  // one per component
  int epsilon_prime = 0;        // consistent sign when filtered on, else 0
  BreakReport report;
};

/// Enumerate twist assignments from the ansatz family (one twist per
/// component of t), keep those passing the admissibility filters, and run
/// breaking_fixed_point for each. Results are sorted by surviving dimension
/// descending (ties broken deterministically), independent of enumeration
/// order. Candidate evaluation is parallel; NCTWIST_THREADS caps the thread
/// count.
std::vector<SearchResult> search_twists(const TwistedTriple& t, const TwistAnsatz& ansatz);

/// Diagnostics for trading the twists away: per component, whether the
/// twisted first-order residual with (J, nu_l) matches the untwisted one
/// computed with the alternative real structure J'_l = nu_l J (meaningful
/// for involutive twists), and the defect of the flat-Dirac constraint
/// sum_l nu_l D_l = D. Informational rows; nothing here gates verify.
ConditionReport reduction_checks(const TwistedTriple& t, const Tolerance& tol = {});

}  // namespace nctwist
