#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nctwist/algebra.hpp"

namespace nctwist {

/// One component of a (multi)twisted Dirac operator: a self-adjoint piece
/// D_l together with the invertible twist nu_l attached to it. An untwisted
/// triple is a single component with nu = 1.
struct TwistComponent {
  CMatrix dirac;
  CMatrix twist;
};

/// Finite spectral triple with a real structure J (antilinear), optional
/// grading, and a twisted Dirac operator given by components. The total
/// Dirac operator is the sum of the component pieces.
struct TwistedTriple {
  std::string name;
  FiniteAlgebra algebra;
  Op J;
  std::optional<CMatrix> grading;
  std::vector<TwistComponent> components;

  Eigen::Index dim() const { return J.dim(); }
  CMatrix dirac() const;
  bool trivially_twisted(double tol = 1e-12) const;

  /// The twist of a single-component triple; throws on multitwists.
  const CMatrix& single_twist() const;
};

struct ConditionResult {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
  bool required = true;  // informational rows never gate the verdict
};

/// Sign estimated from a pair of residuals. value is +1 or -1 only when the
/// winner is below tolerance and the loser is at least 10x above it;
/// otherwise 0 (indeterminate).
struct SignEstimate {
  int value = 0;
  double residual_pos = 0.0;
  double residual_neg = 0.0;
  bool applicable = false;
};

struct TripleSigns {
  SignEstimate epsilon;         // J^2 = epsilon
  SignEstimate epsilon_prime;   // D_l J nu_l = epsilon' nu_l J D_l, all l
  SignEstimate epsilon_second;  // gamma nu_l J = epsilon'' nu_l J gamma
  std::vector<SignEstimate> alpha1;  // per component, nu = alpha1 nu^*
  std::vector<SignEstimate> alpha2;  // per component, nu = alpha2 nu^{-1}

  bool mildly_twisted() const;  // every component has alpha2 = +-1
};

struct ConditionReport {
  std::vector<ConditionResult> conditions;
  TripleSigns signs;
  bool pass = false;

  const ConditionResult* find(const std::string& name) const;
};

SignEstimate estimate_sign(double residual_pos, double residual_neg, double threshold);

TripleSigns extract_signs(const TwistedTriple& t, const Tolerance& tol = {});

/// Verify the defining conditions of a (multi)twisted real spectral triple:
/// self-adjointness, antiunitarity and squaring of J, twist regularity
/// nu J nu = J, the order-zero condition and its twisted variants, the
/// twisted first-order condition per component, the epsilon' intertwining
/// relation, and the grading conditions when a grading is present. The
/// untwisted first-order condition and the question whether each twist
/// conjugates the algebra into itself are reported but never required.
ConditionReport verify_axioms(const TwistedTriple& t, const Tolerance& tol = {});

struct UntwistResult {
  TwistedTriple triple;
  int branch = 0;   // 1: J' = nu J, 2: same J, twist discarded
  int alpha = 0;    // branch 1 sign
  int beta_dirac = 0;    // branch 2: nu D = beta D nu
  int beta_grading = 0;  // branch 2: nu gamma = beta gamma nu (0 if no grading)
};

/// Remove the twist from a single-component triple when its nu is of the
/// special form that admits an equivalent untwisted real structure:
/// either nu = alpha nu^* = alpha nu^{-1} (new real structure nu J), or
/// nu = alpha2 nu^{-1} with nu (anti)commuting with D and gamma (same J).
/// Throws std::domain_error when neither applies.
UntwistResult untwist(const TwistedTriple& t, const Tolerance& tol = {});

}  // namespace nctwist
