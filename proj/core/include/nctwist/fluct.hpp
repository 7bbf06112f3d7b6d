#pragma once

#include "nctwist/triple.hpp"

namespace nctwist {

/// A gauge potential kept symbolically as generator pairs (a_j, b_j); the
/// matrix of the form against a Dirac piece D is sum_j a_j [D, b_j]. The
/// pair matrices are elements of pi(A), so products of them stay in pi(A)
/// and pair-level rewriting (symmetrization, composition, gauge transport)
/// is exact.
struct OneForm {
  std::vector<std::pair<CMatrix, CMatrix>> pairs;

  CMatrix evaluate(const CMatrix& dirac) const;
  Eigen::Index dim() const { return pairs.empty() ? 0 : pairs[0].first.rows(); }
};

/// Pairs of random algebra elements, seeded.
std::vector<std::pair<RVector, RVector>> random_generator_pairs(const FiniteAlgebra& alg,
                                                                int count, std::uint64_t seed);

/// Assemble a one-form from coefficient pairs. With symmetrize set, pairs
/// realizing the adjoint of the form are appended (using [D, xy] =
/// [D, x] y + x [D, y] to stay in a [D, .] normal form), so the evaluated
/// form is self-adjoint whenever D is.
OneForm build_one_form(const FiniteAlgebra& alg,
                       const std::vector<std::pair<RVector, RVector>>& coeff_pairs,
                       bool symmetrize = false);

/// Twisted right copy a^+ = J nu^{-1} a^* nu J^{-1} (plus = true) or
/// a^- = J nu a^* nu^{-1} J^{-1} (plus = false) of an algebra element.
CMatrix twist_opposite_element(const TwistedTriple& t, const CMatrix& a, bool plus);

/// The twisted-opposite derivation delta(a) = D a^- - a^+ D.
CMatrix delta_odot(const TwistedTriple& t, const CMatrix& a);

/// The twisted-opposite side of a potential, built from star-replaced
/// pairs: omega_o = sum_j (a_j^*)^+ (D (b_j^*)^- - (b_j^*)^+ D). When the
/// epsilon' relation holds this equals eps' nu J omega J^{-1} nu, which is
/// the conjugation oracle it is tested against.
CMatrix twist_opposite_form(const TwistedTriple& t, const OneForm& omega);

/// Inner fluctuation: each component D_l picks up
/// omega_l + eps' nu_l J omega_l J^{-1} nu_l with omega_l the form
/// evaluated against D_l. eps' must be determinate.
TwistedTriple fluctuate(const TwistedTriple& t, const OneForm& omega);

/// Pairs of the single potential whose fluctuation equals fluctuating
/// first with omega and then with omega_prime (pair arithmetic only; the
/// double-fluctuation oracle is the test oracle).
OneForm compose_fluctuations(const TwistedTriple& t, const OneForm& omega,
                             const OneForm& omega_prime);

/// Fluctuation without the first-order condition, untwisted input only
/// (every nu = 1): D picks up omega + J omega J^{-1} plus the quadratic
/// cross term sum_ij J a_i J^{-1} a_j [[D, b_j], J b_i J^{-1}].
TwistedTriple fluctuate_quadratic(const TwistedTriple& t, const OneForm& omega);

}  // namespace nctwist
