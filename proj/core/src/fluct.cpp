#include "nctwist/fluct.hpp"

#include <stdexcept>

#include "nctwist/rng.hpp"

namespace nctwist {

CMatrix OneForm::evaluate(const CMatrix& dirac) const {
  CMatrix out = CMatrix::Zero(dirac.rows(), dirac.cols());
  for (const auto& [a, b] : pairs) out += a * commutator(dirac, b);
  return out;
}

std::vector<std::pair<RVector, RVector>> random_generator_pairs(const FiniteAlgebra& alg,
                                                                int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<RVector, RVector>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    RVector a = rng.gaussian_vector(alg.real_dim());
    RVector b = rng.gaussian_vector(alg.real_dim());
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

OneForm build_one_form(const FiniteAlgebra& alg,
                       const std::vector<std::pair<RVector, RVector>>& coeff_pairs,
                       bool symmetrize) {
  OneForm omega;
  for (const auto& [ca, cb] : coeff_pairs)
    omega.pairs.emplace_back(alg.embed(ca), alg.embed(cb));
  if (!symmetrize) return omega;

  // omega^dag = -sum [D, b^*] a^* = sum (b^* [D, a^*] - [D, b^* a^*]);
  // average with the original, using the unit of the representation for
  // the single-commutator leftover pair.
  OneForm sym;
  const CMatrix unit = CMatrix::Identity(alg.hilbert_dim(), alg.hilbert_dim());
  for (const auto& [a, b] : omega.pairs) {
    sym.pairs.emplace_back(0.5 * a, b);
    CMatrix as = a.adjoint(), bs = b.adjoint();
    sym.pairs.emplace_back(0.5 * bs, as);
    sym.pairs.emplace_back(-0.5 * unit, bs * as);
  }
  return sym;
}

CMatrix twist_opposite_element(const TwistedTriple& t, const CMatrix& a, bool plus) {
  const CMatrix& nu = t.single_twist();
  CMatrix nu_inv = nu.partialPivLu().solve(CMatrix::Identity(t.dim(), t.dim()));
  CMatrix core = plus ? CMatrix(nu_inv * a.adjoint() * nu) : CMatrix(nu * a.adjoint() * nu_inv);
  return conjugate_by(t.J, core);
}

CMatrix delta_odot(const TwistedTriple& t, const CMatrix& a) {
  CMatrix d = t.dirac();
  return d * twist_opposite_element(t, a, false) - twist_opposite_element(t, a, true) * d;
}

CMatrix twist_opposite_form(const TwistedTriple& t, const OneForm& omega) {
  CMatrix out = CMatrix::Zero(t.dim(), t.dim());
  for (const auto& [a, b] : omega.pairs) {
    CMatrix as = a.adjoint(), bs = b.adjoint();
    out += twist_opposite_element(t, as, true) * delta_odot(t, bs);
  }
  return out;
}

TwistedTriple fluctuate(const TwistedTriple& t, const OneForm& omega) {
  TripleSigns signs = extract_signs(t);
  if (signs.epsilon_prime.value == 0)
    throw std::domain_error("fluctuate: epsilon' is indeterminate for this triple");
  const double ep = signs.epsilon_prime.value;

  TwistedTriple out = t;
  for (auto& c : out.components) {
    CMatrix om = omega.evaluate(c.dirac);
    c.dirac += om + ep * (c.twist * conjugate_by(t.J, om) * c.twist);
  }
  return out;
}

OneForm compose_fluctuations(const TwistedTriple& t, const OneForm& omega,
                             const OneForm& omega_prime) {
  if (omega.dim() != t.dim() || omega_prime.dim() != t.dim())
    throw std::invalid_argument("compose_fluctuations: dimension mismatch");
  OneForm out = omega;
  for (const auto& [c, d] : omega_prime.pairs) {
    out.pairs.emplace_back(c, d);
    for (const auto& [a, b] : omega.pairs) {
      out.pairs.emplace_back(c * a, b * d);
      out.pairs.emplace_back(-c * a * b, d);
      out.pairs.emplace_back(-c * d * a, b);
    }
  }
  return out;
}

TwistedTriple fluctuate_quadratic(const TwistedTriple& t, const OneForm& omega) {
  if (!t.trivially_twisted())
    throw std::domain_error("fluctuate_quadratic: defined for untwisted triples only (all nu = 1)");
  const CMatrix d = t.dirac();

  CMatrix om = omega.evaluate(d);
  CMatrix dn = d + om + conjugate_by(t.J, om);
  for (const auto& [ai, bi] : omega.pairs) {
    CMatrix rai = conjugate_by(t.J, ai);
    CMatrix rbi = conjugate_by(t.J, bi);
    for (const auto& [aj, bj] : omega.pairs)
      dn += rai * aj * commutator(commutator(d, bj), rbi);
  }

  TwistedTriple out = t;
  out.components.clear();
  out.components.push_back(TwistComponent{dn, CMatrix::Identity(t.dim(), t.dim())});
  return out;
}

}  // namespace nctwist
