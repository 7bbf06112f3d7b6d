#pragma once

#include <functional>

#include "nctwist/fluct.hpp"

namespace nctwist {

/// The two conjugation operators attached to a unitary u of the algebra:
/// V = u J nu u nu^{-1} J^{-1} and Vt = u J nu^{-1} u nu J^{-1}. V is not
/// unitary in general; the gauge transport of the Dirac operator is
/// D -> Vt D V^{-1}.
struct GaugePair {
  CMatrix u;
  CMatrix V;
  CMatrix Vt;
};

/// Gauge pair for component l of the triple's twist.
GaugePair adjoint_action(const TwistedTriple& t, const CMatrix& u, std::size_t l = 0);

/// Gauge transport of a potential: u omega u^* + u [D, u^*], rewritten at
/// pair level so the result is again a sum of a_j [D, b_j].
OneForm transform_potential(const TwistedTriple& t, const OneForm& omega, const CMatrix& u);

/// Fluctuated-then-transported Dirac operator via the potential formula:
/// fluctuate(t, transform_potential(omega, u)). The conjugation oracle
/// Vt D_omega V^{-1} (componentwise) is what tests compare against.
TwistedTriple transform_dirac(const TwistedTriple& t, const OneForm& omega, const CMatrix& u);

/// Componentwise conjugation path Vt_l D_l V_l^{-1} applied to an already
/// fluctuated triple.
TwistedTriple conjugate_dirac(const TwistedTriple& t, const CMatrix& u);

/// Residuals of the compatibility relations between V, Vt and the fixed
/// structure: both conjugate pi(a) to pi(u a u^*), both fix the grading,
/// Vt fixes nu J from the left and V from the right.
ConditionReport verify_vw(const TwistedTriple& t, const CMatrix& u, std::size_t l = 0,
                          const Tolerance& tol = {});

/// Twisted fermionic bilinear <J nu psi, D phi> (single twist).
Complex bilinear_form(const TwistedTriple& t, const CVector& psi, const CVector& phi);

/// Multitwisted fermionic action sum_l <J nu_l psi, D_l psi>. When the
/// triple is graded, psi must lie in the gamma = +1 eigenspace.
Complex fermionic_action(const TwistedTriple& t, const CVector& psi);

/// Eigenvalues of the total (self-adjoint) Dirac operator, ascending.
RVector dirac_spectrum(const TwistedTriple& t);

/// Spectral action sum_i f(lambda_i / scale).
double bosonic_action(const TwistedTriple& t, const std::function<double(double)>& f,
                      double scale);

}  // namespace nctwist
