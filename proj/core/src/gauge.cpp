#include "nctwist/gauge.hpp"

#include <stdexcept>

namespace nctwist {

namespace {

CMatrix inverse_of(const CMatrix& m) {
  return m.partialPivLu().solve(CMatrix::Identity(m.rows(), m.cols()));
}

}  // namespace

GaugePair adjoint_action(const TwistedTriple& t, const CMatrix& u, std::size_t l) {
  if (l >= t.components.size()) throw std::out_of_range("adjoint_action: no such component");
  const CMatrix& nu = t.components[l].twist;
  CMatrix nu_inv = inverse_of(nu);
  GaugePair g;
  g.u = u;
  g.V = u * conjugate_by(t.J, nu * u * nu_inv);
  g.Vt = u * conjugate_by(t.J, nu_inv * u * nu);
  return g;
}

OneForm transform_potential(const TwistedTriple& t, const OneForm& omega, const CMatrix& u) {
  if (omega.dim() != t.dim()) throw std::invalid_argument("transform_potential: dimension mismatch");
  CMatrix us = u.adjoint();
  OneForm out;
  // u a [D, b] u^* = (u a)[D, b u^*] - (u a b)[D, u^*], then the pure
  // gauge pair u [D, u^*].
  for (const auto& [a, b] : omega.pairs) {
    out.pairs.emplace_back(u * a, b * us);
    out.pairs.emplace_back(-u * a * b, us);
  }
  out.pairs.emplace_back(u, us);
  return out;
}

TwistedTriple transform_dirac(const TwistedTriple& t, const OneForm& omega, const CMatrix& u) {
  return fluctuate(t, transform_potential(t, omega, u));
}

TwistedTriple conjugate_dirac(const TwistedTriple& t, const CMatrix& u) {
  TwistedTriple out = t;
  for (std::size_t l = 0; l < t.components.size(); ++l) {
    GaugePair g = adjoint_action(t, u, l);
    out.components[l].dirac = g.Vt * t.components[l].dirac * inverse_of(g.V);
  }
  return out;
}

ConditionReport verify_vw(const TwistedTriple& t, const CMatrix& u, std::size_t l,
                          const Tolerance& tol) {
  ConditionReport report;
  GaugePair g = adjoint_action(t, u, l);
  CMatrix v_inv = inverse_of(g.V);
  CMatrix vt_inv = inverse_of(g.Vt);
  const CMatrix& nu = t.components[l].twist;

  auto feed = [&](const std::string& name, const CMatrix& lhs, const CMatrix& rhs) {
    double res = (lhs - rhs).norm();
    double thr = tol.threshold(lhs.norm(), rhs.norm());
    report.conditions.push_back(ConditionResult{name, res, thr, res <= thr, true});
  };
  auto feed_worst = [&](const std::string& name, auto&& make_pair_for) {
    double worst_res = 0.0, worst_thr = 0.0, worst_ratio = -1.0;
    for (const auto& b : t.algebra.rep_basis) {
      auto [lhs, rhs] = make_pair_for(b);
      double res = (lhs - rhs).norm();
      double thr = tol.threshold(lhs.norm(), rhs.norm());
      double ratio = res / std::max(thr, 1e-300);
      if (ratio > worst_ratio) { worst_ratio = ratio; worst_res = res; worst_thr = thr; }
    }
    report.conditions.push_back(
        ConditionResult{name, worst_res, worst_thr, worst_ratio <= 1.0, true});
  };

  feed_worst("vw_vtilde_algebra", [&](const CMatrix& b) {
    return std::pair<CMatrix, CMatrix>(g.Vt * b * vt_inv, u * b * u.adjoint());
  });
  feed_worst("vw_v_algebra", [&](const CMatrix& b) {
    return std::pair<CMatrix, CMatrix>(g.V * b * v_inv, u * b * u.adjoint());
  });
  if (t.grading) {
    feed("vw_vtilde_grading", g.Vt * (*t.grading) * vt_inv, *t.grading);
    feed("vw_v_grading", g.V * (*t.grading) * v_inv, *t.grading);
  }
  {
    Op nuj = compose(Op::linear(nu), t.J);   // nu J
    Op jnu = compose(t.J, Op::linear(nu));   // J nu
    Op lhs1 = compose(compose(Op::linear(g.Vt), nuj), Op::linear(vt_inv));
    feed("vw_vtilde_nuJ", lhs1.mat, nuj.mat);
    Op lhs2 = compose(compose(Op::linear(g.V), jnu), Op::linear(v_inv));
    feed("vw_v_Jnu", lhs2.mat, jnu.mat);
  }

  report.pass = true;
  for (const auto& c : report.conditions)
    if (c.required && !c.pass) report.pass = false;
  return report;
}

Complex bilinear_form(const TwistedTriple& t, const CVector& psi, const CVector& phi) {
  const CMatrix& nu = t.single_twist();
  CVector left = nctwist::apply(t.J, CVector(nu * psi));
  return left.dot(t.dirac() * phi);
}

Complex fermionic_action(const TwistedTriple& t, const CVector& psi) {
  if (t.grading) {
    double defect = ((*t.grading) * psi - psi).norm();
    if (defect > 1e-9 * (1.0 + psi.norm()))
      throw std::domain_error("fermionic_action: psi must lie in the gamma = +1 eigenspace");
  }
  Complex s = 0.0;
  for (const auto& c : t.components) {
    CVector left = nctwist::apply(t.J, CVector(c.twist * psi));
    s += left.dot(c.dirac * psi);
  }
  return s;
}

RVector dirac_spectrum(const TwistedTriple& t) {
  CMatrix d = t.dirac();
  if ((d - d.adjoint()).norm() > 1e-9 * std::max(1.0, d.norm()))
    throw std::domain_error("dirac_spectrum: total Dirac operator is not self-adjoint");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(d);
  return es.eigenvalues();
}

double bosonic_action(const TwistedTriple& t, const std::function<double(double)>& f,
                      double scale) {
  if (scale <= 0.0) throw std::invalid_argument("bosonic_action: scale must be positive");
  RVector ev = dirac_spectrum(t);
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) s += f(ev(i) / scale);
  return s;
}

}  // namespace nctwist
