#include "nctwist/triple.hpp"

#include <cmath>
#include <stdexcept>

namespace nctwist {

CMatrix TwistedTriple::dirac() const {
  if (components.empty()) throw std::runtime_error("TwistedTriple: no components");
  CMatrix d = components[0].dirac;
  for (std::size_t i = 1; i < components.size(); ++i) d += components[i].dirac;
  return d;
}

bool TwistedTriple::trivially_twisted(double tol) const {
  const CMatrix id = CMatrix::Identity(dim(), dim());
  for (const auto& c : components)
    if ((c.twist - id).norm() > tol) return false;
  return true;
}

const CMatrix& TwistedTriple::single_twist() const {
  if (components.size() != 1)
    throw std::runtime_error("TwistedTriple: operation needs a single twist component");
  return components[0].twist;
}

const ConditionResult* ConditionReport::find(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return &c;
  return nullptr;
}

bool TripleSigns::mildly_twisted() const {
  if (alpha2.empty()) return false;
  for (const auto& a : alpha2)
    if (a.value == 0) return false;
  return true;
}

SignEstimate estimate_sign(double residual_pos, double residual_neg, double threshold) {
  SignEstimate s;
  s.applicable = true;
  s.residual_pos = residual_pos;
  s.residual_neg = residual_neg;
  if (residual_pos <= threshold && residual_neg > 10.0 * threshold) s.value = 1;
  else if (residual_neg <= threshold && residual_pos > 10.0 * threshold) s.value = -1;
  return s;
}

namespace {

// Tracks the worst residual-to-threshold ratio over many instances of one
// condition, so a report row carries the residual and threshold of the
// tightest instance.
struct Accumulator {
  double residual = 0.0;
  double threshold = 0.0;
  double ratio = -1.0;

  void feed(double res, double thr) {
    double r = res / std::max(thr, 1e-300);
    if (r > ratio) { ratio = r; residual = res; threshold = thr; }
  }
  bool pass() const { return ratio <= 1.0; }
};

ConditionResult row(const std::string& name, const Accumulator& acc, bool required = true) {
  return ConditionResult{name, acc.residual, acc.threshold, acc.pass(), required};
}

SignEstimate sign_from_pair(const CMatrix& lhs, const CMatrix& rhs, const Tolerance& tol) {
  double rp = (lhs - rhs).norm();
  double rn = (lhs + rhs).norm();
  return estimate_sign(rp, rn, tol.threshold(lhs.norm(), rhs.norm()));
}

// Antilinear matrix of D J nu (left) and nu J D (right) for one component.
std::pair<CMatrix, CMatrix> epsilon_prime_sides(const CMatrix& d, const Op& j, const CMatrix& nu) {
  Op lhs = compose(Op::linear(d), compose(j, Op::linear(nu)));
  Op rhs = compose(Op::linear(nu), compose(j, Op::linear(d)));
  return {lhs.mat, rhs.mat};
}

}  // namespace

TripleSigns extract_signs(const TwistedTriple& t, const Tolerance& tol) {
  TripleSigns s;
  const Eigen::Index n = t.dim();
  const CMatrix id = CMatrix::Identity(n, n);

  Op j2 = compose(t.J, t.J);
  s.epsilon = estimate_sign((j2.mat - id).norm(), (j2.mat + id).norm(),
                            tol.threshold(j2.mat.norm(), id.norm()));

  double rp = 0.0, rn = 0.0, thr = 0.0;
  for (const auto& c : t.components) {
    auto [lhs, rhs] = epsilon_prime_sides(c.dirac, t.J, c.twist);
    rp = std::max(rp, (lhs - rhs).norm());
    rn = std::max(rn, (lhs + rhs).norm());
    thr = std::max(thr, tol.threshold(lhs.norm(), rhs.norm()));
  }
  s.epsilon_prime = estimate_sign(rp, rn, thr);

  if (t.grading) {
    const CMatrix& g = *t.grading;
    rp = rn = thr = 0.0;
    for (const auto& c : t.components) {
      Op nuj = compose(Op::linear(c.twist), t.J);
      CMatrix lhs = g * nuj.mat;
      CMatrix rhs = nuj.mat * g.conjugate();  // (nu J) gamma as an antilinear matrix
      rp = std::max(rp, (lhs - rhs).norm());
      rn = std::max(rn, (lhs + rhs).norm());
      thr = std::max(thr, tol.threshold(lhs.norm(), rhs.norm()));
    }
    s.epsilon_second = estimate_sign(rp, rn, thr);
  }

  for (const auto& c : t.components) {
    s.alpha1.push_back(sign_from_pair(c.twist, c.twist.adjoint(), tol));
    CMatrix nu_inv = c.twist.partialPivLu().solve(id);
    s.alpha2.push_back(sign_from_pair(c.twist, nu_inv, tol));
  }
  return s;
}

ConditionReport verify_axioms(const TwistedTriple& t, const Tolerance& tol) {
  ConditionReport report;
  const Eigen::Index n = t.dim();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix d_total = t.dirac();
  const auto& basis = t.algebra.rep_basis;
  report.signs = extract_signs(t, tol);

  {
    Accumulator acc;
    acc.feed((d_total - d_total.adjoint()).norm(), tol.threshold(d_total.norm(), d_total.norm()));
    report.conditions.push_back(row("dirac_self_adjoint", acc));
  }
  {
    Accumulator acc;
    double defect = 0.0;
    is_isometry(t.J, tol, &defect);
    acc.feed(defect, tol.threshold(1.0, double(n)));
    report.conditions.push_back(row("real_structure_antiunitary", acc));
  }
  {
    Accumulator acc;
    const auto& e = report.signs.epsilon;
    acc.feed(std::min(e.residual_pos, e.residual_neg), tol.threshold(double(n), double(n)));
    ConditionResult r = row("real_structure_involutive", acc);
    r.pass = r.pass && e.value != 0;
    report.conditions.push_back(r);
  }

  std::vector<CMatrix> nu_inv;
  {
    Accumulator acc;
    for (const auto& c : t.components) {
      nu_inv.push_back(c.twist.partialPivLu().solve(id));
      acc.feed((c.twist * nu_inv.back() - id).norm(), tol.threshold(1.0, double(n)));
    }
    report.conditions.push_back(row("twist_invertible", acc));
  }
  {
    Accumulator acc;
    for (const auto& c : t.components) {
      Op lhs = compose(Op::linear(c.twist), compose(t.J, Op::linear(c.twist)));
      acc.feed((lhs.mat - t.J.mat).norm(), tol.threshold(lhs.mat.norm(), t.J.mat.norm()));
    }
    report.conditions.push_back(row("twist_regularity", acc));
  }

  // Right-action images, once per basis element (and per component for the
  // twisted variants).
  std::vector<CMatrix> right_plain;
  right_plain.reserve(basis.size());
  for (const auto& b : basis) right_plain.push_back(conjugate_by(t.J, b));

  const std::size_t nc = t.components.size();
  std::vector<std::vector<CMatrix>> right_plus(nc), right_minus(nc), comm_d(nc);
  for (std::size_t l = 0; l < nc; ++l) {
    const auto& c = t.components[l];
    for (const auto& b : basis) {
      right_plus[l].push_back(conjugate_by(t.J, c.twist * b * nu_inv[l]));
      right_minus[l].push_back(conjugate_by(t.J, nu_inv[l] * b * c.twist));
    }
    for (const auto& a : basis) comm_d[l].push_back(commutator(c.dirac, a));
  }

  {
    Accumulator acc;
    for (const auto& a : basis)
      for (const auto& rb : right_plain) {
        CMatrix x = a * rb, y = rb * a;
        acc.feed((x - y).norm(), tol.threshold(x.norm(), y.norm()));
      }
    report.conditions.push_back(row("zeroth_order", acc));
  }
  {
    Accumulator acc;
    for (std::size_t l = 0; l < nc; ++l)
      for (const auto& a : basis)
        for (std::size_t bi = 0; bi < basis.size(); ++bi)
          for (const auto* side : {&right_plus[l][bi], &right_minus[l][bi]}) {
            CMatrix x = a * (*side), y = (*side) * a;
            acc.feed((x - y).norm(), tol.threshold(x.norm(), y.norm()));
          }
    report.conditions.push_back(row("zeroth_order_twisted", acc));
  }
  {
    Accumulator acc;
    for (std::size_t l = 0; l < nc; ++l)
      for (std::size_t ai = 0; ai < basis.size(); ++ai)
        for (std::size_t bi = 0; bi < basis.size(); ++bi) {
          CMatrix x = comm_d[l][ai] * right_plus[l][bi];
          CMatrix y = right_minus[l][bi] * comm_d[l][ai];
          acc.feed((x - y).norm(), tol.threshold(x.norm(), y.norm()));
        }
    report.conditions.push_back(row("first_order_twisted", acc));
  }
  {
    Accumulator acc;
    for (const auto& a : basis) {
      CMatrix da = commutator(d_total, a);
      for (const auto& rb : right_plain) {
        CMatrix x = da * rb, y = rb * da;
        acc.feed((x - y).norm(), tol.threshold(x.norm(), y.norm()));
      }
    }
    report.conditions.push_back(row("first_order", acc, t.trivially_twisted()));
  }
  {
    Accumulator acc;
    const auto& ep = report.signs.epsilon_prime;
    for (std::size_t l = 0; l < nc; ++l) {
      auto [lhs, rhs] = epsilon_prime_sides(t.components[l].dirac, t.J, t.components[l].twist);
      double res = ep.value >= 0 ? (lhs - rhs).norm() : (lhs + rhs).norm();
      acc.feed(res, tol.threshold(lhs.norm(), rhs.norm()));
    }
    ConditionResult r = row("epsilon_prime_relation", acc);
    r.pass = r.pass && ep.value != 0;
    report.conditions.push_back(r);
  }

  if (t.grading) {
    const CMatrix& g = *t.grading;
    {
      Accumulator acc;
      acc.feed((g - g.adjoint()).norm(), tol.threshold(g.norm(), g.norm()));
      report.conditions.push_back(row("grading_self_adjoint", acc));
    }
    {
      Accumulator acc;
      acc.feed((g * g - id).norm(), tol.threshold(g.norm() * g.norm(), double(n)));
      report.conditions.push_back(row("grading_involutive", acc));
    }
    {
      Accumulator acc;
      for (const auto& a : basis) {
        CMatrix x = g * a, y = a * g;
        acc.feed((x - y).norm(), tol.threshold(x.norm(), y.norm()));
      }
      report.conditions.push_back(row("grading_commutes_algebra", acc));
    }
    {
      Accumulator acc;
      CMatrix x = g * d_total, y = d_total * g;
      acc.feed((x + y).norm(), tol.threshold(x.norm(), y.norm()));
      report.conditions.push_back(row("grading_anticommutes_dirac", acc));
    }
    {
      Accumulator acc;
      const auto& es = report.signs.epsilon_second;
      for (const auto& c : t.components) {
        Op nuj = compose(Op::linear(c.twist), t.J);
        CMatrix lhs = g * nuj.mat;
        CMatrix rhs = nuj.mat * g.conjugate();
        double res = es.value >= 0 ? (lhs - rhs).norm() : (lhs + rhs).norm();
        acc.feed(res, tol.threshold(lhs.norm(), rhs.norm()));
      }
      ConditionResult r = row("grading_twist_commutation", acc);
      r.pass = r.pass && es.value != 0;
      report.conditions.push_back(r);
    }
    {
      Accumulator acc;
      for (const auto& c : t.components) {
        CMatrix nu2 = c.twist * c.twist;
        CMatrix x = g * nu2, y = nu2 * g;
        acc.feed((x - y).norm(), tol.threshold(x.norm(), y.norm()));
      }
      report.conditions.push_back(row("grading_twist_square", acc));
    }
  }

  {
    // Reported only: whether each twist conjugates pi(A) into itself.
    Accumulator acc;
    RealSubspace span = t.algebra.rep_span();
    for (std::size_t l = 0; l < nc; ++l)
      for (const auto& b : basis)
        for (const CMatrix& im : {CMatrix(t.components[l].twist * b * nu_inv[l]),
                                  CMatrix(nu_inv[l] * b * t.components[l].twist)})
          acc.feed(span.distance(flatten(im)), tol.threshold(im.norm(), im.norm()));
    report.conditions.push_back(row("twist_algebra_automorphism", acc, false));
  }

  report.pass = true;
  for (const auto& c : report.conditions)
    if (c.required && !c.pass) report.pass = false;
  return report;
}

UntwistResult untwist(const TwistedTriple& t, const Tolerance& tol) {
  const CMatrix& nu = t.single_twist();
  TripleSigns signs = extract_signs(t, tol);
  const SignEstimate& a1 = signs.alpha1[0];
  const SignEstimate& a2 = signs.alpha2[0];

  UntwistResult out;
  out.triple = t;
  const CMatrix id = CMatrix::Identity(t.dim(), t.dim());

  if (a1.value != 0 && a1.value == a2.value) {
    // nu = alpha nu^* = alpha nu^{-1}: replace J by nu J, drop the twist.
    out.branch = 1;
    out.alpha = a1.value;
    out.triple.J = compose(Op::linear(nu), t.J);
    out.triple.components[0].twist = id;
    return out;
  }

  if (a2.value != 0) {
    const CMatrix& d = t.components[0].dirac;
    SignEstimate beta1 = sign_from_pair(nu * d, d * nu, tol);
    if (beta1.value != 0) {
      int beta2 = 0;
      bool grading_ok = true;
      if (t.grading) {
        SignEstimate b2 = sign_from_pair(nu * (*t.grading), (*t.grading) * nu, tol);
        beta2 = b2.value;
        grading_ok = (b2.value != 0);
      }
      if (grading_ok) {
        out.branch = 2;
        out.alpha = a2.value;
        out.beta_dirac = beta1.value;
        out.beta_grading = beta2;
        out.triple.components[0].twist = id;
        return out;
      }
    }
  }

  throw std::domain_error(
      "untwist: twist admits no equivalent untwisted structure (need nu = a nu^* = a nu^{-1}, "
      "or nu = a nu^{-1} with nu (anti)commuting with D and the grading)");
}

}  // namespace nctwist
