#include "nctwist/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "nctwist/rng.hpp"

namespace nctwist {

std::string Summand::label() const {
  std::string f(1, field);
  if (k == 1) return f;
  return "M" + std::to_string(k) + "(" + f + ")";
}

CMatrix FiniteAlgebra::embed(const RVector& coeffs) const {
  if (coeffs.size() != real_dim())
    throw std::invalid_argument("embed: coefficient count does not match algebra dimension");
  CMatrix m = CMatrix::Zero(hilbert_dim(), hilbert_dim());
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) m += coeffs(i) * rep_basis[static_cast<std::size_t>(i)];
  return m;
}

RVector FiniteAlgebra::coeffs_of(const CMatrix& m, double* residual) const {
  RMatrix a(2 * hilbert_dim() * hilbert_dim(), real_dim());
  for (Eigen::Index j = 0; j < real_dim(); ++j) a.col(j) = flatten(rep_basis[static_cast<std::size_t>(j)]);
  RVector rhs = flatten(m);
  RVector x = a.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
  if (residual) *residual = (a * x - rhs).norm();
  return x;
}

RVector FiniteAlgebra::star_coeffs(const RVector& coeffs) const {
  double res = 0.0;
  RVector out = coeffs_of(embed(coeffs).adjoint(), &res);
  if (res > 1e-8 * (1.0 + coeffs.norm()))
    throw std::runtime_error("star_coeffs: representation span is not star-closed");
  return out;
}

CMatrix algebra_unit(const std::vector<CMatrix>& basis, double* residual) {
  if (basis.empty()) throw std::invalid_argument("algebra_unit: empty basis");
  const Eigen::Index n = basis[0].rows();
  const Eigen::Index d = static_cast<Eigen::Index>(basis.size());
  const Eigen::Index m = 2 * n * n;
  RMatrix a(2 * m * d, d);
  RVector rhs(2 * m * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const CMatrix& b = basis[static_cast<std::size_t>(i)];
    for (Eigen::Index k = 0; k < d; ++k) {
      const CMatrix& u = basis[static_cast<std::size_t>(k)];
      a.block(2 * m * i, k, m, 1) = flatten(u * b);
      a.block(2 * m * i + m, k, m, 1) = flatten(b * u);
    }
    rhs.segment(2 * m * i, m) = flatten(b);
    rhs.segment(2 * m * i + m, m) = flatten(b);
  }
  RVector x = a.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
  if (residual) *residual = (a * x - rhs).norm();
  CMatrix e = CMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < d; ++k) e += x(k) * basis[static_cast<std::size_t>(k)];
  return e;
}

bool is_subalgebra(const std::vector<CMatrix>& basis, double tol, double* max_residual) {
  if (basis.empty()) throw std::invalid_argument("is_subalgebra: empty basis");
  const Eigen::Index n = basis[0].rows();
  RealSubspace s = span_of_matrices(basis);
  std::vector<CMatrix> ortho = subspace_matrices(s, n);
  double worst = 0.0;
  for (const CMatrix& x : ortho) {
    worst = std::max(worst, s.distance(flatten(CMatrix(x.adjoint()))));
    for (const CMatrix& y : ortho) {
      CMatrix p = x * y;
      worst = std::max(worst, s.distance(flatten(p)) / std::max(1.0, p.norm()));
    }
  }
  if (max_residual) *max_residual = worst;
  return worst <= tol;
}

namespace {

struct BlockClassification {
  char field = 0;
  int k = 0;
};

BlockClassification classify_block(Eigen::Index d, Eigen::Index zdim, Eigen::Index skew) {
  BlockClassification out;
  if (zdim == 2) {
    auto k = static_cast<int>(std::lround(std::sqrt(double(d) / 2.0)));
    if (2 * k * k == d) { out.field = 'C'; out.k = k; }
    return out;
  }
  if (zdim != 1) return out;
  // Real center: either M_k(R) with skew dim k(k-1)/2 or M_q(H) with
  // skew dim q(2q+1); the pair (d, skew) separates them.
  auto q = static_cast<int>(std::lround(std::sqrt(double(d) / 4.0)));
  if (4 * q * q == d && skew == Eigen::Index(q) * (2 * q + 1)) { out.field = 'H'; out.k = q; return out; }
  auto k = static_cast<int>(std::lround(std::sqrt(double(d))));
  if (Eigen::Index(k) * k == d && 2 * skew == Eigen::Index(k) * (k - 1)) { out.field = 'R'; out.k = k; }
  return out;
}

Eigen::Index skew_dimension(const std::vector<CMatrix>& block_basis) {
  const Eigen::Index d = static_cast<Eigen::Index>(block_basis.size());
  if (d == 0) return 0;
  const Eigen::Index n = block_basis[0].rows();
  RMatrix constraints(2 * n * n, d);
  double scale = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    const CMatrix& b = block_basis[static_cast<std::size_t>(j)];
    scale = std::max(scale, b.norm());
    constraints.col(j) = flatten(CMatrix(b + b.adjoint()));
  }
  // A block whose basis is entirely skew yields a constraint matrix of pure
  // rounding noise; the absolute floor keeps that from reading as full rank.
  return real_nullspace(constraints, 1e-11 * 2.0 * scale).dim();
}

}  // namespace

std::string StructureSignature::to_string() const {
  if (!recognized) return "unrecognized";
  std::string out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) out += " + ";
    Summand s{blocks[i].field, blocks[i].k};
    out += s.label();
  }
  return out;
}

StructureSignature structure_signature(const std::vector<CMatrix>& basis, std::uint64_t seed) {
  StructureSignature sig;
  if (basis.empty()) return sig;
  const Eigen::Index n = basis[0].rows();
  RealSubspace s = span_of_matrices(basis);
  std::vector<CMatrix> ortho = subspace_matrices(s, n);
  const Eigen::Index d = s.dim();
  sig.real_dim = d;

  double unit_res = 0.0;
  CMatrix e = algebra_unit(ortho, &unit_res);
  if (unit_res > 1e-8 * double(d)) return sig;

  // Center of the span, in span coordinates. For a commutative algebra the
  // commutator matrix is pure rounding noise, so the kernel solve needs an
  // absolute floor scaled to the product magnitudes.
  double cscale = 0.0;
  for (const CMatrix& u : ortho) cscale = std::max(cscale, u.norm());
  RMatrix cc(2 * n * n * d, d);
  for (Eigen::Index k = 0; k < d; ++k)
    for (Eigen::Index j = 0; j < d; ++j)
      cc.block(2 * n * n * j, k, 2 * n * n, 1) =
          flatten(commutator(ortho[static_cast<std::size_t>(k)], ortho[static_cast<std::size_t>(j)]));
  RealSubspace center = real_nullspace(cc, 1e-11 * 2.0 * cscale * cscale);
  std::vector<CMatrix> zbasis;
  for (Eigen::Index j = 0; j < center.dim(); ++j) {
    CMatrix z = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < d; ++k) z += center.basis(k, j) * ortho[static_cast<std::size_t>(k)];
    zbasis.push_back(z);
  }
  sig.commutative = (center.dim() == d);

  for (int attempt = 0; attempt < 5; ++attempt) {
    Rng rng(seed + static_cast<std::uint64_t>(attempt));
    CMatrix z = CMatrix::Zero(n, n);
    for (const CMatrix& zb : zbasis) z += rng.gaussian() * zb;
    z = 0.5 * (z + z.adjoint()).eval();

    Eigen::SelfAdjointEigenSolver<CMatrix> es(z);
    const RVector& ev = es.eigenvalues();
    const double scale = std::max(1.0, std::max(std::abs(ev(0)), std::abs(ev(n - 1))));
    const double gap = 1e-7 * scale;

    // Group equal eigenvalues, then keep the groups away from zero; the
    // zero group is the complement of the algebra unit.
    std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= n; ++i) {
      if (i == n || ev(i) - ev(i - 1) > gap) {
        clusters.emplace_back(start, i);
        start = i;
      }
    }

    bool ok = true;
    std::vector<CMatrix> projectors;
    CMatrix psum = CMatrix::Zero(n, n);
    for (auto [lo, hi] : clusters) {
      double mu = ev.segment(lo, hi - lo).mean();
      if (std::abs(mu) <= gap) continue;
      CMatrix u = es.eigenvectors().middleCols(lo, hi - lo);
      CMatrix p = u * u.adjoint();
      if (s.distance(flatten(p)) > 1e-7 * p.norm()) { ok = false; break; }
      projectors.push_back(p);
      psum += p;
    }
    if (!ok || projectors.empty() || (psum - e).norm() > 1e-7 * double(n)) continue;

    std::vector<BlockSignature> blocks;
    Eigen::Index dim_total = 0;
    bool classified = true;
    for (const CMatrix& p : projectors) {
      std::vector<CMatrix> compressed;
      for (const CMatrix& u : ortho) compressed.push_back(p * u * p);
      RealSubspace bspan = span_of_matrices(compressed);
      std::vector<CMatrix> bbasis = subspace_matrices(bspan, n);
      std::vector<CMatrix> zc;
      for (const CMatrix& zb : zbasis) zc.push_back(p * zb * p);
      Eigen::Index zdim = zc.empty() ? 0 : span_of_matrices(zc).dim();
      Eigen::Index skew = skew_dimension(bbasis);
      BlockClassification c = classify_block(bspan.dim(), zdim, skew);
      if (c.field == 0) { classified = false; }
      blocks.push_back(BlockSignature{c.field, c.k, bspan.dim()});
      dim_total += bspan.dim();
    }
    if (dim_total != d) continue;

    std::sort(blocks.begin(), blocks.end(), [](const BlockSignature& a, const BlockSignature& b) {
      if (a.k != b.k) return a.k < b.k;
      return a.field < b.field;
    });
    sig.blocks = std::move(blocks);
    sig.recognized = classified;
    return sig;
  }
  return sig;
}

std::vector<CMatrix> central_block_projectors(const std::vector<CMatrix>& basis,
                                              std::uint64_t seed) {
  if (basis.empty()) return {};
  const Eigen::Index n = basis[0].rows();
  RealSubspace s = span_of_matrices(basis);
  std::vector<CMatrix> ortho = subspace_matrices(s, n);
  const Eigen::Index d = s.dim();

  double unit_res = 0.0;
  CMatrix e = algebra_unit(ortho, &unit_res);
  if (unit_res > 1e-8 * double(d)) return {};

  // Center of the span, in span coordinates (same solve as the signature
  // classifier, including the absolute floor for commutative spans).
  double cscale = 0.0;
  for (const CMatrix& u : ortho) cscale = std::max(cscale, u.norm());
  RMatrix cc(2 * n * n * d, d);
  for (Eigen::Index k = 0; k < d; ++k)
    for (Eigen::Index j = 0; j < d; ++j)
      cc.block(2 * n * n * j, k, 2 * n * n, 1) =
          flatten(commutator(ortho[static_cast<std::size_t>(k)], ortho[static_cast<std::size_t>(j)]));
  RealSubspace center = real_nullspace(cc, 1e-11 * 2.0 * cscale * cscale);
  std::vector<CMatrix> zbasis;
  for (Eigen::Index j = 0; j < center.dim(); ++j) {
    CMatrix z = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < d; ++k) z += center.basis(k, j) * ortho[static_cast<std::size_t>(k)];
    zbasis.push_back(z);
  }

  for (int attempt = 0; attempt < 5; ++attempt) {
    Rng rng(seed + static_cast<std::uint64_t>(attempt));
    CMatrix z = CMatrix::Zero(n, n);
    for (const CMatrix& zb : zbasis) z += rng.gaussian() * zb;
    z = 0.5 * (z + z.adjoint()).eval();

    Eigen::SelfAdjointEigenSolver<CMatrix> es(z);
    const RVector& ev = es.eigenvalues();
    const double scale = std::max(1.0, std::max(std::abs(ev(0)), std::abs(ev(n - 1))));
    const double gap = 1e-7 * scale;

    std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;
    Eigen::Index start = 0;
    for (Eigen::Index i = 1; i <= n; ++i) {
      if (i == n || ev(i) - ev(i - 1) > gap) {
        clusters.emplace_back(start, i);
        start = i;
      }
    }

    bool ok = true;
    std::vector<CMatrix> projectors;
    CMatrix psum = CMatrix::Zero(n, n);
    for (auto [lo, hi] : clusters) {
      double mu = ev.segment(lo, hi - lo).mean();
      if (std::abs(mu) <= gap) continue;
      CMatrix u = es.eigenvectors().middleCols(lo, hi - lo);
      CMatrix p = u * u.adjoint();
      if (s.distance(flatten(p)) > 1e-7 * p.norm()) { ok = false; break; }
      projectors.push_back(p);
      psum += p;
    }
    if (!ok || projectors.empty() || (psum - e).norm() > 1e-7 * double(n)) continue;
    return projectors;
  }
  return {};
}

CMatrix random_element(const FiniteAlgebra& alg, std::uint64_t seed) {
  Rng rng(seed);
  return alg.embed(rng.gaussian_vector(alg.real_dim()));
}

CMatrix random_self_adjoint_element(const FiniteAlgebra& alg, std::uint64_t seed) {
  CMatrix x = random_element(alg, seed);
  return 0.5 * (x + x.adjoint()).eval();
}

CMatrix random_unitary(const FiniteAlgebra& alg, std::uint64_t seed) {
  CMatrix x = random_element(alg, seed);
  CMatrix skew = 0.5 * (x - x.adjoint()).eval();
  return skew.exp();
}

CMatrix quaternion_matrix(double a, double b, double c, double d) {
  CMatrix q(2, 2);
  q << Complex{a, b}, Complex{c, d}, Complex{-c, d}, Complex{a, -b};
  return q;
}

}  // namespace nctwist
