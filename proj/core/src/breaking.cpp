#include "nctwist/breaking.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace nctwist {

namespace {

CMatrix inverse_of(const CMatrix& m) {
  return m.partialPivLu().solve(CMatrix::Identity(m.rows(), m.cols()));
}

struct TwistPair {
  CMatrix plus;   // B^+(b) = J nu b nu^-1 J^-1
  CMatrix minus;  // B^-(b) = J nu^-1 b nu J^-1
};

TwistPair twisted_right_action(const TwistedTriple& t, std::size_t l, const CMatrix& b) {
  const CMatrix& nu = t.components[l].twist;
  CMatrix nu_inv = inverse_of(nu);
  return TwistPair{conjugate_by(t.J, nu * b * nu_inv), conjugate_by(t.J, nu_inv * b * nu)};
}

unsigned thread_budget(std::size_t work_items) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NCTWIST_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
  }
  return static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(1, work_items)));
}

}  // namespace

double first_order_residual(const TwistedTriple& t, const CMatrix& a, const CMatrix& b,
                            std::size_t l) {
  if (l >= t.components.size()) throw std::out_of_range("first_order_residual: no such component");
  const CMatrix& d = t.components[l].dirac;
  TwistPair bp = twisted_right_action(t, l, b);
  CMatrix comm = d * a - a * d;
  return (comm * bp.plus - bp.minus * comm).norm();
}

RealSubspace compatible_subspace(const TwistedTriple& t, std::size_t l, const RealSubspace& given,
                                 Side side) {
  if (l >= t.components.size()) throw std::out_of_range("compatible_subspace: no such component");
  const Eigen::Index n = t.dim();
  const Eigen::Index d = t.algebra.real_dim();
  const CMatrix& dirac = t.components[l].dirac;
  std::vector<CMatrix> given_mats = subspace_matrices(given, n);
  if (given_mats.empty()) return t.algebra.rep_span();

  const Eigen::Index rows_per = 2 * n * n;
  RMatrix constraints(static_cast<Eigen::Index>(given_mats.size()) * rows_per, d);

  // Track the magnitude of the two factors entering each product so the rank
  // decision can tell genuine constraints from rounding noise. When every
  // pair is already compatible the whole matrix is noise of size roughly
  // machine-epsilon times this scale, and without an absolute floor the
  // purely relative cutoff would read that noise as full rank.
  double left_scale = 0.0;
  double right_scale = 0.0;

  if (side == Side::B) {
    std::vector<CMatrix> comms;
    comms.reserve(given_mats.size());
    for (const CMatrix& g : given_mats) {
      comms.push_back(dirac * g - g * dirac);
      left_scale = std::max(left_scale, comms.back().norm());
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      TwistPair bp = twisted_right_action(t, l, t.algebra.rep_basis[j]);
      right_scale = std::max({right_scale, bp.plus.norm(), bp.minus.norm()});
      for (std::size_t gi = 0; gi < comms.size(); ++gi) {
        CMatrix c = comms[gi] * bp.plus - bp.minus * comms[gi];
        constraints.block(static_cast<Eigen::Index>(gi) * rows_per, j, rows_per, 1) = flatten(c);
      }
    }
  } else {
    std::vector<TwistPair> actions;
    actions.reserve(given_mats.size());
    for (const CMatrix& g : given_mats) {
      actions.push_back(twisted_right_action(t, l, g));
      right_scale = std::max({right_scale, actions.back().plus.norm(), actions.back().minus.norm()});
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      CMatrix comm = dirac * t.algebra.rep_basis[j] - t.algebra.rep_basis[j] * dirac;
      left_scale = std::max(left_scale, comm.norm());
      for (std::size_t gi = 0; gi < actions.size(); ++gi) {
        CMatrix c = comm * actions[gi].plus - actions[gi].minus * comm;
        constraints.block(static_cast<Eigen::Index>(gi) * rows_per, j, rows_per, 1) = flatten(c);
      }
    }
  }

  RealSubspace kernel = real_nullspace(constraints, 1e-11 * left_scale * right_scale);
  RMatrix span(2 * n * n, kernel.dim());
  for (Eigen::Index i = 0; i < kernel.dim(); ++i)
    span.col(i) = flatten(t.algebra.embed(kernel.basis.col(i)));
  return orthonormalize(span);
}

namespace {

// Iteration workhorse behind breaking_fixed_point. It computes the same
// solves as compatible_subspace but keeps the running solution as an
// orthonormal frame over representation-basis coefficients: consecutive
// solves restrict that frame directly, so the explicit intersections (and
// their large flattened factorizations) disappear, and every solve is only
// as big as what is still alive. Both constraint factors are linear in
// their algebra element, so their values on the representation basis are
// computed once per component and recombined per frame column. The rank
// decision is taken on the Gram matrix of the constraint columns, whose
// eigenvalues are the squared singular values of the flattened constraint
// matrix; the spectra here are sharply bimodal (order-one genuine
// constraints against rounding dust), so the squaring costs nothing as
// long as the cutoff respects the eigensolver's resolution (see solve()).
// Factor magnitudes feed the same absolute noise floor as the one-shot
// solver.
class SweepEngine {
 public:
  explicit SweepEngine(const TwistedTriple& t)
      : t_(t), n_(t.dim()), d_(t.algebra.real_dim()) {
    const std::size_t ncomp = t.components.size();
    nu_inv_.reserve(ncomp);
    basis_comm_.resize(ncomp);
    basis_pair_.resize(ncomp);
    noise_floor_.resize(ncomp);
    for (std::size_t l = 0; l < ncomp; ++l) {
      nu_inv_.push_back(inverse_of(t.components[l].twist));
      const CMatrix& dirac = t.components[l].dirac;
      basis_comm_[l].reserve(static_cast<std::size_t>(d_));
      basis_pair_[l].reserve(static_cast<std::size_t>(d_));
      double left_scale = 0.0;
      double right_scale = 0.0;
      for (Eigen::Index j = 0; j < d_; ++j) {
        const CMatrix& b = t.algebra.rep_basis[static_cast<std::size_t>(j)];
        basis_comm_[l].push_back(dirac * b - b * dirac);
        basis_pair_[l].push_back(pair_of(l, b));
        left_scale = std::max(left_scale, basis_comm_[l].back().norm());
        right_scale = std::max({right_scale, basis_pair_[l].back().plus.norm(),
                                basis_pair_[l].back().minus.norm()});
      }
      // Dust threshold for this component's solves. The factor magnitudes
      // are taken over the whole representation basis, never over the
      // restricted frame: a solve whose frame happens to sit inside a
      // commutant produces constraints that are entirely rounding noise,
      // and a floor derived from those same constraints would collapse
      // with them and let the noise read as rank.
      noise_floor_[l] = 1e-11 * left_scale * right_scale;
    }
  }

  Eigen::Index dim() const { return d_; }

  std::vector<CMatrix> embed_frame(const RMatrix& frame) const {
    std::vector<CMatrix> out;
    out.reserve(static_cast<std::size_t>(frame.cols()));
    for (Eigen::Index i = 0; i < frame.cols(); ++i) {
      CMatrix m = CMatrix::Zero(n_, n_);
      for (Eigen::Index j = 0; j < d_; ++j)
        m += frame(j, i) * t_.algebra.rep_basis[static_cast<std::size_t>(j)];
      out.push_back(std::move(m));
    }
    return out;
  }

  TwistPair pair_of(std::size_t l, const CMatrix& b) const {
    const CMatrix& nu = t_.components[l].twist;
    return TwistPair{conjugate_by(t_.J, nu * b * nu_inv_[l]),
                     conjugate_by(t_.J, nu_inv_[l] * b * nu)};
  }

  // One sweep: the coefficient frame of everything compatible with every
  // source column, on both sides of the pairing, for every component.
  RMatrix sweep(const RMatrix& sources) const {
    RMatrix frame = RMatrix::Identity(d_, d_);
    if (sources.cols() == 0) return frame;
    for (std::size_t l = 0; l < t_.components.size() && frame.cols() > 0; ++l) {
      frame = solve(l, sources, frame, Side::B);
      if (frame.cols() == 0) break;
      frame = solve(l, sources, frame, Side::A);
    }
    return frame;
  }

 private:
  // Linear combination of precomputed basis values along one frame column.
  static void combine(const std::vector<CMatrix>& values, const RMatrix& frame, Eigen::Index col,
                      CMatrix& out) {
    out.setZero();
    for (Eigen::Index j = 0; j < frame.rows(); ++j)
      out += frame(j, col) * values[static_cast<std::size_t>(j)];
  }

  RMatrix solve(std::size_t l, const RMatrix& sources, const RMatrix& frame, Side side) const {
    const Eigen::Index k = frame.cols();
    const Eigen::Index m = sources.cols();

    RMatrix gram = RMatrix::Zero(k, k);
    std::vector<CMatrix> cell(static_cast<std::size_t>(k), CMatrix(n_, n_));
    CMatrix comm(n_, n_);
    CMatrix plus(n_, n_);
    CMatrix minus(n_, n_);

    if (side == Side::B) {
      std::vector<TwistPair> bp(static_cast<std::size_t>(k),
                                TwistPair{CMatrix(n_, n_), CMatrix(n_, n_)});
      for (Eigen::Index i = 0; i < k; ++i)
        combine_pair(basis_pair_[l], frame, i, bp[static_cast<std::size_t>(i)]);
      for (Eigen::Index g = 0; g < m; ++g) {
        combine(basis_comm_[l], sources, g, comm);
        for (Eigen::Index i = 0; i < k; ++i) {
          const TwistPair& p = bp[static_cast<std::size_t>(i)];
          CMatrix& c = cell[static_cast<std::size_t>(i)];
          c.noalias() = comm * p.plus;
          c.noalias() -= p.minus * comm;
        }
        accumulate(gram, cell);
      }
    } else {
      std::vector<CMatrix> comms(static_cast<std::size_t>(k), CMatrix(n_, n_));
      for (Eigen::Index i = 0; i < k; ++i)
        combine(basis_comm_[l], frame, i, comms[static_cast<std::size_t>(i)]);
      for (Eigen::Index g = 0; g < m; ++g) {
        combine_pair(basis_pair_[l], sources, g, plus, minus);
        for (Eigen::Index i = 0; i < k; ++i) {
          const CMatrix& cm = comms[static_cast<std::size_t>(i)];
          CMatrix& c = cell[static_cast<std::size_t>(i)];
          c.noalias() = cm * plus;
          c.noalias() -= minus * cm;
        }
        accumulate(gram, cell);
      }
    }

    Eigen::SelfAdjointEigenSolver<RMatrix> es(gram);
    const double sigma_max = std::sqrt(std::max(0.0, es.eigenvalues()(k - 1)));
    const Eigen::Index rows = m * 2 * n_ * n_;
    // The eigensolver carries an absolute error of order machine epsilon
    // times the top eigenvalue, so singular values below about
    // sqrt(k * eps) * sigma_max cannot be resolved through the Gram matrix;
    // the cutoff must sit above that resolution or dust reads as rank.
    const double resolution =
        std::sqrt(double(k) * std::numeric_limits<double>::epsilon()) * sigma_max;
    const double cutoff =
        std::max({rank_cutoff(rows, k, sigma_max), resolution, noise_floor_[l]});
    Eigen::Index kernel = 0;
    while (kernel < k && std::sqrt(std::max(0.0, es.eigenvalues()(kernel))) <= cutoff) ++kernel;
    if (std::getenv("NCTWIST_TRACE_SWEEP")) {
      std::fprintf(stderr, "solve l=%zu side=%c k=%ld m=%ld kernel=%ld smax=%.3e cut=%.3e\n",
                   l, side == Side::B ? 'B' : 'A', (long)k, (long)m, (long)kernel, sigma_max,
                   cutoff);
      for (Eigen::Index i = std::max<Eigen::Index>(0, kernel - 3);
           i < std::min(k, kernel + 3); ++i)
        std::fprintf(stderr, "    sv[%ld]=%.6e%s\n", (long)i,
                     std::sqrt(std::max(0.0, es.eigenvalues()(i))), i < kernel ? " (kernel)" : "");
    }
    return frame * es.eigenvectors().leftCols(kernel);
  }

  void combine_pair(const std::vector<TwistPair>& values, const RMatrix& frame, Eigen::Index col,
                    CMatrix& plus, CMatrix& minus) const {
    plus.setZero();
    minus.setZero();
    for (Eigen::Index j = 0; j < frame.rows(); ++j) {
      const TwistPair& v = values[static_cast<std::size_t>(j)];
      plus += frame(j, col) * v.plus;
      minus += frame(j, col) * v.minus;
    }
  }

  void combine_pair(const std::vector<TwistPair>& values, const RMatrix& frame, Eigen::Index col,
                    TwistPair& out) const {
    combine_pair(values, frame, col, out.plus, out.minus);
  }

  static void accumulate(RMatrix& gram, const std::vector<CMatrix>& cell) {
    const Eigen::Index k = gram.rows();
    const Eigen::Index len = cell.empty() ? 0 : 2 * cell[0].size();
    for (Eigen::Index i = 0; i < k; ++i) {
      Eigen::Map<const RVector> vi(
          reinterpret_cast<const double*>(cell[static_cast<std::size_t>(i)].data()), len);
      for (Eigen::Index j = i; j < k; ++j) {
        Eigen::Map<const RVector> vj(
            reinterpret_cast<const double*>(cell[static_cast<std::size_t>(j)].data()), len);
        const double v = vi.dot(vj);
        gram(i, j) += v;
        if (i != j) gram(j, i) += v;
      }
    }
  }

  const TwistedTriple& t_;
  Eigen::Index n_;
  Eigen::Index d_;
  std::vector<CMatrix> nu_inv_;
  std::vector<std::vector<CMatrix>> basis_comm_;
  std::vector<std::vector<TwistPair>> basis_pair_;
  std::vector<double> noise_floor_;
};

// Column-projection equality of two orthonormal coefficient frames, the
// coordinate-space analogue of subspace_equal.
bool frames_equal(const RMatrix& a, const RMatrix& b, double tol) {
  if (a.cols() != b.cols()) return false;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    if ((a.col(j) - b * (b.transpose() * a.col(j))).norm() > tol) return false;
  for (Eigen::Index j = 0; j < b.cols(); ++j)
    if ((b.col(j) - a * (a.transpose() * b.col(j))).norm() > tol) return false;
  return true;
}

// Intersection of two orthonormal coefficient frames, the coordinate-space
// analogue of intersect.
RMatrix frame_intersect(const RMatrix& p, const RMatrix& q) {
  if (p.cols() == 0 || q.cols() == 0) return RMatrix(p.rows(), 0);
  RMatrix stacked(p.rows(), p.cols() + q.cols());
  stacked.leftCols(p.cols()) = p;
  stacked.rightCols(q.cols()) = -q;
  Eigen::JacobiSVD<RMatrix> svd(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = rank_cutoff(stacked.rows(), stacked.cols(), sv(0));
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  const Eigen::Index m = stacked.cols() - rank;
  if (m <= 0) return RMatrix(p.rows(), 0);
  RMatrix vecs = p * svd.matrixV().rightCols(m).topRows(p.cols());
  Eigen::JacobiSVD<RMatrix> ortho(vecs, Eigen::ComputeThinU);
  const auto& osv = ortho.singularValues();
  const double ocut = rank_cutoff(vecs.rows(), vecs.cols(), osv(0));
  Eigen::Index orank = 0;
  while (orank < osv.size() && osv(orank) > ocut) ++orank;
  return ortho.matrixU().leftCols(orank);
}

// Worst residual of the exchange relation over all components for one
// ordered pair: a supplies the operator commutator, b the conjugated pair.
double exchange_residual(const SweepEngine& engine, const TwistedTriple& t, const CMatrix& a,
                         const CMatrix& b) {
  double r = 0.0;
  for (std::size_t l = 0; l < t.components.size(); ++l) {
    const CMatrix& dl = t.components[l].dirac;
    CMatrix comm = dl * a - a * dl;
    TwistPair bp = engine.pair_of(l, b);
    r = std::max(r, (comm * bp.plus - bp.minus * comm).norm());
  }
  return r;
}

// Whether every ordered pair drawn from two sets of unit-normalized
// elements satisfies the exchange relation. The residual is bilinear in
// its two slots, so vanishing on basis pairs extends to the spans.
bool sets_compatible(const SweepEngine& engine, const TwistedTriple& t,
                     const std::vector<CMatrix>& xs, const std::vector<CMatrix>& ys) {
  for (const CMatrix& x : xs)
    for (const CMatrix& y : ys)
      if (exchange_residual(engine, t, x, y) > 1e-9 || exchange_residual(engine, t, y, x) > 1e-9)
        return false;
  return true;
}

// A period-two cycle leaves a gap between the certified limb intersection
// and the largest span that could still be self-compatible. Because the
// sweep map reverses inclusions, any enlargement S of the intersection L
// with S inside its own sweep satisfies S ⊆ F(S) ⊆ F(L), so one more
// sweep from L brackets every candidate from above. The gap between L and
// U = F(L) is carved along the central blocks of span(U) — compressing by
// those projections maps span(U) onto itself, so the slices cover the gap
// — and each slice is vetted directly: against itself, against L, and
// against the other slices, through the exchange residual on basis pairs
// (bilinearity extends the verdict to the spans). The largest mutually
// compatible collection of slices joins L. Anything irregular — U not
// closed under products, no clean block splitting, a slice escaping the
// algebra span — falls back to the certified intersection.
RMatrix widen_cycle_intersection(const SweepEngine& engine, const TwistedTriple& t,
                                 const RMatrix& low) {
  const RMatrix up = engine.sweep(low);
  if (up.cols() <= low.cols()) return low;

  const Eigen::Index n = t.dim();
  std::vector<CMatrix> up_mats = engine.embed_frame(up);
  if (!is_subalgebra(up_mats, 1e-9)) return low;
  std::vector<CMatrix> projectors = central_block_projectors(up_mats);
  if (projectors.empty()) return low;

  // Orthonormal coefficient frame of the gap U minus L.
  RMatrix w = up;
  if (low.cols() > 0) w -= low * (low.transpose() * up);
  RMatrix wframe = orthonormalize(w).basis;
  if (wframe.cols() == 0) return low;
  std::vector<CMatrix> wmats = engine.embed_frame(wframe);

  struct Chunk {
    RMatrix frame;                 // coefficient span of the slice
    std::vector<CMatrix> mats;     // unit-normalized elements for testing
  };
  std::vector<Chunk> chunks;
  for (const CMatrix& p : projectors) {
    RMatrix cols(low.rows(), wframe.cols());
    Eigen::Index used = 0;
    for (const CMatrix& wm : wmats) {
      CMatrix slice = p * wm * p;
      if (slice.norm() <= 1e-10 * wm.norm()) continue;
      double res = 0.0;
      RVector c = t.algebra.coeffs_of(slice, &res);
      if (res > 1e-8 * slice.norm()) return low;
      cols.col(used++) = c;
    }
    if (used == 0) continue;
    Chunk chunk;
    chunk.frame = orthonormalize(cols.leftCols(used)).basis;
    if (chunk.frame.cols() == 0) continue;
    for (CMatrix& m : engine.embed_frame(chunk.frame)) {
      m /= m.norm();
      chunk.mats.push_back(std::move(m));
    }
    chunks.push_back(std::move(chunk));
  }
  if (chunks.empty() || chunks.size() > 16) return low;

  std::vector<CMatrix> low_mats = engine.embed_frame(low);
  for (CMatrix& m : low_mats) m /= m.norm();

  // Admissible slices and their pairwise compatibilities.
  const std::size_t nc = chunks.size();
  std::vector<std::uint32_t> adj(nc, 0);
  std::uint32_t valid = 0;
  for (std::size_t i = 0; i < nc; ++i) {
    if (!sets_compatible(engine, t, chunks[i].mats, chunks[i].mats)) continue;
    if (!sets_compatible(engine, t, chunks[i].mats, low_mats)) continue;
    valid |= std::uint32_t{1} << i;
  }
  for (std::size_t i = 0; i < nc; ++i) {
    if (!(valid >> i & 1)) continue;
    for (std::size_t j = i + 1; j < nc; ++j) {
      if (!(valid >> j & 1)) continue;
      if (sets_compatible(engine, t, chunks[i].mats, chunks[j].mats)) {
        adj[i] |= std::uint32_t{1} << j;
        adj[j] |= std::uint32_t{1} << i;
      }
    }
  }

  // Largest-dimensional mutually compatible collection; enumeration order
  // breaks ties deterministically. The empty collection keeps L itself.
  RMatrix best = low;
  Eigen::Index best_dim = low.cols();
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << nc); ++mask) {
    if ((mask & valid) != mask) continue;
    bool clique = true;
    for (std::size_t i = 0; i < nc && clique; ++i)
      if (mask >> i & 1) clique = ((mask & ~(std::uint32_t{1} << i)) & ~adj[i]) == 0;
    if (!clique) continue;
    Eigen::Index cols = low.cols();
    for (std::size_t i = 0; i < nc; ++i)
      if (mask >> i & 1) cols += chunks[i].frame.cols();
    RMatrix stacked(low.rows(), cols);
    Eigen::Index at = 0;
    if (low.cols() > 0) stacked.leftCols(low.cols()) = low;
    at = low.cols();
    for (std::size_t i = 0; i < nc; ++i)
      if (mask >> i & 1) {
        stacked.middleCols(at, chunks[i].frame.cols()) = chunks[i].frame;
        at += chunks[i].frame.cols();
      }
    RMatrix joined = orthonormalize(stacked).basis;
    if (joined.cols() > best_dim) {
      best_dim = joined.cols();
      best = joined;
    }
  }
  if (best_dim == low.cols()) return low;

  // The joined span must still close under products; otherwise keep the
  // certified intersection.
  std::vector<CMatrix> best_mats = engine.embed_frame(best);
  RMatrix span(2 * n * n, best.cols());
  for (Eigen::Index i = 0; i < best.cols(); ++i)
    span.col(i) = flatten(best_mats[static_cast<std::size_t>(i)]);
  if (!is_subalgebra(subspace_matrices(orthonormalize(span), n), 1e-9)) return low;
  return best;
}

}  // namespace

BreakReport breaking_fixed_point(const TwistedTriple& t) {
  const Eigen::Index n = t.dim();
  BreakReport report;
  SweepEngine engine(t);

  // The sweep map is order-reversing (a larger source set imposes more
  // constraints), so iterating it from the full algebra settles into a
  // cycle of period one or two rather than a plain fixed point. The
  // certified answer is the intersection of the two limbs: each of its
  // elements is compatible with everything in both limbs, hence with the
  // intersection itself, pairwise. Forcing monotone shrinkage instead
  // (intersecting every iterate with the previous one) can undershoot:
  // constraints sourced from elements that are themselves about to be cut
  // have no bearing on the survivors.
  RMatrix u = RMatrix::Identity(engine.dim(), engine.dim());
  RMatrix prev = u;
  while (true) {
    ++report.iterations;
    RMatrix next = engine.sweep(u);
    if (frames_equal(next, u, 1e-8)) {
      u = next;
      break;
    }
    if (report.iterations > 1 && frames_equal(next, prev, 1e-8)) {
      u = frame_intersect(next, u);
      break;
    }
    prev = u;
    u = next;
    if (report.iterations > 2 * t.algebra.real_dim() + 4)
      throw std::runtime_error("breaking_fixed_point: iteration failed to settle");
  }

  std::vector<CMatrix> mats = engine.embed_frame(u);
  RMatrix span(2 * n * n, u.cols());
  for (Eigen::Index i = 0; i < u.cols(); ++i) span.col(i) = flatten(mats[static_cast<std::size_t>(i)]);
  report.surviving = span.cols() == 0 ? RealSubspace::empty(2 * n * n) : orthonormalize(span);
  report.basis = subspace_matrices(report.surviving, n);
  if (report.basis.empty()) {
    report.is_subalgebra = true;
    report.signature.recognized = true;
    report.signature.commutative = true;
  } else {
    report.is_subalgebra = is_subalgebra(report.basis, 1e-9, &report.closure_residual);
    if (report.is_subalgebra) report.signature = structure_signature(report.basis);
  }
  for (std::size_t l = 0; l < t.components.size(); ++l) {
    const CMatrix& dl = t.components[l].dirac;
    std::vector<TwistPair> pairs;
    pairs.reserve(report.basis.size());
    for (const CMatrix& b : report.basis) pairs.push_back(engine.pair_of(l, b));
    for (const CMatrix& a : report.basis) {
      CMatrix comm = dl * a - a * dl;
      for (const TwistPair& bp : pairs)
        report.max_residual =
            std::max(report.max_residual, (comm * bp.plus - bp.minus * comm).norm());
    }
  }
  return report;
}

Dd16Decomposition decompose_dd16(const TwistedTriple& t, std::size_t l) {
  if (l >= t.components.size()) throw std::out_of_range("decompose_dd16: no such component");
  const Eigen::Index n = t.dim();
  const CMatrix& nu = t.components[l].twist;
  const CMatrix& d = t.components[l].dirac;

  std::vector<CMatrix> twisted_gens;
  twisted_gens.reserve(t.algebra.rep_basis.size());
  for (const CMatrix& b : t.algebra.rep_basis)
    twisted_gens.push_back(nu * conjugate_by(t.J, b) * nu);
  RealSubspace c0 = commutant(twisted_gens);
  RealSubspace c1 = commutant(t.algebra.rep_basis);

  RMatrix stacked(2 * n * n, c0.dim() + c1.dim());
  stacked.leftCols(c0.dim()) = c0.basis;
  stacked.rightCols(c1.dim()) = c1.basis;
  RVector target = flatten(d);
  RVector coeffs = Eigen::JacobiSVD<RMatrix>(stacked, Eigen::ComputeThinU | Eigen::ComputeThinV)
                       .solve(target);

  Dd16Decomposition out;
  out.d0 = unflatten(c0.basis * coeffs.head(c0.dim()), n, n);
  out.d1 = unflatten(c1.basis * coeffs.tail(c1.dim()), n, n);
  out.residual = (d - out.d0 - out.d1).norm();
  return out;
}

namespace {

// Connected components of the nonzero pattern of J's matrix: a real signed
// diagonal nu satisfies nu J nu = J exactly when the sign is constant on
// each component.
std::vector<std::vector<Eigen::Index>> sign_classes(const CMatrix& f) {
  const Eigen::Index n = f.rows();
  std::vector<Eigen::Index> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Eigen::Index i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  double scale = std::max(1.0, f.norm());
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      if (std::abs(f(r, c)) > 1e-13 * scale) parent[find(r)] = find(c);
  std::vector<std::vector<Eigen::Index>> classes;
  std::vector<Eigen::Index> root_to_class(n, -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index r = find(i);
    if (root_to_class[r] < 0) {
      root_to_class[r] = static_cast<Eigen::Index>(classes.size());
      classes.emplace_back();
    }
    classes[static_cast<std::size_t>(root_to_class[r])].push_back(i);
  }
  return classes;
}

std::vector<CMatrix> enumerate_family(const TwistedTriple& t, const TwistAnsatz& ansatz) {
  const Eigen::Index n = t.dim();
  constexpr std::size_t kMaxCandidates = 200000;
  std::vector<CMatrix> out;

  switch (ansatz.family) {
    case TwistAnsatz::Family::Identity:
      out.push_back(CMatrix::Identity(n, n));
      break;
    case TwistAnsatz::Family::SignedDiagonal: {
      auto classes = sign_classes(t.J.mat);
      if (classes.size() > 20)
        throw std::invalid_argument("search_twists: signed-diagonal family too large");
      std::size_t count = std::size_t(1) << classes.size();
      for (std::size_t bits = 0; bits < count; ++bits) {
        CMatrix nu = CMatrix::Identity(n, n);
        for (std::size_t k = 0; k < classes.size(); ++k)
          if (bits & (std::size_t(1) << k))
            for (Eigen::Index i : classes[k]) nu(i, i) = -1.0;
        out.push_back(std::move(nu));
      }
      break;
    }
    case TwistAnsatz::Family::SignedBlockPermutation: {
      const Eigen::Index bs = ansatz.block;
      if (bs < 1 || n % bs != 0)
        throw std::invalid_argument("search_twists: block size must divide the dimension");
      const Eigen::Index nb = n / bs;
      double family = 1.0;
      for (Eigen::Index i = 2; i <= nb; ++i) family *= double(i);
      family *= std::pow(2.0, double(nb));
      if (family > double(kMaxCandidates))
        throw std::invalid_argument("search_twists: signed-block-permutation family too large");
      std::vector<Eigen::Index> perm(static_cast<std::size_t>(nb));
      std::iota(perm.begin(), perm.end(), 0);
      do {
        std::size_t signsets = std::size_t(1) << nb;
        for (std::size_t bits = 0; bits < signsets; ++bits) {
          CMatrix nu = CMatrix::Zero(n, n);
          for (Eigen::Index i = 0; i < nb; ++i) {
            double s = (bits & (std::size_t(1) << i)) ? -1.0 : 1.0;
            nu.block(i * bs, perm[static_cast<std::size_t>(i)] * bs, bs, bs) =
                s * CMatrix::Identity(bs, bs);
          }
          out.push_back(std::move(nu));
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      break;
    }
    case TwistAnsatz::Family::UserSupplied:
      for (const CMatrix& c : ansatz.candidates) {
        if (c.rows() != n || c.cols() != n)
          throw std::invalid_argument("search_twists: user candidate has wrong shape");
        out.push_back(c);
      }
      break;
  }
  return out;
}

struct AdmittedCandidate {
  CMatrix nu;
  int epsilon_prime = 0;  // determinate relation sign, 0 when not filtered
};

// Filters one raw candidate for one component; returns false to reject.
bool admit(const TwistedTriple& t, std::size_t l, const TwistAnsatz& ansatz, const CMatrix& nu,
           AdmittedCandidate* out) {
  const Eigen::Index n = t.dim();
  const double tol = ansatz.admissibility_tol;
  Eigen::FullPivLU<CMatrix> lu(nu);
  if (!lu.isInvertible()) return false;

  const CMatrix& f = t.J.mat;
  double jscale = std::max(1.0, f.norm());
  if ((nu * f * nu.conjugate() - f).norm() > tol * jscale) return false;
  if (ansatz.require_involutive &&
      (nu * nu - CMatrix::Identity(n, n)).norm() > tol * std::sqrt(double(n)))
    return false;
  if (ansatz.require_self_adjoint) {
    double plus = (nu - nu.adjoint()).norm();
    double minus = (nu + nu.adjoint()).norm();
    if (std::min(plus, minus) > tol * std::max(1.0, nu.norm())) return false;
  }
  out->nu = nu;
  out->epsilon_prime = 0;
  if (ansatz.require_epsilon_prime) {
    const CMatrix& d = t.components[l].dirac;
    CMatrix lhs = nu * f * d.conjugate();
    CMatrix rhs = d * f * nu.conjugate();
    double scale = std::max(1.0, lhs.norm());
    double rp = (lhs - rhs).norm();
    double rm = (lhs + rhs).norm();
    if (rp <= tol * scale && rm > 10.0 * tol * scale)
      out->epsilon_prime = 1;
    else if (rm <= tol * scale && rp > 10.0 * tol * scale)
      out->epsilon_prime = -1;
    else
      return false;
  }
  return true;
}

bool twists_less(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    const CMatrix &x = a[i], &y = b[i];
    for (Eigen::Index r = 0; r < x.rows(); ++r)
      for (Eigen::Index c = 0; c < x.cols(); ++c) {
        if (x(r, c).real() != y(r, c).real()) return x(r, c).real() < y(r, c).real();
        if (x(r, c).imag() != y(r, c).imag()) return x(r, c).imag() < y(r, c).imag();
      }
  }
  return a.size() < b.size();
}

}  // namespace

TwistAnsatz TwistAnsatz::named(const std::string& name) {
  TwistAnsatz a;
  if (name == "identity")
    a.family = Family::Identity;
  else if (name == "signed-diagonal")
    a.family = Family::SignedDiagonal;
  else if (name == "signed-block-permutation")
    a.family = Family::SignedBlockPermutation;
  else
    throw std::invalid_argument("unknown ansatz '" + name + "'");
  return a;
}

std::vector<SearchResult> search_twists(const TwistedTriple& t, const TwistAnsatz& ansatz) {
  constexpr std::size_t kMaxAssignments = 200000;
  const std::size_t ncomp = t.components.size();
  std::vector<CMatrix> raw = enumerate_family(t, ansatz);

  std::vector<std::vector<AdmittedCandidate>> admitted(ncomp);
  for (std::size_t l = 0; l < ncomp; ++l)
    for (const CMatrix& nu : raw) {
      AdmittedCandidate cand;
      if (admit(t, l, ansatz, nu, &cand)) admitted[l].push_back(std::move(cand));
    }

  // Cartesian product of the per-component admitted candidates, with one
  // consistent epsilon' sign across components when that filter is on.
  std::vector<std::vector<const AdmittedCandidate*>> assignments;
  std::vector<const AdmittedCandidate*> current(ncomp, nullptr);
  auto build = [&](auto&& self, std::size_t l, int sign) -> void {
    if (l == ncomp) {
      assignments.push_back(current);
      return;
    }
    for (const AdmittedCandidate& c : admitted[l]) {
      int next_sign = sign;
      if (ansatz.require_epsilon_prime) {
        if (sign != 0 && c.epsilon_prime != sign) continue;
        next_sign = c.epsilon_prime;
      }
      current[l] = &c;
      self(self, l + 1, next_sign);
      if (assignments.size() > kMaxAssignments)
        throw std::invalid_argument("search_twists: too many twist assignments");
    }
  };
  build(build, 0, 0);

  std::vector<SearchResult> results(assignments.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= assignments.size()) return;
      TwistedTriple variant = t;
      SearchResult& r = results[i];
      r.twists.reserve(ncomp);
      int sign = ansatz.require_epsilon_prime ? assignments[i][0]->epsilon_prime : 0;
      for (std::size_t l = 0; l < ncomp; ++l) {
        variant.components[l].twist = assignments[i][l]->nu;
        r.twists.push_back(assignments[i][l]->nu);
      }
      r.epsilon_prime = sign;
      r.report = breaking_fixed_point(variant);
    }
  };
  unsigned nthreads = thread_budget(assignments.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  std::sort(results.begin(), results.end(), [](const SearchResult& x, const SearchResult& y) {
    if (x.report.surviving.dim() != y.report.surviving.dim())
      return x.report.surviving.dim() > y.report.surviving.dim();
    return twists_less(x.twists, y.twists);
  });
  return results;
}

ConditionReport reduction_checks(const TwistedTriple& t, const Tolerance& tol) {
  ConditionReport report;
  const Eigen::Index n = t.dim();
  const auto& basis = t.algebra.rep_basis;

  for (std::size_t l = 0; l < t.components.size(); ++l) {
    const CMatrix& nu = t.components[l].twist;
    bool involutive = (nu * nu - CMatrix::Identity(n, n)).norm() <= 1e-10 * std::sqrt(double(n));
    double worst = 0.0;
    if (involutive) {
      Op jprime = compose(Op::linear(nu), t.J);
      const CMatrix& d = t.components[l].dirac;
      for (const CMatrix& a : basis) {
        CMatrix comm = d * a - a * d;
        for (const CMatrix& b : basis) {
          double twisted = first_order_residual(t, a, b, l);
          CMatrix right = conjugate_by(jprime, b);
          double untwisted = (comm * right - right * comm).norm();
          worst = std::max(worst, std::abs(twisted - untwisted));
        }
      }
    }
    ConditionResult row;
    row.name = "alternative_real_structure_first_order_match_" + std::to_string(l);
    row.residual = worst;
    row.threshold = tol.threshold(double(n), double(n));
    row.pass = involutive && worst <= row.threshold;
    row.required = involutive;
    report.conditions.push_back(row);
  }

  CMatrix flat = CMatrix::Zero(n, n);
  for (const TwistComponent& c : t.components) flat += c.twist * c.dirac;
  CMatrix d_total = t.dirac();
  ConditionResult row;
  row.name = "rescaled_dirac_sum_matches_total";
  row.residual = (flat - d_total).norm();
  row.threshold = tol.threshold(d_total.norm(), d_total.norm());
  row.pass = row.residual <= row.threshold;
  row.required = false;
  report.conditions.push_back(row);

  report.pass = true;
  for (const ConditionResult& c : report.conditions)
    if (c.required && !c.pass) report.pass = false;
  return report;
}

}  // namespace nctwist
