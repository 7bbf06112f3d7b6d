#pragma once

#include <string>

#include "nctwist/triple.hpp"

namespace nctwist {

/// Yukawa couplings of the finite electroweak-style geometry, one g x g
/// complex matrix per coupling (g = number of generations). kvr is the
/// Majorana block and should be symmetric for the usual sign assignments.
struct YukawaData {
  CMatrix kv, ke, ku, kd, kvr;

  static YukawaData scalars(Complex kv, Complex ke, Complex ku, Complex kd, Complex kvr);

  /// Number of generations; throws if the five blocks are not square
  /// matrices of one common size.
  int generations() const;
};

enum class SmAlgebra {
  LeftRight,      // H_L + H_R + M_4(C), real dimension 40
  StandardModel,  // C + H + M_3(C), real dimension 24
};

/// Two-point toy geometry on C^8: algebra C_L + C_R + M_2(C), a particle
/// half carrying the two scalars, an antiparticle half carrying M_2(C)
/// doubled, real structure swapping the halves, and a Dirac operator with a
/// Hermitian hopping block (kx) plus one Majorana-type cross entry (ky).
/// No grading. Single component with identity twist.
TwistedTriple build_toy(Complex kx, Complex ky);

/// Finite geometry of the electroweak sector on C^(32 g): per generation a
/// particle space of 4 "colors" (lepton + three quark colors) times 4
/// internal states (R1, R2, L1, L2), an antiparticle copy, a real structure
/// swapping the two, a grading -1 on R and +1 on L states (opposite on
/// antiparticles), and a Dirac operator from the Yukawa data with the
/// Majorana block coupling the R1 lepton to its conjugate. The algebra is
/// either the full left-right one or the smaller one embedded in it with
/// q_R = diag(lambda, conj lambda) and m_4 = diag(lambda, m_3).
TwistedTriple build_sm_finite(const YukawaData& y, SmAlgebra which);

/// Re-split the total Dirac operator of t into components, each carrying an
/// identity twist. Splits are along the two halves of the space (particle /
/// antiparticle): "none" keeps one block; "two" separates the half-diagonal
/// part from the off-diagonal part; "three" further splits the off-diagonal
/// part into its upper-right and lower-left pieces. Requires even dimension
/// for the nontrivial splits.
TwistedTriple decompose_dirac(const TwistedTriple& t, const std::string& decomposition);

}  // namespace nctwist
