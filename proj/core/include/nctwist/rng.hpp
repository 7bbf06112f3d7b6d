#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "nctwist/op.hpp"

namespace nctwist {

/// Seeded generator with hand-rolled distributions. mt19937_64 output is
/// specified bit-exactly by the standard; std::normal_distribution is not,
/// and golden fixtures need identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do { u1 = uniform(); } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  Complex cgaussian() {
    double re = gaussian();
    double im = gaussian();
    return Complex{re, im};
  }

  /// Uniform integer in [lo, hi].
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    return lo + engine_() % (hi - lo + 1);
  }

  CMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cgaussian();
    return m;
  }

  CMatrix hermitian_matrix(Eigen::Index n) {
    CMatrix m = gaussian_matrix(n, n);
    return 0.5 * (m + m.adjoint()).eval();
  }

  RVector gaussian_vector(Eigen::Index n) {
    RVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = gaussian();
    return v;
  }

  CVector cgaussian_vector(Eigen::Index n) {
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cgaussian();
    return v;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace nctwist
