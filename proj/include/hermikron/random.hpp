#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace hermikron {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser; used to derive independent per-trial seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// seed_j = splitmix(master, j): stream j of a master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

inline double standard_normal(Rng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

/// Standard complex Gaussian: real and imaginary parts iid N(0, 1/2).
inline std::complex<double> complex_normal(Rng& rng) {
  static const double kScale = std::sqrt(0.5);
  const double re = standard_normal(rng);
  const double im = standard_normal(rng);
  return {kScale * re, kScale * im};
}

inline Eigen::MatrixXcd complex_gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                                                Rng& rng) {
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = complex_normal(rng);
  return m;
}

/// Hermitian matrix with standard complex Gaussian off-diagonal entries and
/// N(0,1) diagonal.
inline Eigen::MatrixXcd random_hermitian(Eigen::Index n, Rng& rng) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) = standard_normal(rng);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      h(i, j) = complex_normal(rng);
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

}  // namespace hermikron
