#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "hermikron/error.hpp"
#include "hermikron/pencil.hpp"
#include "hermikron/random.hpp"

namespace hermikron {

/// sigma * J_k^H(a).
struct RealJordan {
  int k = 1;
  double a = 0.0;
  int sign = 1;
  friend bool operator==(const RealJordan&, const RealJordan&) = default;
};

/// sigma * J_k^H(infinity).
struct InfJordan {
  int k = 1;
  int sign = 1;
  friend bool operator==(const InfJordan&, const InfJordan&) = default;
};

/// J_k^H(mu, conj(mu)), realized with size 2k; im(mu) > 0.
struct ConjPair {
  int k = 1;
  Complex mu{0.0, 1.0};
  friend bool operator==(const ConjPair&, const ConjPair&) = default;
};

/// M_d, realized with size 2d+1.
struct Singular {
  int d = 0;
  friend bool operator==(const Singular&, const Singular&) = default;
};

using CanonicalBlock = std::variant<RealJordan, InfJordan, ConjPair, Singular>;

inline Eigen::Index block_size(const CanonicalBlock& b) {
  return std::visit(
      [](const auto& x) -> Eigen::Index {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ConjPair>)
          return 2 * x.k;
        else if constexpr (std::is_same_v<T, Singular>)
          return 2 * x.d + 1;
        else
          return x.k;
      },
      b);
}

inline void validate_block(const CanonicalBlock& b) {
  std::visit(
      [](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Singular>) {
          if (x.d < 0) throw Error(ErrorCode::InvalidBlock, "singular block with d < 0");
        } else {
          if (x.k < 1) throw Error(ErrorCode::InvalidBlock, "block size k < 1");
        }
        if constexpr (std::is_same_v<T, RealJordan> || std::is_same_v<T, InfJordan>) {
          if (x.sign != 1 && x.sign != -1)
            throw Error(ErrorCode::InvalidBlock, "sign must be +1 or -1");
        }
        if constexpr (std::is_same_v<T, RealJordan>) {
          if (!std::isfinite(x.a)) throw Error(ErrorCode::InvalidBlock, "non-finite eigenvalue");
        }
        if constexpr (std::is_same_v<T, ConjPair>) {
          if (!(x.mu.imag() > 0.0) || !std::isfinite(x.mu.real()) || !std::isfinite(x.mu.imag()))
            throw Error(ErrorCode::InvalidBlock, "conjugate pair needs finite mu with im(mu) > 0");
        }
      },
      b);
}

struct HKCF {
  std::vector<CanonicalBlock> blocks;

  Eigen::Index size() const {
    Eigen::Index n = 0;
    for (const auto& b : blocks) n += block_size(b);
    return n;
  }

  int singular_count() const {
    return static_cast<int>(std::count_if(blocks.begin(), blocks.end(), [](const auto& b) {
      return std::holds_alternative<Singular>(b);
    }));
  }

  int normal_rank() const { return static_cast<int>(size()) - singular_count(); }

  void validate() const {
    for (const auto& b : blocks) validate_block(b);
  }

  friend bool operator==(const HKCF&, const HKCF&) = default;
};

/// Distinct finite eigenvalues, mu and conj(mu) counted separately.
inline int distinct_finite_eigenvalue_count(const HKCF& h) {
  std::vector<Complex> seen;
  auto add = [&](Complex z) {
    if (std::find(seen.begin(), seen.end(), z) == seen.end()) seen.push_back(z);
  };
  for (const auto& b : h.blocks) {
    if (const auto* r = std::get_if<RealJordan>(&b)) add(r->a);
    if (const auto* c = std::get_if<ConjPair>(&b)) {
      add(c->mu);
      add(std::conj(c->mu));
    }
  }
  return static_cast<int>(seen.size());
}

inline ComplexMatrix build_F(int d) {
  if (d < 0) throw Error(ErrorCode::InvalidBlock, "d < 0");
  ComplexMatrix f = ComplexMatrix::Zero(d, d + 1);
  for (int i = 0; i < d; ++i) f(i, i + 1) = 1.0;
  return f;
}

inline ComplexMatrix build_G(int d) {
  if (d < 0) throw Error(ErrorCode::InvalidBlock, "d < 0");
  ComplexMatrix g = ComplexMatrix::Zero(d, d + 1);
  for (int i = 0; i < d; ++i) g(i, i) = 1.0;
  return g;
}

/// L_d = lambda G_d + F_d.
inline MatrixPencil build_L(int d) { return {build_F(d), build_G(d)}; }

namespace detail {

// Anti-triangular J_k^H(z): lambda - z on the anti-diagonal, ones just above it.
inline MatrixPencil jordan_h(int k, Complex z) {
  ComplexMatrix a = ComplexMatrix::Zero(k, k);
  ComplexMatrix b = ComplexMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    a(i, k - 1 - i) = -z;
    b(i, k - 1 - i) = 1.0;
    if (i <= k - 2) a(i, k - 2 - i) = 1.0;
  }
  return {std::move(a), std::move(b)};
}

inline MatrixPencil jordan_h_inf(int k) {
  ComplexMatrix a = ComplexMatrix::Zero(k, k);
  ComplexMatrix b = ComplexMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    a(i, k - 1 - i) = 1.0;
    if (i <= k - 2) b(i, k - 2 - i) = 1.0;
  }
  return {std::move(a), std::move(b)};
}

inline MatrixPencil conj_pair(int k, Complex mu) {
  const MatrixPencil lower = jordan_h(k, mu);
  const MatrixPencil upper = jordan_h(k, std::conj(mu));
  ComplexMatrix a = ComplexMatrix::Zero(2 * k, 2 * k);
  ComplexMatrix b = ComplexMatrix::Zero(2 * k, 2 * k);
  a.block(0, k, k, k) = upper.A();
  b.block(0, k, k, k) = upper.B();
  a.block(k, 0, k, k) = lower.A();
  b.block(k, 0, k, k) = lower.B();
  return {std::move(a), std::move(b)};
}

inline MatrixPencil singular_m(int d) {
  const int n = 2 * d + 1;
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  ComplexMatrix b = ComplexMatrix::Zero(n, n);
  const MatrixPencil l = build_L(d);
  a.block(d + 1, 0, d, d + 1) = l.A();
  b.block(d + 1, 0, d, d + 1) = l.B();
  a.block(0, d + 1, d + 1, d) = l.A().transpose();
  b.block(0, d + 1, d + 1, d) = l.B().transpose();
  return {std::move(a), std::move(b)};
}

}  // namespace detail

/// Exact realization of one block; the constant coefficient is A.
inline MatrixPencil block_pencil(const CanonicalBlock& b) {
  validate_block(b);
  return std::visit(
      [](const auto& x) -> MatrixPencil {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RealJordan>)
          return static_cast<double>(x.sign) * detail::jordan_h(x.k, x.a);
        else if constexpr (std::is_same_v<T, InfJordan>)
          return static_cast<double>(x.sign) * detail::jordan_h_inf(x.k);
        else if constexpr (std::is_same_v<T, ConjPair>)
          return detail::conj_pair(x.k, x.mu);
        else
          return detail::singular_m(x.d);
      },
      b);
}

inline HermitianPencil build_block(const CanonicalBlock& b) {
  return HermitianPencil::exact(block_pencil(b));
}

inline HermitianPencil build_hkcf(const HKCF& h) {
  std::vector<MatrixPencil> parts;
  parts.reserve(h.blocks.size());
  for (const auto& b : h.blocks) parts.push_back(block_pencil(b));
  return HermitianPencil::exact(direct_sum(parts));
}

enum class EigenvaluePolicy { Integers, Rationals, Gaussian };

inline constexpr double kImMin = 0.05;
inline constexpr int kMaxSamplingAttempts = 16;

inline std::string_view to_string(EigenvaluePolicy p) {
  switch (p) {
    case EigenvaluePolicy::Integers: return "integers";
    case EigenvaluePolicy::Rationals: return "rationals";
    case EigenvaluePolicy::Gaussian: return "gaussian";
  }
  return "gaussian";
}

inline EigenvaluePolicy parse_policy(std::string_view s) {
  if (s == "integers") return EigenvaluePolicy::Integers;
  if (s == "rationals") return EigenvaluePolicy::Rationals;
  if (s == "gaussian") return EigenvaluePolicy::Gaussian;
  throw Error(ErrorCode::InvalidArgument, "unknown eigenvalue policy " + std::string(s));
}

/// Draws distinct real values (and conjugate-pair values) under one policy.
class EigenvalueSampler {
 public:
  EigenvalueSampler(EigenvaluePolicy policy, Rng& rng) : policy_(policy), rng_(rng) {}

  double next_real() {
    for (int attempt = 0; attempt < 100000; ++attempt) {
      const double x = draw();
      if (fresh_real(x)) {
        reals_.push_back(x);
        return x;
      }
    }
    throw Error(ErrorCode::SamplingFailed, "could not draw a distinct real eigenvalue");
  }

  Complex next_pair() {
    for (int attempt = 0; attempt < 100000; ++attempt) {
      const Complex z(draw(), draw_imag());
      const bool fresh = std::none_of(pairs_.begin(), pairs_.end(), [&](Complex w) {
        return std::abs(w - z) <= min_gap();
      });
      if (fresh) {
        pairs_.push_back(z);
        return z;
      }
    }
    throw Error(ErrorCode::SamplingFailed, "could not draw a distinct conjugate pair");
  }

 private:
  double min_gap() const { return policy_ == EigenvaluePolicy::Gaussian ? 1e-6 : 0.0; }

  bool fresh_real(double x) const {
    return std::none_of(reals_.begin(), reals_.end(),
                        [&](double y) { return std::abs(x - y) <= min_gap(); });
  }

  double draw() {
    switch (policy_) {
      case EigenvaluePolicy::Integers:
        return static_cast<double>(std::uniform_int_distribution<int>(1, 1000)(rng_));
      case EigenvaluePolicy::Rationals: {
        const int q = std::uniform_int_distribution<int>(1, 1000)(rng_);
        const long p = std::uniform_int_distribution<long>(-1000L * q, 1000L * q)(rng_);
        return static_cast<double>(p) / q;
      }
      case EigenvaluePolicy::Gaussian:
        break;
    }
    return standard_normal(rng_);
  }

  double draw_imag() {
    switch (policy_) {
      case EigenvaluePolicy::Integers:
        return static_cast<double>(std::uniform_int_distribution<int>(1, 1000)(rng_));
      case EigenvaluePolicy::Rationals: {
        const int q = std::uniform_int_distribution<int>(1, 1000)(rng_);
        const int lo = static_cast<int>(std::floor(kImMin * q)) + 1;
        const long p = std::uniform_int_distribution<long>(lo, 1000L * q)(rng_);
        return static_cast<double>(p) / q;
      }
      case EigenvaluePolicy::Gaussian:
        break;
    }
    return kImMin + std::abs(standard_normal(rng_));
  }

  EigenvaluePolicy policy_;
  Rng& rng_;
  std::vector<double> reals_;
  std::vector<Complex> pairs_;
};

/// Replaces the finite eigenvalues of h by fresh distinct draws. Blocks that
/// shared an eigenvalue keep sharing the replacement.
inline HKCF relabel_eigenvalues(const HKCF& h, EigenvaluePolicy policy, Rng& rng) {
  EigenvalueSampler sampler(policy, rng);
  std::map<double, double> real_map;
  std::map<std::pair<double, double>, Complex> pair_map;
  HKCF out = h;
  for (auto& b : out.blocks) {
    if (auto* r = std::get_if<RealJordan>(&b)) {
      auto it = real_map.find(r->a);
      if (it == real_map.end()) it = real_map.emplace(r->a, sampler.next_real()).first;
      r->a = it->second;
    } else if (auto* c = std::get_if<ConjPair>(&b)) {
      const std::pair<double, double> key{c->mu.real(), c->mu.imag()};
      auto it = pair_map.find(key);
      if (it == pair_map.end()) it = pair_map.emplace(key, sampler.next_pair()).first;
      c->mu = it->second;
    }
  }
  return out;
}

/// Complex Gaussian transform with condition estimate at most condMax.
inline ComplexMatrix random_transform(Eigen::Index n, Rng& rng) {
  for (int attempt = 0; attempt < kMaxSamplingAttempts; ++attempt) {
    ComplexMatrix q = complex_gaussian_matrix(n, n, rng);
    if (condition_number(q) <= kCondMax) return q;
  }
  throw Error(ErrorCode::SamplingFailed, "no transform below condMax after 16 draws");
}

inline HermitianPencil random_congruence(const HermitianPencil& p, Rng& rng) {
  return congruence(p, random_transform(p.size(), rng));
}

inline HermitianPencil random_congruence_sample(const HKCF& h, EigenvaluePolicy policy,
                                                std::uint64_t seed) {
  h.validate();
  Rng rng = make_rng(seed);
  const HKCF relabeled = relabel_eigenvalues(h, policy, rng);
  return random_congruence(build_hkcf(relabeled), rng);
}

/// i * p for a skew-Hermitian pencil.
inline HermitianPencil skew_to_hermitian(const MatrixPencil& p) {
  if (!p.square() || p.rows() == 0)
    throw Error(ErrorCode::InvalidArgument, "skew-Hermitian pencil must be square and nonempty");
  const double tol = kHermTol * p.scale();
  if ((p.A() + p.A().adjoint()).norm() > tol || (p.B() + p.B().adjoint()).norm() > tol)
    throw Error(ErrorCode::NotSkewHermitian, "coefficient defect exceeds hermTol");
  return HermitianPencil::from_measured(Complex(0.0, 1.0) * p);
}

}  // namespace hermikron
