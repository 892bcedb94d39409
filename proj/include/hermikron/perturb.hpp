#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hermikron/canonical.hpp"
#include "hermikron/error.hpp"
#include "hermikron/pencil.hpp"

namespace hermikron {

enum class Family { FiniteJordan, InfiniteJordan, ConjPairSplit, SingularAbsorb, RegularizeM };

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::FiniteJordan: return "finiteJordan";
    case Family::InfiniteJordan: return "infiniteJordan";
    case Family::ConjPairSplit: return "conjPairSplit";
    case Family::SingularAbsorb: return "singularAbsorb";
    case Family::RegularizeM: return "regularizeM";
  }
  return "finiteJordan";
}

inline Family parse_family(std::string_view s) {
  for (Family f : {Family::FiniteJordan, Family::InfiniteJordan, Family::ConjPairSplit,
                   Family::SingularAbsorb, Family::RegularizeM})
    if (to_string(f) == s) return f;
  throw Error(ErrorCode::InvalidParams, "unknown perturbation family " + std::string(s));
}

struct PerturbationSpec {
  Family family = Family::FiniteJordan;
  double a = 0.0;
  Complex mu{0.0, 1.0};
  int k = 2;
  int sign = 1;
  int d = 0;
  double eps = 1.0;
  int m = 1;
};

struct PredictedStructure {
  /// Expected canonical form. For even-k finite families the sign placement
  /// across the two real eigenvalues is a placeholder; only the multiset of
  /// signs is predicted.
  HKCF expected;
  /// Finite eigenvalues (conjugates included); empty when none.
  std::vector<Complex> eigenvalues;
  /// Sorted multiset of signs attached to the real eigenvalues.
  std::vector<int> real_signs;
  bool all_infinite = false;
  std::optional<Inertia> leading_inertia;
  std::optional<Inertia> constant_inertia;
  std::optional<Polynomial> determinant;
  std::optional<int> leading_rank;
  int normal_rank = 0;
  std::vector<int> minimal_indices;
  /// Frobenius distance from the unperturbed canonical pencil.
  double distance = 0.0;
};

struct Perturbation {
  PerturbationSpec spec;
  HermitianPencil pencil;
  /// The unperturbed pencil (same basis as `pencil`).
  HermitianPencil base;
  PredictedStructure prediction;
};

namespace detail {

inline Polynomial binomial_shift(int k, double a, double scale, double constant) {
  // scale * ((lambda - a)^k + constant)
  Polynomial p;
  p.coeffs.assign(k + 1, 0.0);
  double binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    p.coeffs[j] = scale * binom * std::pow(-a, k - j);
    binom = binom * (k - j) / (j + 1);
  }
  p.coeffs[0] += scale * constant;
  return p;
}

inline Inertia anti_identity_inertia(int k, int sign) {
  // antiI_k has eigenvalues +1 (ceil(k/2) times) and -1 (floor(k/2) times).
  Inertia in{(k + 1) / 2, k / 2, 0};
  if (sign < 0) std::swap(in.pos, in.neg);
  return in;
}

inline void check_common(const PerturbationSpec& s) {
  if (!(s.eps > 0.0) || !std::isfinite(s.eps)) throw Error(ErrorCode::InvalidParams, "eps must be positive");
  if (s.m < 1) throw Error(ErrorCode::InvalidParams, "m must be at least 1");
}

inline void check_sign(int sign) {
  if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidParams, "sign must be +1 or -1");
}

}  // namespace detail

/// sigma * S_(a,k): J_k^H(a) with eps/m added to the last diagonal entry of
/// the constant coefficient.
inline Perturbation s_perturbation_finite(double a, int k, int sign, double eps, int m) {
  PerturbationSpec spec{Family::FiniteJordan, a, {}, k, sign, 0, eps, m};
  detail::check_common(spec);
  detail::check_sign(sign);
  if (k < 2 || !std::isfinite(a)) throw Error(ErrorCode::InvalidParams, "finite family needs k >= 2 and finite a");
  const double delta = eps / m;
  const MatrixPencil base = block_pencil(RealJordan{k, a, sign});
  ComplexMatrix A = base.A();
  A(k - 1, k - 1) += sign * delta;
  Perturbation out{spec, HermitianPencil::exact(MatrixPencil(A, base.B())), HermitianPencil::exact(base), {}};
  PredictedStructure& pr = out.prediction;

  const double t = std::pow(delta, 1.0 / k);
  // Even k: roots of (lambda-a)^k = delta. Odd k: roots of (lambda-a)^k = -delta.
  const double phase0 = k % 2 == 0 ? 0.0 : std::numbers::pi / k;
  for (int j = 0; j < k; ++j) pr.eigenvalues.push_back(a + std::polar(t, phase0 + 2.0 * std::numbers::pi * j / k));
  // Exact reals and conjugate pairs for the expected form.
  std::vector<CanonicalBlock> pairs;
  for (int j = 0; j < k; ++j) {
    const Complex z = pr.eigenvalues[j];
    if (std::abs(z.imag()) > 1e-12 * (1.0 + std::abs(z)) && z.imag() > 0.0) pairs.push_back(ConjPair{1, z});
  }
  pr.expected.blocks = pairs;
  if (k % 2 == 0) {
    pr.expected.blocks.push_back(RealJordan{1, a + t, 1});
    pr.expected.blocks.push_back(RealJordan{1, a - t, -1});
    pr.real_signs = {-1, 1};
    pr.determinant = detail::binomial_shift(k, a, (k / 2) % 2 == 0 ? 1.0 : -1.0, -delta);
  } else {
    pr.expected.blocks.push_back(RealJordan{1, a - t, sign});
    pr.real_signs = {sign};
    const double s = sign * (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0);
    pr.determinant = detail::binomial_shift(k, a, s, delta);
  }
  pr.leading_inertia = detail::anti_identity_inertia(k, sign);
  pr.leading_rank = k;
  pr.normal_rank = k;
  pr.distance = delta;
  return out;
}

/// sigma * S_(inf,k): J_k^H(inf) with eps/m added to the last diagonal entry of
/// the lambda coefficient.
inline Perturbation s_perturbation_infinite(int k, int sign, double eps, int m) {
  PerturbationSpec spec{Family::InfiniteJordan, 0.0, {}, k, sign, 0, eps, m};
  detail::check_common(spec);
  detail::check_sign(sign);
  if (k < 2) throw Error(ErrorCode::InvalidParams, "infinite family needs k >= 2");
  const double delta = eps / m;
  const MatrixPencil base = block_pencil(InfJordan{k, sign});
  ComplexMatrix B = base.B();
  B(k - 1, k - 1) += sign * delta;
  Perturbation out{spec, HermitianPencil::exact(MatrixPencil(base.A(), B)), HermitianPencil::exact(base), {}};
  PredictedStructure& pr = out.prediction;

  // Roots of lambda^k = 1/delta (even k) or -1/delta (odd k).
  const double t = std::pow(1.0 / delta, 1.0 / k);
  const double phase0 = k % 2 == 0 ? 0.0 : std::numbers::pi / k;
  for (int j = 0; j < k; ++j) pr.eigenvalues.push_back(std::polar(t, phase0 + 2.0 * std::numbers::pi * j / k));
  for (const Complex& z : pr.eigenvalues)
    if (std::abs(z.imag()) > 1e-12 * (1.0 + std::abs(z)) && z.imag() > 0.0)
      pr.expected.blocks.push_back(ConjPair{1, z});
  const double parity = (k / 2) % 2 == 0 ? 1.0 : -1.0;
  Polynomial det;
  det.coeffs.assign(k + 1, 0.0);
  if (k % 2 == 0) {
    pr.expected.blocks.push_back(RealJordan{1, t, sign});
    pr.expected.blocks.push_back(RealJordan{1, -t, sign});
    pr.real_signs = {sign, sign};
    det.coeffs[0] = parity;
    det.coeffs[k] = -parity * delta;
  } else {
    pr.expected.blocks.push_back(RealJordan{1, -t, sign});
    pr.real_signs = {sign};
    const double s = sign * (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0);
    det.coeffs[0] = s;
    det.coeffs[k] = s * delta;
  }
  pr.determinant = det;
  pr.constant_inertia = detail::anti_identity_inertia(k, sign);
  // Lambda coefficient is sigma (antiI_{k-1} + delta e_k e_k^T).
  Inertia lead = detail::anti_identity_inertia(k - 1, 1);
  lead.pos += 1;
  if (sign < 0) std::swap(lead.pos, lead.neg);
  pr.leading_inertia = lead;
  pr.leading_rank = k;
  pr.normal_rank = k;
  pr.distance = delta;
  return out;
}

/// J_k^H(mu, conj mu) + T^(k,m,eps), with T a constant anti-diagonal ramp.
inline Perturbation conj_pair_split(Complex mu, int k, double eps, int m) {
  PerturbationSpec spec{Family::ConjPairSplit, 0.0, mu, k, 1, 0, eps, m};
  detail::check_common(spec);
  if (k < 1) throw Error(ErrorCode::InvalidParams, "k must be at least 1");
  if (!(mu.imag() > 0.0)) throw Error(ErrorCode::InvalidParams, "conjPairSplit needs im(mu) > 0");
  const double delta = eps / m;
  const MatrixPencil base = block_pencil(ConjPair{k, mu});
  ComplexMatrix A = base.A();
  const int n = 2 * k;
  for (int i = 0; i < n; ++i) A(i, n - 1 - i) += (i < k ? i + 1 : n - i) * delta;
  Perturbation out{spec, HermitianPencil::exact(MatrixPencil(A, base.B())), HermitianPencil::exact(base), {}};
  PredictedStructure& pr = out.prediction;

  Polynomial det;
  det.coeffs = {k % 2 == 0 ? 1.0 : -1.0};
  auto multiply = [&det](Complex root) {
    std::vector<Complex> next(det.coeffs.size() + 1, 0.0);
    for (std::size_t i = 0; i < det.coeffs.size(); ++i) {
      next[i + 1] += det.coeffs[i];
      next[i] -= root * det.coeffs[i];
    }
    det.coeffs = std::move(next);
  };
  double dist2 = 0.0;
  for (int j = 1; j <= k; ++j) {
    const Complex z = mu - static_cast<double>(j) * delta;
    pr.eigenvalues.push_back(z);
    pr.eigenvalues.push_back(std::conj(z));
    pr.expected.blocks.push_back(ConjPair{1, z});
    multiply(z);
    multiply(std::conj(z));
    dist2 += 2.0 * j * delta * j * delta;
  }
  pr.determinant = det;
  pr.leading_inertia = Inertia{k, k, 0};
  pr.leading_rank = n;
  pr.normal_rank = n;
  pr.distance = std::sqrt(dist2);
  return out;
}

/// M_d + (1/m) E_d, E_d the unit in entry (1,1) of the constant coefficient.
inline Perturbation regularize_M(int d, int m) {
  PerturbationSpec spec{Family::RegularizeM, 0.0, {}, 0, 1, d, 1.0, m};
  if (d < 0) throw Error(ErrorCode::InvalidParams, "d must be non-negative");
  if (m < 1) throw Error(ErrorCode::InvalidParams, "m must be at least 1");
  const MatrixPencil base = block_pencil(Singular{d});
  ComplexMatrix A = base.A();
  A(0, 0) += 1.0 / m;
  Perturbation out{spec, HermitianPencil::exact(MatrixPencil(A, base.B())), HermitianPencil::exact(base), {}};
  PredictedStructure& pr = out.prediction;
  pr.expected.blocks = {InfJordan{2 * d + 1, 1}};
  pr.all_infinite = true;
  Polynomial det;
  det.coeffs.assign(2 * d + 2, 0.0);
  det.coeffs[0] = (d % 2 == 0 ? 1.0 : -1.0) / m;
  pr.determinant = det;
  pr.constant_inertia = Inertia{d + 1, d, 0};
  pr.leading_inertia = Inertia{d, d, 1};
  pr.leading_rank = 2 * d;
  pr.normal_rank = 2 * d + 1;
  pr.distance = 1.0 / m;
  return out;
}

/// Bordered pencil [[0, X*], [X, 0]] with X = (J_k^H(mu) (+) L_d) + eps at
/// (row k, column k+1) of the constant coefficient (one-based).
inline Perturbation singular_absorb(Complex mu, int k, int d, double eps) {
  PerturbationSpec spec{Family::SingularAbsorb, 0.0, mu, k, 1, d, eps, 1};
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw Error(ErrorCode::InvalidParams, "eps must be non-negative");
  if (k < 1 || d < 0) throw Error(ErrorCode::InvalidParams, "need k >= 1 and d >= 0");
  if (!(mu.imag() > 0.0)) throw Error(ErrorCode::InvalidParams, "singularAbsorb needs im(mu) > 0");
  const int rows = k + d;
  const int cols = k + d + 1;
  const int n = rows + cols;
  const MatrixPencil jk = detail::jordan_h(k, mu);
  const MatrixPencil ld = build_L(d);
  ComplexMatrix xa = ComplexMatrix::Zero(rows, cols);
  ComplexMatrix xb = ComplexMatrix::Zero(rows, cols);
  xa.block(0, 0, k, k) = jk.A();
  xb.block(0, 0, k, k) = jk.B();
  xa.block(k, k, d, d + 1) = ld.A();
  xb.block(k, k, d, d + 1) = ld.B();

  auto bordered = [&](const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix A = ComplexMatrix::Zero(n, n);
    ComplexMatrix B = ComplexMatrix::Zero(n, n);
    A.block(cols, 0, rows, cols) = a;
    B.block(cols, 0, rows, cols) = b;
    A.block(0, cols, cols, rows) = a.adjoint();
    B.block(0, cols, cols, rows) = b.adjoint();
    return MatrixPencil(std::move(A), std::move(B));
  };
  const MatrixPencil base = bordered(xa, xb);
  ComplexMatrix xe = xa;
  xe(k - 1, k) += eps;
  Perturbation out{spec, HermitianPencil::exact(bordered(xe, xb)), HermitianPencil::exact(base), {}};
  PredictedStructure& pr = out.prediction;
  pr.expected.blocks = {Singular{d + k}};
  pr.normal_rank = 2 * (d + k);
  pr.minimal_indices = {d + k};
  pr.distance = eps * std::numbers::sqrt2;
  return out;
}

/// Index order that maps the eps = 0 absorb pencil onto J_k^H(mu, conj mu) (+) M_d.
inline std::vector<int> absorb_block_order(int k, int d) {
  const int cols = k + d + 1;
  std::vector<int> order;
  for (int i = 0; i < k; ++i) order.push_back(i);
  for (int i = 0; i < k; ++i) order.push_back(cols + i);
  for (int i = 0; i <= d; ++i) order.push_back(k + i);
  for (int i = 0; i < d; ++i) order.push_back(cols + k + i);
  return order;
}

inline Perturbation make_perturbation(const PerturbationSpec& s) {
  switch (s.family) {
    case Family::FiniteJordan: return s_perturbation_finite(s.a, s.k, s.sign, s.eps, s.m);
    case Family::InfiniteJordan: return s_perturbation_infinite(s.k, s.sign, s.eps, s.m);
    case Family::ConjPairSplit: return conj_pair_split(s.mu, s.k, s.eps, s.m);
    case Family::SingularAbsorb: return singular_absorb(s.mu, s.k, s.d, s.eps);
    case Family::RegularizeM: return regularize_M(s.d, s.m);
  }
  throw Error(ErrorCode::InvalidParams, "unknown family");
}

}  // namespace hermikron
