#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "hermikron/error.hpp"
#include "hermikron/generic_bundles.hpp"
#include "hermikron/lapack.hpp"
#include "hermikron/pencil.hpp"
#include "hermikron/random.hpp"

namespace hermikron {

inline constexpr double kCompletionScale = 1e-2;
inline constexpr double kMatchTol = 1e-6;
inline constexpr double kPairTol = 1e-6;
inline constexpr double kRealTol = 1e-8;
inline constexpr double kSignTol = 1e-12;
/// Finite eigenvalues beyond this magnitude are reported as infinite.
inline constexpr double kInfiniteMagnitude = 1.0 / kMatchTol;

inline const Complex kInfinity{std::numeric_limits<double>::infinity(), 0.0};

inline bool is_infinite(Complex z) { return !std::isfinite(z.real()) || !std::isfinite(z.imag()); }

/// Eigenvalues of A + lambda B for a pair assumed regular (no rank check).
inline std::vector<Complex> pencil_eigenvalues(const ComplexMatrix& A, const ComplexMatrix& B) {
  const lapack::GeneralizedEigenvalues g = lapack::zggev(A, B);
  std::vector<Complex> out;
  out.reserve(g.alpha.size());
  for (std::size_t i = 0; i < g.alpha.size(); ++i) {
    const Complex a = g.alpha[i];
    const Complex b = g.beta[i];
    if (b == 0.0 || std::abs(b) * kInfiniteMagnitude < std::abs(a)) {
      out.push_back(kInfinity);
    } else {
      out.push_back(-a / b);
    }
  }
  return out;
}

inline std::vector<Complex> eigs_regular(const HermitianPencil& p, std::uint64_t seed = 0) {
  if (normal_rank(p, seed) < p.size()) throw Error(ErrorCode::NotRegular, "pencil is singular");
  return pencil_eigenvalues(p.A(), p.B());
}

namespace detail {

// Greedy one-to-one matching of finite values within kMatchTol (relative).
inline std::vector<Complex> match_runs(const std::vector<Complex>& x, const std::vector<Complex>& y) {
  std::vector<bool> used(y.size(), false);
  std::vector<Complex> out;
  for (const Complex& z : x) {
    if (is_infinite(z)) continue;
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = y.size();
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (used[j] || is_infinite(y[j])) continue;
      const double dist = std::abs(z - y[j]);
      if (dist < best) {
        best = dist;
        arg = j;
      }
    }
    if (arg < y.size() && best <= kMatchTol * (1.0 + std::abs(z))) {
      used[arg] = true;
      out.push_back(z);
    }
  }
  return out;
}

inline std::vector<Complex> completed_run(const HermitianPencil& p, int defect, double tau,
                                          std::uint64_t seed) {
  Rng rng = make_rng(seed);
  const ComplexMatrix w = complex_gaussian_matrix(p.size(), defect, rng);
  Eigen::VectorXd da(defect);
  Eigen::VectorXd db(defect);
  for (int i = 0; i < defect; ++i) da(i) = standard_normal(rng);
  for (int i = 0; i < defect; ++i) db(i) = standard_normal(rng);
  const ComplexMatrix a = p.A() + tau * w * da.asDiagonal() * w.adjoint();
  const ComplexMatrix b = p.B() + tau * w * db.asDiagonal() * w.adjoint();
  return pencil_eigenvalues(a, b);
}

}  // namespace detail

struct SingularEigenvalues {
  std::vector<Complex> values;
  int infinite = 0;
};

/// Finite eigenvalues of a singular pencil by two independent Hermitian rank
/// completions, confirmed by a third.
inline SingularEigenvalues eigs_singular_detail(const HermitianPencil& p, std::uint64_t seed,
                                                std::optional<int> known_rank = std::nullopt) {
  const int n = static_cast<int>(p.size());
  const int r = known_rank ? *known_rank : normal_rank(p, seed);
  SingularEigenvalues out;
  if (r == n) {
    for (const Complex& z : pencil_eigenvalues(p.A(), p.B())) {
      if (is_infinite(z))
        ++out.infinite;
      else
        out.values.push_back(z);
    }
    return out;
  }
  const double tau = kCompletionScale * std::max(p.A().norm(), p.B().norm());
  if (tau == 0.0) return out;
  std::vector<std::vector<Complex>> runs;
  for (std::uint64_t t = 1; t <= 3; ++t) runs.push_back(detail::completed_run(p, n - r, tau, derive_seed(seed, t)));
  out.values = detail::match_runs(runs[0], runs[1]);
  const std::vector<Complex> confirm = detail::match_runs(runs[0], runs[2]);
  if (confirm.size() != out.values.size())
    throw Error(ErrorCode::InferenceUnstable, "matched eigenvalue count changed on confirmation run");
  int inf = n;
  for (const auto& run : runs)
    inf = std::min<int>(inf, static_cast<int>(std::count_if(run.begin(), run.end(), is_infinite)));
  out.infinite = inf;
  return out;
}

inline std::vector<Complex> eigs_singular(const HermitianPencil& p, std::uint64_t seed = 0) {
  return eigs_singular_detail(p, seed).values;
}

struct RealClassification {
  std::vector<double> reals;
  /// One representative per conjugate pair, im > 0.
  std::vector<Complex> pairs;
  int infinite = 0;
};

inline RealClassification classify_real(const std::vector<Complex>& eigs, double tol = kRealTol) {
  RealClassification out;
  std::vector<Complex> rest;
  for (const Complex& z : eigs) {
    if (is_infinite(z))
      ++out.infinite;
    else if (std::abs(z.imag()) <= tol * (1.0 + std::abs(z.real())))
      out.reals.push_back(z.real());
    else
      rest.push_back(z);
  }
  std::vector<bool> used(rest.size(), false);
  for (std::size_t i = 0; i < rest.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = rest.size();
    for (std::size_t j = 0; j < rest.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(rest[i] - std::conj(rest[j]));
      if (dist < best) {
        best = dist;
        arg = j;
      }
    }
    if (arg == rest.size() || best > kPairTol * (1.0 + std::abs(rest[i])))
      throw Error(ErrorCode::UnpairedComplex, "non-real eigenvalue without a conjugate partner");
    used[arg] = true;
    const Complex rep = 0.5 * (rest[i] + std::conj(rest[arg]));
    out.pairs.push_back(rep.imag() > 0.0 ? rep : std::conj(rep));
  }
  return out;
}

/// Sign of a simple real eigenvalue a. The null space of P(a) holds the
/// regular eigenvector plus the singular-part directions; the latter are
/// B-isotropic against the whole null space, so N* B N has a single dominant
/// eigenvalue whose sign is the sign characteristic.
inline int sign_characteristic_simple(const HermitianPencil& p, double a, double tol = kSignTol,
                                      std::optional<int> known_rank = std::nullopt) {
  const int n = static_cast<int>(p.size());
  const int r = known_rank ? *known_rank : normal_rank(p);
  const int q = n - r + 1;
  Eigen::BDCSVD<ComplexMatrix> svd(evaluate(p, a), Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (n - q >= 1 && sv(n - q - 1) <= 1e-8 * std::max(sv(0), 1.0))
    throw Error(ErrorCode::AmbiguousSign, "null space of P(a) too large for a simple eigenvalue");
  const ComplexMatrix basis = svd.matrixV().rightCols(q);
  const ComplexMatrix c = basis.adjoint() * p.B() * basis;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(0.5 * (c + c.adjoint()), Eigen::EigenvaluesOnly);
  Eigen::VectorXd w = eig.eigenvalues();
  std::vector<double> mags(w.size());
  Eigen::Index top = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    mags[i] = std::abs(w(i));
    if (mags[i] > mags[top]) top = i;
  }
  std::sort(mags.begin(), mags.end(), std::greater<>());
  const double scale = std::max(p.B().norm(), std::numeric_limits<double>::min());
  if (mags[0] <= tol * scale)
    throw Error(ErrorCode::AmbiguousSign, "v*Bv below tolerance");
  if (mags.size() > 1 && mags[1] > 1e-3 * mags[0])
    throw Error(ErrorCode::AmbiguousSign, "eigenvalue is not simple");
  return w(top) > 0.0 ? 1 : -1;
}

struct MinimalIndexProfile {
  std::vector<int> indices;
  double min_gap = std::numeric_limits<double>::infinity();
};

/// Right minimal indices of A + lambda B from the nullities of the block
/// Toeplitz matrices T_j ((j+2) m x (j+1) n, A on the diagonal blocks and B
/// below): nullity(T_j) - nullity(T_{j-1}) counts indices <= j.
inline MinimalIndexProfile minimal_index_profile(const MatrixPencil& p, std::optional<int> known_rank = std::nullopt,
                                                 std::uint64_t seed = 0) {
  const Eigen::Index m = p.rows();
  const Eigen::Index n = p.cols();
  const int r = known_rank ? *known_rank : normal_rank(p, seed);
  const int target = static_cast<int>(n) - r;
  MinimalIndexProfile out;
  if (target <= 0) return out;
  int prev_nullity = 0;
  int prev_count = 0;
  const int max_j = static_cast<int>(std::max<Eigen::Index>(n, 1));
  for (int j = 0; j <= max_j; ++j) {
    ComplexMatrix t = ComplexMatrix::Zero((j + 2) * m, (j + 1) * n);
    for (int i = 0; i <= j; ++i) {
      t.block(i * m, i * n, m, n) = p.A();
      t.block((i + 1) * m, i * n, m, n) = p.B();
    }
    const RankDecision rd = numerical_rank(t);
    out.min_gap = std::min(out.min_gap, rd.gap_ratio);
    if (rd.gap_ratio < kGapMin)
      throw Error(ErrorCode::RankAmbiguity, "block Toeplitz rank gap below gapMin");
    const int nullity = static_cast<int>(t.cols()) - rd.rank;
    const int count = nullity - prev_nullity;
    if (count < prev_count || count > target)
      throw Error(ErrorCode::RankAmbiguity, "inconsistent nullity sequence");
    for (int c = prev_count; c < count; ++c) out.indices.push_back(j);
    prev_count = count;
    prev_nullity = nullity;
    if (count == target) return out;
  }
  throw Error(ErrorCode::RankAmbiguity, "minimal indices did not stabilise");
}

inline MatrixPencil transpose(const MatrixPencil& p) {
  return {p.A().transpose(), p.B().transpose()};
}

struct EigenInfo {
  Complex value;
  /// Value as computed, before snapping real ones onto the axis.
  Complex raw;
  bool real = false;
  std::optional<int> sign;
  /// |im| / (1 + |re|) before classification.
  double imag_residual = 0.0;
};

struct StructureReport {
  int n = 0;
  int normal_rank = 0;
  std::vector<EigenInfo> finite_eigs;
  bool has_infinite = false;
  int infinite_multiplicity = 0;
  std::vector<int> right_minimal_indices;
  std::vector<int> left_minimal_indices;
  double rank_gap = std::numeric_limits<double>::infinity();

  int real_count() const {
    return static_cast<int>(std::count_if(finite_eigs.begin(), finite_eigs.end(), [](const auto& e) { return e.real; }));
  }
  int plus_count() const {
    return static_cast<int>(std::count_if(finite_eigs.begin(), finite_eigs.end(),
                                          [](const auto& e) { return e.real && e.sign == 1; }));
  }
  int nonreal_count() const { return static_cast<int>(finite_eigs.size()) - real_count(); }
};

inline StructureReport full_report(const HermitianPencil& p, std::uint64_t seed = 0) {
  StructureReport rep;
  rep.n = static_cast<int>(p.size());
  rep.normal_rank = normal_rank(p, seed);
  const SingularEigenvalues se = eigs_singular_detail(p, seed, rep.normal_rank);
  rep.infinite_multiplicity = se.infinite;
  rep.has_infinite = se.infinite > 0;

  std::vector<Complex> reals;
  for (const Complex& z : se.values) {
    EigenInfo info;
    info.raw = z;
    info.imag_residual = std::abs(z.imag()) / (1.0 + std::abs(z.real()));
    info.real = std::abs(z.imag()) <= kRealTol * (1.0 + std::abs(z.real()));
    info.value = info.real ? Complex(z.real(), 0.0) : z;
    rep.finite_eigs.push_back(info);
  }
  for (auto& e : rep.finite_eigs) {
    if (!e.real) continue;
    const double a = e.value.real();
    const auto multiplicity = std::count_if(rep.finite_eigs.begin(), rep.finite_eigs.end(), [&](const auto& f) {
      return std::abs(f.value - e.value) <= kMatchTol * (1.0 + std::abs(a));
    });
    if (multiplicity != 1) continue;
    try {
      e.sign = sign_characteristic_simple(p, a, kSignTol, rep.normal_rank);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::AmbiguousSign) throw;
    }
  }
  const MinimalIndexProfile right = minimal_index_profile(p.pencil(), rep.normal_rank);
  const MinimalIndexProfile left = minimal_index_profile(transpose(p.pencil()), rep.normal_rank);
  rep.right_minimal_indices = right.indices;
  rep.left_minimal_indices = left.indices;
  rep.rank_gap = std::min(right.min_gap, left.min_gap);
  return rep;
}

inline bool match_descriptor(const StructureReport& rep, const BundleDescriptor& desc) {
  if (!is_valid(desc) || rep.n != desc.n || rep.normal_rank != desc.r) return false;
  if (rep.has_infinite) return false;
  std::vector<int> expected;
  if (!desc.regular()) {
    const int t = desc.n - desc.r;
    expected.assign(desc.s(), desc.alpha() + 1);
    expected.insert(expected.end(), t - desc.s(), desc.alpha());
  }
  auto sorted = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  expected = sorted(expected);
  if (sorted(rep.right_minimal_indices) != expected || sorted(rep.left_minimal_indices) != expected) return false;
  if (rep.real_count() != desc.real_count()) return false;
  const int pairs = desc.regular() ? desc.d : 0;
  if (rep.nonreal_count() != 2 * pairs) return false;
  for (const auto& e : rep.finite_eigs)
    if (e.real && !e.sign) return false;
  return rep.plus_count() == desc.c;
}

}  // namespace hermikron
