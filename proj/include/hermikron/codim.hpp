#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "hermikron/canonical.hpp"
#include "hermikron/error.hpp"
#include "hermikron/exact_rank.hpp"
#include "hermikron/generic_bundles.hpp"
#include "hermikron/pencil.hpp"

namespace hermikron {

enum class Backend { Exact, Floating };

inline std::string_view to_string(Backend b) { return b == Backend::Exact ? "exact" : "floating"; }

/// Largest pencil for which the full realified system is assembled.
inline constexpr int kFullSystemMaxSize = 12;
/// Largest single block (or block pair) system built in table-assembly mode.
inline constexpr int kBlockSystemMaxSize = 16;

/// Real linear map X -> (X*A + AX, X*B + BX) in the unknowns (Re X, Im X).
struct CongruenceSystem {
  MatrixPencil source;
  RealMatrix matrix;

  int unknowns() const { return static_cast<int>(matrix.cols()); }
};

namespace detail {

// Row layout: for coefficient t in {A, B}, entry (p, q): real part then
// imaginary part. Column u_{ij} = i*n + j, v_{ij} = n^2 + i*n + j.
inline void add_congruence_rows(const ComplexMatrix& h, Eigen::Index row0, RealMatrix& m) {
  const Eigen::Index n = h.rows();
  const Eigen::Index nn = n * n;
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = 0; q < n; ++q) {
      const Eigen::Index re = row0 + 2 * (p * n + q);
      const Eigen::Index im = re + 1;
      for (Eigen::Index k = 0; k < n; ++k) {
        // conj(X_kp) * h_kq
        const double a = h(k, q).real();
        const double b = h(k, q).imag();
        const Eigen::Index u = k * n + p;
        m(re, u) += a;
        m(re, nn + u) += b;
        m(im, u) += b;
        m(im, nn + u) -= a;
        // h_pk * X_kq
        const double c = h(p, k).real();
        const double e = h(p, k).imag();
        const Eigen::Index w = k * n + q;
        m(re, w) += c;
        m(re, nn + w) -= e;
        m(im, w) += e;
        m(im, nn + w) += c;
      }
    }
  }
}

// [[Re C, -Im C], [Im C, Re C]] for a complex-linear map C.
inline RealMatrix realify_complex(const ComplexMatrix& c) {
  RealMatrix m(2 * c.rows(), 2 * c.cols());
  m << c.real(), -c.imag(), c.imag(), c.real();
  return m;
}

}  // namespace detail

inline CongruenceSystem realify(const MatrixPencil& p) {
  if (!p.square()) throw Error(ErrorCode::InvalidArgument, "congruence system needs a square pencil");
  const Eigen::Index n = p.rows();
  CongruenceSystem sys{p, RealMatrix::Zero(4 * n * n, 2 * n * n)};
  detail::add_congruence_rows(p.A(), 0, sys.matrix);
  detail::add_congruence_rows(p.B(), 2 * n * n, sys.matrix);
  return sys;
}

inline CongruenceSystem realify(const HermitianPencil& p) { return realify(p.pencil()); }

struct NullityResult {
  int nullity = 0;
  double gap_ratio = std::numeric_limits<double>::quiet_NaN();
};

inline NullityResult real_nullity(const RealMatrix& m, Backend backend) {
  NullityResult out;
  const int cols = static_cast<int>(m.cols());
  if (backend == Backend::Exact) {
    out.nullity = cols - exact::rank(m);
    return out;
  }
  const RankDecision rd = numerical_rank(m);
  if (rd.gap_ratio < kGapMin)
    throw Error(ErrorCode::AmbiguousRank,
                "singular-value gap " + std::to_string(rd.gap_ratio) + " below gapMin; rerun exact");
  out.nullity = cols - rd.rank;
  out.gap_ratio = rd.gap_ratio;
  return out;
}

inline NullityResult solution_space_dim(const CongruenceSystem& sys, Backend backend) {
  return real_nullity(sys.matrix, backend);
}

/// Complex-linear map (Y, Z) -> (Z A_j + A_i Y, Z B_j + B_i Y), Y and Z of
/// size n_i x n_j, vectorised column-major with Y first.
inline ComplexMatrix pair_system_matrix(const MatrixPencil& pi, const MatrixPencil& pj) {
  const Eigen::Index ni = pi.rows();
  const Eigen::Index nj = pj.rows();
  const Eigen::Index m = ni * nj;
  ComplexMatrix c = ComplexMatrix::Zero(2 * m, 2 * m);
  auto idx = [ni](Eigen::Index r, Eigen::Index col) { return col * ni + r; };
  const ComplexMatrix* lhs[2] = {&pi.A(), &pi.B()};
  const ComplexMatrix* rhs[2] = {&pj.A(), &pj.B()};
  for (int t = 0; t < 2; ++t) {
    const ComplexMatrix& hi = *lhs[t];
    const ComplexMatrix& hj = *rhs[t];
    const Eigen::Index row0 = t * m;
    for (Eigen::Index r = 0; r < ni; ++r)
      for (Eigen::Index col = 0; col < nj; ++col) {
        const Eigen::Index row = row0 + idx(r, col);
        for (Eigen::Index k = 0; k < ni; ++k) c(row, idx(k, col)) += hi(r, k);
        for (Eigen::Index k = 0; k < nj; ++k) c(row, m + idx(r, k)) += hj(k, col);
      }
  }
  return c;
}

inline NullityResult pair_system_dim(const MatrixPencil& pi, const MatrixPencil& pj, Backend backend) {
  return real_nullity(detail::realify_complex(pair_system_matrix(pi, pj)), backend);
}

inline NullityResult pair_system_dim(const CanonicalBlock& b1, const CanonicalBlock& b2, Backend backend) {
  if (block_size(b1) * block_size(b2) > kBlockSystemMaxSize * kBlockSystemMaxSize)
    throw Error(ErrorCode::TooLarge, "pair system beyond the block guard");
  return pair_system_dim(block_pencil(b1), block_pencil(b2), backend);
}

inline NullityResult block_system_dim(const CanonicalBlock& b, Backend backend) {
  if (block_size(b) > kBlockSystemMaxSize)
    throw Error(ErrorCode::TooLarge, "block system beyond the block guard");
  return solution_space_dim(realify(block_pencil(b)), backend);
}

enum class CodimMode { Full, Assemble };

struct CodimResult {
  std::int64_t orbit_codim = 0;
  std::int64_t bundle_codim = 0;
  Backend backend = Backend::Exact;
  /// Smallest gap seen by the floating backend; NaN for exact.
  double gap_ratio = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {
inline void merge_gap(double& acc, double g) {
  if (std::isnan(g)) return;
  acc = std::isnan(acc) ? g : std::min(acc, g);
}
}  // namespace detail

inline CodimResult orbit_codim_bruteforce(const HKCF& h, Backend backend, CodimMode mode = CodimMode::Full) {
  h.validate();
  if (h.blocks.empty()) throw Error(ErrorCode::InvalidArgument, "empty canonical form");
  CodimResult out;
  out.backend = backend;
  if (mode == CodimMode::Full) {
    if (h.size() > kFullSystemMaxSize)
      throw Error(ErrorCode::TooLarge, "full-system brute force limited to n <= 12; use assembly");
    const NullityResult r = solution_space_dim(realify(build_hkcf(h)), backend);
    out.orbit_codim = r.nullity;
    out.gap_ratio = r.gap_ratio;
  } else {
    for (std::size_t i = 0; i < h.blocks.size(); ++i) {
      const NullityResult r = block_system_dim(h.blocks[i], backend);
      out.orbit_codim += r.nullity;
      detail::merge_gap(out.gap_ratio, r.gap_ratio);
      for (std::size_t j = i + 1; j < h.blocks.size(); ++j) {
        const NullityResult pr = pair_system_dim(h.blocks[i], h.blocks[j], backend);
        out.orbit_codim += pr.nullity;
        detail::merge_gap(out.gap_ratio, pr.gap_ratio);
      }
    }
  }
  out.bundle_codim = out.orbit_codim - distinct_finite_eigenvalue_count(h);
  return out;
}

/// One reproduced table entry.
struct TableCheck {
  std::string label;
  std::int64_t expected = 0;
  std::int64_t computed = 0;
  bool pass() const { return expected == computed; }
};

/// Single-block and pairwise dimensions for blocks up to M_kmax (pairs up to
/// M_{kmax-1}), computed by brute force.
inline std::vector<TableCheck> verify_tables(int kmax, Backend backend = Backend::Exact) {
  if (kmax < 1) throw Error(ErrorCode::InvalidArgument, "kmax must be at least 1");
  std::vector<TableCheck> out;
  auto single = [&](const std::string& label, const CanonicalBlock& b, std::int64_t expected) {
    out.push_back({label, expected, block_system_dim(b, backend).nullity});
  };
  auto pair = [&](const std::string& label, const CanonicalBlock& b1, const CanonicalBlock& b2,
                  std::int64_t expected) {
    out.push_back({label, expected, pair_system_dim(b1, b2, backend).nullity});
  };
  for (int sigma : {1, -1})
    for (double a : {0.0, 1.5})
      single("syst(" + std::string(sigma > 0 ? "+" : "-") + "J_1(" + std::to_string(a).substr(0, 3) + "))",
             RealJordan{1, a, sigma}, 1);
  single("syst(J_1^H(i,-i))", ConjPair{1, {0.0, 1.0}}, 2);
  single("syst(J_1^H(0.5+2i))", ConjPair{1, {0.5, 2.0}}, 2);
  for (int k = 0; k <= kmax; ++k) single("syst(M_" + std::to_string(k) + ")", Singular{k}, 2 * k + 2);

  pair("syst(J_1(1),J_1(2))", RealJordan{1, 1.0, 1}, RealJordan{1, 2.0, 1}, 0);
  pair("syst(J_1(1),-J_1(2))", RealJordan{1, 1.0, 1}, RealJordan{1, 2.0, -1}, 0);
  pair("syst(J_1(1),J_1^H(i))", RealJordan{1, 1.0, 1}, ConjPair{1, {0.0, 1.0}}, 0);
  pair("syst(J_1^H(i),J_1^H(1+2i))", ConjPair{1, {0.0, 1.0}}, ConjPair{1, {1.0, 2.0}}, 0);
  for (int k = 0; k < kmax; ++k)
    for (int sigma : {1, -1})
      pair("syst(" + std::string(sigma > 0 ? "+" : "-") + "J_1(3),M_" + std::to_string(k) + ")",
           RealJordan{1, 3.0, sigma}, Singular{k}, 2);
  for (int i = 0; i < kmax; ++i)
    for (int j = i; j < kmax; ++j) {
      const int eps = i == j ? 2 : 1;
      pair("syst(M_" + std::to_string(i) + ",M_" + std::to_string(j) + ")", Singular{i}, Singular{j},
           2 * (2 * std::max(i, j) + eps));
    }
  return out;
}

}  // namespace hermikron
