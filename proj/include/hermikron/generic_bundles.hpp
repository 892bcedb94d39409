#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "hermikron/canonical.hpp"
#include "hermikron/error.hpp"
#include "hermikron/pencil.hpp"

namespace hermikron {

/// Generic structure R_{c,d} (r == n) or K_{c,d} (r < n).
struct BundleDescriptor {
  int n = 1;
  int r = 1;
  int c = 0;
  int d = 0;

  bool regular() const { return r == n; }
  /// Euclidean division d = (n - r) alpha + s; zero for the regular family.
  int alpha() const { return regular() ? 0 : d / (n - r); }
  int s() const { return regular() ? 0 : d % (n - r); }
  /// Number of simple real eigenvalues.
  int real_count() const { return regular() ? n - 2 * d : r - 2 * d; }

  friend bool operator==(const BundleDescriptor&, const BundleDescriptor&) = default;
};

inline bool is_valid(const BundleDescriptor& b) {
  if (b.n < 1 || b.r < 1 || b.r > b.n) return false;
  if (b.d < 0 || b.c < 0) return false;
  return 2 * b.d <= b.r && b.c <= b.r - 2 * b.d;
}

inline void validate(const BundleDescriptor& b) {
  if (!is_valid(b)) throw Error(ErrorCode::InvalidDescriptor, "descriptor out of range");
}

inline BundleDescriptor make_descriptor(int n, int r, int c, int d) {
  BundleDescriptor b{n, r, c, d};
  validate(b);
  return b;
}

inline std::vector<BundleDescriptor> enumerate_family(int n, int r) {
  std::vector<BundleDescriptor> out;
  for (int d = 0; 2 * d <= r; ++d)
    for (int c = 0; c <= r - 2 * d; ++c) out.push_back({n, r, c, d});
  return out;
}

inline std::vector<BundleDescriptor> enumerate_regular(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "enumerate_regular needs n >= 1");
  return enumerate_family(n, n);
}

inline std::vector<BundleDescriptor> enumerate_bounded(int n, int r) {
  if (r < 1 || r > n - 1) throw Error(ErrorCode::InvalidArgument, "enumerate_bounded needs 1 <= r < n");
  return enumerate_family(n, r);
}

/// (floor(r/2) + 1) * floor((r+3)/2), the size of either family with rank r.
constexpr std::int64_t generic_count(std::int64_t r) { return (r / 2 + 1) * ((r + 3) / 2); }

struct Division {
  int alpha = 0;
  int s = 0;
  friend bool operator==(const Division&, const Division&) = default;
};

inline Division balance_division(int total_d, int t) {
  if (t < 1 || total_d < 0) throw Error(ErrorCode::InvalidArgument, "balance_division needs t >= 1, d >= 0");
  return {total_d / t, total_d % t};
}

/// Regular: conjugate pairs, then +J_1, then -J_1. Bounded: s blocks
/// M_{alpha+1}, n-r-s blocks M_alpha, then +J_1 and -J_1 blocks.
inline HKCF realize(const BundleDescriptor& desc, std::span<const double> reals,
                    std::span<const Complex> pairs = {}) {
  validate(desc);
  const int nreal = desc.real_count();
  const int npairs = desc.regular() ? desc.d : 0;
  if (static_cast<int>(reals.size()) != nreal || static_cast<int>(pairs.size()) != npairs)
    throw Error(ErrorCode::InvalidArgument, "eigenvalue lists do not match the descriptor");
  for (std::size_t i = 0; i < reals.size(); ++i)
    for (std::size_t j = i + 1; j < reals.size(); ++j)
      if (reals[i] == reals[j]) throw Error(ErrorCode::EigenvalueCollision, "repeated real eigenvalue");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!(pairs[i].imag() > 0.0))
      throw Error(ErrorCode::InvalidArgument, "conjugate-pair value needs im > 0");
    for (std::size_t j = i + 1; j < pairs.size(); ++j)
      if (pairs[i] == pairs[j]) throw Error(ErrorCode::EigenvalueCollision, "repeated conjugate pair");
  }

  HKCF h;
  if (desc.regular()) {
    for (const Complex& mu : pairs) h.blocks.push_back(ConjPair{1, mu});
  } else {
    const int t = desc.n - desc.r;
    for (int i = 0; i < desc.s(); ++i) h.blocks.push_back(Singular{desc.alpha() + 1});
    for (int i = 0; i < t - desc.s(); ++i) h.blocks.push_back(Singular{desc.alpha()});
  }
  for (int i = 0; i < nreal; ++i)
    h.blocks.push_back(RealJordan{1, reals[i], i < desc.c ? 1 : -1});
  return h;
}

/// Realization with eigenvalues drawn under a policy.
inline HKCF realize(const BundleDescriptor& desc, EigenvaluePolicy policy, Rng& rng) {
  validate(desc);
  EigenvalueSampler sampler(policy, rng);
  std::vector<double> reals;
  std::vector<Complex> pairs;
  for (int i = 0; i < desc.real_count(); ++i) reals.push_back(sampler.next_real());
  if (desc.regular())
    for (int i = 0; i < desc.d; ++i) pairs.push_back(sampler.next_pair());
  return realize(desc, reals, pairs);
}

/// Canonical representative with eigenvalues 1, 2, ... and pairs j + i.
inline HKCF realize_canonical(const BundleDescriptor& desc) {
  std::vector<double> reals;
  std::vector<Complex> pairs;
  for (int i = 0; i < desc.real_count(); ++i) reals.push_back(i + 1.0);
  if (desc.regular())
    for (int i = 0; i < desc.d; ++i) pairs.push_back({i + 1.0, 1.0});
  return realize(desc, reals, pairs);
}

struct Codimensions {
  std::int64_t orbit = 0;
  std::int64_t bundle = 0;
  friend bool operator==(const Codimensions&, const Codimensions&) = default;
};

inline Codimensions codim_closed_form(const BundleDescriptor& desc) {
  validate(desc);
  if (desc.regular()) return {desc.n, 0};
  const std::int64_t n = desc.n, r = desc.r, d = desc.d;
  const std::int64_t bundle = 2 * (n - d) * (n - r);
  return {r - 2 * d + bundle, bundle};
}

/// Inertia of the lambda-coefficient of the realized form.
inline Inertia leading_inertia(const BundleDescriptor& desc) {
  validate(desc);
  if (desc.regular()) return {desc.c + desc.d, desc.n - desc.c - desc.d, 0};
  return {desc.c + desc.d, desc.r - desc.d - desc.c, desc.n - desc.r};
}

/// Weyr sequence of a multiset of minimal indices: w0 is the number of
/// indices, counts[i-1] = #{indices >= i} for i = 1..max.
struct WeyrSequence {
  int w0 = 0;
  std::vector<int> counts;

  int total() const { return std::accumulate(counts.begin(), counts.end(), 0); }
  friend bool operator==(const WeyrSequence&, const WeyrSequence&) = default;
};

inline WeyrSequence weyr_of(std::span<const int> indices) {
  WeyrSequence w;
  w.w0 = static_cast<int>(indices.size());
  int top = 0;
  for (int x : indices) {
    if (x < 0) throw Error(ErrorCode::InvalidArgument, "negative minimal index");
    top = std::max(top, x);
  }
  w.counts.assign(top, 0);
  for (int x : indices)
    for (int i = 0; i < x; ++i) ++w.counts[i];
  return w;
}

inline WeyrSequence weyr_of(std::initializer_list<int> indices) {
  return weyr_of(std::span<const int>(indices.begin(), indices.size()));
}

/// Partial-sum majorization of w_from over w_to with equal totals.
inline bool weyr_dominates(const WeyrSequence& from, const WeyrSequence& to) {
  if (from.total() != to.total()) return false;
  const std::size_t len = std::max(from.counts.size(), to.counts.size());
  long a = 0;
  long b = 0;
  for (std::size_t i = 0; i < len; ++i) {
    a += i < from.counts.size() ? from.counts[i] : 0;
    b += i < to.counts.size() ? to.counts[i] : 0;
    if (a < b) return false;
  }
  return true;
}

/// All ways to write total as an ordered-descending list of exactly t
/// non-negative parts.
inline std::vector<std::vector<int>> partitions_into(int total, int t) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int left, int slots, int cap) -> void {
    if (slots == 0) {
      if (left == 0) out.push_back(cur);
      return;
    }
    for (int x = std::min(left, cap); x >= 0; --x) {
      if (x * slots < left) break;
      cur.push_back(x);
      self(self, left - x, slots - 1, x);
      cur.pop_back();
    }
  };
  rec(rec, total, t, total);
  return out;
}

/// Balanced split of total into t parts (alpha+1 repeated s times, then alpha).
inline std::vector<int> balanced_partition(int total, int t) {
  const Division dv = balance_division(total, t);
  std::vector<int> out(t, dv.alpha);
  for (int i = 0; i < dv.s; ++i) ++out[i];
  return out;
}

}  // namespace hermikron
