#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include <Eigen/Dense>

#include "hermikron/error.hpp"

namespace hermikron::exact {

/// Sparse integer row: (column, value) sorted by column, no zeros.
using SparseRow = std::vector<std::pair<int, mpz_class>>;

/// Scales a row of exactly-representable rationals to a primitive integer row.
inline SparseRow integer_row(const std::vector<std::pair<int, mpq_class>>& entries) {
  mpz_class den = 1;
  for (const auto& [col, q] : entries) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
  SparseRow row;
  row.reserve(entries.size());
  for (const auto& [col, q] : entries) {
    mpz_class v = q.get_num() * (den / q.get_den());
    row.emplace_back(col, std::move(v));
  }
  return row;
}

inline void make_primitive(SparseRow& row) {
  if (row.empty()) return;
  mpz_class g = 0;
  for (const auto& e : row) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
    if (g == 1) return;
  }
  if (g > 1)
    for (auto& e : row) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
}

/// p * row - q * pivot, both sharing the same leading column.
inline SparseRow combine(const SparseRow& row, const mpz_class& p, const SparseRow& pivot,
                         const mpz_class& q) {
  SparseRow out;
  out.reserve(row.size() + pivot.size());
  std::size_t i = 0;
  std::size_t j = 0;
  mpz_class v;
  while (i < row.size() || j < pivot.size()) {
    if (j == pivot.size() || (i < row.size() && row[i].first < pivot[j].first)) {
      out.emplace_back(row[i].first, p * row[i].second);
      ++i;
    } else if (i == row.size() || pivot[j].first < row[i].first) {
      out.emplace_back(pivot[j].first, -q * pivot[j].second);
      ++j;
    } else {
      v = p * row[i].second - q * pivot[j].second;
      if (v != 0) out.emplace_back(row[i].first, v);
      ++i;
      ++j;
    }
  }
  make_primitive(out);
  return out;
}

/// Exact rank by fraction-free sparse elimination; rows are bucketed by
/// leading column and reduced against the shortest row in each bucket.
inline int rank(std::vector<SparseRow> rows) {
  std::map<int, std::vector<SparseRow>> buckets;
  for (auto& r : rows) {
    if (r.empty()) continue;
    make_primitive(r);
    const int lead = r.front().first;
    buckets[lead].push_back(std::move(r));
  }
  int rk = 0;
  while (!buckets.empty()) {
    auto node = buckets.extract(buckets.begin());
    auto& bucket = node.mapped();
    auto best = std::min_element(bucket.begin(), bucket.end(),
                                 [](const SparseRow& a, const SparseRow& b) { return a.size() < b.size(); });
    std::swap(*best, bucket.front());
    const SparseRow& pivot = bucket.front();
    ++rk;
    for (std::size_t i = 1; i < bucket.size(); ++i) {
      const SparseRow& r = bucket[i];
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), r.front().second.get_mpz_t(), pivot.front().second.get_mpz_t());
      const mpz_class p = pivot.front().second / g;
      const mpz_class q = r.front().second / g;
      SparseRow reduced = combine(r, p, pivot, q);
      if (reduced.empty()) continue;
      const int lead = reduced.front().first;
      buckets[lead].push_back(std::move(reduced));
    }
  }
  return rk;
}

/// Rank of a dense matrix whose entries are finite doubles, treated as the
/// exact binary rationals they represent.
inline int rank(const Eigen::MatrixXd& m) {
  std::vector<SparseRow> rows;
  rows.reserve(m.rows());
  std::vector<std::pair<int, mpq_class>> entries;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    entries.clear();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double x = m(i, j);
      if (x == 0.0) continue;
      if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "non-finite entry in exact rank");
      entries.emplace_back(static_cast<int>(j), mpq_class(x));
    }
    rows.push_back(integer_row(entries));
  }
  return rank(std::move(rows));
}

}  // namespace hermikron::exact
