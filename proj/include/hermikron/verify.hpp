#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hermikron/infer.hpp"
#include "hermikron/perturb.hpp"

namespace hermikron {

inline constexpr double kDeterminantTol = 1e-12;
inline constexpr double kEigenvalueTol = 1e-9;

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

inline std::string fmt(const Inertia& in) {
  return "(" + std::to_string(in.pos) + "," + std::to_string(in.neg) + "," + std::to_string(in.zero) + ")";
}

// Largest relative distance over a one-to-one nearest assignment.
inline double eigenvalue_set_error(const std::vector<Complex>& computed, const std::vector<Complex>& predicted) {
  if (computed.size() != predicted.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(computed.size(), false);
  double worst = 0.0;
  for (const Complex& z : predicted) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = computed.size();
    for (std::size_t j = 0; j < computed.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(computed[j] - z) / (1.0 + std::abs(z));
      if (dist < best) {
        best = dist;
        arg = j;
      }
    }
    if (arg == computed.size()) return std::numeric_limits<double>::infinity();
    used[arg] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace detail

/// Checks every prediction carried by the perturbation against computation.
inline std::vector<CheckResult> verify_perturbation(const Perturbation& pt, std::uint64_t seed = 0) {
  std::vector<CheckResult> out;
  const PredictedStructure& pr = pt.prediction;
  const HermitianPencil& p = pt.pencil;

  if (pr.determinant && p.size() <= kDeterminantMaxSize) {
    const Polynomial got = determinant(p);
    const Polynomial& want = *pr.determinant;
    const double scale = std::max(want.max_abs_coeff(), std::numeric_limits<double>::min());
    double err = 0.0;
    const std::size_t len = std::max(got.coeffs.size(), want.coeffs.size());
    for (std::size_t i = 0; i < len; ++i) {
      const Complex g = i < got.coeffs.size() ? got.coeffs[i] : 0.0;
      const Complex w = i < want.coeffs.size() ? want.coeffs[i] : 0.0;
      err = std::max(err, std::abs(g - w) / scale);
    }
    out.push_back({"determinant", err <= kDeterminantTol, "max relative coefficient error " + detail::fmt(err)});
  }

  const int nr = normal_rank(p, seed);
  out.push_back({"normal_rank", nr == pr.normal_rank,
                 std::to_string(nr) + " vs predicted " + std::to_string(pr.normal_rank)});

  if (nr == p.size()) {
    const std::vector<Complex> eigs = eigs_regular(p, seed);
    if (pr.all_infinite) {
      const bool all_inf = std::all_of(eigs.begin(), eigs.end(), is_infinite);
      out.push_back({"eigenvalues", all_inf, all_inf ? "all infinite" : "finite eigenvalue found"});
    } else {
      const double err = detail::eigenvalue_set_error(eigs, pr.eigenvalues);
      out.push_back({"eigenvalues", err <= kEigenvalueTol, "max relative error " + detail::fmt(err)});
      // Signs of the real eigenvalues.
      std::vector<int> signs;
      bool resolved = true;
      for (const Complex& z : eigs) {
        if (std::abs(z.imag()) > kRealTol * (1.0 + std::abs(z.real()))) continue;
        try {
          signs.push_back(sign_characteristic_simple(p, z.real(), kSignTol, nr));
        } catch (const Error&) {
          resolved = false;
        }
      }
      std::sort(signs.begin(), signs.end());
      std::vector<int> want = pr.real_signs;
      std::sort(want.begin(), want.end());
      out.push_back({"signs", resolved && signs == want, std::to_string(signs.size()) + " real eigenvalue signs"});
    }
  } else {
    const StructureReport rep = full_report(p, seed);
    std::vector<int> idx = rep.right_minimal_indices;
    std::sort(idx.begin(), idx.end());
    std::vector<int> want = pr.minimal_indices;
    std::sort(want.begin(), want.end());
    const bool ok = idx == want && rep.left_minimal_indices.size() == want.size() && rep.finite_eigs.empty() &&
                    !rep.has_infinite;
    std::string got;
    for (int x : idx) got += (got.empty() ? "" : ",") + std::to_string(x);
    out.push_back({"structure", ok, "minimal indices {" + got + "}, " + std::to_string(rep.finite_eigs.size()) +
                                        " finite eigenvalues"});
    // Full rank away from eigenvalues: rank at random points equals the normal rank.
    Rng rng = make_rng(derive_seed(seed, 24));
    bool full = true;
    for (int i = 0; i < 24; ++i) {
      const Complex z = complex_normal(rng) * 2.0;
      full = full && numerical_rank(evaluate(p, z)).rank == nr;
    }
    out.push_back({"rank_at_random_points", full, "24 points"});
  }

  if (pr.leading_inertia) {
    const Inertia got = inertia_of(p.B());
    out.push_back({"leading_inertia", got == *pr.leading_inertia,
                   detail::fmt(got) + " vs predicted " + detail::fmt(*pr.leading_inertia)});
  }
  if (pr.constant_inertia) {
    const Inertia got = inertia_of(p.A());
    out.push_back({"constant_inertia", got == *pr.constant_inertia,
                   detail::fmt(got) + " vs predicted " + detail::fmt(*pr.constant_inertia)});
  }
  if (pr.leading_rank) {
    const int got = numerical_rank(p.B()).rank;
    out.push_back({"leading_rank", got == *pr.leading_rank,
                   std::to_string(got) + " vs predicted " + std::to_string(*pr.leading_rank)});
  }
  const double dist = std::sqrt((p.A() - pt.base.A()).squaredNorm() + (p.B() - pt.base.B()).squaredNorm());
  out.push_back({"distance", std::abs(dist - pr.distance) <= 1e-12 * std::max(1.0, pr.distance),
                 detail::fmt(dist) + " vs predicted " + detail::fmt(pr.distance)});
  return out;
}

inline bool all_pass(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

/// The default grid: eps in {1, 1e-2}, m in {1, 10, 100}, k <= 4, d <= 3.
inline std::vector<PerturbationSpec> default_grid() {
  std::vector<PerturbationSpec> out;
  const double epss[] = {1.0, 1e-2};
  const int ms[] = {1, 10, 100};
  for (double eps : epss)
    for (int m : ms) {
      for (int k = 2; k <= 4; ++k)
        for (int sign : {1, -1}) {
          for (double a : {0.0, 1.5, -2.0}) out.push_back({Family::FiniteJordan, a, {}, k, sign, 0, eps, m});
          out.push_back({Family::InfiniteJordan, 0.0, {}, k, sign, 0, eps, m});
        }
      for (int k = 1; k <= 4; ++k)
        for (Complex mu : {Complex(0.0, 1.0), Complex(0.5, 2.0)})
          out.push_back({Family::ConjPairSplit, 0.0, mu, k, 1, 0, eps, m});
    }
  for (int m : ms)
    for (int d = 0; d <= 3; ++d) out.push_back({Family::RegularizeM, 0.0, {}, 0, 1, d, 1.0, m});
  for (double eps : epss)
    for (int k = 1; k <= 4; ++k)
      for (int d = 0; d <= 3; ++d)
        for (Complex mu : {Complex(0.0, 1.0), Complex(0.5, 2.0)})
          out.push_back({Family::SingularAbsorb, 0.0, mu, k, 1, d, eps, 1});
  return out;
}

}  // namespace hermikron
