#include <gtest/gtest.h>

#include <algorithm>

#include "hermikron/hermikron.hpp"
#include "oracles.hpp"

using namespace hermikron;

namespace {

template <class F>
void expect_code(ErrorCode code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

void expect_all_checks_pass(const Perturbation& pt) {
  for (const auto& c : verify_perturbation(pt, 1)) EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
}

bool contains(const std::vector<Complex>& v, Complex z, double tol = 1e-9) {
  return std::any_of(v.begin(), v.end(), [&](Complex w) { return std::abs(w - z) <= tol * (1 + std::abs(z)); });
}

std::vector<int> computed_real_signs(const HermitianPencil& p) {
  const StructureReport rep = full_report(p, 3);
  std::vector<int> out;
  for (const auto& e : rep.finite_eigs)
    if (e.real && e.sign) out.push_back(*e.sign);
  std::sort(out.begin(), out.end());
  return out;
}

// det(A + lambda B) from the Laplace oracle compared coefficient-wise.
void expect_determinant(const Perturbation& pt) {
  ASSERT_TRUE(pt.prediction.determinant.has_value());
  const oracle::Poly ref = oracle::laplace_det(pt.pencil.A(), pt.pencil.B());
  const auto& pred = pt.prediction.determinant->coeffs;
  double scale = 1.0;
  for (const auto& c : ref) scale = std::max(scale, std::abs(c));
  for (std::size_t i = 0; i < std::max(ref.size(), pred.size()); ++i) {
    const Complex a = i < ref.size() ? ref[i] : 0.0;
    const Complex b = i < pred.size() ? pred[i] : 0.0;
    EXPECT_LE(std::abs(a - b), 1e-12 * scale) << "coefficient " << i;
  }
}

}  // namespace

TEST(FiniteJordan, EvenSplitAtZero) {
  const Perturbation pt = s_perturbation_finite(0.0, 2, 1, 1.0, 1);
  expect_determinant(pt);
  const auto eigs = eigs_regular(pt.pencil);
  EXPECT_TRUE(contains(eigs, 1.0));
  EXPECT_TRUE(contains(eigs, -1.0));
  EXPECT_EQ(computed_real_signs(pt.pencil), (std::vector<int>{-1, 1}));
  expect_all_checks_pass(pt);
}

TEST(FiniteJordan, OddKeepsOneRealEigenvalue) {
  const Perturbation pt = s_perturbation_finite(0.0, 3, -1, 1.0, 1);
  expect_determinant(pt);
  const StructureReport rep = full_report(pt.pencil, 1);
  ASSERT_EQ(rep.real_count(), 1);
  for (const auto& e : rep.finite_eigs)
    if (e.real) {
      EXPECT_NEAR(e.value.real(), -1.0, 1e-9);
      EXPECT_EQ(e.sign, -1);
    }
  EXPECT_EQ(rep.nonreal_count(), 2);
  expect_all_checks_pass(pt);
}

TEST(FiniteJordan, EvenLeadingInertiaIsBalanced) {
  for (int k : {2, 4, 6}) {
    const Perturbation pt = s_perturbation_finite(1.5, k, -1, 0.01, 10);
    EXPECT_EQ(inertia_of(pt.pencil.B()), (Inertia{k / 2, k / 2, 0}));
    expect_determinant(pt);
  }
}

TEST(InfiniteJordan, SquareRootsOfM) {
  const Perturbation pt = s_perturbation_infinite(2, 1, 1.0, 4);
  const auto eigs = eigs_regular(pt.pencil);
  EXPECT_TRUE(contains(eigs, 2.0));
  EXPECT_TRUE(contains(eigs, -2.0));
  EXPECT_EQ(computed_real_signs(pt.pencil), (std::vector<int>{1, 1}));
  expect_determinant(pt);
  expect_all_checks_pass(pt);
}

TEST(InfiniteJordan, OddNegative) {
  const Perturbation pt = s_perturbation_infinite(3, -1, 1.0, 1);
  const StructureReport rep = full_report(pt.pencil, 2);
  ASSERT_EQ(rep.real_count(), 1);
  for (const auto& e : rep.finite_eigs)
    if (e.real) {
      EXPECT_NEAR(e.value.real(), -1.0, 1e-9);
      EXPECT_EQ(e.sign, -1);
    }
  expect_all_checks_pass(pt);
}

TEST(InfiniteJordan, DeterminantShapeAtTwo) {
  for (int m : {1, 10, 100}) {
    const Perturbation pt = s_perturbation_infinite(2, 1, 1.0, m);
    const oracle::Poly ref = oracle::laplace_det(pt.pencil.A(), pt.pencil.B());
    EXPECT_NEAR(std::abs(ref[0] + 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(ref[1]), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(ref[2] - 1.0 / m), 0.0, 1e-14);
  }
}

TEST(ConjPairSplit, SingleBlock) {
  const Perturbation pt = conj_pair_split({0, 1}, 1, 1.0, 1);
  const auto eigs = eigs_regular(pt.pencil);
  EXPECT_TRUE(contains(eigs, {-1, 1}));
  EXPECT_TRUE(contains(eigs, {-1, -1}));
  expect_determinant(pt);
}

TEST(ConjPairSplit, TwoByTwoShift) {
  const Perturbation pt = conj_pair_split({0, 2}, 2, 1.0, 10);
  const auto eigs = eigs_regular(pt.pencil);
  for (Complex z : {Complex(-0.1, 2), Complex(-0.2, 2)}) {
    EXPECT_TRUE(contains(eigs, z));
    EXPECT_TRUE(contains(eigs, std::conj(z)));
  }
  expect_all_checks_pass(pt);
}

TEST(ConjPairSplit, RampVanishesAsMGrows) {
  const int k = 3;
  double prev = 1e300;
  for (int m : {1, 10, 100, 1000}) {
    const Perturbation pt = conj_pair_split({0.5, 1}, k, 1.0, m);
    const ComplexMatrix diff = pt.pencil.A() - pt.base.A();
    const double top = diff.cwiseAbs().maxCoeff();
    EXPECT_NEAR(top, static_cast<double>(k) / m, 1e-15);
    EXPECT_LT(top, prev);
    prev = top;
    EXPECT_EQ(pt.pencil.B(), pt.base.B());
  }
}

TEST(RegularizeM, DegenerateScalar) {
  const Perturbation pt = regularize_M(0, 5);
  ASSERT_EQ(pt.pencil.size(), 1);
  EXPECT_DOUBLE_EQ(pt.pencil.A()(0, 0).real(), 0.2);
  EXPECT_EQ(pt.pencil.B()(0, 0), Complex(0));
  EXPECT_EQ(inertia_of(pt.pencil.A()), (Inertia{1, 0, 0}));
}

TEST(RegularizeM, DeterminantAndInertia) {
  EXPECT_NEAR(std::abs(oracle::laplace_det(regularize_M(1, 10).pencil.A(), regularize_M(1, 10).pencil.B())[0]), 0.1,
              1e-15);
  EXPECT_EQ(inertia_of(regularize_M(2, 3).pencil.A()), (Inertia{3, 2, 0}));
  for (int d = 0; d <= 3; ++d) {
    const Perturbation pt = regularize_M(d, 7);
    EXPECT_EQ(numerical_rank(pt.pencil.B()).rank, 2 * d);
    expect_determinant(pt);
    EXPECT_TRUE(eigs_regular(pt.pencil).size() == static_cast<std::size_t>(2 * d + 1));
    for (Complex z : eigs_regular(pt.pencil)) EXPECT_TRUE(is_infinite(z));
  }
}

TEST(SingularAbsorb, MergesIntoLargerSingularBlock) {
  for (int d : {0, 1}) {
    const Perturbation pt = singular_absorb({0, 1}, 1, d, 1e-3);
    const StructureReport rep = full_report(pt.pencil, 5);
    EXPECT_EQ(rep.right_minimal_indices, (std::vector<int>{d + 1}));
    EXPECT_EQ(rep.left_minimal_indices, (std::vector<int>{d + 1}));
    EXPECT_TRUE(rep.finite_eigs.empty());
    EXPECT_FALSE(rep.has_infinite);
    EXPECT_EQ(rep.normal_rank, 2 * (d + 1));
    expect_all_checks_pass(pt);
  }
}

TEST(SingularAbsorb, ZeroCouplingIsPermutedDirectSum) {
  for (int k = 1; k <= 3; ++k)
    for (int d = 0; d <= 3; ++d) {
      const Complex mu(0.5, 2.0);
      const Perturbation pt = singular_absorb(mu, k, d, 1e-3);
      const auto order = absorb_block_order(k, d);
      const auto target = build_hkcf({{ConjPair{k, mu}, Singular{d}}});
      const Eigen::Index n = target.size();
      ComplexMatrix perm = ComplexMatrix::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i) perm(order[i], i) = 1.0;
      const ComplexMatrix a = perm.transpose() * pt.base.A() * perm;
      const ComplexMatrix b = perm.transpose() * pt.base.B() * perm;
      EXPECT_EQ(a, target.A()) << k << "," << d;
      EXPECT_EQ(b, target.B()) << k << "," << d;
      EXPECT_NEAR((pt.pencil.A() - pt.base.A()).norm(), 1e-3 * std::sqrt(2.0), 1e-15);
    }
}

TEST(SingularAbsorb, NoEigenvaluesAtRandomPoints) {
  const Perturbation pt = singular_absorb({0, 1}, 2, 1, 1e-2);
  Rng rng = make_rng(6);
  for (int i = 0; i < 24; ++i) EXPECT_EQ(numerical_rank(evaluate(pt.pencil, complex_normal(rng) * 3.0)).rank, 6);
}

TEST(Params, Rejected) {
  expect_code(ErrorCode::InvalidParams, [] { s_perturbation_finite(0, 1, 1, 1, 1); });
  expect_code(ErrorCode::InvalidParams, [] { s_perturbation_finite(0, 2, 0, 1, 1); });
  expect_code(ErrorCode::InvalidParams, [] { s_perturbation_infinite(2, 1, -1, 1); });
  expect_code(ErrorCode::InvalidParams, [] { conj_pair_split({1, 0}, 1, 1, 1); });
  expect_code(ErrorCode::InvalidParams, [] { conj_pair_split({0, 1}, 1, 1, 0); });
  expect_code(ErrorCode::InvalidParams, [] { singular_absorb({2, 0}, 1, 0, 1e-3); });
  expect_code(ErrorCode::InvalidParams, [] { parse_family("bogus"); });
}

TEST(Convergence, DistanceShrinksWithM) {
  for (Family f : {Family::FiniteJordan, Family::InfiniteJordan, Family::ConjPairSplit}) {
    PerturbationSpec s;
    s.family = f;
    s.k = 3;
    double prev = 1e300;
    for (int m : {1, 10, 100}) {
      s.m = m;
      const Perturbation pt = make_perturbation(s);
      const double dist = std::sqrt((pt.pencil.A() - pt.base.A()).squaredNorm() + (pt.pencil.B() - pt.base.B()).squaredNorm());
      EXPECT_NEAR(dist, pt.prediction.distance, 1e-14);
      EXPECT_LT(dist, prev);
      prev = dist;
    }
  }
}

TEST(Grid, EveryCellVerifies) {
  const auto grid = default_grid();
  EXPECT_GT(grid.size(), 200u);
  int failures = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Perturbation pt = make_perturbation(grid[i]);
    for (const auto& c : verify_perturbation(pt, i))
      if (!c.pass) {
        ++failures;
        ADD_FAILURE() << to_string(grid[i].family) << " cell " << i << " " << c.name << ": " << c.detail;
      }
  }
  EXPECT_EQ(failures, 0);
}
