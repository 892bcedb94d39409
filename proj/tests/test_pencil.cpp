#include <gtest/gtest.h>

#include "hermikron/hermikron.hpp"
#include "oracles.hpp"

using namespace hermikron;

namespace {

ComplexMatrix m(std::initializer_list<std::initializer_list<double>> rows) {
  ComplexMatrix out(rows.size(), rows.begin()->size());
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double x : r) out(i, j++) = x;
    ++i;
  }
  return out;
}

template <class F>
void expect_code(ErrorCode code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(Evaluate, SingularBlockAtZeroReturnsConstantCoefficient) {
  const auto p = build_block(Singular{1});
  EXPECT_EQ(evaluate(p, 0.0), m({{0, 0, 0}, {0, 0, 1}, {0, 1, 0}}));
}

TEST(Evaluate, EigenvalueAnnihilatesScalarBlock) {
  const auto p = build_block(RealJordan{1, 2.0, 1});
  EXPECT_EQ(evaluate(p, 2.0), ComplexMatrix::Zero(1, 1));
}

TEST(Evaluate, JordanTwoAtOne) {
  const auto p = build_block(RealJordan{2, 0.0, 1});
  EXPECT_EQ(evaluate(p, 1.0), m({{1, 1}, {1, 0}}));
}

TEST(Congruence, IdentityIsNoOp) {
  const auto h = build_hkcf({{ConjPair{1, {0, 1}}, RealJordan{2, 3.0, -1}}});
  const auto g = congruence(h, ComplexMatrix::Identity(4, 4));
  EXPECT_EQ(g.A(), h.A());
  EXPECT_EQ(g.B(), h.B());
}

TEST(Congruence, ScalarByTwo) {
  const auto g = congruence(build_block(RealJordan{1, 3.0, 1}), m({{2}}));
  EXPECT_DOUBLE_EQ(g.A()(0, 0).real(), -12.0);
  EXPECT_DOUBLE_EQ(g.B()(0, 0).real(), 4.0);
}

TEST(Congruence, RejectsSingularTransform) {
  const auto h = build_block(Singular{1});
  expect_code(ErrorCode::SingularTransform, [&] { congruence(h, m({{1, 0, 0}, {0, 1, 0}, {0, 0, 0}})); });
}

TEST(Congruence, ResultIsExactlyHermitian) {
  Rng rng = make_rng(5);
  const auto h = build_hkcf({{Singular{2}, ConjPair{2, {0.5, 2.0}}}});
  const auto g = random_congruence(h, rng);
  EXPECT_EQ(g.A(), g.A().adjoint());
  EXPECT_EQ(g.B(), g.B().adjoint());
}

TEST(Inertia, DiagonalExample) {
  const Inertia in = inertia_of(m({{1, 0, 0}, {0, -1, 0}, {0, 0, 0}}));
  EXPECT_EQ(in, (Inertia{1, 1, 1}));
}

TEST(Inertia, LeadingCoefficientOfM1AgainstCharpolyOracle) {
  const ComplexMatrix b = build_block(Singular{1}).B();
  const auto o = oracle::charpoly_inertia(b);
  EXPECT_EQ(inertia_of(b), (Inertia{o.pos, o.neg, o.zero}));
  EXPECT_EQ(inertia_of(b), (Inertia{1, 1, 1}));
}

TEST(Inertia, RegularizedSingularBlockConstantCoefficient) {
  const Perturbation pt = regularize_M(2, 10);
  EXPECT_EQ(inertia_of(pt.pencil.A()), (Inertia{3, 2, 0}));
}

TEST(Inertia, RejectsNonHermitian) {
  expect_code(ErrorCode::NotHermitian, [] { inertia_of(m({{0, 1}, {0, 0}})); });
}

TEST(Inertia, AllZeroMatrix) { EXPECT_EQ(inertia_of(ComplexMatrix::Zero(3, 3)), (Inertia{0, 0, 3})); }

TEST(Inertia, SylvesterInvarianceOverRandomSamples) {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    Rng rng = make_rng(seed);
    const int n = 2 + static_cast<int>(seed % 5);
    const int pos = static_cast<int>(seed % (n + 1));
    const int neg = static_cast<int>((seed / 7) % (n - pos + 1));
    ComplexMatrix d = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < pos; ++i) d(i, i) = 0.5 + std::abs(standard_normal(rng));
    for (int i = pos; i < pos + neg; ++i) d(i, i) = -0.5 - std::abs(standard_normal(rng));
    const ComplexMatrix q = random_transform(n, rng);
    ComplexMatrix c = q.adjoint() * d * q;
    c = (c + c.adjoint()) / 2.0;
    const Inertia in = inertia_of(c);
    EXPECT_EQ(in, (Inertia{pos, neg, n - pos - neg})) << "seed " << seed;
  }
}

TEST(NormalRank, SingularBlock) { EXPECT_EQ(normal_rank(build_block(Singular{1})), 2); }

TEST(NormalRank, ZeroPencil) { EXPECT_EQ(normal_rank(zero_pencil(4)), 0); }

TEST(NormalRank, BoundedGenericFormAgainstEliminationOracle) {
  const HKCF h = realize_canonical(make_descriptor(5, 3, 1, 1));
  const auto p = build_hkcf(h);
  EXPECT_EQ(normal_rank(p), 3);
  EXPECT_EQ(oracle::gauss_rank(evaluate(p, Complex(0.3, 0.7))), 3);
}

TEST(NormalRank, AdditiveOverDirectSums) {
  const auto p = build_hkcf({{Singular{2}, RealJordan{2, 1.0, 1}}});
  const auto q = build_hkcf({{Singular{0}, ConjPair{1, {0, 1}}, InfJordan{2, -1}}});
  EXPECT_EQ(normal_rank(direct_sum(p, q)), normal_rank(p) + normal_rank(q));
  EXPECT_EQ(normal_rank(direct_sum(p, q)), 6 + 4 - 1 + 1);
}

TEST(Determinant, SplitFiniteJordanIsOneMinusLambdaSquared) {
  const Perturbation pt = s_perturbation_finite(0.0, 2, 1, 1.0, 1);
  const Polynomial d = determinant(pt.pencil);
  ASSERT_EQ(d.coeffs.size(), 3u);
  EXPECT_NEAR(std::abs(d.coeffs[0] - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(d.coeffs[1]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(d.coeffs[2] + 1.0), 0.0, 1e-12);
}

TEST(Determinant, NullBlockVanishes) {
  const Polynomial d = determinant(build_block(Singular{0}));
  EXPECT_LE(d.max_abs_coeff(), 1e-14);
}

TEST(Determinant, RegularizedSingularBlockIsConstant) {
  const Polynomial d = determinant(regularize_M(1, 10).pencil);
  EXPECT_NEAR(std::abs(d.coeffs[0]), 0.1, 1e-12);
  for (std::size_t i = 1; i < d.coeffs.size(); ++i) EXPECT_LE(std::abs(d.coeffs[i]), 1e-12);
}

TEST(Determinant, AgreesWithLaplaceExpansion) {
  Rng rng = make_rng(11);
  const MatrixPencil p(complex_gaussian_matrix(5, 5, rng), complex_gaussian_matrix(5, 5, rng));
  const Polynomial d = determinant(p);
  const oracle::Poly ref = oracle::laplace_det(p.A(), p.B());
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(std::abs(d.coeffs[i] - ref[i]), 0.0, 1e-10);
}

TEST(Determinant, ConsistentWithPointEvaluation) {
  Rng rng = make_rng(3);
  const auto p = random_congruence(build_hkcf({{RealJordan{2, 0.5, 1}, ConjPair{1, {0, 1}}, InfJordan{1, -1}}}), rng);
  const Polynomial d = determinant(p);
  for (int i = 0; i < 20; ++i) {
    const Complex z = complex_normal(rng) * 2.0;
    const Complex direct = evaluate(p, z).determinant();
    EXPECT_LE(std::abs(direct - d(z)), 1e-8 * (1.0 + std::abs(direct)));
  }
}

TEST(Determinant, GuardsLargeInput) {
  expect_code(ErrorCode::TooLarge, [] { determinant(zero_pencil(13)); });
}

TEST(HermitianPencil, RejectsEmptyAndRectangular) {
  expect_code(ErrorCode::InvalidArgument, [] { HermitianPencil::exact(MatrixPencil(ComplexMatrix(0, 0), ComplexMatrix(0, 0))); });
  expect_code(ErrorCode::InvalidArgument, [] { HermitianPencil::exact(build_L(1)); });
}

TEST(HermitianPencil, MeasuredInputWithinToleranceIsSymmetrized) {
  ComplexMatrix a = m({{1, 2}, {2, 3}});
  a(0, 1) += 1e-14;
  const auto h = HermitianPencil::from_measured(MatrixPencil(a, ComplexMatrix::Identity(2, 2)));
  EXPECT_EQ(h.A(), h.A().adjoint());
  a(0, 1) += 1e-3;
  expect_code(ErrorCode::NotHermitian,
              [&] { HermitianPencil::from_measured(MatrixPencil(a, ComplexMatrix::Identity(2, 2))); });
}

TEST(MatrixPencil, ShapeMismatchThrows) {
  expect_code(ErrorCode::InvalidArgument, [] { MatrixPencil(ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 3)); });
}
