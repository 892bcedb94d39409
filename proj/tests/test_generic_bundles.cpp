#include <gtest/gtest.h>

#include <set>

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

// Independent count: pairs (c, d) with 2d + c <= m.
int brute_count(int m) {
  int total = 0;
  for (int d = 0; 2 * d <= m; ++d)
    for (int c = 0; c + 2 * d <= m; ++c) ++total;
  return total;
}

}  // namespace

TEST(Enumerate, RegularTwo) {
  const auto v = enumerate_regular(2);
  ASSERT_EQ(v.size(), 4u);
  EXPECT_EQ(v[0], make_descriptor(2, 2, 0, 0));
  EXPECT_EQ(v[1], make_descriptor(2, 2, 1, 0));
  EXPECT_EQ(v[2], make_descriptor(2, 2, 2, 0));
  EXPECT_EQ(v[3], make_descriptor(2, 2, 0, 1));
}

TEST(Enumerate, RegularTwentyHas121) { EXPECT_EQ(enumerate_regular(20).size(), 121u); }

TEST(Enumerate, RegularCountFormula) {
  for (int n = 1; n <= 50; ++n) {
    EXPECT_EQ(static_cast<std::int64_t>(enumerate_regular(n).size()), generic_count(n));
    EXPECT_EQ(generic_count(n), brute_count(n));
  }
}

TEST(Enumerate, BoundedExamples) {
  EXPECT_EQ(enumerate_bounded(3, 2).size(), 4u);
  std::set<int> counts;
  for (const auto& d : enumerate_bounded(17, 9)) counts.insert(d.real_count());
  EXPECT_EQ(counts, (std::set<int>{1, 3, 5, 7, 9}));
}

TEST(Enumerate, BoundedCountFormula) {
  for (int n = 2; n <= 30; ++n)
    for (int r = 1; r < n; ++r) {
      EXPECT_EQ(static_cast<std::int64_t>(enumerate_bounded(n, r).size()), generic_count(r));
      EXPECT_EQ(generic_count(r), brute_count(r));
    }
}

TEST(Enumerate, DeterministicOrder) {
  const auto v = enumerate_bounded(9, 6);
  for (std::size_t i = 1; i < v.size(); ++i)
    EXPECT_TRUE(v[i - 1].d < v[i].d || (v[i - 1].d == v[i].d && v[i - 1].c < v[i].c));
}

TEST(Descriptor, Validation) {
  expect_code(ErrorCode::InvalidDescriptor, [] { make_descriptor(3, 4, 0, 0); });
  expect_code(ErrorCode::InvalidDescriptor, [] { make_descriptor(5, 3, 2, 1); });
  expect_code(ErrorCode::InvalidDescriptor, [] { make_descriptor(4, 4, 0, 3); });
  EXPECT_FALSE(is_valid(BundleDescriptor{5, 0, 0, 0}));
}

TEST(Realize, SingleSingularBlock) {
  const HKCF h = realize(make_descriptor(3, 2, 0, 1), std::vector<double>{}, std::vector<Complex>{});
  ASSERT_EQ(h.blocks.size(), 1u);
  EXPECT_EQ(std::get<Singular>(h.blocks[0]).d, 1);
}

TEST(Realize, BoundedExpansion) {
  const HKCF h = realize(make_descriptor(5, 3, 1, 1), std::vector<double>{7.0}, std::vector<Complex>{});
  ASSERT_EQ(h.blocks.size(), 3u);
  EXPECT_EQ(std::get<Singular>(h.blocks[0]).d, 1);
  EXPECT_EQ(std::get<Singular>(h.blocks[1]).d, 0);
  const auto& j = std::get<RealJordan>(h.blocks[2]);
  EXPECT_EQ(j.a, 7.0);
  EXPECT_EQ(j.sign, 1);
  EXPECT_EQ(j.k, 1);
}

TEST(Realize, RegularLeadingInertia) {
  const HKCF h = realize(make_descriptor(4, 4, 1, 1), std::vector<double>{1.0, 2.0}, std::vector<Complex>{{0, 1}});
  EXPECT_EQ(inertia_of(build_hkcf(h).B()), (Inertia{2, 2, 0}));
}

TEST(Realize, CollisionsRejected) {
  expect_code(ErrorCode::EigenvalueCollision,
              [] { realize(make_descriptor(4, 4, 1, 0), std::vector<double>{1, 2, 2, 3}, std::vector<Complex>{}); });
  expect_code(ErrorCode::EigenvalueCollision, [] {
    realize(make_descriptor(4, 4, 0, 2), std::vector<double>{}, std::vector<Complex>{{0, 1}, {0, 1}});
  });
}

TEST(Realize, SizeAccountingIdentity) {
  for (int n = 2; n <= 12; ++n)
    for (int r = 1; r < n; ++r)
      for (const auto& desc : enumerate_bounded(n, r)) {
        const int a = desc.alpha(), s = desc.s();
        EXPECT_EQ(n, (r - 2 * desc.d) + s * (2 * a + 3) + (n - r - s) * (2 * a + 1));
        EXPECT_EQ(realize_canonical(desc).size(), n);
        EXPECT_EQ(realize_canonical(desc).normal_rank(), r);
      }
}

TEST(ClosedForm, Examples) {
  EXPECT_EQ(codim_closed_form(make_descriptor(3, 2, 0, 1)), (Codimensions{4, 4}));
  EXPECT_EQ(codim_closed_form(make_descriptor(17, 9, 0, 4)).bundle, 208);
  for (const auto& desc : enumerate_regular(20)) EXPECT_EQ(codim_closed_form(desc), (Codimensions{20, 0}));
}

TEST(ClosedForm, BundleIsOrbitMinusDistinctEigenvalues) {
  for (int n = 1; n <= 10; ++n)
    for (int r = 1; r <= n; ++r)
      for (const auto& desc : enumerate_family(n, r)) {
        const Codimensions cd = codim_closed_form(desc);
        EXPECT_EQ(cd.bundle, cd.orbit - distinct_finite_eigenvalue_count(realize_canonical(desc)));
      }
}

TEST(ClosedForm, BundleDecreasesWithD) {
  for (int n = 2; n <= 15; ++n)
    for (int r = 1; r < n; ++r)
      for (int d = 1; 2 * d <= r; ++d)
        EXPECT_LT(codim_closed_form(make_descriptor(n, r, 0, d)).bundle,
                  codim_closed_form(make_descriptor(n, r, 0, d - 1)).bundle);
}

TEST(LeadingInertia, Examples) {
  EXPECT_EQ(leading_inertia(make_descriptor(4, 4, 1, 1)), (Inertia{2, 2, 0}));
  const auto desc = make_descriptor(5, 3, 1, 1);
  EXPECT_EQ(leading_inertia(desc), (Inertia{2, 1, 2}));
  const auto o = oracle::charpoly_inertia(build_hkcf(realize_canonical(desc)).B());
  EXPECT_EQ((Inertia{o.pos, o.neg, o.zero}), (Inertia{2, 1, 2}));
}

TEST(LeadingInertia, InjectiveOnRegularFamily) {
  for (int n = 1; n <= 30; ++n) {
    std::set<std::tuple<int, int, int, int>> seen;
    for (const auto& desc : enumerate_regular(n)) {
      const Inertia in = leading_inertia(desc);
      EXPECT_TRUE(seen.insert({in.pos, in.neg, in.zero, desc.d}).second);
    }
  }
}

TEST(LeadingInertia, InvariantUnderSampledCongruence) {
  const std::vector<BundleDescriptor> descs = {make_descriptor(5, 3, 1, 1), make_descriptor(6, 4, 0, 2),
                                               make_descriptor(5, 5, 2, 1), make_descriptor(7, 4, 3, 0)};
  for (const auto& desc : descs) {
    Rng rng = make_rng(77);
    for (int i = 0; i < 100; ++i) {
      const auto p = random_congruence_sample(realize(desc, EigenvaluePolicy::Gaussian, rng), EigenvaluePolicy::Gaussian,
                                              derive_seed(13, i));
      EXPECT_EQ(inertia_of(p.B(), 1e-8), leading_inertia(desc));
    }
  }
}

TEST(Division, Examples) {
  EXPECT_EQ(balance_division(7, 3), (Division{2, 1}));
  EXPECT_EQ(balance_division(4, 2), (Division{2, 0}));
  EXPECT_EQ(balance_division(0, 5), (Division{0, 0}));
  expect_code(ErrorCode::InvalidArgument, [] { balance_division(3, 0); });
}

TEST(Weyr, Examples) {
  const WeyrSequence bal = weyr_of({1, 1});
  const WeyrSequence unbal = weyr_of({2, 0});
  EXPECT_EQ(bal.counts, (std::vector<int>{2}));
  EXPECT_EQ(unbal.counts, (std::vector<int>{1, 1}));
  EXPECT_TRUE(weyr_dominates(bal, unbal));
  EXPECT_FALSE(weyr_dominates(unbal, bal));
}

TEST(Weyr, BalancedDominatesEveryPartition) {
  for (int total = 0; total <= 8; ++total)
    for (int t = 1; t <= 4; ++t) {
      const auto bal = balanced_partition(total, t);
      for (const auto& p : partitions_into(total, t)) {
        EXPECT_TRUE(weyr_dominates(weyr_of(bal), weyr_of(p)));
        if (p != bal) EXPECT_FALSE(weyr_dominates(weyr_of(p), weyr_of(bal)));
      }
    }
}

TEST(Weyr, DifferentTotalsNeverDominate) { EXPECT_FALSE(weyr_dominates(weyr_of({2}), weyr_of({1}))); }
