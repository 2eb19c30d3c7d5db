#include <gtest/gtest.h>

#include "oracles.hpp"
#include "support.hpp"

using namespace ainf;
using support::Q;

namespace {

AInfAlgebra<Q> random_structure(std::uint64_t seed, int max_dim = 6, int n = 4) {
  Rng rng(seed);
  Profile p = support::random_profile(rng, max_dim, n);
  p.flavor = 'b';
  return generate_instance<Q>(seed, p, support::one()).structure;
}

std::map<int, MultiMap<Q>> unshifted_products(const AInfAlgebra<Q>& a) {
  auto m = a.products();
  m.emplace(1, a.complex().differential());
  return m;
}

}  // namespace

TEST(Coalgebra, FamilySetValidatesShape) {
  const GradedSpace v = GradedSpace("V", {{0, 2}}).suspend();
  CogeneratingFamily<Q> d(FamilyKind::coderivation, v, v, 3);
  EXPECT_EQ(d.degree(), -1);
  EXPECT_THROW(d.set(2, MultiMap<Q>(v, v, 2, 0)), ShapeError);
  EXPECT_THROW(d.set(4, MultiMap<Q>(v, v, 4, -1)), ShapeError);
  EXPECT_THROW(d.set(3, MultiMap<Q>(v, v, 2, -1)), ShapeError);
  d.set(2, MultiMap<Q>(v, v, 2, -1));
  EXPECT_EQ(d.component(2), nullptr);  // zero components are not stored
}

TEST(Coalgebra, SquareZeroMatchesShiftedDenseOracle) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const AInfAlgebra<Q> a = random_structure(seed);
    const auto& d = a.shifted();
    const auto dense = oracle::square_zero_dense(d.components(), d.source(), 4);
    EXPECT_EQ(oracle::compare(check_square_zero(d, 4), dense, d.source(), false), "") << "seed " << seed;
  }
}

TEST(Coalgebra, SquareZeroMatchesUnshiftedStasheffOracle) {
  for (std::uint64_t seed = 20; seed <= 35; ++seed) {
    const AInfAlgebra<Q> a = random_structure(seed);
    const auto dense = oracle::stasheff_dense(unshifted_products(a), 4);
    EXPECT_TRUE(dense.empty()) << "seed " << seed;
    EXPECT_TRUE(check_square_zero(a.shifted(), 4).passed);
  }
}

TEST(Coalgebra, RandomFamiliesFailIdenticallyInBothEngines) {
  Rng rng(77);
  for (int trial = 0; trial < 15; ++trial) {
    const GradedSpace base = support::random_space(rng, "V", 3);
    const GradedSpace v = base.suspend();
    CogeneratingFamily<Q> d(FamilyKind::coderivation, v, v, 3);
    for (int k = 2; k <= 3; ++k) d.set(k, shift(random_map(rng, base, base, k, k - 2, support::one(), 0.4)));
    const auto dense = oracle::square_zero_dense(d.components(), v, 3);
    EXPECT_EQ(oracle::compare(check_square_zero(d, 3), dense, v, false), "") << "trial " << trial;
  }
}

TEST(Coalgebra, MorphismAndHomotopyCheckersMatchDenseOracles) {
  Rng rng(5);
  for (std::uint64_t seed = 40; seed < 50; ++seed) {
    const AInfAlgebra<Q> a = random_structure(seed, 5, 4);
    const GradedSpace v = a.shifted().source();
    const CogeneratingFamily<Q> s = random_isotopy(rng, a.space(), 4, support::one());
    const AInfMorphism<Q> iso = pushforward_isotopy(a, s);
    const auto& ds = a.shifted();
    const auto& dt = iso.target().shifted();
    // Valid morphism.
    EXPECT_EQ(oracle::compare(check_morphism(iso.shifted(), ds, dt, 4),
                              oracle::morphism_dense(iso.shifted().components(), ds.components(), dt.components(), v, 4),
                              v, false),
              "");
    // Broken morphism: perturb one component.
    CogeneratingFamily<Q> broken = iso.shifted();
    broken.set(2, broken.component_or_zero(2) + shift(random_map(rng, a.space(), a.space(), 2, 1, support::one(), 0.3)));
    EXPECT_EQ(oracle::compare(check_morphism(broken, ds, dt, 4),
                              oracle::morphism_dense(broken.components(), ds.components(), dt.components(), v, 4), v,
                              false),
              "");
    // Homotopy between iso and an arbitrary family: compare residuals.
    HomotopyFamily<Q> h;
    h.from = iso.shifted();
    h.to = broken;
    h.eta = CogeneratingFamily<Q>(FamilyKind::homotopy, v, v, 4);
    for (int k = 1; k <= 3; ++k) h.eta.set(k, shift(random_map(rng, a.space(), a.space(), k, k, support::one(), 0.3)));
    EXPECT_EQ(oracle::compare(check_homotopy(h, ds, dt, 4),
                              oracle::homotopy_dense(h.from.components(), h.to.components(), h.eta.components(),
                                                     ds.components(), dt.components(), v, 4),
                              v, false),
              "");
  }
}

TEST(Coalgebra, ComposeFamiliesMatchesDenseOracle) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const GradedSpace base = support::random_space(rng, "V", 4);
    const auto s1 = random_isotopy(rng, base, 4, support::one(), 0.4);
    const auto s2 = random_isotopy(rng, base, 4, support::one(), 0.4);
    const auto v = s1.source();
    EXPECT_EQ(compose_families(s1, s2).components(),
              oracle::compose_families_dense(s1.components(), s2.components(), v, v, 4));
  }
}

TEST(Coalgebra, InverseIsotopyComposesToIdentity) {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const GradedSpace base = support::random_space(rng, "V", 4);
    const auto s = random_isotopy(rng, base, 5, support::one(), 0.4);
    const auto id = CogeneratingFamily<Q>::identity(s.source(), 5);
    EXPECT_EQ(compose_families(s, invert_isotopy(s)), id);
    EXPECT_EQ(compose_families(invert_isotopy(s), s), id);
  }
}

TEST(Coalgebra, ViolationReportsUnshiftedDegrees) {
  // Dual numbers with a non-associative corruption: 1*e = 1.
  const GradedSpace v("A", {{0, 2}});
  MultiMap<Q> m2(v, v, 2, 0);
  const Q one = support::one();
  m2.add_code(0, 0, one);  // 1*1 = 1
  m2.add_code(1, 1, one);  // 1*e = e
  m2.add_code(2, 1, one);  // e*1 = e
  m2.add_code(1, 0, one);  // corruption: 1*e gains 1
  const AInfAlgebra<Q> a(ChainComplex<Q>::zero_differential(v), {{2, m2}}, 3);
  const CheckReport r = verify(a);
  ASSERT_FALSE(r.passed);
  const Violation& first = *r.first();
  EXPECT_EQ(first.equation, "square_zero");
  EXPECT_EQ(first.arity, 3);
  EXPECT_EQ(first.degrees, (std::vector<int>{0, 0, 0}));
  const auto dense = oracle::stasheff_dense(unshifted_products(a), 3);
  EXPECT_EQ(oracle::compare(r, dense, v, true), "");
}
