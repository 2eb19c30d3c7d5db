#include <gtest/gtest.h>

#include "oracles.hpp"
#include "support.hpp"

using namespace ainf;
using support::Q;

namespace {

const Q one = Q::from_int(1);

/// Dual numbers k[e]/e^2 on basis (1, e) in degree 0.
AInfAlgebra<Q> dual_numbers(int n = 4) {
  const GradedSpace v("D", {{0, 2}});
  MultiMap<Q> m2(v, v, 2, 0);
  m2.add_code(0, 0, one);
  m2.add_code(1, 1, one);
  m2.add_code(2, 1, one);
  return AInfAlgebra<Q>(ChainComplex<Q>::zero_differential(v), {{2, m2}}, n);
}

}  // namespace

TEST(ChainComplex, RejectsNonSquareZeroDifferential) {
  const GradedSpace v("V", {{0, 1}, {1, 1}, {2, 1}});
  MultiMap<Q> d(v, v, 1, -1);
  d.add_code(2, 1, one);
  d.add_code(1, 0, one);
  EXPECT_THROW(ChainComplex<Q>(v, d), Error);
  MultiMap<Q> wrong(v, v, 1, 0);
  EXPECT_THROW(ChainComplex<Q>(v, wrong), Error);
}

TEST(AInfAlgebra, DualNumbersVerify) {
  const AInfAlgebra<Q> a = dual_numbers();
  EXPECT_TRUE(verify(a).passed);
  EXPECT_EQ(a.mu(2), a.products().at(2));
  EXPECT_TRUE(a.mu(3).is_zero());
}

TEST(AInfAlgebra, DegreeProfileViolationsAreRejected) {
  const GradedSpace v("D", {{0, 1}, {1, 1}});
  MultiMap<Q> bad(v, v, 2, 1);
  EXPECT_THROW(AInfAlgebra<Q>(ChainComplex<Q>::zero_differential(v), {{2, bad}}, 3), ShapeError);
  EXPECT_THROW(AInfAlgebra<Q>(ChainComplex<Q>::zero_differential(v), {{5, MultiMap<Q>(v, v, 5, 3)}}, 3), ShapeError);
}

TEST(AInfAlgebra, ShiftedRoundTrip) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Profile p = support::random_profile(rng, 6, 4);
    const auto a = generate_instance<Q>(static_cast<std::uint64_t>(trial), p, one).structure;
    EXPECT_EQ(AInfAlgebra<Q>::from_shifted(a.shifted()), a);
    EXPECT_EQ(AInfAlgebra<Q>(a.complex(), a.products(), a.truncation()), a);
  }
}

TEST(AInfMorphism, IdentityAndCompositionVerify) {
  const AInfAlgebra<Q> a = dual_numbers();
  const AInfMorphism<Q> id = identity(a);
  EXPECT_TRUE(verify(id).passed);
  EXPECT_TRUE(is_isotopy(id));
  EXPECT_EQ(compose(id, id), id);
}

TEST(AInfMorphism, PushforwardIsotopyIsAMorphism) {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const Profile p = support::random_profile(rng, 5, 4);
    const auto a = generate_instance<Q>(static_cast<std::uint64_t>(100 + trial), p, one).structure;
    const auto s = random_isotopy(rng, a.space(), 4, one);
    const AInfMorphism<Q> iso = pushforward_isotopy(a, s);
    EXPECT_TRUE(verify(iso.target()).passed);
    EXPECT_TRUE(verify(iso).passed);
    const AInfMorphism<Q> inv = invert_isotopy(iso);
    EXPECT_TRUE(verify(inv).passed);
    EXPECT_EQ(compose(inv, iso), identity(a));
    EXPECT_EQ(compose(iso, inv), identity(iso.target()));
  }
}

TEST(AInfMorphism, BrokenMorphismFailsWithTaggedViolation) {
  const AInfAlgebra<Q> a = dual_numbers(3);
  const GradedSpace& v = a.space();
  MultiMap<Q> f2(v, v, 2, 1);  // no degree-1 targets: the only arity-2 component is zero
  MultiMap<Q> scale(v, v, 1, 0);
  scale.add_code(0, 0, one);
  scale.add_code(1, 1, Q::from_int(2));  // e -> 2e is not multiplicative (1 -> 1, e*e = 0 fine, 1*e = e)
  const AInfMorphism<Q> f(a, a, std::map<int, MultiMap<Q>>{{1, scale}});
  // 1*1 = 1 is preserved and e terms scale linearly, so this is an algebra map.
  EXPECT_TRUE(verify(f).passed);
  MultiMap<Q> bad(v, v, 1, 0);
  bad.add_code(0, 0, Q::from_int(2));  // 1 -> 2 breaks f(1*1) = f(1) f(1)
  bad.add_code(1, 1, one);
  const AInfMorphism<Q> g(a, a, std::map<int, MultiMap<Q>>{{1, bad}});
  const CheckReport r = verify(g);
  ASSERT_FALSE(r.passed);
  EXPECT_EQ(r.first()->equation, "morphism");
  EXPECT_EQ(r.first()->arity, 2);
}

TEST(AInfHomotopy, ZeroHomotopyFromAMorphismToItself) {
  const AInfAlgebra<Q> a = dual_numbers(3);
  const AInfMorphism<Q> id = identity(a);
  const AInfHomotopy<Q> h(id, id, std::map<int, MultiMap<Q>>{});
  EXPECT_TRUE(verify(h).passed);
}

TEST(Isotopy, GroupAxiomsOnRandomIsotopies) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const GradedSpace v = support::random_space(rng, "V", 3);
    const auto s1 = random_isotopy(rng, v, 5, one, 0.4);
    const auto s2 = random_isotopy(rng, v, 5, one, 0.4);
    const auto s3 = random_isotopy(rng, v, 5, one, 0.4);
    const auto id = CogeneratingFamily<Q>::identity(s1.source(), 5);
    EXPECT_EQ(compose_families(compose_families(s1, s2), s3), compose_families(s1, compose_families(s2, s3)));
    EXPECT_EQ(compose_families(s1, id), s1);
    EXPECT_EQ(compose_families(id, s1), s1);
    EXPECT_EQ(invert_isotopy(invert_isotopy(s1)), s1);
    EXPECT_EQ(invert_isotopy(compose_families(s1, s2)), compose_families(invert_isotopy(s2), invert_isotopy(s1)));
  }
}
