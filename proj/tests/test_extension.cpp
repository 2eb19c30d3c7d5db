#include <gtest/gtest.h>

#include "oracles.hpp"
#include "support.hpp"

using namespace ainf;
using support::Q;

namespace {

const Q one = Q::from_int(1);

using support::random_morphism;

}  // namespace

TEST(Extension, ZeroHomotopyReturnsInputBitwise) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const AInfMorphism<Q> f = random_morphism(seed);
    const MultiMap<Q> zero(f.source().space(), f.target().space(), 1, 1);
    const ExtensionResult<Q> r = extend_homotopic_map(f, f.linear(), zero);
    EXPECT_EQ(r.psi, f);
    EXPECT_TRUE(r.eta.components().empty());
  }
}

TEST(Extension, RandomHomotopyGivesVerifiedMorphism) {
  for (std::uint64_t seed = 11; seed <= 25; ++seed) {
    const AInfMorphism<Q> f = random_morphism(seed);
    Rng rng(seed);
    const auto& src = f.source().complex();
    const auto& tgt = f.target().complex();
    const MultiMap<Q> h = random_map(rng, src.space(), tgt.space(), 1, 1, one);
    const MultiMap<Q> g = f.linear() + compose(tgt.differential(), h) + compose(h, src.differential());
    const auto higher = random_higher_homotopy(rng, src.space(), tgt.space(), 4, one);
    const ExtensionResult<Q> r = extend_homotopic_map(f, g, h, higher);
    EXPECT_EQ(r.psi.linear(), g);
    EXPECT_TRUE(verify(r.psi).passed);
    EXPECT_TRUE(verify(r.eta).passed);
    // The homotopy components are exactly the prescribed ones.
    EXPECT_EQ(r.eta.component(1), h);
    for (const auto& [k, m] : higher) EXPECT_EQ(r.eta.component(k), m);
    // Independent dense check of the homotopy identity.
    const auto& v = f.shifted().source();
    EXPECT_TRUE(oracle::homotopy_dense(f.shifted().components(), r.psi.shifted().components(),
                                       r.eta.shifted().components(), f.source().shifted().components(),
                                       f.target().shifted().components(), v, 4)
                    .empty());
  }
}

TEST(Extension, LinearIdentityFailureIsReported) {
  const AInfMorphism<Q> f = random_morphism(3);
  Rng rng(1);
  const MultiMap<Q> h = random_map(rng, f.source().space(), f.target().space(), 1, 1, one);
  ASSERT_EQ(f.source().space().degree_of(0), f.target().space().degree_of(0));
  MultiMap<Q> g = f.linear();
  g.add_code(0, 0, one);  // g - f is now not d h + h d for this h
  try {
    extend_homotopic_map(f, g, h);
    FAIL() << "expected a verification failure";
  } catch (const VerificationFailure& e) {
    EXPECT_EQ(e.report().first()->equation, "linear_homotopy");
    EXPECT_EQ(e.report().first()->arity, 1);
  }
}

TEST(Extension, HigherHomotopyDegreeIsChecked) {
  const AInfMorphism<Q> f = random_morphism(4);
  const MultiMap<Q> zero(f.source().space(), f.target().space(), 1, 1);
  std::map<int, MultiMap<Q>> higher{{2, MultiMap<Q>(f.source().space(), f.target().space(), 2, 1)}};
  EXPECT_THROW(extend_homotopic_map(f, f.linear(), zero, higher), ShapeError);
}

TEST(Straightening, ProducesIsotopyHomotopicToInput) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Profile p = support::random_profile(rng, 5, 4);
    const auto a = generate_instance<Q>(static_cast<std::uint64_t>(trial), p, one).structure;
    const auto iso = pushforward_isotopy(a, random_isotopy(rng, a.space(), 4, one));
    // E = iso with linear part perturbed by an exact homotopy is not an
    // isotopy; straightening must bring it back.
    const MultiMap<Q> h = random_map(rng, a.space(), a.space(), 1, 1, one);
    const MultiMap<Q> e1 = MultiMap<Q>::identity(a.space()) + compose(a.complex().differential(), h) +
                           compose(h, a.complex().differential());
    const ExtensionResult<Q> e = extend_homotopic_map(iso, e1, h);
    const StraighteningResult<Q> st = straighten_to_isotopy(e.psi, -h);
    EXPECT_TRUE(is_isotopy(st.isotopy));
    EXPECT_TRUE(verify(st.isotopy).passed);
    EXPECT_TRUE(verify(st.eta).passed);
  }
}
