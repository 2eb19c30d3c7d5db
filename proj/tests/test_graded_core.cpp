#include <gtest/gtest.h>

#include "oracles.hpp"
#include "support.hpp"

using namespace ainf;
using support::Q;

namespace {

MultiMap<Q> rmap(Rng& rng, const GradedSpace& v, int arity, int degree, double density = 0.5) {
  return random_map(rng, v, v, arity, degree, support::one(), density);
}

}  // namespace

TEST(Scalars, RationalArithmeticIsExact) {
  const Q a(1, 3), b(-2, 6);
  EXPECT_TRUE((a + b).is_zero());
  EXPECT_EQ((a * Q(3, 1)).to_string(), "1");
  EXPECT_EQ(Q(6, -4).to_string(), "-3/2");
  EXPECT_EQ(Q::parse("-3/2"), Q(-3, 2));
  EXPECT_EQ(Q::parse("4/2").to_string(), "2");
  EXPECT_EQ(Q(2, 7).inverse(), Q(7, 2));
  EXPECT_THROW(Q::parse("1/0"), Error);
  EXPECT_THROW(Q::parse("x"), Error);
}

TEST(Scalars, ModPReducesAndInverts) {
  const ModP a(5, 7), b(3, 7);
  EXPECT_EQ((a + b).to_string(), "1");
  EXPECT_EQ((a * a.inverse()).to_string(), "1");
  EXPECT_EQ(ModP(-1, 7).to_string(), "6");
  // Unbound constants adopt the modulus of the other operand.
  EXPECT_EQ((ModP::from_int(3) * a).to_string(), "1");
  EXPECT_THROW(ModP(1, 7) + ModP(1, 11), Error);
}

TEST(GradedSpace, GlobalIndexingAndSuspension) {
  const GradedSpace v("V", {{-1, 2}, {0, 0}, {2, 1}});
  EXPECT_EQ(v.dim(), 3);
  EXPECT_EQ(v.dim(-1), 2);
  EXPECT_EQ(v.dim(0), 0);
  EXPECT_EQ(v.global_index(2, 0), 2);
  EXPECT_EQ(v.degree_of(1), -1);
  const GradedSpace s = v.suspend();
  EXPECT_EQ(s.degree_of(2), 3);
  EXPECT_EQ(s.name(), "s(V)");
  EXPECT_EQ(s.desuspend(), v);
  EXPECT_THROW(GradedSpace("E", {}), ShapeError);
  EXPECT_THROW(v.global_index(0, 0), ShapeError);
}

TEST(GradedSpace, TupleCodecRoundTrip) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const GradedSpace v = support::random_space(rng, "V", 5);
    const int k = support::random_int(rng, 1, 4);
    for (const auto& t : oracle::all_tuples(v.dim(), k)) {
      const Code c = oracle::encode(t, v.dim());
      EXPECT_EQ(decode_tuple(v, k, c), t);
    }
  }
}

TEST(MultiMap, RejectsWrongDegreeEntries) {
  const GradedSpace v("V", {{0, 1}, {1, 1}});
  MultiMap<Q> m(v, v, 1, -1);
  const std::vector<int> x0{0}, x1{1};
  EXPECT_NO_THROW(m.add(x1, x0, Q(1)));
  EXPECT_THROW(m.add(x0, x1, Q(1)), ShapeError);
  EXPECT_TRUE(m.audit_degrees());
  m.add_code(0, 1, Q(1));  // unchecked path
  EXPECT_FALSE(m.audit_degrees());
}

TEST(MultiMap, TensorMatchesDenseOracle) {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const GradedSpace v = support::random_space(rng, "V", 4);
    const auto a = rmap(rng, v, support::random_int(rng, 1, 2), support::random_int(rng, -1, 1));
    const auto b = rmap(rng, v, support::random_int(rng, 1, 2), support::random_int(rng, -1, 1));
    EXPECT_EQ(tensor(a, b), oracle::tensor_dense(a, b)) << "trial " << trial;
  }
}

TEST(MultiMap, ComposeMatchesDenseOracle) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const GradedSpace v = support::random_space(rng, "V", 4);
    const auto g = rmap(rng, v, support::random_int(rng, 1, 3), support::random_int(rng, -1, 1));
    const auto f = rmap(rng, v, 1, support::random_int(rng, -1, 1));
    EXPECT_EQ(compose(f, g), oracle::compose_dense(f, g));
  }
}

TEST(MultiMap, PlugMatchesTensorWithIdentities) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const GradedSpace v = support::random_space(rng, "V", 4);
    const int k = support::random_int(rng, 1, 3);
    const auto outer = rmap(rng, v, k, support::random_int(rng, -1, 1));
    const auto inner = rmap(rng, v, support::random_int(rng, 1, 2), support::random_int(rng, -1, 1));
    const int i = support::random_int(rng, 1, k);
    EXPECT_EQ(plug(outer, i, inner), oracle::plug_dense(outer, i, inner));
  }
}

TEST(MultiMap, ShiftMatchesDenseSignRule) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const GradedSpace v = support::random_space(rng, "V", 4);
    const auto m = rmap(rng, v, support::random_int(rng, 1, 3), support::random_int(rng, -1, 2));
    EXPECT_EQ(shift(m), oracle::shift_dense(m));
    EXPECT_EQ(unshift(shift(m)), m);
  }
}

TEST(MultiMap, ShiftOfLinearMapKeepsEntries) {
  const GradedSpace v("V", {{0, 1}, {1, 1}});
  MultiMap<Q> d(v, v, 1, -1);
  d.add_code(1, 0, Q(3));
  const MultiMap<Q> s = shift(d);
  EXPECT_EQ(s.degree(), -1);
  EXPECT_EQ(s.at(1, 0), Q(3));
}

TEST(MultiMap, SpaceMismatchIsReported) {
  const GradedSpace v("V", {{0, 1}}), w("W", {{0, 1}});
  MultiMap<Q> a(v, v, 1, 0), b(w, w, 1, 0);
  EXPECT_THROW(compose(a, b), SpaceMismatch);
  EXPECT_THROW(tensor(a, b), SpaceMismatch);
  EXPECT_THROW(a + b, SpaceMismatch);
}

TEST(LinearSolver, SolvesAndDetectsInconsistency) {
  LinearSystem<Q> sys(3);
  // x0 + x1 = 2, x1 - x2 = 1, x0 + x2 = 1 (dependent), free var set to zero.
  using Row = SparseRow<Q>;
  sys.add_equation(Row{{0, Q(1)}, {1, Q(1)}}, Q(2));
  sys.add_equation(Row{{1, Q(1)}, {2, Q(-1)}}, Q(1));
  sys.add_equation(Row{{0, Q(1)}, {2, Q(1)}}, Q(1));
  auto x = sys.solve();
  ASSERT_TRUE(x);
  EXPECT_EQ((*x)[0] + (*x)[1], Q(2));
  EXPECT_EQ((*x)[1] - (*x)[2], Q(1));
  EXPECT_EQ(sys.rank(), 2);
  sys.add_equation(Row{{0, Q(1)}, {2, Q(1)}}, Q(5));
  EXPECT_FALSE(sys.solve());
  EXPECT_FALSE(sys.consistent());
}
