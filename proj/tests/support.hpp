#pragma once

// Seeded generators shared by the unit and acceptance tests.

#include <map>
#include <string>

#include "ainf/ainf.hpp"

namespace support {

using namespace ainf;
using Q = Rational;

inline Q one() { return Q::from_int(1); }

/// Random space with total dimension in [1, max_dim] over degrees lo..hi.
inline GradedSpace random_space(Rng& rng, const std::string& name, int max_dim, int lo = -1, int hi = 1) {
  std::uniform_int_distribution<int> total(1, max_dim);
  std::uniform_int_distribution<int> deg(lo, hi);
  std::map<int, int> dims;
  const int n = total(rng);
  for (int i = 0; i < n; ++i) dims[deg(rng)] += 1;
  return GradedSpace(name, dims);
}

inline int random_int(Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return d(rng);
}

/// Random structure from the generator: a pushforward of a small algebra
/// (with cones) along a random isotopy, so higher products are present.
inline Profile random_profile(Rng& rng, int max_dim, int truncation) {
  static const char* algebras[] = {"dual", "triangular", "exterior"};
  Profile p;
  p.algebra = algebras[random_int(rng, 0, 2)];
  const int room = (max_dim - p.algebra_dim()) / 2;
  p.cones = random_int(rng, 0, std::min(room, 2));
  p.flavor = p.cones ? "abc"[random_int(rng, 0, 2)] : "ab"[random_int(rng, 0, 1)];
  for (int i = 0; i < p.cones; ++i) p.cone_degrees.push_back(random_int(rng, -1, 1));
  p.truncation = truncation;
  return p;
}

inline std::string profile_string(const Profile& p) { return p.to_string(); }

/// A verified morphism between generated structures: the isotopy onto a
/// pushforward, or when the profile has cones the morphism G out of a
/// transferred structure followed by the inverse isotopy.
inline AInfMorphism<Q> random_morphism(std::uint64_t seed) {
  Rng rng(seed);
  Profile p = random_profile(rng, 6, 4);
  for (auto& d : p.cone_degrees) d = random_int(rng, -2, 0);
  const Instance<Q> inst = generate_instance<Q>(seed, p, one());
  const auto s = random_isotopy(rng, inst.structure.space(), 4, one());
  const AInfMorphism<Q> iso = pushforward_isotopy(inst.structure, s);
  if (p.cones == 0) return iso;
  const TransferStructureResult<Q> t = transfer_structure(iso.target(), inst.target, inst.data);
  return compose(invert_isotopy(iso), t.G);
}

/// Composable equivalences f : A -> B and g : B -> A (the generated g moved
/// by an exact homotopy), independent lifts of f, g and gf, and the
/// certificate relating G o F to the lift of gf with the identity on the
/// source.
template <Field K>
SquareCertificate<K> functoriality_square(const Instance<K>& inst, std::uint64_t seed, const K& unit) {
  Rng rng(seed);
  const ChainComplex<K>& a = inst.structure.complex();
  const ChainComplex<K>& b = inst.target;
  const MultiMap<K> y = random_map(rng, b.space(), a.space(), 1, 1, unit);
  const MultiMap<K> g = inst.data.g + compose(a.differential(), y) + compose(y, b.differential());
  const LiftResult<K> lf = opfibration_lift(inst.structure, b, inst.data.f, {seed});
  const LiftResult<K> lg = opfibration_lift(lf.structure, a, g, {seed + 1});
  const LiftResult<K> lgf = opfibration_lift(inst.structure, a, compose(g, inst.data.f), {seed + 2});
  using Side = typename GivenIsotopy<K>::Side;
  return connect_lifts(compose(lg.F, lf.F), lgf.F, GivenIsotopy<K>{Side::source, identity(inst.structure)});
}

}  // namespace support
