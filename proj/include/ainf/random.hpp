#pragma once

// Seeded random graded maps with small integer entries. Scalars are made by
// multiplying a caller-supplied unit, so prime-field values carry their
// modulus from the start.

#include <cstdint>
#include <random>
#include <vector>

#include "ainf/multimap.hpp"

namespace ainf {

using Rng = std::mt19937_64;

inline long random_small(Rng& rng, int bound) {
  std::uniform_int_distribution<long> d(-bound, bound);
  return d(rng);
}

inline bool random_chance(Rng& rng, double p) {
  std::bernoulli_distribution d(p);
  return d(rng);
}

/// Random homogeneous map source^{(x)arity} -> target of the given degree.
/// Each admissible entry is nonzero with probability `density`.
template <Scalar K>
MultiMap<K> random_map(Rng& rng, const GradedSpace& source, const GradedSpace& target, int arity, int degree,
                       const K& unit, double density = 0.5, int bound = 2) {
  MultiMap<K> m(source, target, arity, degree);
  const Code n = code_power(source, arity);
  for (Code in = 0; in < n; ++in) {
    const int out_deg = tuple_degree(source, arity, in) + degree;
    const int d = target.dim(out_deg);
    if (d == 0) continue;
    for (int j = 0; j < d; ++j) {
      if (!random_chance(rng, density)) continue;
      const long v = random_small(rng, bound);
      if (v == 0) continue;
      m.add_code(in, static_cast<Code>(target.global_index(out_deg, j)), unit * K::from_int(v));
    }
  }
  return m;
}

}  // namespace ainf
