#pragma once

// Seeded instances: a structure on A together with a chain homotopy
// equivalence f : A -> B with explicit witnesses.
//
//   a: a small associative algebra, possibly extended by acyclic two-term
//      cones that multiply to zero; B is the algebra, f the projection.
//   b: as a, with the structure pushed forward along a random isotopy.
//   c: A is the algebra (pushed forward along a random isotopy), B is A plus
//      cones, conjugated by a random unipotent change of basis per degree;
//      f is the inclusion.

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ainf/transfer.hpp"

namespace ainf {

struct Profile {
  char flavor = 'a';
  std::string algebra = "dual";  // dual | triangular | exterior
  int cones = 1;
  std::vector<int> cone_degrees;  // lower degree of each cone; random when empty
  int truncation = 4;
  std::uint64_t prime = 0;  // 0 for the rationals

  /// "flavor=c,algebra=dual,cones=2,N=4,field=Q,cone_degrees=-1;0".
  static Profile parse(const std::string& text) {
    Profile p;
    std::stringstream ss(text);
    std::string item;
    bool explicit_degrees = false;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error("profile entry '" + item + "' is not key=value");
      const std::string key = item.substr(0, eq);
      const std::string val = item.substr(eq + 1);
      auto to_int = [&](const std::string& s) {
        std::size_t pos = 0;
        int v = 0;
        try {
          v = std::stoi(s, &pos);
        } catch (const std::exception&) {
          throw Error("profile value '" + s + "' for " + key + " is not an integer");
        }
        if (pos != s.size()) throw Error("profile value '" + s + "' for " + key + " is not an integer");
        return v;
      };
      if (key == "flavor") {
        if (val.size() != 1) throw Error("profile flavor must be a, b or c");
        p.flavor = val[0];
      } else if (key == "algebra") {
        p.algebra = val;
      } else if (key == "cones") {
        p.cones = to_int(val);
      } else if (key == "N") {
        p.truncation = to_int(val);
      } else if (key == "field") {
        if (val == "Q") {
          p.prime = 0;
        } else if (val.size() > 1 && val[0] == 'F') {
          const int q = to_int(val.substr(1));
          if (q < 2) throw Error("profile field modulus must be a prime");
          p.prime = static_cast<std::uint64_t>(q);
        } else {
          throw Error("profile field must be Q or F<p>");
        }
      } else if (key == "cone_degrees") {
        explicit_degrees = true;
        std::stringstream ds(val);
        std::string d;
        while (std::getline(ds, d, ';')) p.cone_degrees.push_back(to_int(d));
      } else {
        throw Error("unknown profile key '" + key + "'");
      }
    }
    if (explicit_degrees && static_cast<int>(p.cone_degrees.size()) != p.cones)
      throw Error("infeasible profile: cone_degrees must list one degree per cone");
    p.validate();
    return p;
  }

  int algebra_dim() const { return algebra == "triangular" ? 3 : 2; }

  void validate() const {
    if (flavor != 'a' && flavor != 'b' && flavor != 'c') throw Error("infeasible profile: flavor must be a, b or c");
    if (algebra != "dual" && algebra != "triangular" && algebra != "exterior")
      throw Error("infeasible profile: unknown algebra '" + algebra + "'");
    if (cones < 0 || cones > 4) throw Error("infeasible profile: cones must be in 0..4");
    if (truncation < 2 || truncation > 6) throw Error("infeasible profile: N must be in 2..6");
    if (algebra_dim() + 2 * cones > 10) throw Error("infeasible profile: total dimension above 10");
    if (flavor == 'c' && cones == 0) throw Error("infeasible profile: flavor c needs at least one cone");
    if (!cone_degrees.empty() && static_cast<int>(cone_degrees.size()) != cones)
      throw Error("infeasible profile: cone_degrees must list one degree per cone");
    for (int d : cone_degrees)
      if (d < -4 || d > 4) throw Error("infeasible profile: cone degrees must be in -4..4");
    if (prime && !is_prime(prime)) throw Error("infeasible profile: field modulus is not prime");
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "flavor=" << flavor << ",algebra=" << algebra << ",cones=" << cones << ",N=" << truncation
       << ",field=" << (prime ? "F" + std::to_string(prime) : std::string("Q"));
    if (!cone_degrees.empty()) {
      os << ",cone_degrees=";
      for (std::size_t i = 0; i < cone_degrees.size(); ++i) os << (i ? ";" : "") << cone_degrees[i];
    }
    return os.str();
  }
};

template <Field K>
struct Instance {
  Profile profile;
  std::uint64_t seed = 0;
  AInfAlgebra<K> structure;  // on A
  ChainComplex<K> target;    // B
  HomotopyEquivalenceData<K> data;
};

namespace detail {

/// Structure constants of the algebra on a space whose first basis elements
/// are the algebra's (all in degree 0, except x in degree 1 for exterior).
template <Field K>
MultiMap<K> algebra_product(const std::string& algebra, const GradedSpace& s, const K& one) {
  MultiMap<K> m(s, s, 2, 0);
  auto put = [&](int a, int b, int c) {
    const std::vector<int> in{a, b};
    const std::vector<int> out{c};
    m.add(in, out, one);
  };
  if (algebra == "dual") {  // 1, e with e^2 = 0
    const int u = s.global_index(0, 0), e = s.global_index(0, 1);
    put(u, u, u);
    put(u, e, e);
    put(e, u, e);
  } else if (algebra == "triangular") {  // e11, e12, e22
    const int a = s.global_index(0, 0), b = s.global_index(0, 1), c = s.global_index(0, 2);
    put(a, a, a);
    put(a, b, b);
    put(b, c, b);
    put(c, c, c);
  } else {  // 1, x with |x| = 1, x^2 = 0
    const int u = s.global_index(0, 0), x = s.global_index(1, 0);
    put(u, u, u);
    put(u, x, x);
    put(x, u, x);
  }
  return m;
}

/// Unipotent change of basis in each degree and its exact inverse.
template <Field K>
std::pair<MultiMap<K>, MultiMap<K>> random_unipotent(Rng& rng, const GradedSpace& s, const K& one) {
  MultiMap<K> lower(s, s, 1, 0);
  MultiMap<K> upper(s, s, 1, 0);
  for (const auto& [deg, d] : s.dims()) {
    for (int i = 0; i < d; ++i) {
      const int gi = s.global_index(deg, i);
      lower.add_code(static_cast<Code>(gi), static_cast<Code>(gi), one);
      upper.add_code(static_cast<Code>(gi), static_cast<Code>(gi), one);
      for (int j = 0; j < d; ++j) {
        const int gj = s.global_index(deg, j);
        if (j < i) lower.add_code(static_cast<Code>(gj), static_cast<Code>(gi), one * K::from_int(random_small(rng, 2)));
        if (j > i) upper.add_code(static_cast<Code>(gj), static_cast<Code>(gi), one * K::from_int(random_small(rng, 2)));
      }
    }
  }
  // Inverse of a unipotent triangular matrix by the finite Neumann series.
  auto invert = [&](const MultiMap<K>& u) {
    const MultiMap<K> id = MultiMap<K>::identity(s);
    const MultiMap<K> nil = u - id;
    MultiMap<K> term = id;
    MultiMap<K> inv = id;
    for (int k = 1; k < s.dim(); ++k) {
      term = -compose(term, nil);
      if (term.is_zero()) break;
      inv += term;
    }
    return inv;
  };
  const MultiMap<K> q = compose(lower, upper);
  const MultiMap<K> q_inv = compose(invert(upper), invert(lower));
  return {q, q_inv};
}

}  // namespace detail

/// Random isotopy components S_2..S_N on a space (S_1 = 1 implied).
template <Field K>
CogeneratingFamily<K> random_isotopy(Rng& rng, const GradedSpace& space, int truncation, const K& one,
                                     double density = 0.3) {
  const GradedSpace v = space.suspend();
  CogeneratingFamily<K> s = CogeneratingFamily<K>::identity(v, truncation);
  for (int k = 2; k <= truncation; ++k) s.set(k, shift(random_map(rng, space, space, k, k - 1, one, density)));
  return s;
}

/// Deterministic in (seed, profile).
template <Field K>
Instance<K> generate_instance(std::uint64_t seed, const Profile& profile, const K& one) {
  profile.validate();
  Rng rng(seed);
  Instance<K> inst;
  inst.profile = profile;
  inst.seed = seed;
  std::vector<int> cone_deg = profile.cone_degrees;
  if (cone_deg.empty())
    for (int i = 0; i < profile.cones; ++i) cone_deg.push_back(static_cast<int>(random_small(rng, 1)));
  inst.profile.cone_degrees = cone_deg;

  std::map<int, int> alg_dims;
  if (profile.algebra == "exterior") {
    alg_dims = {{0, 1}, {1, 1}};
  } else {
    alg_dims = {{0, profile.algebra_dim()}};
  }
  std::map<int, int> big_dims = alg_dims;
  for (int d : cone_deg) {
    big_dims[d] += 1;
    big_dims[d + 1] += 1;
  }
  // In the enlarged space the algebra basis comes first in each degree,
  // then the cones in order.
  auto cone_indices = [&](const GradedSpace& s) {
    std::map<int, int> used = alg_dims;
    std::vector<std::pair<int, int>> out;  // (u, v) with d u = v
    for (int d : cone_deg) {
      const int u = s.global_index(d + 1, used[d + 1]++);
      const int v = s.global_index(d, used[d]++);
      out.emplace_back(u, v);
    }
    return out;
  };
  auto algebra_indices = [&](const GradedSpace& s) {
    std::vector<int> out;
    for (const auto& [deg, d] : alg_dims)
      for (int i = 0; i < d; ++i) out.push_back(s.global_index(deg, i));
    return out;
  };

  const int n = profile.truncation;
  const GradedSpace alg("Alg", alg_dims);
  const GradedSpace big(profile.cones ? "AlgCones" : "Alg", big_dims);

  auto cone_complex = [&](const GradedSpace& s) {
    MultiMap<K> d(s, s, 1, -1);
    for (auto [u, v] : cone_indices(s)) d.add_code(static_cast<Code>(u), static_cast<Code>(v), one);
    return ChainComplex<K>(s, d);
  };
  // Inclusion alg -> big and projection big -> alg.
  auto inclusion = [&](const GradedSpace& small_s, const GradedSpace& big_s) {
    MultiMap<K> m(small_s, big_s, 1, 0);
    const auto si = algebra_indices(small_s);
    const auto bi = algebra_indices(big_s);
    for (std::size_t i = 0; i < si.size(); ++i) m.add_code(static_cast<Code>(si[i]), static_cast<Code>(bi[i]), one);
    return m;
  };
  auto projection = [&](const GradedSpace& big_s, const GradedSpace& small_s) {
    MultiMap<K> m(big_s, small_s, 1, 0);
    const auto si = algebra_indices(small_s);
    const auto bi = algebra_indices(big_s);
    for (std::size_t i = 0; i < si.size(); ++i) m.add_code(static_cast<Code>(bi[i]), static_cast<Code>(si[i]), one);
    return m;
  };
  auto cone_contraction = [&](const GradedSpace& s) {  // v -> -u
    MultiMap<K> k(s, s, 1, 1);
    for (auto [u, v] : cone_indices(s)) k.add_code(static_cast<Code>(v), static_cast<Code>(u), -one);
    return k;
  };

  if (profile.flavor == 'a' || profile.flavor == 'b') {
    const ChainComplex<K> a = cone_complex(big);
    AInfAlgebra<K> mu(a, {{2, detail::algebra_product(profile.algebra, big, one)}}, n);
    if (profile.flavor == 'b') mu = pushforward_along_isotopy(mu, random_isotopy(rng, big, n, one));
    if (profile.cones == 0) {
      inst.target = a;
      inst.data = HomotopyEquivalenceData<K>{MultiMap<K>::identity(big), MultiMap<K>::identity(big),
                                             MultiMap<K>(big, big, 1, 1), MultiMap<K>(big, big, 1, 1)};
    } else {
      inst.target = ChainComplex<K>::zero_differential(alg);
      inst.data = HomotopyEquivalenceData<K>{projection(big, alg), inclusion(alg, big), cone_contraction(big),
                                             MultiMap<K>(alg, alg, 1, 1)};
    }
    inst.structure = mu;
  } else {
    const ChainComplex<K> a = ChainComplex<K>::zero_differential(alg);
    AInfAlgebra<K> mu(a, {{2, detail::algebra_product(profile.algebra, alg, one)}}, n);
    mu = pushforward_along_isotopy(mu, random_isotopy(rng, alg, n, one));
    const ChainComplex<K> b0 = cone_complex(big);
    const auto [q, q_inv] = detail::random_unipotent(rng, big, one);
    const ChainComplex<K> b(big, compose(q, compose(b0.differential(), q_inv)));
    inst.structure = mu;
    inst.target = b;
    inst.data = HomotopyEquivalenceData<K>{compose(q, inclusion(alg, big)), compose(projection(big, alg), q_inv),
                                           MultiMap<K>(alg, alg, 1, 1),
                                           compose(q, compose(cone_contraction(big), q_inv))};
  }
  const CheckReport ok = check_equivalence_data(inst.structure.complex(), inst.target, inst.data);
  if (!ok.passed) throw VerificationFailure("generate_instance: equivalence data", ok);
  require_verified(inst.structure, "generate_instance: structure");
  return inst;
}

}  // namespace ainf
