#pragma once

// Lifts of chain homotopy equivalences to A-infinity morphisms, certificates
// that two lifts agree up to isotopy and homotopy, and composition of arrows
// between isotopy classes.

#include <optional>
#include <string>
#include <utility>

#include "ainf/transfer.hpp"

namespace ainf {

enum class LiftDirection { opfibration, fibration };

template <Field K>
struct LiftResult {
  AInfAlgebra<K> structure;  // the lifted structure: on B for opfibration, on A for fibration
  AInfMorphism<K> F;         // (A, mu) -> (B, nu) with F_1 = f
};

/// Options for a lift. A seed perturbs the solved witnesses by an exact
/// homotopy and randomizes the higher straightening homotopy, giving an
/// independent but equally valid lift.
struct LiftOptions {
  std::optional<std::uint64_t> seed;
};

/// g' = g + d y + y d, h' = h + y f, k' = k + f y for a random degree +1
/// map y : B -> A. The identities of the data are preserved exactly.
template <Field K>
HomotopyEquivalenceData<K> perturb_witnesses(const ChainComplex<K>& a, const ChainComplex<K>& b,
                                             const HomotopyEquivalenceData<K>& data, Rng& rng, const K& unit) {
  const MultiMap<K> y = random_map(rng, b.space(), a.space(), 1, 1, unit, 0.5);
  HomotopyEquivalenceData<K> r = data;
  r.g = data.g + compose(a.differential(), y) + compose(y, b.differential());
  r.h = data.h + compose(y, data.f);
  if (data.k) r.k = *data.k + compose(data.f, y);
  return r;
}

namespace detail {
template <Field K>
K unit_of(const MultiMap<K>& m) {
  for (const auto& [in, col] : m.columns())
    for (const auto& [out, x] : col) return x / x;
  return K::from_int(1);
}
}  // namespace detail

/// Opfibration lift: a structure nu on B and F : (A, mu) -> (B, nu), F_1 = f.
template <Field K>
LiftResult<K> opfibration_lift(const AInfAlgebra<K>& mu, const ChainComplex<K>& b, const MultiMap<K>& f,
                               const LiftOptions& opt = {}) {
  if (!check_chain_equivalence(mu.complex(), b, f)) throw Error("lift: f is not a chain homotopy equivalence");
  HomotopyEquivalenceData<K> data = find_witnesses(mu.complex(), b, f);
  TransferChoices<K> choices;
  if (opt.seed) {
    Rng rng(*opt.seed);
    const K unit = detail::unit_of(f);
    data = perturb_witnesses(mu.complex(), b, data, rng, unit);
    choices.straightening_higher_h =
        random_higher_homotopy(rng, mu.space(), mu.space(), mu.truncation(), unit);
  }
  TransferResult<K> t = full_transfer(mu, b, data, choices);
  return LiftResult<K>{t.nu, t.F};
}

/// Fibration lift: a structure mu on A and F : (A, mu) -> (B, nu), F_1 = f.
template <Field K>
LiftResult<K> fibration_lift(const AInfAlgebra<K>& nu, const ChainComplex<K>& a, const MultiMap<K>& f,
                             const LiftOptions& opt = {}) {
  if (!check_chain_equivalence(a, nu.complex(), f)) throw Error("lift: f is not a chain homotopy equivalence");
  HomotopyEquivalenceData<K> data = find_witnesses(a, nu.complex(), f);
  TransferChoices<K> choices;
  if (opt.seed) {
    Rng rng(*opt.seed);
    const K unit = detail::unit_of(f);
    data = perturb_witnesses(a, nu.complex(), data, rng, unit);
    choices.straightening_higher_h =
        random_higher_homotopy(rng, nu.space(), nu.space(), nu.truncation(), unit);
  }
  // Transfer from B to A along (g, f) with homotopies (k, h); the morphism
  // back to A's side of that transfer is the lift.
  TransferResult<K> t = full_transfer(nu, a, data.reversed(), choices);
  return LiftResult<K>{t.nu, t.G};
}

// ---------------------------------------------------------------------------

/// The square T F' ~ F'' S, with S an isotopy of the source complex and T
/// one of the target complex.
template <Field K>
struct SquareCertificate {
  AInfMorphism<K> left;   // F' : (A, mu') -> (B, nu')
  AInfMorphism<K> right;  // F'' : (A, mu'') -> (B, nu'')
  AInfMorphism<K> S;      // (A, mu') -> (A, mu'')
  AInfMorphism<K> T;      // (B, nu') -> (B, nu'')
  AInfHomotopy<K> eta;    // from T F' to F'' S
};

template <Field K>
CheckReport verify_certificate(const SquareCertificate<K>& c) {
  CheckReport r;
  auto fail = [&](const std::string& tag) {
    Violation v;
    v.equation = tag;
    r.violations.push_back(v);
    r.passed = false;
  };
  if (!is_isotopy(c.S)) fail("certificate_S_not_isotopy");
  if (!is_isotopy(c.T)) fail("certificate_T_not_isotopy");
  if (!r.passed) return r;
  if (!(c.S.source() == c.left.source()) || !(c.S.target() == c.right.source())) fail("certificate_S_ends");
  if (!(c.T.source() == c.left.target()) || !(c.T.target() == c.right.target())) fail("certificate_T_ends");
  if (!r.passed) return r;
  if (!(c.eta.from() == compose(c.T, c.left))) fail("certificate_eta_from");
  if (!(c.eta.to() == compose(c.right, c.S))) fail("certificate_eta_to");
  if (!r.passed) return r;
  r.merge(verify(c.left));
  r.merge(verify(c.right));
  r.merge(verify(c.S));
  r.merge(verify(c.T));
  r.merge(verify(c.eta));
  return r;
}

/// The isotopy on one side of a square, as given to connect_lifts.
template <Field K>
struct GivenIsotopy {
  enum class Side { source, target } side;
  AInfMorphism<K> isotopy;
};

namespace detail {

/// Final step of connect_lifts: a homotopy from T F' to F'' S, first with
/// its linear part fixed to the chain homotopy c, otherwise unconstrained.
template <Field K>
AInfHomotopy<K> connecting_homotopy(const AInfMorphism<K>& from, const AInfMorphism<K>& to, const MultiMap<K>& c) {
  const CogeneratingFamily<K>& ds = from.source().shifted();
  const CogeneratingFamily<K>& dt = from.target().shifted();
  std::optional<CogeneratingFamily<K>> eta = solve_homotopy(from.shifted(), to.shifted(), ds, dt, std::optional<MultiMap<K>>(shift(c)));
  if (!eta) eta = solve_homotopy(from.shifted(), to.shifted(), ds, dt);
  if (!eta) throw Error("connect_lifts: no homotopy between the two sides of the square");
  AInfHomotopy<K> h(from, to, *eta);
  require_verified(h, "connect_lifts: connecting homotopy");
  return h;
}

}  // namespace detail

/// Completes a square between lifts F' and F'' of chain maps f' ~ f''
/// (c : f' ~ f'', solved when absent), given the isotopy on one side.
///
/// Source side given (S): with witnesses (g, h, k) of f' and the transferred
/// G0 : (B, nu0) -> (A, mu'), the isotopies T' ~ F' G0 and
/// T'' ~ F'' S G0 out of (B, nu0) give T = T'' T'^{-1}. Target side given
/// (T): with G1 : (B, nu') -> (A, mu1) from the full transfer of nu' along g,
/// S' ~ G1 F' and S'' ~ G1 T^{-1} F'' give S = S''^{-1} S'.
template <Field K>
SquareCertificate<K> connect_lifts(const AInfMorphism<K>& left, const AInfMorphism<K>& right,
                                   const GivenIsotopy<K>& given, std::optional<MultiMap<K>> c = std::nullopt) {
  require_verified(left, "connect_lifts: left morphism");
  require_verified(right, "connect_lifts: right morphism");
  require_verified(given.isotopy, "connect_lifts: given isotopy");
  if (!is_isotopy(given.isotopy)) throw Error("connect_lifts: the given morphism is not an isotopy");
  const ChainComplex<K>& a = left.source().complex();
  const ChainComplex<K>& b = left.target().complex();
  if (!(right.source().complex() == a) || !(right.target().complex() == b))
    throw SpaceMismatch("connect_lifts: the two lifts live over different complexes");
  const MultiMap<K> f1 = left.linear();
  const MultiMap<K> f2 = right.linear();
  if (!c) {
    c = solve_chain_homotopy(a, b, f2 - f1);
    if (!c) throw Error("connect_lifts: the linear parts are not chain homotopic");
  } else {
    const MultiMap<K> res = compose(b.differential(), *c) + compose(*c, a.differential()) - (f2 - f1);
    if (!res.is_zero()) {
      CheckReport r;
      collect_violations(r, "chain_homotopy", shift(res));
      throw VerificationFailure("connect_lifts: chain homotopy witness", r);
    }
  }
  const HomotopyEquivalenceData<K> w = find_witnesses(a, b, f1);

  SquareCertificate<K> cert;
  cert.left = left;
  cert.right = right;
  if (given.side == GivenIsotopy<K>::Side::source) {
    const AInfMorphism<K>& s = given.isotopy;
    if (!(s.source() == left.source()) || !(s.target() == right.source()))
      throw SpaceMismatch("connect_lifts: source isotopy has the wrong ends");
    const TransferStructureResult<K> t0 = transfer_structure(left.source(), b, w);
    const AInfMorphism<K>& g0 = t0.G;  // (B, nu0) -> (A, mu')
    StraighteningResult<K> t1 = straighten_to_isotopy(compose(left, g0), -*w.k);
    StraighteningResult<K> t2 = straighten_to_isotopy(compose(right, compose(s, g0)), -(*w.k + compose(*c, w.g)));
    cert.S = s;
    cert.T = compose(t2.isotopy, invert_isotopy(t1.isotopy));
  } else {
    const AInfMorphism<K>& t = given.isotopy;
    if (!(t.source() == left.target()) || !(t.target() == right.target()))
      throw SpaceMismatch("connect_lifts: target isotopy has the wrong ends");
    const TransferResult<K> back = full_transfer(left.target(), a, w.reversed());
    const AInfMorphism<K>& g1 = back.F;  // (B, nu') -> (A, mu1)
    StraighteningResult<K> s1 = straighten_to_isotopy(compose(g1, left), -w.h);
    StraighteningResult<K> s2 =
        straighten_to_isotopy(compose(g1, compose(invert_isotopy(t), right)), -(w.h + compose(w.g, *c)));
    cert.T = t;
    cert.S = compose(invert_isotopy(s2.isotopy), s1.isotopy);
  }
  cert.eta = detail::connecting_homotopy(compose(cert.T, left), compose(right, cert.S), *c);
  const CheckReport r = verify_certificate(cert);
  if (!r.passed) throw VerificationFailure("connect_lifts: certificate", r);
  return cert;
}

/// The composite of F : (A, mu) -> (B, nu') and Y : (B, nu'') -> (C, omega)
/// through an isotopy S : nu' -> nu''.
template <Field K>
AInfMorphism<K> compose_arrows(const AInfMorphism<K>& F, const AInfMorphism<K>& Y, const AInfMorphism<K>& S) {
  if (!is_isotopy(S)) throw Error("compose_arrows: S is not an isotopy");
  AInfMorphism<K> r = compose(Y, compose(S, F));
  require_verified(r, "compose_arrows");
  return r;
}

}  // namespace ainf
