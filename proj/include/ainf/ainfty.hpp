#pragma once

// A-infinity algebras, morphisms and homotopies in the unsuspended
// convention: mu_k has degree k-2, f_k degree k-1, h_k degree k. Each object
// stores its suspended cogenerating family, which is what every operation
// works on; the unsuspended components are produced on demand.

#include <map>
#include <string>
#include <utility>

#include "ainf/coalgebra.hpp"

namespace ainf {

/// Raised when a produced or supplied object fails one of the identity
/// checkers. Carries the full report.
class VerificationFailure : public Error {
 public:
  explicit VerificationFailure(const std::string& what, CheckReport report)
      : Error(what + ": " + report.summary()), report_(std::move(report)) {}
  const CheckReport& report() const { return report_; }

 private:
  CheckReport report_;
};

template <Field K>
class ChainComplex {
 public:
  ChainComplex() = default;
  ChainComplex(GradedSpace space, MultiMap<K> differential)
      : space_(std::move(space)), d_(std::move(differential)) {
    if (!(d_.source() == space_) || !(d_.target() == space_) || d_.arity() != 1 || d_.coarity() != 1)
      throw SpaceMismatch("differential is not an endomorphism of " + space_.name());
    if (d_.degree() != -1) throw ShapeError("differential must have degree -1");
    if (!compose(d_, d_).is_zero()) throw Error("differential of " + space_.name() + " does not square to zero");
  }

  static ChainComplex zero_differential(const GradedSpace& space) {
    return ChainComplex(space, MultiMap<K>(space, space, 1, -1));
  }

  const GradedSpace& space() const { return space_; }
  const MultiMap<K>& differential() const { return d_; }

  friend bool operator==(const ChainComplex& a, const ChainComplex& b) {
    return a.space_ == b.space_ && a.d_ == b.d_;
  }

 private:
  GradedSpace space_;
  MultiMap<K> d_;
};

template <Field K>
class AInfAlgebra {
 public:
  AInfAlgebra() = default;

  /// products: arity k >= 2 -> map of degree k - 2 on the complex's space.
  AInfAlgebra(const ChainComplex<K>& complex, const std::map<int, MultiMap<K>>& products, int truncation)
      : complex_(complex) {
    const GradedSpace v = complex.space().suspend();
    delta_ = CogeneratingFamily<K>(FamilyKind::coderivation, v, v, truncation);
    delta_.set(1, shift(complex.differential()));
    for (const auto& [k, m] : products) {
      if (k < 2) throw ShapeError("products start at arity 2");
      if (k > truncation) throw ShapeError("product of arity " + std::to_string(k) + " above the truncation");
      if (m.arity() != k) throw ShapeError("product stored under the wrong arity");
      if (!(m.source() == complex.space()) || !(m.target() == complex.space()))
        throw SpaceMismatch("product over the wrong space");
      if (m.degree() != k - 2)
        throw ShapeError("degree profile violation: product of arity " + std::to_string(k) + " has degree " +
                         std::to_string(m.degree()) + ", expected " + std::to_string(k - 2));
      delta_.set(k, shift(m));
    }
  }

  static AInfAlgebra from_shifted(const CogeneratingFamily<K>& delta) {
    if (delta.kind() != FamilyKind::coderivation) throw Error("an A-infinity structure needs a coderivation");
    AInfAlgebra a;
    a.complex_ = ChainComplex<K>(delta.source().desuspend(), unshift(delta.component_or_zero(1)));
    a.delta_ = delta;
    return a;
  }

  static AInfAlgebra trivial(const ChainComplex<K>& complex, int truncation) { return AInfAlgebra(complex, {}, truncation); }

  const ChainComplex<K>& complex() const { return complex_; }
  const GradedSpace& space() const { return complex_.space(); }
  int truncation() const { return delta_.truncation(); }

  MultiMap<K> mu(int k) const {
    if (k < 2) throw ShapeError("products start at arity 2");
    return unshift(delta_.component_or_zero(k));
  }
  std::map<int, MultiMap<K>> products() const {
    std::map<int, MultiMap<K>> r;
    for (const auto& [k, m] : delta_.components())
      if (k >= 2) r.emplace(k, unshift(m));
    return r;
  }

  const CogeneratingFamily<K>& shifted() const { return delta_; }

  AInfAlgebra truncated(int n) const { return from_shifted(delta_.truncated(n)); }

  friend bool operator==(const AInfAlgebra& a, const AInfAlgebra& b) {
    return a.complex_ == b.complex_ && a.delta_ == b.delta_;
  }

 private:
  ChainComplex<K> complex_;
  CogeneratingFamily<K> delta_;
};

template <Field K>
class AInfMorphism {
 public:
  AInfMorphism() = default;

  /// components: arity k >= 1 -> map source^{(x)k} -> target of degree k - 1.
  AInfMorphism(AInfAlgebra<K> source, AInfAlgebra<K> target, const std::map<int, MultiMap<K>>& components)
      : source_(std::move(source)), target_(std::move(target)) {
    require_truncations();
    phi_ = CogeneratingFamily<K>(FamilyKind::morphism, source_.space().suspend(), target_.space().suspend(),
                                 source_.truncation());
    for (const auto& [k, m] : components) {
      if (k < 1 || k > source_.truncation()) throw ShapeError("morphism component arity out of range");
      if (m.arity() != k) throw ShapeError("morphism component stored under the wrong arity");
      if (!(m.source() == source_.space()) || !(m.target() == target_.space()))
        throw SpaceMismatch("morphism component over the wrong spaces");
      if (m.degree() != k - 1)
        throw ShapeError("degree profile violation: morphism component of arity " + std::to_string(k) +
                         " has degree " + std::to_string(m.degree()) + ", expected " + std::to_string(k - 1));
      phi_.set(k, shift(m));
    }
  }

  AInfMorphism(AInfAlgebra<K> source, AInfAlgebra<K> target, CogeneratingFamily<K> phi)
      : source_(std::move(source)), target_(std::move(target)), phi_(std::move(phi)) {
    require_truncations();
    if (phi_.kind() != FamilyKind::morphism) throw Error("morphism family expected");
    if (!(phi_.source() == source_.space().suspend()) || !(phi_.target() == target_.space().suspend()))
      throw SpaceMismatch("morphism family over the wrong spaces");
    if (phi_.truncation() != source_.truncation()) throw ShapeError("morphism truncation differs from its algebras");
  }

  const AInfAlgebra<K>& source() const { return source_; }
  const AInfAlgebra<K>& target() const { return target_; }
  int truncation() const { return phi_.truncation(); }

  MultiMap<K> component(int k) const { return unshift(phi_.component_or_zero(k)); }
  MultiMap<K> linear() const { return component(1); }
  std::map<int, MultiMap<K>> components() const {
    std::map<int, MultiMap<K>> r;
    for (const auto& [k, m] : phi_.components()) r.emplace(k, unshift(m));
    return r;
  }

  const CogeneratingFamily<K>& shifted() const { return phi_; }

  friend bool operator==(const AInfMorphism& a, const AInfMorphism& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.phi_ == b.phi_;
  }

 private:
  void require_truncations() const {
    if (source_.truncation() != target_.truncation())
      throw ShapeError("source and target structures have different truncations");
  }

  AInfAlgebra<K> source_, target_;
  CogeneratingFamily<K> phi_;
};

/// A homotopy from `from` to `to`: to - from = delta'' eta + eta delta'.
template <Field K>
class AInfHomotopy {
 public:
  AInfHomotopy() = default;

  AInfHomotopy(AInfMorphism<K> from, AInfMorphism<K> to, const std::map<int, MultiMap<K>>& components)
      : from_(std::move(from)), to_(std::move(to)) {
    require_same_ends();
    eta_ = CogeneratingFamily<K>(FamilyKind::homotopy, from_.source().space().suspend(),
                                 from_.target().space().suspend(), from_.truncation());
    for (const auto& [k, m] : components) {
      if (k < 1 || k > from_.truncation()) throw ShapeError("homotopy component arity out of range");
      if (m.arity() != k) throw ShapeError("homotopy component stored under the wrong arity");
      if (!(m.source() == from_.source().space()) || !(m.target() == from_.target().space()))
        throw SpaceMismatch("homotopy component over the wrong spaces");
      if (m.degree() != k)
        throw ShapeError("degree profile violation: homotopy component of arity " + std::to_string(k) +
                         " has degree " + std::to_string(m.degree()) + ", expected " + std::to_string(k));
      eta_.set(k, shift(m));
    }
  }

  AInfHomotopy(AInfMorphism<K> from, AInfMorphism<K> to, CogeneratingFamily<K> eta)
      : from_(std::move(from)), to_(std::move(to)), eta_(std::move(eta)) {
    require_same_ends();
    if (eta_.kind() != FamilyKind::homotopy) throw Error("homotopy family expected");
    if (!(eta_.source() == from_.shifted().source()) || !(eta_.target() == from_.shifted().target()))
      throw SpaceMismatch("homotopy family over the wrong spaces");
    if (eta_.truncation() != from_.truncation()) throw ShapeError("homotopy truncation differs from its morphisms");
  }

  const AInfMorphism<K>& from() const { return from_; }
  const AInfMorphism<K>& to() const { return to_; }
  int truncation() const { return eta_.truncation(); }

  MultiMap<K> component(int k) const { return unshift(eta_.component_or_zero(k)); }
  std::map<int, MultiMap<K>> components() const {
    std::map<int, MultiMap<K>> r;
    for (const auto& [k, m] : eta_.components()) r.emplace(k, unshift(m));
    return r;
  }

  const CogeneratingFamily<K>& shifted() const { return eta_; }
  HomotopyFamily<K> family() const { return HomotopyFamily<K>{eta_, from_.shifted(), to_.shifted()}; }

  friend bool operator==(const AInfHomotopy& a, const AInfHomotopy& b) {
    return a.from_ == b.from_ && a.to_ == b.to_ && a.eta_ == b.eta_;
  }

 private:
  void require_same_ends() const {
    if (!(from_.source() == to_.source()) || !(from_.target() == to_.target()))
      throw SpaceMismatch("homotopy between morphisms with different ends");
  }

  AInfMorphism<K> from_, to_;
  CogeneratingFamily<K> eta_;
};

// ---------------------------------------------------------------------------

template <Field K>
const CogeneratingFamily<K>& to_shifted(const AInfAlgebra<K>& a) { return a.shifted(); }
template <Field K>
const CogeneratingFamily<K>& to_shifted(const AInfMorphism<K>& f) { return f.shifted(); }
template <Field K>
const CogeneratingFamily<K>& to_shifted(const AInfHomotopy<K>& h) { return h.shifted(); }

namespace detail {
template <Scalar K>
CheckReport audit_family(const CogeneratingFamily<K>& fam) {
  CheckReport r;
  for (const auto& [k, m] : fam.components()) {
    if (!m.audit_degrees()) {
      Violation v;
      v.equation = "degree_audit";
      v.arity = k;
      r.violations.push_back(v);
    }
  }
  r.passed = r.violations.empty();
  return r;
}
}  // namespace detail

template <Field K>
CheckReport verify(const AInfAlgebra<K>& a, int n_max) {
  CheckReport r = detail::audit_family(a.shifted());
  if (!r.passed) return r;
  return check_square_zero(a.shifted(), n_max);
}
template <Field K>
CheckReport verify(const AInfAlgebra<K>& a) { return verify(a, a.truncation()); }

template <Field K>
CheckReport verify(const AInfMorphism<K>& f, int n_max) {
  CheckReport r = detail::audit_family(f.shifted());
  if (!r.passed) return r;
  return check_morphism(f.shifted(), f.source().shifted(), f.target().shifted(), n_max);
}
template <Field K>
CheckReport verify(const AInfMorphism<K>& f) { return verify(f, f.truncation()); }

template <Field K>
CheckReport verify(const AInfHomotopy<K>& h, int n_max) {
  CheckReport r = detail::audit_family(h.shifted());
  if (!r.passed) return r;
  const HomotopyFamily<K> fam = h.family();
  return check_homotopy(fam, h.from().source().shifted(), h.from().target().shifted(), n_max);
}
template <Field K>
CheckReport verify(const AInfHomotopy<K>& h) { return verify(h, h.truncation()); }

template <class T>
void require_verified(const T& x, const std::string& what) {
  CheckReport r = verify(x);
  if (!r.passed) throw VerificationFailure(what, std::move(r));
}

// ---------------------------------------------------------------------------

/// second o first.
template <Field K>
AInfMorphism<K> compose(const AInfMorphism<K>& second, const AInfMorphism<K>& first) {
  if (first.truncation() != second.truncation()) throw ShapeError("compose: truncations differ");
  if (!(first.target() == second.source()))
    throw SpaceMismatch("compose: target of the first morphism is not the source of the second");
  return AInfMorphism<K>(first.source(), second.target(), compose_families(second.shifted(), first.shifted()));
}

template <Field K>
AInfMorphism<K> identity(const AInfAlgebra<K>& a) {
  return AInfMorphism<K>(a, a, CogeneratingFamily<K>::identity(a.space().suspend(), a.truncation()));
}

template <Field K>
bool is_isotopy(const AInfMorphism<K>& f) {
  return f.source().complex() == f.target().complex() &&
         is_identity_component(f.shifted().component(1), f.shifted().source());
}

template <Field K>
AInfMorphism<K> invert_isotopy(const AInfMorphism<K>& f) {
  if (!is_isotopy(f)) throw Error("invert_isotopy: not an isotopy");
  return AInfMorphism<K>(f.target(), f.source(), invert_isotopy(f.shifted()));
}

/// The structure nu making S : (A, mu) -> (A, nu) a morphism, where S is
/// given by its unsuspended components (S_1 must be the identity).
template <Field K>
AInfAlgebra<K> pushforward_along_isotopy(const AInfAlgebra<K>& a, const std::map<int, MultiMap<K>>& s_components) {
  AInfMorphism<K> s_shape(a, a, s_components);
  return pushforward_along_isotopy(a, s_shape.shifted());
}

template <Field K>
AInfAlgebra<K> pushforward_along_isotopy(const AInfAlgebra<K>& a, const CogeneratingFamily<K>& s) {
  if (!(s.source() == a.shifted().source()) || !(s.target() == a.shifted().source()))
    throw SpaceMismatch("pushforward: isotopy over the wrong space");
  if (s.truncation() != a.truncation()) throw ShapeError("pushforward: truncations differ");
  const CogeneratingFamily<K> s_inv = invert_isotopy(s);
  const CogeneratingFamily<K>& delta = a.shifted();
  CogeneratingFamily<K> nu(FamilyKind::coderivation, delta.source(), delta.target(), a.truncation());
  Expander<K> ex;
  const Expression<K> e = Expression<K>(s) * Expression<K>(delta) * Expression<K>(s_inv);
  for (int n = 1; n <= a.truncation(); ++n) nu.set(n, corestrict(ex, e, n));
  return AInfAlgebra<K>::from_shifted(nu);
}

/// The isotopy (A, mu) -> (A, pushforward) built from the same components.
template <Field K>
AInfMorphism<K> pushforward_isotopy(const AInfAlgebra<K>& a, const CogeneratingFamily<K>& s) {
  return AInfMorphism<K>(a, pushforward_along_isotopy(a, s), s);
}

}  // namespace ainf
