#pragma once

// Tensor-coalgebra picture of A-infinity notions. Families of maps on a
// suspended space V cogenerate coderivations (degree -1), coalgebra
// morphisms (degree 0) and coderivation homotopies (degree +1) on T^c(V).
// The coproduct is never built; every identity is evaluated through the
// closed-form component expansions below and projected back to V.

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ainf/multimap.hpp"

namespace ainf {

enum class FamilyKind { coderivation, morphism, homotopy };

inline const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::coderivation: return "coderivation";
    case FamilyKind::morphism: return "morphism";
    case FamilyKind::homotopy: return "homotopy";
  }
  return "?";
}

/// Uniform degree of every component in the suspended picture.
constexpr int shifted_degree(FamilyKind k) {
  return k == FamilyKind::coderivation ? -1 : (k == FamilyKind::morphism ? 0 : 1);
}

template <Scalar K>
class CogeneratingFamily {
 public:
  CogeneratingFamily() = default;
  CogeneratingFamily(FamilyKind kind, GradedSpace source, GradedSpace target, int truncation)
      : kind_(kind), source_(std::move(source)), target_(std::move(target)), truncation_(truncation) {
    if (truncation < 1) throw ShapeError("truncation must be >= 1");
    if (kind == FamilyKind::coderivation && !(source_ == target_))
      throw SpaceMismatch("a coderivation needs equal source and target");
  }

  static CogeneratingFamily identity(const GradedSpace& v, int truncation) {
    CogeneratingFamily f(FamilyKind::morphism, v, v, truncation);
    f.set(1, MultiMap<K>::identity(v));
    return f;
  }

  FamilyKind kind() const { return kind_; }
  const GradedSpace& source() const { return source_; }
  const GradedSpace& target() const { return target_; }
  int truncation() const { return truncation_; }
  int degree() const { return shifted_degree(kind_); }

  const std::map<int, MultiMap<K>>& components() const { return components_; }

  /// nullptr when the component is absent (zero).
  const MultiMap<K>* component(int n) const {
    auto it = components_.find(n);
    return it == components_.end() ? nullptr : &it->second;
  }
  MultiMap<K> component_or_zero(int n) const {
    if (const auto* c = component(n)) return *c;
    return zero_component(n);
  }
  MultiMap<K> zero_component(int n) const { return MultiMap<K>(source_, target_, n, degree()); }

  void set(int n, MultiMap<K> m) {
    if (n < 1 || n > truncation_)
      throw ShapeError("component arity " + std::to_string(n) + " outside 1.." + std::to_string(truncation_));
    if (m.arity() != n || m.coarity() != 1) throw ShapeError("component has wrong arity");
    if (!(m.source() == source_) || !(m.target() == target_)) throw SpaceMismatch("component over the wrong spaces");
    if (m.degree() != degree())
      throw ShapeError(std::string("degree profile violation: ") + to_string(kind_) + " component of arity " +
                       std::to_string(n) + " has degree " + std::to_string(m.degree()) + ", expected " +
                       std::to_string(degree()));
    if (m.is_zero()) {
      components_.erase(n);
    } else {
      components_[n] = std::move(m);
    }
  }

  CogeneratingFamily truncated(int n) const {
    CogeneratingFamily r(kind_, source_, target_, n);
    for (const auto& [k, m] : components_)
      if (k <= n) r.components_[k] = m;
    return r;
  }

  friend bool operator==(const CogeneratingFamily& a, const CogeneratingFamily& b) {
    return a.kind_ == b.kind_ && a.source_ == b.source_ && a.target_ == b.target_ &&
           a.truncation_ == b.truncation_ && a.components_ == b.components_;
  }

 private:
  FamilyKind kind_ = FamilyKind::morphism;
  GradedSpace source_, target_;
  int truncation_ = 1;
  std::map<int, MultiMap<K>> components_;
};

/// A coderivation homotopy eta relative to the morphisms (from, to):
/// Delta eta = (to (x) eta + eta (x) from) Delta, and it certifies
/// to - from = delta'' eta + eta delta'.
template <Scalar K>
struct HomotopyFamily {
  CogeneratingFamily<K> eta;
  CogeneratingFamily<K> from;
  CogeneratingFamily<K> to;
};

// ---------------------------------------------------------------------------
// Component expansions.

/// Computes the V^{(x)n} -> W^{(x)m} components of the coalgebra maps
/// extended from cogenerating families, memoizing by family address. The
/// families must stay alive and unmodified in the components already
/// requested; arity-1 projections are never cached.
template <Scalar K>
class Expander {
 public:
  /// sum_i 1^{i-1} (x) d_{n-m+1} (x) 1^{m-i}
  MultiMap<K> coderivation(const CogeneratingFamily<K>& d, int n, int m) {
    check_range(n, m, d.truncation());
    if (m == 1) return d.component_or_zero(n);
    const auto key = std::make_tuple(static_cast<const void*>(&d), n, m, 0);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    MultiMap<K> r(d.source(), d.target(), n, d.degree(), m);
    if (const auto* dl = d.component(n - m + 1)) {
      for (int i = 1; i <= m; ++i) {
        MultiMap<K> term = *dl;
        if (i > 1) term = tensor(identity_power<K>(d.source(), i - 1), term);
        if (i < m) term = tensor(term, identity_power<K>(d.source(), m - i));
        r += term;
      }
    }
    return cache_.emplace(key, std::move(r)).first->second;
  }

  /// sum over compositions n = r_1 + ... + r_m of f_{r_1} (x) ... (x) f_{r_m}
  MultiMap<K> morphism(const CogeneratingFamily<K>& f, int n, int m) {
    check_range(n, m, f.truncation());
    if (m == 1) return f.component_or_zero(n);
    const auto key = std::make_tuple(static_cast<const void*>(&f), n, m, 1);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    MultiMap<K> r(f.source(), f.target(), n, f.degree(), m);
    for (int first = 1; first <= n - m + 1; ++first) {
      const auto* fr = f.component(first);
      if (!fr) continue;
      MultiMap<K> rest = morphism(f, n - first, m - 1);
      if (rest.is_zero()) continue;
      r += tensor(*fr, rest);
    }
    return cache_.emplace(key, std::move(r)).first->second;
  }

  /// sum over compositions and slots i of
  /// to_{r_1} (x) ... (x) to_{r_{i-1}} (x) h_{r_i} (x) from_{r_{i+1}} (x) ... (x) from_{r_m}
  MultiMap<K> homotopy(const HomotopyFamily<K>& h, int n, int m) {
    check_range(n, m, h.eta.truncation());
    if (m == 1) return h.eta.component_or_zero(n);
    const auto key = std::make_tuple(static_cast<const void*>(&h.eta), n, m, 2);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    MultiMap<K> r(h.eta.source(), h.eta.target(), n, h.eta.degree(), m);
    for (int first = 1; first <= n - m + 1; ++first) {
      if (const auto* hr = h.eta.component(first)) {
        MultiMap<K> rest = morphism(h.from, n - first, m - 1);
        if (!rest.is_zero()) r += tensor(*hr, rest);
      }
      if (const auto* tr = h.to.component(first)) {
        MultiMap<K> rest = homotopy(h, n - first, m - 1);
        if (!rest.is_zero()) r += tensor(*tr, rest);
      }
    }
    return cache_.emplace(key, std::move(r)).first->second;
  }

  void clear() { cache_.clear(); }

 private:
  static void check_range(int n, int m, int truncation) {
    if (m < 1 || m > n || n > truncation)
      throw ShapeError("expansion component " + std::to_string(n) + " -> " + std::to_string(m) +
                       " out of range (truncation " + std::to_string(truncation) + ")");
  }

  std::map<std::tuple<const void*, int, int, int>, MultiMap<K>> cache_;
};

// ---------------------------------------------------------------------------
// Formal sums of composites of extended families.

template <Scalar K>
struct Factor {
  const CogeneratingFamily<K>* family = nullptr;
  const HomotopyFamily<K>* homotopy = nullptr;

  const CogeneratingFamily<K>& base() const { return homotopy ? homotopy->eta : *family; }
};

/// Non-owning: the referenced families must outlive the expression.
template <Scalar K>
class Expression {
 public:
  struct Term {
    K coefficient;
    std::vector<Factor<K>> factors;  // factors[0] is applied last
  };

  Expression() = default;
  Expression(const CogeneratingFamily<K>& f) {  // NOLINT(google-explicit-constructor)
    if (f.kind() == FamilyKind::homotopy) throw Error("homotopy factors need their bordering morphisms");
    terms_.push_back(Term{K::from_int(1), {Factor<K>{&f, nullptr}}});
  }
  Expression(const HomotopyFamily<K>& h) {  // NOLINT(google-explicit-constructor)
    terms_.push_back(Term{K::from_int(1), {Factor<K>{nullptr, &h}}});
  }

  const std::vector<Term>& terms() const { return terms_; }

  /// Composition a o b.
  friend Expression operator*(const Expression& a, const Expression& b) {
    Expression r;
    for (const auto& ta : a.terms_)
      for (const auto& tb : b.terms_) {
        Term t{ta.coefficient * tb.coefficient, ta.factors};
        t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
        r.terms_.push_back(std::move(t));
      }
    return r;
  }
  friend Expression operator+(Expression a, const Expression& b) {
    a.terms_.insert(a.terms_.end(), b.terms_.begin(), b.terms_.end());
    return a;
  }
  friend Expression operator-(Expression a, const Expression& b) { return a + b.scaled(K::from_int(-1)); }
  Expression scaled(const K& s) const {
    Expression r = *this;
    for (auto& t : r.terms_) t.coefficient = t.coefficient * s;
    return r;
  }

 private:
  std::vector<Term> terms_;
};

namespace detail {

template <Scalar K>
MultiMap<K> expand_factor(Expander<K>& ex, const Factor<K>& f, int n, int m) {
  if (f.homotopy) return ex.homotopy(*f.homotopy, n, m);
  if (f.family->kind() == FamilyKind::coderivation) return ex.coderivation(*f.family, n, m);
  return ex.morphism(*f.family, n, m);
}

template <Scalar K>
MultiMap<K> expand_chain(Expander<K>& ex, std::span<const Factor<K>> chain, int n, int m) {
  if (chain.size() == 1) return expand_factor(ex, chain[0], n, m);
  const auto& outer = chain[0].base();
  const auto& inner = chain.back().base();
  int degree = 0;
  for (const auto& f : chain) degree += f.base().degree();
  MultiMap<K> r(inner.source(), outer.target(), n, degree, m);
  for (int l = m; l <= n; ++l) {
    MultiMap<K> left = expand_factor(ex, chain[0], l, m);
    if (left.is_zero()) continue;
    MultiMap<K> right = expand_chain(ex, chain.subspan(1), n, l);
    if (right.is_zero()) continue;
    r += compose(left, right);
  }
  return r;
}

}  // namespace detail

/// The V^{(x)n} -> W^{(x)m} component of a formal sum of composites.
template <Scalar K>
MultiMap<K> component(Expander<K>& ex, const Expression<K>& e, int n, int m) {
  if (e.terms().empty()) throw Error("component of an empty expression");
  std::optional<MultiMap<K>> acc;
  for (const auto& t : e.terms()) {
    MultiMap<K> c = detail::expand_chain(ex, std::span<const Factor<K>>(t.factors), n, m);
    if (!(t.coefficient == K::from_int(1))) c = c.scaled(t.coefficient);
    if (!acc) {
      acc = std::move(c);
    } else {
      *acc += c;
    }
  }
  return *acc;
}

/// Projection of a composite to its V^{(x)n} -> W component.
template <Scalar K>
MultiMap<K> corestrict(Expander<K>& ex, const Expression<K>& e, int n) {
  return component(ex, e, n, 1);
}

template <Scalar K>
MultiMap<K> corestrict(const Expression<K>& e, int n) {
  Expander<K> ex;
  return component(ex, e, n, 1);
}

// ---------------------------------------------------------------------------
// Identity checkers.

struct Violation {
  std::string equation;
  int arity = 0;
  std::vector<int> degrees;  // unsuspended degrees of the input basis tuple
  std::vector<int> basis;    // local indices within those degrees
  int output_degree = 0;
  int output_index = 0;
  std::string value;  // lhs - rhs
};

struct CheckReport {
  bool passed = true;
  std::vector<Violation> violations;

  const Violation* first() const { return violations.empty() ? nullptr : &violations.front(); }

  void merge(const CheckReport& o) {
    violations.insert(violations.end(), o.violations.begin(), o.violations.end());
    passed = violations.empty();
  }

  std::string summary() const {
    if (passed) return "passed";
    const Violation& v = violations.front();
    std::ostringstream os;
    os << v.equation << " violated at arity " << v.arity << ", degrees (";
    for (std::size_t i = 0; i < v.degrees.size(); ++i) os << (i ? "," : "") << v.degrees[i];
    os << "), basis (";
    for (std::size_t i = 0; i < v.basis.size(); ++i) os << (i ? "," : "") << v.basis[i];
    os << ") -> output " << v.output_index << " in degree " << v.output_degree << ": lhs-rhs = " << v.value;
    os << " [" << violations.size() << " violation(s)]";
    return os.str();
  }
};

template <Scalar K>
std::string scalar_to_string(const K& k) {
  return k.to_string();
}

/// Appends every nonzero entry of a residual (V^{(x)n} -> W, suspended
/// spaces) to the report, ordered by input tuple then output.
template <Scalar K>
void collect_violations(CheckReport& report, const std::string& equation, const MultiMap<K>& residual) {
  const GradedSpace& v = residual.source();
  const GradedSpace& w = residual.target();
  for (const auto& [in, col] : residual.columns()) {
    const std::vector<int> t = decode_tuple(v, residual.arity(), in);
    for (const auto& [out, x] : col) {
      Violation viol;
      viol.equation = equation;
      viol.arity = residual.arity();
      for (int g : t) {
        viol.degrees.push_back(v.degree_of(g) - v.shift());
        viol.basis.push_back(v.local_index(g));
      }
      viol.output_degree = w.degree_of(static_cast<int>(out)) - w.shift();
      viol.output_index = w.local_index(static_cast<int>(out));
      viol.value = scalar_to_string(x);
      report.violations.push_back(std::move(viol));
    }
  }
  report.passed = report.violations.empty();
}

namespace detail {
inline void require_truncation(int n, int available) {
  if (n > available)
    throw ShapeError("check up to arity " + std::to_string(n) + " exceeds truncation " + std::to_string(available));
}
}  // namespace detail

/// delta o delta = 0, corestricted to every arity <= n_max.
template <Scalar K>
CheckReport check_square_zero(const CogeneratingFamily<K>& delta, int n_max) {
  if (delta.kind() != FamilyKind::coderivation) throw Error("check_square_zero needs a coderivation");
  detail::require_truncation(n_max, delta.truncation());
  Expander<K> ex;
  const Expression<K> e = Expression<K>(delta) * Expression<K>(delta);
  CheckReport report;
  for (int n = 1; n <= n_max; ++n) collect_violations(report, "square_zero", corestrict(ex, e, n));
  return report;
}

/// delta'' o phi = phi o delta'.
template <Scalar K>
CheckReport check_morphism(const CogeneratingFamily<K>& phi, const CogeneratingFamily<K>& delta_source,
                           const CogeneratingFamily<K>& delta_target, int n_max) {
  if (phi.kind() != FamilyKind::morphism) throw Error("check_morphism needs a morphism family");
  if (!(delta_source.source() == phi.source()) || !(delta_target.source() == phi.target()))
    throw SpaceMismatch("check_morphism: coderivations over the wrong spaces");
  detail::require_truncation(n_max, std::min({phi.truncation(), delta_source.truncation(), delta_target.truncation()}));
  Expander<K> ex;
  const Expression<K> e = Expression<K>(delta_target) * Expression<K>(phi) - Expression<K>(phi) * Expression<K>(delta_source);
  CheckReport report;
  for (int n = 1; n <= n_max; ++n) collect_violations(report, "morphism", corestrict(ex, e, n));
  return report;
}

/// to - from = delta'' eta + eta delta'.
template <Scalar K>
CheckReport check_homotopy(const HomotopyFamily<K>& h, const CogeneratingFamily<K>& delta_source,
                           const CogeneratingFamily<K>& delta_target, int n_max) {
  if (h.eta.kind() != FamilyKind::homotopy || h.from.kind() != FamilyKind::morphism ||
      h.to.kind() != FamilyKind::morphism)
    throw Error("check_homotopy: wrong family kinds");
  if (!(h.from.source() == h.eta.source()) || !(h.to.source() == h.eta.source()) ||
      !(h.from.target() == h.eta.target()) || !(h.to.target() == h.eta.target()) ||
      !(delta_source.source() == h.eta.source()) || !(delta_target.source() == h.eta.target()))
    throw SpaceMismatch("check_homotopy: families over different spaces");
  detail::require_truncation(n_max, std::min({h.eta.truncation(), h.from.truncation(), h.to.truncation(),
                                              delta_source.truncation(), delta_target.truncation()}));
  Expander<K> ex;
  const Expression<K> e = Expression<K>(h.to) - Expression<K>(h.from) - Expression<K>(delta_target) * Expression<K>(h) -
                          Expression<K>(h) * Expression<K>(delta_source);
  CheckReport report;
  for (int n = 1; n <= n_max; ++n) collect_violations(report, "homotopy", corestrict(ex, e, n));
  return report;
}

// ---------------------------------------------------------------------------
// Operations on morphism and homotopy families.

/// Cogenerators of the composite coalgebra morphism outer o inner:
/// (outer o inner)_n = sum_m outer_m o inner^{(n -> m)}.
template <Scalar K>
CogeneratingFamily<K> compose_families(const CogeneratingFamily<K>& outer, const CogeneratingFamily<K>& inner) {
  if (outer.kind() != FamilyKind::morphism || inner.kind() != FamilyKind::morphism)
    throw Error("compose_families needs morphism families");
  if (!(inner.target() == outer.source())) throw SpaceMismatch("compose_families: spaces do not match");
  if (outer.truncation() != inner.truncation()) throw ShapeError("compose_families: truncations differ");
  const int n_max = outer.truncation();
  CogeneratingFamily<K> r(FamilyKind::morphism, inner.source(), outer.target(), n_max);
  Expander<K> ex;
  const Expression<K> e = Expression<K>(outer) * Expression<K>(inner);
  for (int n = 1; n <= n_max; ++n) r.set(n, corestrict(ex, e, n));
  return r;
}

template <Scalar K>
bool is_identity_component(const MultiMap<K>* c, const GradedSpace& v) {
  if (!c) return false;
  return *c == MultiMap<K>::identity(v);
}

/// Two-sided inverse of a morphism family whose linear part is the identity.
template <Scalar K>
CogeneratingFamily<K> invert_isotopy(const CogeneratingFamily<K>& psi) {
  if (psi.kind() != FamilyKind::morphism || !(psi.source() == psi.target()) ||
      !is_identity_component(psi.component(1), psi.source()))
    throw Error("invert_isotopy: linear part is not the identity");
  const int n_max = psi.truncation();
  CogeneratingFamily<K> inv = CogeneratingFamily<K>::identity(psi.source(), n_max);
  Expander<K> ex;
  for (int n = 2; n <= n_max; ++n) {
    MultiMap<K> acc(psi.source(), psi.target(), n, 0);
    for (int m = 1; m < n; ++m) {
      const auto* im = inv.component(m);
      if (!im) continue;
      MultiMap<K> expanded = ex.morphism(psi, n, m);
      if (!expanded.is_zero()) acc += compose(*im, expanded);
    }
    inv.set(n, -acc);
  }
  return inv;
}

enum class WhiskerSide { pre, post };

/// pre:  eta o xi, a homotopy rel (from o xi, to o xi);
/// post: xi o eta, a homotopy rel (xi o from, xi o to).
/// xi must commute with the coderivations on its source and target.
template <Scalar K>
HomotopyFamily<K> whisker(const HomotopyFamily<K>& h, const CogeneratingFamily<K>& xi, WhiskerSide side,
                          const CogeneratingFamily<K>& xi_source_delta, const CogeneratingFamily<K>& xi_target_delta) {
  const int n_max = h.eta.truncation();
  if (xi.truncation() != n_max) throw ShapeError("whisker: truncations differ");
  const CheckReport ok = check_morphism(xi, xi_source_delta, xi_target_delta, n_max);
  if (!ok.passed) throw Error("whisker: the whiskering family is not a morphism: " + ok.summary());
  HomotopyFamily<K> r;
  Expander<K> ex;
  if (side == WhiskerSide::pre) {
    if (!(xi.target() == h.eta.source())) throw SpaceMismatch("whisker(pre): spaces do not match");
    r.eta = CogeneratingFamily<K>(FamilyKind::homotopy, xi.source(), h.eta.target(), n_max);
    const Expression<K> e = Expression<K>(h) * Expression<K>(xi);
    for (int n = 1; n <= n_max; ++n) r.eta.set(n, corestrict(ex, e, n));
    r.from = compose_families(h.from, xi);
    r.to = compose_families(h.to, xi);
  } else {
    if (!(xi.source() == h.eta.target())) throw SpaceMismatch("whisker(post): spaces do not match");
    r.eta = CogeneratingFamily<K>(FamilyKind::homotopy, h.eta.source(), xi.target(), n_max);
    const Expression<K> e = Expression<K>(xi) * Expression<K>(h);
    for (int n = 1; n <= n_max; ++n) r.eta.set(n, corestrict(ex, e, n));
    r.from = compose_families(xi, h.from);
    r.to = compose_families(xi, h.to);
  }
  return r;
}

}  // namespace ainf
