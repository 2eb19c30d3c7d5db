#pragma once

// Extending a chain map homotopic to the linear part of an A-infinity
// morphism to a full morphism, together with the homotopy. The higher
// homotopy components are free choices (zero by default).

#include <map>
#include <optional>
#include <utility>

#include "ainf/ainfty.hpp"
#include "ainf/random.hpp"

namespace ainf {

template <Field K>
struct ExtensionResult {
  AInfMorphism<K> psi;
  AInfHomotopy<K> eta;  // from the input morphism to psi
};

/// Given F : (A', mu') -> (A'', mu''), a chain map g and a degree +1 map h
/// with g = f + d h + h d (f = F_1), builds psi with psi_1 = g and a homotopy
/// eta from F to psi with eta_1 = h and eta_k = higher_h[k] for k >= 2.
template <Field K>
ExtensionResult<K> extend_homotopic_map(const AInfMorphism<K>& F, const MultiMap<K>& g, const MultiMap<K>& h,
                                        const std::map<int, MultiMap<K>>& higher_h = {}) {
  const int n_max = F.truncation();
  const CogeneratingFamily<K>& phi = F.shifted();
  const CogeneratingFamily<K>& d_src = F.source().shifted();
  const CogeneratingFamily<K>& d_tgt = F.target().shifted();

  HomotopyFamily<K> fam;
  fam.from = phi;
  fam.eta = CogeneratingFamily<K>(FamilyKind::homotopy, phi.source(), phi.target(), n_max);
  fam.to = CogeneratingFamily<K>(FamilyKind::morphism, phi.source(), phi.target(), n_max);
  if (g.arity() != 1 || g.degree() != 0) throw ShapeError("extend: g must be a degree 0 linear map");
  if (h.arity() != 1 || h.degree() != 1) throw ShapeError("extend: h must be a degree +1 linear map");
  fam.eta.set(1, shift(h));
  fam.to.set(1, shift(g));
  for (const auto& [k, m] : higher_h) {
    if (k < 2) throw ShapeError("higher homotopy components start at arity 2");
    if (m.degree() != k)
      throw ShapeError("degree profile violation: homotopy component of arity " + std::to_string(k) +
                       " has degree " + std::to_string(m.degree()) + ", expected " + std::to_string(k));
    if (k <= n_max) fam.eta.set(k, shift(m));
  }

  // The linear identity g = f + d h + h d.
  {
    CheckReport r = check_homotopy(fam, d_src, d_tgt, 1);
    if (!r.passed) {
      for (auto& v : r.violations) v.equation = "linear_homotopy";
      throw VerificationFailure("extend: g - f is not d h + h d", std::move(r));
    }
  }

  Expander<K> ex;
  const Expression<K> e = Expression<K>(phi) + Expression<K>(d_tgt) * Expression<K>(fam) + Expression<K>(fam) * Expression<K>(d_src);
  for (int n = 2; n <= n_max; ++n) fam.to.set(n, corestrict(ex, e, n));

  ExtensionResult<K> r{AInfMorphism<K>(F.source(), F.target(), fam.to), AInfHomotopy<K>()};
  r.eta = AInfHomotopy<K>(F, r.psi, fam.eta);
  require_verified(r.psi, "extend: constructed morphism");
  require_verified(r.eta, "extend: constructed homotopy");
  return r;
}

/// Random higher homotopy components of arities 2..n_max for maps
/// source -> target.
template <Field K>
std::map<int, MultiMap<K>> random_higher_homotopy(Rng& rng, const GradedSpace& source, const GradedSpace& target,
                                                  int n_max, const K& unit, double density = 0.3) {
  std::map<int, MultiMap<K>> r;
  for (int k = 2; k <= n_max; ++k) {
    MultiMap<K> m = random_map(rng, source, target, k, k, unit, density);
    if (!m.is_zero()) r.emplace(k, std::move(m));
  }
  return r;
}

template <Field K>
struct StraighteningResult {
  AInfMorphism<K> isotopy;
  AInfHomotopy<K> eta;  // from the input morphism to the isotopy
};

/// For E : (X, mu') -> (X, mu'') and h with 1 = e + d h + h d, an isotopy
/// T : (X, mu') -> (X, mu'') homotopic to E.
template <Field K>
StraighteningResult<K> straighten_to_isotopy(const AInfMorphism<K>& E, const MultiMap<K>& h,
                                             const std::map<int, MultiMap<K>>& higher_h = {}) {
  if (!(E.source().complex() == E.target().complex()))
    throw SpaceMismatch("straighten: source and target complexes differ");
  ExtensionResult<K> ext = extend_homotopic_map(E, MultiMap<K>::identity(E.source().space()), h, higher_h);
  return StraighteningResult<K>{std::move(ext.psi), std::move(ext.eta)};
}

}  // namespace ainf
