#pragma once

// Linear unknowns. Maps whose entries are affine forms in fresh variables
// are pushed through the same expansion engine; every nonzero entry of the
// resulting residual is one linear equation.

#include <optional>
#include <utility>
#include <vector>

#include "ainf/coalgebra.hpp"
#include "ainf/linear_solver.hpp"

namespace ainf {

template <Field K>
MultiMap<Affine<K>> to_affine(const MultiMap<K>& m) {
  return map_scalars<Affine<K>>(m, [](const K& x) { return Affine<K>(x); });
}

template <Field K>
CogeneratingFamily<Affine<K>> to_affine(const CogeneratingFamily<K>& fam) {
  CogeneratingFamily<Affine<K>> r(fam.kind(), fam.source(), fam.target(), fam.truncation());
  for (const auto& [k, m] : fam.components()) r.set(k, to_affine(m));
  return r;
}

/// Bookkeeping of variables: variable i sits at entry (in, out) of `slot`.
struct UnknownEntry {
  int slot;
  Code in;
  Code out;
};

template <Field K>
class UnknownRegistry {
 public:
  /// A map whose every degree-admissible entry is a fresh variable.
  MultiMap<Affine<K>> make(int slot, const GradedSpace& source, const GradedSpace& target, int arity, int degree) {
    MultiMap<Affine<K>> m(source, target, arity, degree);
    const Code n = code_power(source, arity);
    for (Code in = 0; in < n; ++in) {
      const int out_deg = tuple_degree(source, arity, in) + degree;
      for (int j = 0; j < target.dim(out_deg); ++j) {
        const Code out = static_cast<Code>(target.global_index(out_deg, j));
        m.add_code(in, out, Affine<K>::variable(static_cast<int>(entries_.size())));
        entries_.push_back(UnknownEntry{slot, in, out});
      }
    }
    return m;
  }

  int size() const { return static_cast<int>(entries_.size()); }
  const std::vector<UnknownEntry>& entries() const { return entries_; }

  /// Adds one equation per nonzero entry of `residual` (residual = 0).
  static void add_equations(LinearSystem<K>& sys, const MultiMap<Affine<K>>& residual) {
    for (const auto& [in, col] : residual.columns())
      for (const auto& [out, form] : col) {
        SparseRow<K> row(form.terms().begin(), form.terms().end());
        sys.add_equation(std::move(row), -form.constant());
      }
  }

  /// Reads the values of every variable of `slot` into a map of the given shape.
  MultiMap<K> read(int slot, const std::vector<K>& x, const GradedSpace& source, const GradedSpace& target, int arity,
                   int degree) const {
    MultiMap<K> m(source, target, arity, degree);
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (entries_[i].slot == slot) m.add_code(entries_[i].in, entries_[i].out, x[i]);
    return m;
  }

 private:
  std::vector<UnknownEntry> entries_;
};

/// Searches for eta with to - from = delta'' eta + eta delta' up to the
/// truncation, solving for all components jointly. When `linear` is given,
/// eta_1 is fixed to it. Returns nullopt when no such eta exists.
template <Field K>
std::optional<CogeneratingFamily<K>> solve_homotopy(const CogeneratingFamily<K>& from, const CogeneratingFamily<K>& to,
                                                    const CogeneratingFamily<K>& delta_source,
                                                    const CogeneratingFamily<K>& delta_target,
                                                    const std::optional<MultiMap<K>>& linear = std::nullopt) {
  using A = Affine<K>;
  const int n_max = from.truncation();
  const GradedSpace& v = from.source();
  const GradedSpace& w = from.target();

  UnknownRegistry<K> reg;
  HomotopyFamily<A> fam;
  fam.from = to_affine(from);
  fam.to = to_affine(to);
  fam.eta = CogeneratingFamily<A>(FamilyKind::homotopy, v, w, n_max);
  // Highest arity first: the solver prefers pivots on low-numbered variables
  // and sets the rest to zero.
  for (int k = n_max; k >= 1; --k) {
    if (k == 1 && linear) {
      fam.eta.set(1, to_affine(*linear));
      continue;
    }
    fam.eta.set(k, reg.make(k, v, w, k, 1));
  }
  const CogeneratingFamily<A> ds = to_affine(delta_source);
  const CogeneratingFamily<A> dt = to_affine(delta_target);

  LinearSystem<K> sys(reg.size());
  Expander<A> ex;
  const Expression<A> e = Expression<A>(fam.to) - Expression<A>(fam.from) - Expression<A>(dt) * Expression<A>(fam) -
                          Expression<A>(fam) * Expression<A>(ds);
  for (int n = 1; n <= n_max; ++n) {
    UnknownRegistry<K>::add_equations(sys, corestrict(ex, e, n));
    if (!sys.consistent()) return std::nullopt;
  }
  const auto x = sys.solve();
  if (!x) return std::nullopt;

  CogeneratingFamily<K> eta(FamilyKind::homotopy, v, w, n_max);
  for (int k = 1; k <= n_max; ++k) {
    if (k == 1 && linear) {
      eta.set(1, *linear);
      continue;
    }
    eta.set(k, reg.read(k, *x, v, w, k, 1));
  }
  return eta;
}

}  // namespace ainf
