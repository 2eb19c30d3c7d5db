#pragma once

// Transfer of A-infinity structures along chain homotopy equivalences, and
// the chain-level tools to decide equivalence and produce witnesses.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ainf/extension.hpp"
#include "ainf/homotopy_search.hpp"
#include "ainf/planar_trees.hpp"

namespace ainf {

/// f : A -> B, g : B -> A chain maps; h on A and k on B of degree +1 with
/// g f - 1 = d h + h d and f g - 1 = d k + k d.
template <Field K>
struct HomotopyEquivalenceData {
  MultiMap<K> f;
  MultiMap<K> g;
  MultiMap<K> h;
  std::optional<MultiMap<K>> k;

  /// The same data seen from B: maps (g, f) with homotopies (k, h).
  HomotopyEquivalenceData reversed() const {
    if (!k) throw Error("reversing equivalence data needs the homotopy on the target");
    return HomotopyEquivalenceData{g, f, *k, h};
  }
};

namespace detail {

template <Field K>
void require_linear(const MultiMap<K>& m, const GradedSpace& src, const GradedSpace& tgt, int degree,
                    const char* what) {
  if (m.arity() != 1 || m.coarity() != 1 || !(m.source() == src) || !(m.target() == tgt) || m.degree() != degree)
    throw SpaceMismatch(std::string("equivalence data: ") + what + " has the wrong shape");
}

template <Field K>
CheckReport linear_residual(const std::string& tag, const MultiMap<K>& residual) {
  CheckReport r;
  collect_violations(r, tag, residual);
  return r;
}

}  // namespace detail

/// Checks shapes and the linear identities of the data.
template <Field K>
CheckReport check_equivalence_data(const ChainComplex<K>& a, const ChainComplex<K>& b,
                                   const HomotopyEquivalenceData<K>& data) {
  const GradedSpace& sa = a.space();
  const GradedSpace& sb = b.space();
  detail::require_linear(data.f, sa, sb, 0, "f");
  detail::require_linear(data.g, sb, sa, 0, "g");
  detail::require_linear(data.h, sa, sa, 1, "h");
  if (data.k) detail::require_linear(*data.k, sb, sb, 1, "k");
  const auto& da = a.differential();
  const auto& db = b.differential();
  CheckReport r;
  r.merge(detail::linear_residual("chain_map_f", compose(db, data.f) - compose(data.f, da)));
  r.merge(detail::linear_residual("chain_map_g", compose(da, data.g) - compose(data.g, db)));
  r.merge(detail::linear_residual("homotopy_h", compose(data.g, data.f) - MultiMap<K>::identity(sa) -
                                                    compose(da, data.h) - compose(data.h, da)));
  if (data.k)
    r.merge(detail::linear_residual("homotopy_k", compose(data.f, data.g) - MultiMap<K>::identity(sb) -
                                                      compose(db, *data.k) - compose(*data.k, db)));
  return r;
}

// ---------------------------------------------------------------------------
// Chain level.

/// Rank of a linear map, exactly.
template <Field K>
int rank(const MultiMap<K>& m) {
  if (m.arity() != 1 || m.coarity() != 1) throw ShapeError("rank of a multilinear map");
  std::vector<SparseRow<K>> rows;
  for (const auto& [in, col] : m.columns()) {
    SparseRow<K> row;
    for (const auto& [out, x] : col) row.emplace_back(static_cast<int>(out), x);
    rows.push_back(std::move(row));
  }
  return matrix_rank(rows, m.target().dim());
}

/// Homology dimensions per degree (degrees with zero homology omitted).
template <Field K>
std::map<int, int> homology_dims(const ChainComplex<K>& c) {
  const GradedSpace& s = c.space();
  std::map<int, int> rank_out;  // rank of d restricted to degree n
  std::map<int, std::vector<SparseRow<K>>> rows;
  for (const auto& [in, col] : c.differential().columns()) {
    SparseRow<K> row;
    for (const auto& [out, x] : col) row.emplace_back(static_cast<int>(out), x);
    rows[s.degree_of(static_cast<int>(in))].push_back(std::move(row));
  }
  for (const auto& [deg, rs] : rows) rank_out[deg] = matrix_rank(rs, s.dim());
  std::map<int, int> h;
  for (const auto& [deg, d] : s.dims()) {
    const int out = rank_out.count(deg) ? rank_out[deg] : 0;
    const int in = rank_out.count(deg + 1) ? rank_out[deg + 1] : 0;
    const int hd = d - out - in;
    if (hd) h[deg] = hd;
  }
  return h;
}

/// Mapping cone of f : A -> B: Cone_n = A_{n-1} + B_n, d(a, b) = (-da, f a + db).
template <Field K>
ChainComplex<K> mapping_cone(const ChainComplex<K>& a, const ChainComplex<K>& b, const MultiMap<K>& f) {
  const GradedSpace& sa = a.space();
  const GradedSpace& sb = b.space();
  std::map<int, int> dims;
  for (const auto& [deg, d] : sa.dims()) dims[deg + 1] += d;
  for (const auto& [deg, d] : sb.dims()) dims[deg] += d;
  const GradedSpace cone("cone(" + sa.name() + "," + sb.name() + ")", dims);
  auto a_index = [&](int g) { return cone.global_index(sa.degree_of(g) + 1, sa.local_index(g)); };
  auto b_index = [&](int g) {
    return cone.global_index(sb.degree_of(g), sa.dim(sb.degree_of(g) - 1) + sb.local_index(g));
  };
  MultiMap<K> d(cone, cone, 1, -1);
  for (const auto& [in, col] : a.differential().columns())
    for (const auto& [out, x] : col)
      d.add_code(static_cast<Code>(a_index(static_cast<int>(in))), static_cast<Code>(a_index(static_cast<int>(out))), -x);
  for (const auto& [in, col] : f.columns())
    for (const auto& [out, x] : col)
      d.add_code(static_cast<Code>(a_index(static_cast<int>(in))), static_cast<Code>(b_index(static_cast<int>(out))), x);
  for (const auto& [in, col] : b.differential().columns())
    for (const auto& [out, x] : col)
      d.add_code(static_cast<Code>(b_index(static_cast<int>(in))), static_cast<Code>(b_index(static_cast<int>(out))), x);
  return ChainComplex<K>(cone, d);
}

/// True iff f is a chain map whose mapping cone is acyclic.
template <Field K>
bool check_chain_equivalence(const ChainComplex<K>& a, const ChainComplex<K>& b, const MultiMap<K>& f) {
  detail::require_linear(f, a.space(), b.space(), 0, "f");
  if (!(compose(b.differential(), f) - compose(f, a.differential())).is_zero()) return false;
  return homology_dims(mapping_cone(a, b, f)).empty();
}

/// Solves for (g, h, k) by one exact linear system. Variables of g come
/// first, then h, then k; free variables are zero.
template <Field K>
HomotopyEquivalenceData<K> find_witnesses(const ChainComplex<K>& a, const ChainComplex<K>& b, const MultiMap<K>& f) {
  using A = Affine<K>;
  const GradedSpace& sa = a.space();
  const GradedSpace& sb = b.space();
  detail::require_linear(f, sa, sb, 0, "f");
  if (!(compose(b.differential(), f) - compose(f, a.differential())).is_zero())
    throw Error("find_witnesses: f is not a chain map");
  UnknownRegistry<K> reg;
  const MultiMap<A> g = reg.make(0, sb, sa, 1, 0);
  const MultiMap<A> h = reg.make(1, sa, sa, 1, 1);
  const MultiMap<A> k = reg.make(2, sb, sb, 1, 1);
  const MultiMap<A> fa = to_affine(f);
  const MultiMap<A> da = to_affine(a.differential());
  const MultiMap<A> db = to_affine(b.differential());
  LinearSystem<K> sys(reg.size());
  UnknownRegistry<K>::add_equations(sys, compose(da, g) - compose(g, db));
  UnknownRegistry<K>::add_equations(sys, compose(g, fa) - MultiMap<A>::identity(sa) - compose(da, h) - compose(h, da));
  UnknownRegistry<K>::add_equations(sys, compose(fa, g) - MultiMap<A>::identity(sb) - compose(db, k) - compose(k, db));
  const auto x = sys.solve();
  if (!x) throw Error("find_witnesses: f is not a chain homotopy equivalence");
  HomotopyEquivalenceData<K> r{f, reg.read(0, *x, sb, sa, 1, 0), reg.read(1, *x, sa, sa, 1, 1),
                               reg.read(2, *x, sb, sb, 1, 1)};
  const CheckReport ok = check_equivalence_data(a, b, r);
  if (!ok.passed) throw VerificationFailure("find_witnesses: solution does not verify", ok);
  return r;
}

/// Solves d c + c d = target for a degree +1 map c on `space` pairs
/// (source complex a, target complex b); nullopt when impossible.
template <Field K>
std::optional<MultiMap<K>> solve_chain_homotopy(const ChainComplex<K>& a, const ChainComplex<K>& b,
                                                const MultiMap<K>& target) {
  using A = Affine<K>;
  UnknownRegistry<K> reg;
  const MultiMap<A> c = reg.make(0, a.space(), b.space(), 1, 1);
  LinearSystem<K> sys(reg.size());
  UnknownRegistry<K>::add_equations(
      sys, compose(to_affine(b.differential()), c) + compose(c, to_affine(a.differential())) - to_affine(target));
  const auto x = sys.solve();
  if (!x) return std::nullopt;
  return reg.read(0, *x, a.space(), b.space(), 1, 1);
}

// ---------------------------------------------------------------------------
// Transfer.

template <Field K>
struct TransferStructureResult {
  AInfAlgebra<K> nu;   // on B
  AInfMorphism<K> G;   // (B, nu) -> (A, mu), G_1 = g
};

/// Sum over planar trees with n leaves of the decorated composite
/// b_k (X_1 (x) ... (x) X_k) g^{(x)n}, X = 1 on leaves and h o (subtree) on
/// internal edges. Evaluated tree by tree; used to cross-check the
/// recursive evaluation in transfer_structure.
template <Field K>
MultiMap<K> tree_sum(const CogeneratingFamily<K>& delta, const MultiMap<K>& h_shifted, const MultiMap<K>& g_shifted,
                     int n) {
  MultiMap<K> sum(g_shifted.source(), delta.target(), n, -1);
  auto vertex = [&](int k) { return delta.component(k); };
  for (const auto& t : planar_trees(n)) sum += evaluate_tree<K>(t, vertex, h_shifted, g_shifted);
  return sum;
}

/// Transfers mu along (f, g, h). In the suspended picture, with P_n the sum
/// over trees with n leaves, nu_n = f P_n and G_n = h P_n for n >= 2. The sum
/// over trees is computed through its root vertex: the subtrees hanging off
/// the root evaluate to G_r, so P_n = sum_{m >= 2} b_m G^{(n -> m)}.
template <Field K>
TransferStructureResult<K> transfer_structure(const AInfAlgebra<K>& a, const ChainComplex<K>& b,
                                              const HomotopyEquivalenceData<K>& data) {
  {
    HomotopyEquivalenceData<K> core{data.f, data.g, data.h, std::nullopt};
    const CheckReport r = check_equivalence_data(a.complex(), b, core);
    if (!r.passed) throw VerificationFailure("transfer: equivalence data", r);
  }
  const int n_max = a.truncation();
  const CogeneratingFamily<K>& delta = a.shifted();
  const GradedSpace v = a.space().suspend();
  const GradedSpace w = b.space().suspend();
  const MultiMap<K> fs = shift(data.f);
  const MultiMap<K> hs = shift(data.h);

  CogeneratingFamily<K> nu(FamilyKind::coderivation, w, w, n_max);
  nu.set(1, shift(b.differential()));
  CogeneratingFamily<K> gfam(FamilyKind::morphism, w, v, n_max);
  gfam.set(1, shift(data.g));
  Expander<K> ex;
  for (int n = 2; n <= n_max; ++n) {
    MultiMap<K> p(w, v, n, -1);
    for (int m = 2; m <= n; ++m) {
      const MultiMap<K>* bm = delta.component(m);
      if (!bm) continue;
      MultiMap<K> expanded = ex.morphism(gfam, n, m);
      if (!expanded.is_zero()) p += compose(*bm, expanded);
    }
    nu.set(n, compose(fs, p));
    gfam.set(n, compose(hs, p));
  }
  TransferStructureResult<K> r{AInfAlgebra<K>::from_shifted(nu), AInfMorphism<K>()};
  r.G = AInfMorphism<K>(r.nu, a, gfam);
  require_verified(r.nu, "transfer: transferred structure");
  require_verified(r.G, "transfer: morphism back to the source");
  return r;
}

template <Field K>
struct TransferResult {
  AInfAlgebra<K> nu;    // on B
  AInfMorphism<K> F;    // (A, mu) -> (B, nu), F_1 = f
  AInfMorphism<K> G;    // (B, nu) -> (A, mu), G_1 = g
  AInfHomotopy<K> H;    // from G F to the identity of (A, mu)
};

/// Optional free choices inside full_transfer.
template <Field K>
struct TransferChoices {
  std::map<int, MultiMap<K>> straightening_higher_h;
};

/// The full transfer package. Transferring back along (g, f, k) gives F~
/// with F~_1 = f out of a structure mu~ on A; G F~ is straightened to an
/// isotopy S : mu~ -> mu, and F = F~ S^{-1}, H = (homotopy G F~ ~ S) S^{-1}.
template <Field K>
TransferResult<K> full_transfer(const AInfAlgebra<K>& a, const ChainComplex<K>& b,
                                const HomotopyEquivalenceData<K>& data, const TransferChoices<K>& choices = {}) {
  if (!data.k) throw Error("full_transfer needs the homotopy on the target");
  {
    const CheckReport r = check_equivalence_data(a.complex(), b, data);
    if (!r.passed) throw VerificationFailure("full_transfer: equivalence data", r);
  }
  TransferStructureResult<K> fwd = transfer_structure(a, b, data);
  TransferStructureResult<K> back = transfer_structure(fwd.nu, a.complex(), data.reversed());
  const AInfMorphism<K>& f_tilde = back.G;  // (A, mu~) -> (B, nu)
  const AInfMorphism<K> e = compose(fwd.G, f_tilde);
  StraighteningResult<K> st = straighten_to_isotopy(e, -data.h, choices.straightening_higher_h);
  const AInfMorphism<K> s_inv = invert_isotopy(st.isotopy);  // (A, mu) -> (A, mu~)

  TransferResult<K> r;
  r.nu = fwd.nu;
  r.G = fwd.G;
  r.F = compose(f_tilde, s_inv);
  const HomotopyFamily<K> eta_e = st.eta.family();
  HomotopyFamily<K> hw = whisker(eta_e, s_inv.shifted(), WhiskerSide::pre, a.shifted(), back.nu.shifted());
  r.H = AInfHomotopy<K>(compose(r.G, r.F), identity(a), hw.eta);
  if (!(hw.from == r.H.from().shifted()) || !(hw.to == r.H.to().shifted()))
    throw Error("full_transfer: whiskered homotopy has unexpected ends");
  require_verified(r.F, "full_transfer: F");
  require_verified(r.H, "full_transfer: H");
  return r;
}

}  // namespace ainf
