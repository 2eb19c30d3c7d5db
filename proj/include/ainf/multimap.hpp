#pragma once

#include <map>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ainf/graded_space.hpp"
#include "ainf/scalar.hpp"

namespace ainf {

/// Koszul sign of applying f_1 (x) ... (x) f_k to x_1 (x) ... (x) x_k:
/// f_j passes x_1..x_{j-1}. Returns true when the sign is negative.
inline bool koszul_apply_sign(std::span<const int> map_degrees, std::span<const int> elem_degrees) {
  long parity = 0;
  long passed = 0;
  for (std::size_t j = 0; j < map_degrees.size(); ++j) {
    parity += static_cast<long>(map_degrees[j]) * passed;
    passed += elem_degrees[j];
  }
  return (parity & 1) != 0;
}

/// Homogeneous multilinear map source^{(x)arity} -> target^{(x)coarity}.
///
/// Stored sparsely: input basis tuple -> (output basis tuple -> coefficient),
/// with no zero coefficients. Every entry maps an input tuple of total degree
/// d to output tuples of total degree d + degree. Copies share storage until
/// one of them is modified.
template <Scalar K>
class MultiMap {
 public:
  using Column = std::map<Code, K>;
  using Columns = std::map<Code, Column>;

  MultiMap() = default;
  MultiMap(GradedSpace source, GradedSpace target, int arity, int degree, int coarity = 1)
      : source_(std::move(source)), target_(std::move(target)), arity_(arity), coarity_(coarity), degree_(degree) {
    if (arity < 1 || coarity < 1) throw ShapeError("multimap arity and coarity must be >= 1");
    if (!source_.valid() || !target_.valid()) throw ShapeError("multimap over a null space");
  }

  static MultiMap identity(const GradedSpace& v) {
    MultiMap id(v, v, 1, 0);
    for (int i = 0; i < v.dim(); ++i) id.add_code(static_cast<Code>(i), static_cast<Code>(i), K::from_int(1));
    return id;
  }

  const GradedSpace& source() const { return source_; }
  const GradedSpace& target() const { return target_; }
  int arity() const { return arity_; }
  int coarity() const { return coarity_; }
  int degree() const { return degree_; }

  const Columns& columns() const {
    static const Columns empty;
    return cols_ ? *cols_ : empty;
  }
  bool is_zero() const { return !cols_ || cols_->empty(); }
  std::size_t nnz() const {
    std::size_t n = 0;
    for (const auto& [in, col] : columns()) n += col.size();
    return n;
  }

  const Column* column(Code in) const {
    if (!cols_) return nullptr;
    auto it = cols_->find(in);
    return it == cols_->end() ? nullptr : &it->second;
  }

  K at(Code in, Code out) const {
    const Column* c = column(in);
    if (!c) return K{};
    auto it = c->find(out);
    return it == c->end() ? K{} : it->second;
  }
  K at(std::span<const int> in, std::span<const int> out) const {
    return at(TupleCodec(source_.dim(), arity_).encode(in), TupleCodec(target_.dim(), coarity_).encode(out));
  }

  /// Checked insertion (accumulates). Rejects entries violating the degree
  /// bookkeeping.
  void add(std::span<const int> in, std::span<const int> out, const K& v) {
    if (static_cast<int>(in.size()) != arity_ || static_cast<int>(out.size()) != coarity_)
      throw ShapeError("tuple length does not match arity/coarity");
    int din = 0, dout = 0;
    for (int x : in) {
      if (x < 0 || x >= source_.dim()) throw ShapeError("input basis index out of range");
      din += source_.degree_of(x);
    }
    for (int y : out) {
      if (y < 0 || y >= target_.dim()) throw ShapeError("output basis index out of range");
      dout += target_.degree_of(y);
    }
    if (v.is_zero()) return;
    if (din + degree_ != dout)
      throw ShapeError("entry violates degree bookkeeping: input degree " + std::to_string(din) + " + " +
                       std::to_string(degree_) + " != output degree " + std::to_string(dout));
    add_code(TupleCodec(source_.dim(), arity_).encode(in), TupleCodec(target_.dim(), coarity_).encode(out), v);
  }

  /// Unchecked accumulation used by the engine, which produces correctly
  /// graded entries by construction.
  void add_code(Code in, Code out, const K& v) {
    if (v.is_zero()) return;
    detach();
    Column& col = (*cols_)[in];
    auto [it, fresh] = col.try_emplace(out, v);
    if (!fresh) {
      it->second += v;
      if (it->second.is_zero()) {
        col.erase(it);
        if (col.empty()) cols_->erase(in);
      }
    }
  }

  /// Installs a whole column (must be zero-free and correctly graded).
  void set_column(Code in, Column col) {
    detach();
    if (col.empty()) {
      cols_->erase(in);
    } else {
      (*cols_)[in] = std::move(col);
    }
  }

  /// True when every stored entry respects the degree bookkeeping.
  bool audit_degrees() const {
    for (const auto& [in, col] : columns()) {
      const int din = tuple_degree(source_, arity_, in);
      for (const auto& [out, v] : col) {
        if (v.is_zero()) return false;
        if (tuple_degree(target_, coarity_, out) != din + degree_) return false;
      }
    }
    return true;
  }

  bool same_shape(const MultiMap& o) const {
    return source_ == o.source_ && target_ == o.target_ && arity_ == o.arity_ && coarity_ == o.coarity_ &&
           degree_ == o.degree_;
  }

  MultiMap& operator+=(const MultiMap& o) { accumulate(o, K::from_int(1)); return *this; }
  MultiMap& operator-=(const MultiMap& o) { accumulate(o, K::from_int(-1)); return *this; }
  friend MultiMap operator+(MultiMap a, const MultiMap& b) { return a += b; }
  friend MultiMap operator-(MultiMap a, const MultiMap& b) { return a -= b; }
  MultiMap operator-() const { return scaled(K::from_int(-1)); }

  MultiMap scaled(const K& s) const {
    MultiMap r(source_, target_, arity_, degree_, coarity_);
    if (s.is_zero()) return r;
    for (const auto& [in, col] : columns()) {
      Column c;
      for (const auto& [out, v] : col) {
        K x = v * s;
        if (!x.is_zero()) c.emplace_hint(c.end(), out, std::move(x));
      }
      if (!c.empty()) r.set_column(in, std::move(c));
    }
    return r;
  }

  /// Accumulates s * o into this map.
  void accumulate(const MultiMap& o, const K& s) {
    if (!same_shape(o)) throw SpaceMismatch("adding multimaps of different shape");
    for (const auto& [in, col] : o.columns())
      for (const auto& [out, v] : col) add_code(in, out, v * s);
  }

  friend bool operator==(const MultiMap& a, const MultiMap& b) {
    if (!a.same_shape(b)) return false;
    return a.columns() == b.columns();
  }

  std::string describe() const {
    std::ostringstream os;
    os << source_.name() << "^" << arity_ << " -> " << target_.name() << "^" << coarity_ << " deg " << degree_
       << " nnz " << nnz();
    return os.str();
  }

 private:
  void detach() {
    if (!cols_) {
      cols_ = std::make_shared<Columns>();
    } else if (cols_.use_count() > 1) {
      cols_ = std::make_shared<Columns>(*cols_);
    }
  }

  GradedSpace source_, target_;
  int arity_ = 1;
  int coarity_ = 1;
  int degree_ = 0;
  std::shared_ptr<Columns> cols_;
};

/// Linear maps are arity-1, coarity-1 multimaps.
template <Scalar K>
using GradedLinearMap = MultiMap<K>;

// ---------------------------------------------------------------------------

/// f o g (plain composition, no sign).
template <Scalar K>
MultiMap<K> compose(const MultiMap<K>& f, const MultiMap<K>& g) {
  if (!(g.target() == f.source()) || g.coarity() != f.arity())
    throw SpaceMismatch("compose: " + f.describe() + " after " + g.describe());
  MultiMap<K> r(g.source(), f.target(), g.arity(), f.degree() + g.degree(), f.coarity());
  for (const auto& [in, col] : g.columns()) {
    typename MultiMap<K>::Column acc;
    for (const auto& [mid, c] : col) {
      const auto* fc = f.column(mid);
      if (!fc) continue;
      for (const auto& [out, x] : *fc) {
        auto [it, fresh] = acc.try_emplace(out, c * x);
        if (!fresh) it->second += c * x;
      }
    }
    std::erase_if(acc, [](const auto& kv) { return kv.second.is_zero(); });
    if (!acc.empty()) r.set_column(in, std::move(acc));
  }
  return r;
}

/// a (x) b with the Koszul rule (a (x) b)(x (x) y) = (-1)^{|b||x|} a(x) (x) b(y).
template <Scalar K>
MultiMap<K> tensor(const MultiMap<K>& a, const MultiMap<K>& b) {
  if (!(a.source() == b.source()) || !(a.target() == b.target()))
    throw SpaceMismatch("tensor factors must share source and target spaces");
  MultiMap<K> r(a.source(), a.target(), a.arity() + b.arity(), a.degree() + b.degree(), a.coarity() + b.coarity());
  const Code in_shift = code_power(a.source(), b.arity());
  const Code out_shift = code_power(a.target(), b.coarity());
  const bool odd_b = (b.degree() & 1) != 0;
  for (const auto& [ia, ca] : a.columns()) {
    const bool neg = odd_b && (tuple_degree(a.source(), a.arity(), ia) & 1);
    for (const auto& [ib, cb] : b.columns()) {
      typename MultiMap<K>::Column col;
      for (const auto& [oa, x] : ca) {
        for (const auto& [ob, y] : cb) {
          K v = x * y;
          if (neg) v = -v;
          col.emplace_hint(col.end(), oa * out_shift + ob, std::move(v));
        }
      }
      r.set_column(ia * in_shift + ib, std::move(col));
    }
  }
  return r;
}

template <Scalar K>
MultiMap<K> tensor(std::span<const MultiMap<K>> fs) {
  if (fs.empty()) throw ShapeError("tensor of an empty list");
  MultiMap<K> r = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) r = tensor(r, fs[i]);
  return r;
}

template <Scalar K>
MultiMap<K> tensor(std::initializer_list<MultiMap<K>> fs) {
  return tensor(std::span<const MultiMap<K>>(fs.begin(), fs.size()));
}

/// Identity of V^{(x)k} as an arity-k, coarity-k map.
template <Scalar K>
MultiMap<K> identity_power(const GradedSpace& v, int k) {
  MultiMap<K> r(v, v, k, 0, k);
  const Code n = code_power(v, k);
  for (Code c = 0; c < n; ++c) r.add_code(c, c, K::from_int(1));
  return r;
}

/// Operadic partial composite outer o_i inner = outer o (1^{i-1} (x) inner (x) 1^{k-i}),
/// Koszul sign (-1)^{|inner| * (degrees of arguments 1..i-1)}. Positions are 1-based.
template <Scalar K>
MultiMap<K> plug(const MultiMap<K>& outer, int i, const MultiMap<K>& inner) {
  if (i < 1 || i > outer.arity()) throw ShapeError("plug position " + std::to_string(i) + " out of range");
  if (inner.coarity() != 1) throw ShapeError("plug: inner map must have a single output");
  if (!(inner.target() == outer.source()) || !(inner.source() == outer.source()))
    throw SpaceMismatch("plug: inner map must be an endomorphism of the outer source");
  const GradedSpace& v = outer.source();
  const int k = outer.arity();
  const int l = inner.arity();
  const Code pre_count = code_power(v, i - 1);
  const Code post_count = code_power(v, k - i);
  const Code post_shift_in = post_count;
  const Code inner_shift = code_power(v, l);
  const bool odd_inner = (inner.degree() & 1) != 0;
  MultiMap<K> r(v, outer.target(), k + l - 1, outer.degree() + inner.degree(), outer.coarity());
  for (Code pre = 0; pre < pre_count; ++pre) {
    const bool neg = odd_inner && (tuple_degree(v, i - 1, pre) & 1);
    for (const auto& [ic, icol] : inner.columns()) {
      for (Code post = 0; post < post_count; ++post) {
        typename MultiMap<K>::Column acc;
        for (const auto& [w, c] : icol) {
          const Code outer_in = (pre * static_cast<Code>(v.dim()) + w) * post_shift_in + post;
          const auto* oc = outer.column(outer_in);
          if (!oc) continue;
          for (const auto& [out, x] : *oc) {
            K val = neg ? -(c * x) : c * x;
            auto [it, fresh] = acc.try_emplace(out, val);
            if (!fresh) it->second += val;
          }
        }
        std::erase_if(acc, [](const auto& kv) { return kv.second.is_zero(); });
        if (!acc.empty()) r.set_column((pre * inner_shift + ic) * post_count + post, std::move(acc));
      }
    }
  }
  return r;
}

namespace detail {
/// Sign of (s^{-1})^{(x)k} applied to a tuple of suspended basis elements.
inline bool suspension_sign(const GradedSpace& suspended_source, int k, Code in) {
  std::vector<int> elem(static_cast<std::size_t>(k));
  const std::vector<int> t = decode_tuple(suspended_source, k, in);
  for (int i = 0; i < k; ++i) elem[static_cast<std::size_t>(i)] = suspended_source.degree_of(t[static_cast<std::size_t>(i)]);
  const std::vector<int> desusp(static_cast<std::size_t>(k), -1);
  return koszul_apply_sign(desusp, elem);
}
}  // namespace detail

/// b = s o m o (s^{-1})^{(x)k}: an arity-k map of degree d between A and B
/// becomes an arity-k map of degree d - k + 1 between sA and sB. s has
/// degree +1; the sign comes from (s^{-1})^{(x)k} passing the suspended
/// arguments.
template <Scalar K>
MultiMap<K> shift(const MultiMap<K>& m) {
  if (m.coarity() != 1) throw ShapeError("shift: only single-output maps");
  const GradedSpace ss = m.source().suspend();
  MultiMap<K> r(ss, m.target().suspend(), m.arity(), m.degree() - m.arity() + 1);
  for (const auto& [in, col] : m.columns()) {
    const bool neg = detail::suspension_sign(ss, m.arity(), in);
    typename MultiMap<K>::Column c;
    for (const auto& [out, v] : col) c.emplace_hint(c.end(), out, neg ? -v : v);
    r.set_column(in, std::move(c));
  }
  return r;
}

/// Exact inverse of shift: m = s^{-1} o b o ((s^{-1})^{(x)k})^{-1}.
template <Scalar K>
MultiMap<K> unshift(const MultiMap<K>& b) {
  if (b.coarity() != 1) throw ShapeError("unshift: only single-output maps");
  MultiMap<K> r(b.source().desuspend(), b.target().desuspend(), b.arity(), b.degree() + b.arity() - 1);
  for (const auto& [in, col] : b.columns()) {
    const bool neg = detail::suspension_sign(b.source(), b.arity(), in);
    typename MultiMap<K>::Column c;
    for (const auto& [out, v] : col) c.emplace_hint(c.end(), out, neg ? -v : v);
    r.set_column(in, std::move(c));
  }
  return r;
}

/// Entrywise change of coefficient type.
template <Scalar To, Scalar From, class Fn>
MultiMap<To> map_scalars(const MultiMap<From>& m, Fn&& fn) {
  MultiMap<To> r(m.source(), m.target(), m.arity(), m.degree(), m.coarity());
  for (const auto& [in, col] : m.columns())
    for (const auto& [out, v] : col) r.add_code(in, out, fn(v));
  return r;
}

/// Same entries, reinterpreted over other spaces with identical basis sizes.
template <Scalar K>
MultiMap<K> relabel(const MultiMap<K>& m, const GradedSpace& source, const GradedSpace& target, int degree) {
  MultiMap<K> r(source, target, m.arity(), degree, m.coarity());
  for (const auto& [in, col] : m.columns()) r.set_column(in, col);
  return r;
}

}  // namespace ainf
