#pragma once

// Planar rooted trees whose internal vertices have at least two children,
// and their evaluation as decorated composites.

#include <string>
#include <vector>

#include "ainf/multimap.hpp"

namespace ainf {

struct PlanarTree {
  std::vector<PlanarTree> children;  // empty for a leaf

  bool is_leaf() const { return children.empty(); }

  int leaves() const {
    if (is_leaf()) return 1;
    int n = 0;
    for (const auto& c : children) n += c.leaves();
    return n;
  }

  /// "|" for a leaf, "(t1 t2 ...)" for a vertex.
  std::string to_string() const {
    if (is_leaf()) return "|";
    std::string s = "(";
    for (std::size_t i = 0; i < children.size(); ++i) {
      if (i) s += ' ';
      s += children[i].to_string();
    }
    return s + ")";
  }

  friend bool operator==(const PlanarTree&, const PlanarTree&) = default;
};

namespace detail {

inline void compositions(int n, int min_parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    if (static_cast<int>(cur.size()) >= min_parts) out.push_back(cur);
    return;
  }
  for (int first = 1; first <= n; ++first) {
    cur.push_back(first);
    compositions(n - first, min_parts, cur, out);
    cur.pop_back();
  }
}

inline std::vector<PlanarTree> trees_with_leaves(int n, std::vector<std::vector<PlanarTree>>& memo) {
  if (!memo[static_cast<std::size_t>(n)].empty()) return memo[static_cast<std::size_t>(n)];
  std::vector<PlanarTree> out;
  if (n == 1) {
    out.push_back(PlanarTree{});
  } else {
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions(n, 2, cur, comps);
    for (const auto& comp : comps) {
      // Cartesian product over the parts, first part varying slowest.
      std::vector<PlanarTree> partial{PlanarTree{}};
      for (int part : comp) {
        const std::vector<PlanarTree> subs = trees_with_leaves(part, memo);
        std::vector<PlanarTree> next;
        for (const auto& p : partial)
          for (const auto& s : subs) {
            PlanarTree t = p;
            t.children.push_back(s);
            next.push_back(std::move(t));
          }
        partial = std::move(next);
      }
      out.insert(out.end(), partial.begin(), partial.end());
    }
  }
  memo[static_cast<std::size_t>(n)] = out;
  return out;
}

}  // namespace detail

/// All trees with n >= 2 leaves, ordered by root composition (lexicographic)
/// and then by subtrees.
inline std::vector<PlanarTree> planar_trees(int n) {
  if (n < 2) throw ShapeError("planar_trees needs at least two leaves");
  if (n > 12) throw ShapeError("planar_trees: too many leaves to enumerate");
  std::vector<std::vector<PlanarTree>> memo(static_cast<std::size_t>(n) + 1);
  return detail::trees_with_leaves(n, memo);
}

/// Evaluates a tree on W^{(x)n} -> V: leaves are `leaf` (W -> V), a vertex
/// with k children is vertex(k) applied to its inputs, and every internal
/// edge carries `edge` (V -> V). `vertex` is a callable int -> const MultiMap*
/// returning nullptr for a missing operation.
template <Scalar K, class VertexFn>
MultiMap<K> evaluate_tree(const PlanarTree& t, VertexFn&& vertex, const MultiMap<K>& edge, const MultiMap<K>& leaf) {
  if (t.is_leaf()) return leaf;
  const int k = static_cast<int>(t.children.size());
  const MultiMap<K>* op = vertex(k);
  int degree = 0;
  std::vector<MultiMap<K>> inputs;
  for (const auto& c : t.children) {
    if (c.is_leaf()) {
      inputs.push_back(leaf);
    } else {
      inputs.push_back(compose(edge, evaluate_tree<K>(c, vertex, edge, leaf)));
    }
    degree += inputs.back().degree();
  }
  if (!op) {
    const int n = t.leaves();
    return MultiMap<K>(leaf.source(), edge.target(), n, degree - 1);
  }
  return compose(*op, tensor(std::span<const MultiMap<K>>(inputs)));
}

}  // namespace ainf
