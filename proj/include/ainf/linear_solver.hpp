#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ainf/scalar.hpp"

namespace ainf {

/// Sparse row: (variable, coefficient) pairs sorted by variable, no zeros.
template <Field K>
using SparseRow = std::vector<std::pair<int, K>>;

/// Exact incremental Gaussian elimination over a field.
///
/// Rows are kept in echelon form keyed by their leading (smallest) variable.
/// solve() returns the particular solution in which every free variable is
/// zero, so results depend only on variable numbering and equation order.
template <Field K>
class LinearSystem {
 public:
  explicit LinearSystem(int num_vars = 0) : num_vars_(num_vars) {}

  int num_vars() const { return num_vars_; }
  int add_variable() { return num_vars_++; }
  int rank() const { return static_cast<int>(pivots_.size()); }
  bool consistent() const { return !inconsistent_; }
  /// Index (in insertion order) of the first equation found inconsistent.
  std::optional<int> first_inconsistent() const { return first_bad_; }

  /// Adds sum_i c_i x_i = rhs. Coefficients need not be sorted.
  void add_equation(SparseRow<K> row, K rhs) {
    const int index = equations_++;
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseRow<K> merged;
    for (auto& [v, c] : row) {
      if (v < 0 || v >= num_vars_) throw Error("linear system: variable out of range");
      if (!merged.empty() && merged.back().first == v) {
        merged.back().second += c;
        if (merged.back().second.is_zero()) merged.pop_back();
      } else if (!c.is_zero()) {
        merged.emplace_back(v, std::move(c));
      }
    }
    reduce_and_insert(std::move(merged), std::move(rhs), index);
  }

  /// Free variables set to zero; nullopt when inconsistent.
  std::optional<std::vector<K>> solve() const {
    if (inconsistent_) return std::nullopt;
    std::vector<K> x(static_cast<std::size_t>(num_vars_));
    for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
      const Pivot& p = it->second;
      K v = p.rhs;
      for (std::size_t i = 1; i < p.row.size(); ++i) {
        const auto& [var, c] = p.row[i];
        const K& xv = x[static_cast<std::size_t>(var)];
        if (!xv.is_zero()) v -= c * xv;
      }
      x[static_cast<std::size_t>(it->first)] = std::move(v);
    }
    return x;
  }

 private:
  struct Pivot {
    SparseRow<K> row;  // row[0] is the pivot with coefficient 1
    K rhs;
  };

  static SparseRow<K> axpy(const SparseRow<K>& a, const K& s, const SparseRow<K>& b) {
    // a - s * b
    SparseRow<K> out;
    out.reserve(a.size() + b.size());
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() || j != b.end()) {
      if (j == b.end() || (i != a.end() && i->first < j->first)) {
        out.push_back(*i++);
      } else if (i == a.end() || j->first < i->first) {
        out.emplace_back(j->first, -(s * j->second));
        ++j;
      } else {
        K c = i->second - s * j->second;
        if (!c.is_zero()) out.emplace_back(i->first, std::move(c));
        ++i;
        ++j;
      }
    }
    return out;
  }

  void reduce_and_insert(SparseRow<K> row, K rhs, int index) {
    while (!row.empty()) {
      const int lead = row.front().first;
      auto it = pivots_.find(lead);
      if (it == pivots_.end()) {
        const K inv = row.front().second.inverse();
        for (auto& [v, c] : row) c *= inv;
        rhs *= inv;
        pivots_.emplace(lead, Pivot{std::move(row), std::move(rhs)});
        return;
      }
      const K s = row.front().second;
      row = axpy(row, s, it->second.row);
      rhs -= s * it->second.rhs;
    }
    if (!rhs.is_zero() && !inconsistent_) {
      inconsistent_ = true;
      first_bad_ = index;
    }
  }

  int num_vars_ = 0;
  int equations_ = 0;
  bool inconsistent_ = false;
  std::optional<int> first_bad_;
  std::map<int, Pivot> pivots_;
};

/// Rank of a matrix given as sparse rows over num_cols columns.
template <Field K>
int matrix_rank(const std::vector<SparseRow<K>>& rows, int num_cols) {
  LinearSystem<K> sys(num_cols);
  for (const auto& r : rows) sys.add_equation(r, K{});
  return sys.rank();
}

}  // namespace ainf
