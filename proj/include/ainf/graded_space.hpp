#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ainf/scalar.hpp"

namespace ainf {

/// Finite-dimensional Z-graded space with an ordered basis in each degree.
///
/// Basis elements carry a global index: degrees in increasing order, and
/// within a degree the local order 0..dim-1. A space may be suspended any
/// number of times; suspension shifts every degree by +1 and keeps the basis.
class GradedSpace {
 public:
  GradedSpace() = default;

  GradedSpace(std::string name, const std::map<int, int>& dims) {
    auto data = std::make_shared<Data>();
    data->name = std::move(name);
    for (const auto& [deg, d] : dims) {
      if (d < 0) throw ShapeError("negative dimension in degree " + std::to_string(deg));
      if (d == 0) continue;
      data->offsets[deg] = static_cast<int>(data->degree_of.size());
      data->dims[deg] = d;
      for (int i = 0; i < d; ++i) {
        data->degree_of.push_back(deg);
        data->local_of.push_back(i);
      }
    }
    if (data->degree_of.empty())
      throw ShapeError("graded space '" + data->name + "' must have total dimension >= 1");
    data_ = std::move(data);
  }

  bool valid() const { return data_ != nullptr; }

  /// Base name plus one "s" per suspension, e.g. "s(s(A))".
  std::string name() const {
    std::string n = data_ ? data_->name : std::string("<null>");
    for (int i = 0; i < shift_; ++i) n = "s(" + n + ")";
    for (int i = 0; i > shift_; --i) n = "s^-1(" + n + ")";
    return n;
  }
  const std::string& base_name() const { return data_->name; }
  int shift() const { return shift_; }

  /// Dimensions keyed by degree (suspension applied).
  std::map<int, int> dims() const {
    std::map<int, int> out;
    for (const auto& [deg, d] : data_->dims) out[deg + shift_] = d;
    return out;
  }

  int dim() const { return static_cast<int>(data_->degree_of.size()); }
  int dim(int degree) const {
    auto it = data_->dims.find(degree - shift_);
    return it == data_->dims.end() ? 0 : it->second;
  }

  int degree_of(int global) const { return data_->degree_of[static_cast<std::size_t>(global)] + shift_; }
  int local_index(int global) const { return data_->local_of[static_cast<std::size_t>(global)]; }
  int global_index(int degree, int local) const {
    auto it = data_->offsets.find(degree - shift_);
    if (it == data_->offsets.end() || local < 0 || local >= data_->dims.at(degree - shift_))
      throw ShapeError("no basis element " + std::to_string(local) + " in degree " +
                       std::to_string(degree) + " of " + name());
    return it->second + local;
  }

  int min_degree() const { return data_->dims.begin()->first + shift_; }
  int max_degree() const { return data_->dims.rbegin()->first + shift_; }

  GradedSpace suspend(int times = 1) const {
    GradedSpace s = *this;
    s.shift_ += times;
    return s;
  }
  GradedSpace desuspend(int times = 1) const { return suspend(-times); }

  friend bool operator==(const GradedSpace& a, const GradedSpace& b) {
    if (a.shift_ != b.shift_) return false;
    if (a.data_ == b.data_) return true;
    if (!a.data_ || !b.data_) return false;
    return a.data_->name == b.data_->name && a.data_->dims == b.data_->dims;
  }

 private:
  struct Data {
    std::string name;
    std::map<int, int> dims;
    std::map<int, int> offsets;
    std::vector<int> degree_of;
    std::vector<int> local_of;
  };
  std::shared_ptr<const Data> data_;
  int shift_ = 0;
};

/// Basis tuples of V^{(x)k} are packed into one integer, most significant
/// factor first, so numeric order is lexicographic order of tuples.
using Code = std::uint64_t;

class TupleCodec {
 public:
  TupleCodec(int base, int length) : base_(base), length_(length) {
    if (base < 1 || length < 0) throw ShapeError("bad tuple codec");
    long double bound = 1;
    for (int i = 0; i < length; ++i) bound *= base;
    if (bound > 1.8e19L) throw ShapeError("tensor power too large to index");
    powers_.assign(static_cast<std::size_t>(length) + 1, 1);
    for (int i = 1; i <= length; ++i) powers_[static_cast<std::size_t>(i)] = powers_[static_cast<std::size_t>(i) - 1] * static_cast<Code>(base);
  }

  int base() const { return base_; }
  int length() const { return length_; }
  Code size() const { return powers_.back(); }
  Code power(int k) const { return powers_[static_cast<std::size_t>(k)]; }

  Code encode(std::span<const int> t) const {
    Code c = 0;
    for (int x : t) c = c * static_cast<Code>(base_) + static_cast<Code>(x);
    return c;
  }
  std::vector<int> decode(Code c) const {
    std::vector<int> t(static_cast<std::size_t>(length_));
    for (int i = length_ - 1; i >= 0; --i) {
      t[static_cast<std::size_t>(i)] = static_cast<int>(c % static_cast<Code>(base_));
      c /= static_cast<Code>(base_);
    }
    return t;
  }

 private:
  int base_;
  int length_;
  std::vector<Code> powers_;
};

/// Sum of the degrees of the basis tuple encoded by c in space^{(x)length}.
inline int tuple_degree(const GradedSpace& space, int length, Code c) {
  const Code n = static_cast<Code>(space.dim());
  int deg = 0;
  for (int i = 0; i < length; ++i) {
    deg += space.degree_of(static_cast<int>(c % n));
    c /= n;
  }
  return deg;
}

inline std::vector<int> decode_tuple(const GradedSpace& space, int length, Code c) {
  return TupleCodec(space.dim(), length).decode(c);
}

inline Code code_power(const GradedSpace& space, int length) {
  return TupleCodec(space.dim(), length).size();
}

}  // namespace ainf
