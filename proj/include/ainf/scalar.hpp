#pragma once

// Exact scalars: rationals (GMP-backed), prime-field elements, and affine
// forms over either (used to turn linear identities into linear systems).

#include <gmpxx.h>

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ainf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when two objects that must live over the same spaces do not.
class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

/// Raised for arities, positions and degrees outside the allowed range.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Operations every coefficient type supports. Division is not required:
/// the expansion engine never divides.
template <class K>
concept Scalar = std::regular<K> && requires(const K a, const K b, long n) {
  { a + b } -> std::convertible_to<K>;
  { a - b } -> std::convertible_to<K>;
  { a * b } -> std::convertible_to<K>;
  { -a } -> std::convertible_to<K>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { K::from_int(n) } -> std::convertible_to<K>;
};

template <class K>
concept Field = Scalar<K> && requires(const K a, const K b) {
  { a / b } -> std::convertible_to<K>;
  { a.inverse() } -> std::convertible_to<K>;
};

// ---------------------------------------------------------------------------

/// Rational number in lowest terms with positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long n) : q_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den) : q_(num, den) {
    if (den == 0) throw Error("rational with zero denominator");
    q_.canonicalize();
  }
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  static Rational from_int(long n) { return Rational(n); }

  /// Accepts "p" or "p/q" with optional leading minus.
  static Rational parse(const std::string& s) {
    if (s.empty()) throw Error("empty rational literal");
    const auto slash = s.find('/');
    auto check_int = [&](const std::string& t, bool allow_sign) {
      std::size_t i = 0;
      if (allow_sign && !t.empty() && t[0] == '-') i = 1;
      if (i >= t.size()) return false;
      return std::all_of(t.begin() + static_cast<long>(i), t.end(),
                         [](char c) { return c >= '0' && c <= '9'; });
    };
    if (slash == std::string::npos) {
      if (!check_int(s, true)) throw Error("malformed rational literal '" + s + "'");
      return Rational(mpq_class(mpz_class(s, 10)));
    }
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    if (!check_int(num, true) || !check_int(den, false))
      throw Error("malformed rational literal '" + s + "'");
    mpz_class d(den, 10);
    if (d == 0) throw Error("rational with zero denominator '" + s + "'");
    return Rational(mpq_class(mpz_class(num, 10), d));
  }

  std::string to_string() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_one() const { return q_ == 1; }
  const mpq_class& value() const { return q_; }

  Rational inverse() const {
    if (is_zero()) throw Error("division by zero");
    return Rational(mpq_class(1) / q_);
  }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error("division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { return Rational(mpq_class(-q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

 private:
  mpq_class q_;
};

// ---------------------------------------------------------------------------

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// Element of F_p. The modulus travels with the value; modulus 0 marks an
/// integer constant (from_int) that has not met a bound element yet and
/// adopts the modulus of the first one it is combined with. Combining two
/// different nonzero moduli throws.
class ModP {
 public:
  static constexpr std::uint64_t max_modulus = (1ULL << 31) - 1;

  ModP() = default;
  ModP(long v, std::uint64_t p) : v_(0), p_(p) {
    if (!is_prime(p) || p > max_modulus)
      throw Error("prime-field modulus must be a prime below 2^31, got " + std::to_string(p));
    v_ = reduce(v, p);
  }

  static ModP from_int(long n) {
    ModP r;
    r.v_ = n;
    return r;
  }

  static ModP parse(const std::string& s, std::uint64_t p) {
    const Rational q = Rational::parse(s);
    const mpz_class pm(static_cast<unsigned long>(p));
    mpz_class num = q.value().get_num() % pm;
    mpz_class den = q.value().get_den() % pm;
    if (den == 0) throw Error("literal '" + s + "' has denominator divisible by p");
    return ModP(num.get_si(), p) / ModP(den.get_si(), p);
  }

  std::string to_string() const { return std::to_string(v_); }

  std::uint64_t modulus() const { return p_; }
  long residue() const { return v_; }

  bool is_zero() const { return v_ == 0; }

  ModP inverse() const {
    if (p_ == 0) {
      if (v_ == 1 || v_ == -1) return *this;
      throw Error("cannot invert an unbound integer constant in F_p");
    }
    if (v_ == 0) throw Error("division by zero");
    // Fermat: a^(p-2).
    std::uint64_t base = static_cast<std::uint64_t>(v_), e = p_ - 2, acc = 1;
    while (e) {
      if (e & 1) acc = acc * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    ModP r;
    r.v_ = static_cast<long>(acc);
    r.p_ = p_;
    return r;
  }

  ModP& operator+=(const ModP& o) { combine(o); v_ = p_ ? reduce(v_ + o.bound_value(p_), p_) : v_ + o.v_; return *this; }
  ModP& operator-=(const ModP& o) { combine(o); v_ = p_ ? reduce(v_ - o.bound_value(p_), p_) : v_ - o.v_; return *this; }
  ModP& operator*=(const ModP& o) {
    combine(o);
    if (p_) {
      v_ = static_cast<long>(static_cast<std::uint64_t>(v_) * static_cast<std::uint64_t>(o.bound_value(p_)) % p_);
    } else {
      v_ *= o.v_;
    }
    return *this;
  }
  ModP& operator/=(const ModP& o) {
    ModP inv = o;
    if (inv.p_ == 0 && p_ != 0) inv = ModP(inv.v_, p_);
    return *this *= inv.inverse();
  }

  friend ModP operator+(ModP a, const ModP& b) { return a += b; }
  friend ModP operator-(ModP a, const ModP& b) { return a -= b; }
  friend ModP operator*(ModP a, const ModP& b) { return a *= b; }
  friend ModP operator/(ModP a, const ModP& b) { return a /= b; }
  ModP operator-() const {
    ModP r = *this;
    r.v_ = p_ ? reduce(-v_, p_) : -v_;
    return r;
  }

  friend bool operator==(const ModP& a, const ModP& b) {
    if (a.p_ && b.p_ && a.p_ != b.p_) throw Error("mixing scalars from different prime fields");
    const std::uint64_t p = a.p_ ? a.p_ : b.p_;
    if (!p) return a.v_ == b.v_;
    return a.bound_value(p) == b.bound_value(p);
  }
  friend std::ostream& operator<<(std::ostream& os, const ModP& r) { return os << r.to_string(); }

 private:
  static long reduce(long v, std::uint64_t p) {
    const long m = static_cast<long>(p);
    long r = v % m;
    return r < 0 ? r + m : r;
  }
  long bound_value(std::uint64_t p) const { return p_ ? v_ : reduce(v_, p); }
  void combine(const ModP& o) {
    if (p_ && o.p_ && p_ != o.p_) throw Error("mixing scalars from different prime fields");
    if (!p_ && o.p_) {
      p_ = o.p_;
      v_ = reduce(v_, p_);
    }
  }

  long v_ = 0;
  std::uint64_t p_ = 0;
};

// ---------------------------------------------------------------------------

/// constant + sum_i c_i x_i. Products are only defined when one side is
/// constant, which is all the (multi)linear expansion code ever needs.
template <Field K>
class Affine {
 public:
  using Term = std::pair<int, K>;

  Affine() = default;
  explicit Affine(K c) : constant_(std::move(c)) {}

  static Affine from_int(long n) { return Affine(K::from_int(n)); }
  static Affine variable(int index) {
    Affine a;
    a.terms_.emplace_back(index, K::from_int(1));
    return a;
  }

  const K& constant() const { return constant_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_constant() const { return terms_.empty(); }
  bool is_zero() const { return terms_.empty() && constant_.is_zero(); }

  Affine& operator+=(const Affine& o) { merge(o, false); return *this; }
  Affine& operator-=(const Affine& o) { merge(o, true); return *this; }
  friend Affine operator+(Affine a, const Affine& b) { return a += b; }
  friend Affine operator-(Affine a, const Affine& b) { return a -= b; }
  Affine operator-() const {
    Affine r;
    r.constant_ = -constant_;
    r.terms_.reserve(terms_.size());
    for (const auto& [v, c] : terms_) r.terms_.emplace_back(v, -c);
    return r;
  }
  friend Affine operator*(const Affine& a, const Affine& b) {
    if (a.is_constant()) return b.scaled(a.constant_);
    if (b.is_constant()) return a.scaled(b.constant_);
    throw Error("product of two non-constant affine forms");
  }

  Affine scaled(const K& s) const {
    Affine r;
    if (s.is_zero()) return r;
    r.constant_ = constant_ * s;
    r.terms_.reserve(terms_.size());
    for (const auto& [v, c] : terms_) r.terms_.emplace_back(v, c * s);
    return r;
  }

  friend bool operator==(const Affine& a, const Affine& b) {
    return a.constant_ == b.constant_ && a.terms_ == b.terms_;
  }

 private:
  void merge(const Affine& o, bool negate) {
    if (negate) constant_ -= o.constant_; else constant_ += o.constant_;
    if (o.terms_.empty()) return;
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    auto i = terms_.begin();
    auto j = o.terms_.begin();
    while (i != terms_.end() || j != o.terms_.end()) {
      if (j == o.terms_.end() || (i != terms_.end() && i->first < j->first)) {
        out.push_back(*i++);
      } else if (i == terms_.end() || j->first < i->first) {
        out.emplace_back(j->first, negate ? -j->second : j->second);
        ++j;
      } else {
        K c = negate ? i->second - j->second : i->second + j->second;
        if (!c.is_zero()) out.emplace_back(i->first, std::move(c));
        ++i;
        ++j;
      }
    }
    terms_ = std::move(out);
  }

  K constant_{};
  std::vector<Term> terms_;
};

template <Scalar K>
inline K sign_scalar(bool negative) {
  return K::from_int(negative ? -1 : 1);
}

}  // namespace ainf
