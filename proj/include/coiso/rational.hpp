#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <ostream>
#include <string>

#include "coiso/error.hpp"

namespace coiso {

// Arbitrary-precision rational with plain value semantics.
//
// Thin wrapper over mpq_class that materializes every arithmetic result,
// so the type is safe to use in generic ring code (no expression templates
// leaking through `auto` or template deduction).  Always canonical.
class Rat {
 public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}  // NOLINT: implicit by design, mirrors int -> Rat
  Rat(long num, long den) : v_(num, den) {
    require(den != 0, "Rat: zero denominator");
    v_.canonicalize();
  }
  explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  // Accepts "p", "p/q", and sign prefixes, base 10.
  static Rat parse(const std::string& s);

  const mpq_class& raw() const { return v_; }
  double to_double() const { return v_.get_d(); }
  std::string str() const { return v_.get_str(); }

  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }

  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) {
    require(!o.is_zero(), "Rat: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
  friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
  friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
  friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }
  friend Rat operator-(const Rat& a) { Rat r; r.v_ = -a.v_; return r; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

  friend Rat abs(const Rat& a) { Rat r; r.v_ = ::abs(a.v_); return r; }

  friend std::ostream& operator<<(std::ostream& os, const Rat& a) {
    return os << a.v_.get_str();
  }

 private:
  mpq_class v_;
};

inline Rat Rat::parse(const std::string& s) {
  try {
    mpq_class q(s, 10);
    require(sgn(q.get_den()) != 0, "Rat: zero denominator");
    q.canonicalize();
    return Rat(q);
  } catch (const std::invalid_argument&) {
    throw domain_error("Rat: cannot parse '" + s + "'");
  }
}

}  // namespace coiso
