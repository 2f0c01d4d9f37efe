#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "contactsym/errors.hpp"

namespace contactsym {

/// Exact rational number, always in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(int v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(long long v) : v_(mpz_class(std::to_string(v))) {}  // NOLINT
  Rational(const mpz_class& v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}

  /// Parses "num/den" or "num". Decimal notation is rejected.
  static Rational parse(std::string_view text) {
    std::string s(text);
    auto trim = [](std::string& x) {
      while (!x.empty() && (x.back() == ' ' || x.back() == '\t')) x.pop_back();
      std::size_t i = 0;
      while (i < x.size() && (x[i] == ' ' || x[i] == '\t')) ++i;
      x.erase(0, i);
    };
    trim(s);
    auto valid_int = [](const std::string& x) {
      if (x.empty()) return false;
      std::size_t i = (x[0] == '-' || x[0] == '+') ? 1 : 0;
      if (i == x.size()) return false;
      for (; i < x.size(); ++i)
        if (x[i] < '0' || x[i] > '9') return false;
      return true;
    };
    auto to_mpz = [](std::string x) {
      if (!x.empty() && x[0] == '+') x.erase(0, 1);
      return mpz_class(x, 10);
    };
    const auto slash = s.find('/');
    if (slash == std::string::npos) {
      if (!valid_int(s)) throw ParseError("not a rational: '" + s + "'");
      return Rational(to_mpz(s));
    }
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    trim(num);
    trim(den);
    if (!valid_int(num) || !valid_int(den))
      throw ParseError("not a rational: '" + s + "'");
    mpz_class d = to_mpz(den);
    if (d == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rational(to_mpz(num), d);
  }

  const mpq_class& value() const noexcept { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }
  int sign() const noexcept { return sgn(v_); }
  bool is_zero() const noexcept { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  std::string str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    v_ /= o.v_;
    return *this;
  }
  Rational operator-() const { return Rational(mpq_class(-v_)); }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  mpq_class v_;
};

inline Rational pow(const Rational& base, unsigned e) {
  Rational r(1);
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

/// Exact square root when `r` is the square of a rational.
inline bool rational_sqrt(const Rational& r, Rational& out) {
  if (r.sign() < 0) return false;
  mpz_class n = r.num(), d = r.den();
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0 ||
      mpz_perfect_square_p(d.get_mpz_t()) == 0)
    return false;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
  out = Rational(sn, sd);
  return true;
}

}  // namespace contactsym
