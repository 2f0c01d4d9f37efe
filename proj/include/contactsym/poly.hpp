#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "contactsym/rational.hpp"
#include "contactsym/var_table.hpp"

namespace contactsym {

/// Sparse multivariate polynomial with exact rational coefficients. No stored
/// term has a zero coefficient, so equality of term maps is equality of
/// polynomials.
class Poly {
 public:
  using Terms = std::map<Exponent, Rational, GrlexDescending>;

  Poly() = default;
  explicit Poly(VarTable table) : table_(table) {}

  static Poly constant(const VarTable& table, const Rational& c) {
    Poly p(table);
    p.add_term(Exponent{}, c);
    return p;
  }
  static Poly variable(const VarTable& table, std::size_t idx) {
    if (idx >= table.size()) throw StructuralError("unknown variable index");
    Poly p(table);
    p.add_term(Exponent::unit(idx), Rational(1));
    return p;
  }
  static Poly variable(const VarTable& table, std::string_view name) {
    auto idx = table.find(name);
    if (!idx) throw StructuralError("unknown variable '" + std::string(name) + "'");
    return variable(table, *idx);
  }
  static Poly monomial(const VarTable& table, const Exponent& x, const Rational& c = Rational(1)) {
    Poly p(table);
    p.add_term(x, c);
    return p;
  }

  const VarTable& table() const noexcept { return table_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  Rational coeff(const Exponent& x) const {
    auto it = terms_.find(x);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const Exponent& x, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(x, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Poly& operator+=(const Poly& o) {
    require_same_table(table_, o.table_, "polynomial addition");
    for (const auto& [x, c] : o.terms_) add_term(x, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    require_same_table(table_, o.table_, "polynomial subtraction");
    for (const auto& [x, c] : o.terms_) add_term(x, -c);
    return *this;
  }
  Poly& operator*=(const Rational& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [x, c] : terms_) c *= s;
    return *this;
  }
  Poly operator-() const {
    Poly r = *this;
    for (auto& [x, c] : r.terms_) c = -c;
    return r;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    require_same_table(a.table_, b.table_, "polynomial multiplication");
    Poly r(a.table_);
    for (const auto& [xa, ca] : a.terms_)
      for (const auto& [xb, cb] : b.terms_) r.add_term(xa + xb, ca * cb);
    return r;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.table_ == b.table_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// Multiplies every term by the monomial x^shift.
  Poly shifted(const Exponent& shift, const Rational& c = Rational(1)) const {
    Poly r(table_);
    if (c.is_zero()) return r;
    for (const auto& [x, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), x + shift, v * c);
    return r;
  }

  /// Exact partial derivative with respect to variable `idx`.
  Poly diff(std::size_t idx) const {
    if (idx >= table_.size()) throw StructuralError("unknown variable in derivative");
    Poly r(table_);
    for (const auto& [x, c] : terms_) {
      if (x[idx] == 0) continue;
      Exponent y = x;
      y.add(idx, -1);
      r.add_term(y, c * Rational(static_cast<long>(x[idx])));
    }
    return r;
  }

  /// Iterated partial derivative d^alpha.
  Poly diff(const Exponent& alpha) const {
    Poly r(table_);
    if (alpha.is_zero()) return *this;
    for (const auto& [x, c] : terms_) {
      if (!alpha.divides(x)) continue;
      mpz_class f = 1;
      for (std::size_t i = 0; i < table_.size(); ++i)
        for (unsigned j = 0; j < alpha[i]; ++j) f *= static_cast<unsigned long>(x[i] - j);
      r.add_term(x - alpha, c * Rational(f));
    }
    return r;
  }

  int total_degree() const {
    int d = -1;
    for (const auto& [x, c] : terms_) d = std::max<int>(d, x.total);
    return d;
  }

  /// Degree in a block, or nullopt when the terms do not share one degree.
  std::optional<unsigned> homogeneous_degree(Block b) const {
    std::optional<unsigned> d;
    for (const auto& [x, c] : terms_) {
      unsigned e = degree_in_block(x, table_, b);
      if (d && *d != e) return std::nullopt;
      d = e;
    }
    return d;
  }

  bool uses_block(Block b) const {
    if (!table_.has(b)) return false;
    for (const auto& [x, c] : terms_)
      if (degree_in_block(x, table_, b) != 0) return true;
    return false;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [x, c] : terms_) {
      Rational mag = c.sign() < 0 ? -c : c;
      if (first) {
        if (c.sign() < 0) os << "-";
      } else {
        os << (c.sign() < 0 ? " - " : " + ");
      }
      first = false;
      bool wrote = false;
      if (mag != Rational(1) || x.is_zero()) {
        os << mag.str();
        wrote = true;
      }
      for (std::size_t i = 0; i < table_.size(); ++i) {
        if (x[i] == 0) continue;
        if (wrote) os << "*";
        os << table_.name(i);
        if (x[i] > 1) os << "^" << static_cast<int>(x[i]);
        wrote = true;
      }
    }
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.str(); }

 private:
  VarTable table_;
  Terms terms_;
};

inline Poly pow(const Poly& base, unsigned e) {
  Poly r = Poly::constant(base.table(), Rational(1));
  for (unsigned i = 0; i < e; ++i) r = r * base;
  return r;
}

enum class PolyOp { add, sub, mul };

inline Poly poly_arith(const Poly& a, const Poly& b, PolyOp op) {
  switch (op) {
    case PolyOp::add: return a + b;
    case PolyOp::sub: return a - b;
    case PolyOp::mul: return a * b;
  }
  return a;
}

inline Poly poly_diff(const Poly& a, std::size_t var) { return a.diff(var); }

inline Poly poly_diff(const Poly& a, std::string_view var) {
  auto idx = a.table().find(var);
  if (!idx) throw StructuralError("unknown variable '" + std::string(var) + "'");
  return a.diff(*idx);
}

/// Re-expresses `a` over a larger table that contains every block of a's table.
inline Poly embed(const Poly& a, const VarTable& target) {
  if (a.table().n() != target.n()) throw StructuralError("cannot embed across different n");
  Poly r(target);
  for (const auto& [x, c] : a.terms()) {
    Exponent y;
    for (std::size_t i = 0; i < a.table().size(); ++i) {
      if (x[i] == 0) continue;
      const Block b = a.table().block_of(i);
      y.set(target.var(b, a.table().coord_of(i)), x[i]);
    }
    r.add_term(y, c);
  }
  return r;
}

}  // namespace contactsym
