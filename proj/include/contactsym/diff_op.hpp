#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "contactsym/poly.hpp"

namespace contactsym {

/// Normal-ordered differential operator with polynomial coefficients:
/// sum over multi-indices alpha of c_alpha(x) d^alpha, coefficients on the
/// left. Zero coefficients are never stored, so the representation is unique.
class DiffOp {
 public:
  using Terms = std::map<Exponent, Poly, GrlexDescending>;

  DiffOp() = default;
  explicit DiffOp(VarTable table) : table_(table) {}

  static DiffOp identity(const VarTable& table) { return scalar(table, Rational(1)); }
  static DiffOp scalar(const VarTable& table, const Rational& c) {
    DiffOp d(table);
    d.add_term(Exponent{}, Poly::constant(table, c));
    return d;
  }
  static DiffOp multiplication(const Poly& f) {
    DiffOp d(f.table());
    d.add_term(Exponent{}, f);
    return d;
  }
  /// The operator f * d/dx_idx.
  static DiffOp derivation(const Poly& f, std::size_t idx) {
    DiffOp d(f.table());
    d.add_term(Exponent::unit(idx), f);
    return d;
  }
  static DiffOp partial(const VarTable& table, std::size_t idx) {
    return derivation(Poly::constant(table, Rational(1)), idx);
  }

  const VarTable& table() const noexcept { return table_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add_term(const Exponent& alpha, const Poly& c) {
    require_same_table(table_, c.table(), "operator coefficient");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(alpha, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Poly coefficient(const Exponent& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? Poly(table_) : it->second;
  }

  int order() const {
    int o = -1;
    for (const auto& [a, c] : terms_) o = std::max<int>(o, a.total);
    return o;
  }

  DiffOp& operator+=(const DiffOp& o) {
    require_same_table(table_, o.table_, "operator addition");
    for (const auto& [a, c] : o.terms_) add_term(a, c);
    return *this;
  }
  DiffOp& operator-=(const DiffOp& o) {
    require_same_table(table_, o.table_, "operator subtraction");
    for (const auto& [a, c] : o.terms_) add_term(a, -c);
    return *this;
  }
  DiffOp& operator*=(const Rational& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [a, c] : terms_) c *= s;
    return *this;
  }
  DiffOp operator-() const {
    DiffOp r = *this;
    for (auto& [a, c] : r.terms_) c = -c;
    return r;
  }
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
  friend DiffOp operator*(DiffOp a, const Rational& s) { return a *= s; }
  friend DiffOp operator*(const Rational& s, DiffOp a) { return a *= s; }
  friend bool operator==(const DiffOp& a, const DiffOp& b) {
    return a.table_ == b.table_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const DiffOp& a, const DiffOp& b) { return !(a == b); }

  /// Left multiplication by a polynomial.
  DiffOp times(const Poly& f) const {
    DiffOp r(table_);
    for (const auto& [a, c] : terms_) r.add_term(a, f * c);
    return r;
  }

  /// Applies the operator to a polynomial.
  Poly apply(const Poly& f) const {
    require_same_table(table_, f.table(), "operator application");
    Poly r(table_);
    for (const auto& [alpha, c] : terms_) {
      Poly d = f.diff(alpha);
      if (d.is_zero()) continue;
      r += c * d;
    }
    return r;
  }

  /// Applies the operator to a single monomial c * x^m.
  Poly apply_monomial(const Exponent& m, const Rational& c = Rational(1)) const {
    Poly r(table_);
    for (const auto& [alpha, coeff] : terms_) {
      if (!alpha.divides(m)) continue;
      mpz_class f = 1;
      for (std::size_t i = 0; i < table_.size(); ++i)
        for (unsigned j = 0; j < alpha[i]; ++j) f *= static_cast<unsigned long>(m[i] - j);
      r += coeff.shifted(m - alpha, c * Rational(f));
    }
    return r;
  }

  /// When the operator is sum_i w_i x_i d_i + w_0 with constant w's (an
  /// Euler-type operator, diagonal on monomials), returns (w_0, w_1..w_N).
  std::optional<std::vector<Rational>> euler_weights() const {
    std::vector<Rational> w(table_.size() + 1, Rational(0));
    for (const auto& [alpha, c] : terms_) {
      if (alpha.total > 1) return std::nullopt;
      if (alpha.total == 0) {
        if (c.size() != 1 || !c.terms().begin()->first.is_zero()) return std::nullopt;
        w[0] = c.terms().begin()->second;
        continue;
      }
      if (c.size() != 1 || c.terms().begin()->first != alpha) return std::nullopt;
      for (std::size_t i = 0; i < table_.size(); ++i)
        if (alpha[i] == 1) w[i + 1] = c.terms().begin()->second;
    }
    return w;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [alpha, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c.str() << ")";
      for (std::size_t i = 0; i < table_.size(); ++i) {
        if (alpha[i] == 0) continue;
        os << "*d_" << table_.name(i);
        if (alpha[i] > 1) os << "^" << static_cast<int>(alpha[i]);
      }
    }
    return os.str();
  }

 private:
  VarTable table_;
  Terms terms_;
};

namespace detail {

inline mpz_class multi_binomial(const Exponent& alpha, const Exponent& gamma, std::size_t nvars) {
  mpz_class r = 1;
  for (std::size_t i = 0; i < nvars; ++i) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), alpha[i], gamma[i]);
    r *= b;
  }
  return r;
}

inline void sub_indices(const Exponent& alpha, std::size_t nvars, std::vector<Exponent>& out) {
  out.clear();
  out.emplace_back();
  for (std::size_t i = 0; i < nvars; ++i) {
    if (alpha[i] == 0) continue;
    const std::size_t sz = out.size();
    for (std::size_t k = 0; k < sz; ++k)
      for (unsigned v = 1; v <= alpha[i]; ++v) {
        Exponent g = out[k];
        g.set(i, v);
        out.push_back(g);
      }
  }
}

}  // namespace detail

/// Normal-ordered product A o B via the Leibniz expansion
/// d^alpha (b d^beta) = sum_{gamma <= alpha} C(alpha, gamma) (d^gamma b) d^(alpha - gamma + beta).
inline DiffOp op_compose(const DiffOp& a, const DiffOp& b) {
  require_same_table(a.table(), b.table(), "operator composition");
  const std::size_t nv = a.table().size();
  DiffOp r(a.table());
  std::vector<Exponent> gammas;
  for (const auto& [alpha, ca] : a.terms()) {
    detail::sub_indices(alpha, nv, gammas);
    for (const auto& [beta, cb] : b.terms()) {
      for (const Exponent& gamma : gammas) {
        Poly d = cb.diff(gamma);
        if (d.is_zero()) continue;
        d *= Rational(detail::multi_binomial(alpha, gamma, nv));
        r.add_term((alpha - gamma) + beta, ca * d);
      }
    }
  }
  return r;
}

inline Poly op_apply(const DiffOp& d, const Poly& a) { return d.apply(a); }

/// [A, B] = A o B - B o A.
inline DiffOp op_commutator(const DiffOp& a, const DiffOp& b) {
  return op_compose(a, b) - op_compose(b, a);
}

}  // namespace contactsym
